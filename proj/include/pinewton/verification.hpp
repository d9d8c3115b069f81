#ifndef PINEWTON_VERIFICATION_HPP
#define PINEWTON_VERIFICATION_HPP

#include <string>
#include <vector>

// The identity suite behind the CLI's verify mode: each check compares a
// computed quantity against an independent target (closed form, brute
// force, finite differences, or a refinement trend) and reports
// value/threshold/pass.  Thresholds are calibrated for the reference
// resolution (L = 12, N = 256); running at other grids keeps the same
// thresholds and is reported as such.

namespace pinewton {

struct CheckResult {
    std::string name;
    bool pass;
    double value;      // the measured defect/error
    double threshold;  // value must stay below this
    std::string detail;
};

// Checks: Dirac identity (with one refinement at 2N), Green self-mass
// (idem), bound-state energy at alpha in {-0.5, 0, 0.5}, gauge
// invariance of H_alpha along {N/4, N/2, N}, analytic-vs-finite-
// difference gradient at N = 32, and spectral-vs-brute-force
// convolution at N = 16.
std::vector<CheckResult> identity_suite(double L, int N);

}  // namespace pinewton

#endif
