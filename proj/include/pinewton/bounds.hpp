#ifndef PINEWTON_BOUNDS_HPP
#define PINEWTON_BOUNDS_HPP

#include <cstdint>
#include <string>

#include "pinewton/state.hpp"

// Admissibility gate over (alpha, beta, p, c) and empirical estimators
// for the interpolation constants it leans on.  The sharp constants are
// unknown; the estimators record running maxima of the defining ratios
// over a seeded random family, so every downstream use is a heuristic
// lower-bound argument and is labeled as such.

namespace pinewton {

enum class CaseTag { NEG_BETA, SUBCRITICAL, CRITICAL_MASS_OK, REJECTED };

const char* to_string(CaseTag tag);

struct GateDecision {
    bool admissible;  // true iff case_tag != REJECTED
    CaseTag case_tag;
    std::string detail;
};

struct ConstantEstimates {
    double k_gn_lower;        // max |u|_p^p / (|phi|_W^{p-2} |phi|_2^2 + |q|^p/lambda)
    double k_gn_tilde_lower;  // max, in convenient gauge, of
                              // |u|_p^p / ((|phi|_W^{p-2} + |q|^{p-2}) |u|_2^2)
    double k_hls_ratio_max;   // max (rho * 1/r * rho) / |rho|_{4/3}^2
    int sample_count;
    std::uint64_t seed;
    int skipped;  // degenerate samples (zero denominator)
};

// Running maxima over `sample_count` seeded random states
// (a Gaussian(w) + b x1 Gaussian(w)) + q G_lambda with w in [0.5, 3],
// |q| in [0, 3], lambda in [0.25, 4].  Sample k depends only on
// (seed, k), so estimates are nondecreasing in sample_count and
// reproducible bit-for-bit.
ConstantEstimates estimate_gn_constants(double p, int sample_count,
                                        std::uint64_t seed,
                                        const GridSpec& grid);

// Case analysis for admissibility:
//   NEG_BETA          beta <= 0 and p > 2
//   SUBCRITICAL       beta > 0 and 2 < p < 4
//   CRITICAL_MASS_OK  beta > 0, p == 4, c < 2/(beta k_tilde)  [heuristic:
//                     k_tilde is an empirical lower bound]
//   REJECTED          everything else (p <= 2 always rejects)
GateDecision admissible(double alpha, double beta, double p, double c,
                        double k_tilde);

// Evaluates the coercivity lower bounds with the empirical constants and
// reports the slack E - bound for each branch.  Diagnostic only: the
// estimated constants sit below the true ones, so no assertion is made.
std::string coercivity_report(const PointState& s, double alpha, double beta,
                              double p, const ConstantEstimates& est);

}  // namespace pinewton

#endif
