#ifndef PINEWTON_ENERGY_HPP
#define PINEWTON_ENERGY_HPP

#include <complex>
#include <utility>

#include "pinewton/state.hpp"

// The energy functional
//   E(u) = H_alpha(u)/2 + (V1(u) - V2(u))/4 - (beta/p) C(u)
// over states u = phi + q G_lambda, with
//   H_alpha = |grad phi|^2 + lambda(|phi|^2 - |u|^2) + (alpha+theta)|q|^2,
//   V1/V2   = double integrals of log(1+|x-y|) resp. log(1+1/|x-y|)
//             against |u|^2 (x) |u|^2,
//   C       = |u|_p^p,
// all in the exact rectangle-rule discretization, plus the L2 gradient
// in (phi, q) at fixed gauge.

namespace pinewton {

struct EnergyBreakdown {
    double h_alpha;
    double v1;
    double v2;
    double c_p;
    double total;  // == h_alpha/2 + (v1 - v2)/4 - (beta/p) c_p
};

struct EnergyGradient {
    ComplexField dphi;        // pairs against delta-phi with weight h^2
    std::complex<double> dq;  // pairs against delta-q with weight 1
};

// Everything one optimizer step needs from a single pass (one forward
// and one packed inverse FFT).  The single-quantity functions below are
// thin wrappers over this.
struct EnergyEval {
    EnergyBreakdown breakdown;
    ComplexField u;
    RealField rho;  // |u|^2
    RealField w;    // w_u = (log(1+1/r) - log(1+r)) * rho = -log * rho
};

EnergyEval evaluate(const PointState& s, double alpha, double beta, double p);

// H_alpha in the cancellation-free expanded form
// grad_norm_sq(phi) - 2 lambda Re(q <phi,G>) - lambda |q|^2 ||G||^2
//   + (alpha + theta(lambda)) |q|^2.
double h_alpha(const PointState& s, double alpha);

// (V1, V2); both are nonnegative.
std::pair<double, double> v_split(const PointState& s);

// ||u||_p^p for p > 2 (throws std::domain_error otherwise).
double c_p(const PointState& s, double p);

// w_u as a field; satisfies h^2 sum w_u |u|^2 == -(V1 - V2) exactly.
RealField potential_w(const PointState& s);

EnergyBreakdown total_energy(const PointState& s, double alpha, double beta,
                             double p);

// Gradient of the discrete E with respect to (Re phi, Im phi, Re q, Im q)
// at fixed gauge, in the rectangle-weighted real inner product:
//   dE = h^2 sum Re(conj(dphi) delta-phi) + Re(conj(dq) delta-q).
EnergyGradient gradient(const PointState& s, double alpha, double beta,
                        double p);
EnergyGradient gradient(const PointState& s, double alpha, double beta,
                        double p, const EnergyEval& eval);

}  // namespace pinewton

#endif
