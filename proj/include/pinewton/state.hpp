#ifndef PINEWTON_STATE_HPP
#define PINEWTON_STATE_HPP

#include <complex>

#include "pinewton/lattice.hpp"

// The energy-space representation u = phi + q G_lambda: a regular part
// phi on the grid, a complex charge q, and the gauge lambda with the
// Green's function cached on the same grid.  States are value types and
// never mutated; every operation returns a fresh state.

namespace pinewton {

struct PointState {
    ComplexField phi;
    std::complex<double> charge_q;
    double gauge_lambda;
    // G_lambda sampled at the nodes; the origin node carries the one-cell
    // average (adaptive quadrature, rel. tol. 1e-8) since G is singular.
    RealField green_cache;
};

// Builds the state and its Green cache.  Throws std::domain_error for
// lambda <= 0.
PointState assemble(ComplexField phi, std::complex<double> q, double lambda);

// u = phi + q G at every node.
ComplexField represented_u(const PointState& s);

// Fully discrete ||u||^2 expanded in (phi, q) to avoid forming u:
// h^2 sum |phi|^2 + 2 Re(q h^2 sum conj(phi) G) + |q|^2 h^2 sum G^2.
double mass(const PointState& s);

// Same decomposition at a new gauge: phi' = phi + q (G_old - G_new) with
// the difference kernel's origin entry set to the analytic limit
// log(lambda_new/lambda_old)/(4 pi); the charge never changes.  The
// analytic-limit rule makes the extended-domain boundary condition
// phi(0) = (alpha + theta) q exactly gauge-covariant.
PointState regauge(const PointState& s, double lambda_new);

// Regauge to lambda* = |q|^2 / mass(s) (the convenient decomposition,
// which sandwiches ||phi|| between (1 -+ 1/sqrt(4pi)) ||u||).  Throws
// std::domain_error when q == 0 (gauge undefined) or mass is 0.
PointState convenient_gauge(const PointState& s);

// Scales (phi, q) jointly so the discrete mass becomes c.  Throws
// std::domain_error on a zero-mass state.
PointState normalize(const PointState& s, double c);

}  // namespace pinewton

#endif
