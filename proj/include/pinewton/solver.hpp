#ifndef PINEWTON_SOLVER_HPP
#define PINEWTON_SOLVER_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "pinewton/energy.hpp"

// Projected gradient descent for  min E(u)  over the sphere |u|_2^2 = c:
// Barzilai-Borwein trial steps, monotone Armijo backtracking, projection
// by renormalization, and a periodic regauge to the convenient
// decomposition lambda = |q|^2/c (kept only when it does not raise the
// discrete energy, which is gauge-dependent at finite h).  Plus the
// optimality diagnostics: Lagrange multiplier, Euler-Lagrange residual,
// and the boundary-condition defect at the origin.

namespace pinewton {

struct SolverConfig {
    double alpha = 0.0;
    double beta = 0.0;
    double p = 3.0;
    double mass_c = 1.0;
    GridSpec grid{};
    int max_iter = 20000;
    double grad_tol = 1e-6;
    double step_init = 1.0;
    double armijo_factor = 0.5;
    double armijo_slope = 1e-4;
    int regauge_period = 25;
    double q_min_regauge = -1.0;  // < 0 means the default 1e-8 sqrt(c)
    std::uint64_t seed = 1;
    bool freeze_charge = false;  // baseline mode: q pinned to 0
};

struct SolveReport {
    PointState final_state;
    EnergyBreakdown energy;
    double omega;  // Lagrange multiplier
    double grad_norm;
    int iterations;
    double el_residual_full;
    double el_residual_punctured;
    double boundary_defect;
    double charge_abs;
    bool converged;
    std::vector<double> energy_history;  // nonincreasing across accepted steps
};

// Free minimization: starts from the linear bound state (phi = 0,
// lambda = omega(alpha), q scaled so the analytic mass is c), then
// renormalized to the discrete mass.  With freeze_charge the start is a
// seeded random-width Gaussian of mass c and q stays exactly 0.
SolveReport solve(const SolverConfig& cfg);

// The q == 0 problem (no point interaction); approximates the ordinary
// ground-state energy for the same (beta, p, c).
SolveReport solve_baseline(SolverConfig cfg);

// omega = -(H_alpha + (V1 - V2) - beta C)/c via the homogeneity identity
// <E'(u), u> = H + V0 - beta C.  Requires mass(s) == c to 1e-10 relative
// (std::invalid_argument otherwise).
double lagrange_multiplier(const PointState& s, double alpha, double beta,
                           double p, double c);

// L2 norms of the stationarity residual
//   R = (-lap phi - q lambda G) + omega u - w_u u - beta |u|^{p-2} u
// over all nodes (first) and with the 3x3 block around the origin
// removed (second); the punctured norm is the meaningful one since the
// distributional point term lives at the origin.
std::pair<double, double> el_residual(const PointState& s, double omega,
                                      double alpha, double beta, double p);

// |phi(0) - (alpha + theta(lambda)) q| in the state's own gauge.
double boundary_defect(const PointState& s, double alpha);

enum class PhiKind { GAUSSIAN, GAUSSIAN_TIMES_X1 };

// Defect |h^2 sum (-lap phi + lambda phi) G_lambda - phi(0)| of the
// distributional identity that G_lambda inverts (-lap + lambda); the
// continuum value is exactly phi(0).  GAUSSIAN is exp(-|x|^2/width^2),
// GAUSSIAN_TIMES_X1 is x1 exp(-|x|^2) (odd, so phi(0) = 0).
double verify_dirac(PhiKind kind, double width, double lambda,
                    const GridSpec& grid);

}  // namespace pinewton

#endif
