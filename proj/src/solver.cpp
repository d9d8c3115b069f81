#include "pinewton/solver.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "pinewton/rng.hpp"
#include "pinewton/specfun.hpp"

namespace pinewton {

namespace {

using cd = std::complex<double>;

// A tangent-space element (or iterate difference): a phi-direction plus a
// q-direction, with the rectangle-weighted real inner product.
struct Direction {
    Eigen::ArrayXXcd dphi;
    cd dq;
};

double inner(const Direction& a, const Direction& b, double h2) {
    return h2 * (a.dphi.conjugate() * b.dphi).real().sum() +
           (std::conj(a.dq) * b.dq).real();
}

void validate(const SolverConfig& cfg) {
    if (cfg.grid.points_per_axis_N < 8 || !(cfg.grid.spacing_h > 0.0))
        throw std::invalid_argument("solve: grid is not initialized (use make_grid)");
    if (!(cfg.p > 2.0))
        throw std::invalid_argument("solve: the local exponent p must exceed 2");
    if (!(cfg.mass_c > 0.0))
        throw std::invalid_argument("solve: mass_c must be positive");
    if (cfg.max_iter < 0 || !(cfg.grad_tol >= 0.0))
        throw std::invalid_argument("solve: max_iter and grad_tol must be nonnegative");
    if (!(cfg.step_init > 0.0))
        throw std::invalid_argument("solve: step_init must be positive");
    if (!(cfg.armijo_factor > 0.0) || !(cfg.armijo_factor < 1.0))
        throw std::invalid_argument("solve: armijo_factor must lie in (0, 1)");
    if (!(cfg.armijo_slope > 0.0) || !(cfg.armijo_slope < 1.0))
        throw std::invalid_argument("solve: armijo_slope must lie in (0, 1)");
    if (cfg.regauge_period < 1)
        throw std::invalid_argument("solve: regauge_period must be at least 1");
}

PointState initial_state(const SolverConfig& cfg) {
    const double lambda0 = omega_alpha(cfg.alpha);
    if (cfg.freeze_charge) {
        std::mt19937_64 gen(mix_seed(cfg.seed, 0));
        const double w = 0.5 + 1.5 * uniform(gen);
        ComplexField phi = ComplexField::zero(cfg.grid);
        const int n = cfg.grid.points_per_axis_N;
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const double x = cfg.grid.coord(i), y = cfg.grid.coord(j);
                phi.values(i, j) = std::exp(-(x * x + y * y) / (w * w));
            }
        return normalize(assemble(std::move(phi), 0.0, lambda0), cfg.mass_c);
    }
    // linear bound state: phi = 0, lambda = omega_alpha, q chosen so the
    // analytic mass |q|^2 ||G||^2 = |q|^2/(4 pi lambda) equals c
    const double q0 = std::sqrt(4.0 * M_PI * lambda0 * cfg.mass_c);
    return normalize(assemble(ComplexField::zero(cfg.grid), q0, lambda0), cfg.mass_c);
}

}  // namespace

SolveReport solve(const SolverConfig& cfg) {
    validate(cfg);
    const double h2 = cfg.grid.spacing_h * cfg.grid.spacing_h;
    const double q_min =
        cfg.q_min_regauge < 0.0 ? 1e-8 * std::sqrt(cfg.mass_c) : cfg.q_min_regauge;

    PointState s = initial_state(cfg);
    std::optional<EnergyEval> carried;  // eval of s when already available

    std::vector<double> history;
    bool converged = false;
    int accepted = 0;
    double grad_norm = 0.0;
    EnergyBreakdown final_breakdown{};

    bool have_prev = false;
    PointState prev_state = s;
    Direction prev_gproj{{}, 0.0};

    for (;;) {
        const EnergyEval eval =
            carried ? std::move(*carried) : evaluate(s, cfg.alpha, cfg.beta, cfg.p);
        carried.reset();
        const double energy = eval.breakdown.total;
        if (!std::isfinite(energy)) {
            std::ostringstream os;
            os << "solve: energy became non-finite after " << accepted
               << " accepted steps (alpha=" << cfg.alpha << ", beta=" << cfg.beta
               << ", p=" << cfg.p << ", c=" << cfg.mass_c << ")";
            throw std::runtime_error(os.str());
        }
        history.push_back(energy);
        final_breakdown = eval.breakdown;

        const EnergyGradient grad = gradient(s, cfg.alpha, cfg.beta, cfg.p, eval);
        Direction g{grad.dphi.values, grad.dq};
        Direction m{2.0 * eval.u.values,
                    2.0 * h2 * (s.green_cache.values.cast<cd>() * eval.u.values).sum()};
        if (cfg.freeze_charge) {
            g.dq = 0.0;  // q is not a variable in baseline mode
            m.dq = 0.0;
        }
        const double mm = inner(m, m, h2);
        if (mm > 0.0) {
            const double coef = inner(g, m, h2) / mm;
            g.dphi -= coef * m.dphi;
            g.dq -= coef * m.dq;
        }
        grad_norm = std::sqrt(inner(g, g, h2));

        if (grad_norm < cfg.grad_tol) {
            converged = true;
            break;
        }
        if (accepted >= cfg.max_iter)
            break;

        // Barzilai-Borwein trial step from the latest iterate/gradient
        // differences, clamped; fall back to step_init when unusable.
        double step = cfg.step_init;
        if (have_prev) {
            const Direction dx{s.phi.values - prev_state.phi.values,
                               s.charge_q - prev_state.charge_q};
            const Direction dy{g.dphi - prev_gproj.dphi, g.dq - prev_gproj.dq};
            const double num = inner(dx, dy, h2);
            const double den = inner(dy, dy, h2);
            if (num > 0.0 && den > 0.0)
                step = std::clamp(num / den, 1e-10, 1e6);
        }
        prev_state = s;
        prev_gproj = g;
        have_prev = true;

        // monotone Armijo on the renormalized trial point
        bool stepped = false;
        for (int halving = 0; halving < 60; ++halving) {
            ComplexField phi_t{cfg.grid, s.phi.values - step * g.dphi};
            const cd q_t = cfg.freeze_charge ? cd(0.0) : s.charge_q - step * g.dq;
            PointState trial{std::move(phi_t), q_t, s.gauge_lambda, s.green_cache};
            if (!(mass(trial) > 0.0)) {
                step *= cfg.armijo_factor;  // degenerate direction guard
                continue;
            }
            trial = normalize(trial, cfg.mass_c);
            EnergyEval trial_eval = evaluate(trial, cfg.alpha, cfg.beta, cfg.p);
            if (trial_eval.breakdown.total <=
                energy - cfg.armijo_slope * step * grad_norm * grad_norm) {
                s = std::move(trial);
                carried = std::move(trial_eval);
                stepped = true;
                break;
            }
            step *= cfg.armijo_factor;
        }
        if (!stepped)
            break;  // line search stalled at the monotonicity floor
        ++accepted;

        // periodic refresh of the decomposition to lambda = |q|^2/c, kept
        // only when the (gauge-dependent) discrete energy does not rise
        if (accepted % cfg.regauge_period == 0 && !cfg.freeze_charge &&
            std::abs(s.charge_q) >= q_min) {
            const double lambda_star = std::norm(s.charge_q) / cfg.mass_c;
            PointState candidate = normalize(regauge(s, lambda_star), cfg.mass_c);
            EnergyEval cand_eval = evaluate(candidate, cfg.alpha, cfg.beta, cfg.p);
            if (cand_eval.breakdown.total <= carried->breakdown.total) {
                s = std::move(candidate);
                carried = std::move(cand_eval);
                have_prev = false;  // new gauge, new coordinates
            }
        }
    }

    SolveReport report{std::move(s),   {},    0.0,   grad_norm, accepted, 0.0, 0.0,
                       0.0,            0.0,   converged, std::move(history)};
    report.energy = final_breakdown;
    report.omega =
        lagrange_multiplier(report.final_state, cfg.alpha, cfg.beta, cfg.p, cfg.mass_c);
    std::tie(report.el_residual_full, report.el_residual_punctured) =
        el_residual(report.final_state, report.omega, cfg.alpha, cfg.beta, cfg.p);
    report.boundary_defect = boundary_defect(report.final_state, cfg.alpha);
    report.charge_abs = std::abs(report.final_state.charge_q);
    return report;
}

SolveReport solve_baseline(SolverConfig cfg) {
    cfg.freeze_charge = true;
    return solve(cfg);
}

double lagrange_multiplier(const PointState& s, double alpha, double beta, double p,
                           double c) {
    if (!(c > 0.0))
        throw std::invalid_argument("lagrange_multiplier: c must be positive");
    const double m = mass(s);
    if (std::abs(m - c) > 1e-10 * c)
        throw std::invalid_argument(
            "lagrange_multiplier: state mass does not match c to 1e-10 relative");
    // homogeneity identity: <E'(u), u> = H_alpha + (V1 - V2) - beta C
    const EnergyBreakdown b = total_energy(s, alpha, beta, p);
    return -(b.h_alpha + (b.v1 - b.v2) - beta * b.c_p) / c;
}

std::pair<double, double> el_residual(const PointState& s, double omega, double alpha,
                                      double beta, double p) {
    // alpha enters the stationarity equation only through omega, but the
    // shared evaluation pass wants it for the (unused) H term
    const EnergyEval eval = evaluate(s, alpha, beta, p);
    const ComplexField lap = laplacian(s.phi);
    Eigen::ArrayXXd pref = eval.w.values;  // w_u + beta |u|^{p-2}
    if (beta != 0.0)
        pref += beta * eval.rho.values.pow(0.5 * (p - 2.0));
    Eigen::ArrayXXcd residual =
        -lap.values - (s.gauge_lambda * s.charge_q) * s.green_cache.values.cast<cd>() +
        omega * eval.u.values - pref.cast<cd>() * eval.u.values;

    const double h2 = s.phi.grid.spacing_h * s.phi.grid.spacing_h;
    const double full = std::sqrt(h2 * residual.abs2().sum());
    const int mid = s.phi.grid.points_per_axis_N / 2;
    residual.block(mid - 1, mid - 1, 3, 3).setZero();
    const double punctured = std::sqrt(h2 * residual.abs2().sum());
    return {full, punctured};
}

double boundary_defect(const PointState& s, double alpha) {
    const int mid = s.phi.grid.points_per_axis_N / 2;
    return std::abs(s.phi.values(mid, mid) -
                    (alpha + theta(s.gauge_lambda)) * s.charge_q);
}

double verify_dirac(PhiKind kind, double width, double lambda, const GridSpec& grid) {
    if (!(lambda > 0.0))
        throw std::domain_error("verify_dirac: lambda must be positive");
    RealField phi = RealField::zero(grid);
    const int n = grid.points_per_axis_N;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const double x = grid.coord(i), y = grid.coord(j);
            phi.values(i, j) = kind == PhiKind::GAUSSIAN
                                   ? std::exp(-(x * x + y * y) / (width * width))
                                   : x * std::exp(-(x * x + y * y));
        }
    const RealField green =
        assemble(ComplexField::zero(grid), 1.0, lambda).green_cache;
    const RealField lap = laplacian(phi);
    const double h2 = grid.spacing_h * grid.spacing_h;
    const double pairing =
        h2 * ((-lap.values + lambda * phi.values) * green.values).sum();
    return std::abs(pairing - phi.values(n / 2, n / 2));
}

}  // namespace pinewton
