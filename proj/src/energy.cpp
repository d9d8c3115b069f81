#include "pinewton/energy.hpp"

#include <cmath>
#include <stdexcept>

#include "pinewton/specfun.hpp"

namespace pinewton {

namespace {

using cd = std::complex<double>;

void require_supercritical(double p) {
    if (!(p > 2.0))
        throw std::domain_error("the local exponent p must exceed 2");
}

// h^2 sum G * X for a complex field X (G is real, no conjugation).
cd green_pairing(const PointState& s, const Eigen::ArrayXXcd& x) {
    const double h2 = s.phi.grid.spacing_h * s.phi.grid.spacing_h;
    return h2 * (s.green_cache.values.cast<cd>() * x).sum();
}

}  // namespace

double h_alpha(const PointState& s, double alpha) {
    const double h2 = s.phi.grid.spacing_h * s.phi.grid.spacing_h;
    const double lambda = s.gauge_lambda;
    // expanded form: |phi|^2 - |u|^2 = -2 Re(conj(phi) q G) - |q|^2 G^2,
    // so the lambda term never suffers the large cancellation of the
    // naive difference
    const cd cross = (s.phi.values.conjugate() * s.green_cache.values).sum();
    const double green_sq = s.green_cache.values.square().sum();
    return grad_norm_sq(s.phi) -
           2.0 * lambda * h2 * (s.charge_q * cross).real() -
           lambda * std::norm(s.charge_q) * h2 * green_sq +
           (alpha + theta(lambda)) * std::norm(s.charge_q);
}

std::pair<double, double> v_split(const PointState& s) {
    const ComplexField u = represented_u(s);
    const RealField rho{u.grid, u.values.abs2()};
    auto [w1, w2] = detail::log_convolve_pair(rho);
    const double h2 = u.grid.spacing_h * u.grid.spacing_h;
    return {h2 * (w1.values * rho.values).sum(), h2 * (w2.values * rho.values).sum()};
}

double c_p(const PointState& s, double p) {
    require_supercritical(p);
    const ComplexField u = represented_u(s);
    const double h2 = u.grid.spacing_h * u.grid.spacing_h;
    return h2 * u.values.abs2().pow(0.5 * p).sum();
}

RealField potential_w(const PointState& s) {
    const ComplexField u = represented_u(s);
    const RealField rho{u.grid, u.values.abs2()};
    auto [w1, w2] = detail::log_convolve_pair(rho);
    return {u.grid, w2.values - w1.values};
}

EnergyEval evaluate(const PointState& s, double alpha, double beta, double p) {
    require_supercritical(p);
    EnergyEval out{{}, represented_u(s), RealField::zero(s.phi.grid), RealField::zero(s.phi.grid)};
    out.rho.values = out.u.values.abs2();
    auto [w1, w2] = detail::log_convolve_pair(out.rho);
    out.w.values = w2.values - w1.values;

    const double h2 = s.phi.grid.spacing_h * s.phi.grid.spacing_h;
    EnergyBreakdown& b = out.breakdown;
    b.h_alpha = h_alpha(s, alpha);
    b.v1 = h2 * (w1.values * out.rho.values).sum();
    b.v2 = h2 * (w2.values * out.rho.values).sum();
    b.c_p = h2 * out.rho.values.pow(0.5 * p).sum();
    b.total = 0.5 * b.h_alpha + 0.25 * (b.v1 - b.v2) - (beta / p) * b.c_p;
    return out;
}

EnergyBreakdown total_energy(const PointState& s, double alpha, double beta, double p) {
    return evaluate(s, alpha, beta, p).breakdown;
}

EnergyGradient gradient(const PointState& s, double alpha, double beta, double p,
                        const EnergyEval& eval) {
    require_supercritical(p);
    const double lambda = s.gauge_lambda;

    // local prefactor w_u + beta |u|^(p-2) acting on u, shared by the
    // phi and q components
    Eigen::ArrayXXd pref = eval.w.values;
    if (beta != 0.0)
        pref += beta * eval.rho.values.pow(0.5 * (p - 2.0));
    const Eigen::ArrayXXcd pref_u = pref.cast<cd>() * eval.u.values;

    const ComplexField lap = laplacian(s.phi);
    EnergyGradient g{ComplexField::zero(s.phi.grid), 0.0};
    g.dphi.values = -lap.values -
                    (lambda * s.charge_q) * s.green_cache.values.cast<cd>() - pref_u;
    g.dq = (alpha + theta(lambda)) * s.charge_q -
           lambda * green_pairing(s, eval.u.values) - green_pairing(s, pref_u);
    return g;
}

EnergyGradient gradient(const PointState& s, double alpha, double beta, double p) {
    return gradient(s, alpha, beta, p, evaluate(s, alpha, beta, p));
}

}  // namespace pinewton
