#include "pinewton/state.hpp"

#include <cmath>
#include <stdexcept>

#include "pinewton/quadrature.hpp"
#include "pinewton/specfun.hpp"

namespace pinewton {

namespace {

RealField sampled_green(const GridSpec& g, double lambda) {
    RealField out = RealField::zero(g);
    const int n = g.points_per_axis_N;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const double r = std::hypot(g.coord(i), g.coord(j));
            if (r > 0)
                out.values(i, j) = green_value(lambda, r);
        }
    out.values(n / 2, n / 2) = adaptive_cell_average(
        [lambda](double x, double y) { return green_value(lambda, std::hypot(x, y)); },
        0.0, 0.0, 0.5 * g.spacing_h, 1e-8);
    return out;
}

}  // namespace

PointState assemble(ComplexField phi, std::complex<double> q, double lambda) {
    if (!(lambda > 0.0))
        throw std::domain_error("assemble: gauge lambda must be positive");
    RealField green = sampled_green(phi.grid, lambda);
    return {std::move(phi), q, lambda, std::move(green)};
}

ComplexField represented_u(const PointState& s) {
    return {s.phi.grid,
            s.phi.values + s.charge_q * s.green_cache.values.cast<std::complex<double>>()};
}

double mass(const PointState& s) {
    const double h2 = s.phi.grid.spacing_h * s.phi.grid.spacing_h;
    const double phi_sq = s.phi.values.abs2().sum();
    const std::complex<double> cross = (s.phi.values.conjugate() * s.green_cache.values).sum();
    const double green_sq = s.green_cache.values.square().sum();
    return h2 * (phi_sq + 2.0 * (s.charge_q * cross).real() + std::norm(s.charge_q) * green_sq);
}

PointState regauge(const PointState& s, double lambda_new) {
    if (!(lambda_new > 0.0))
        throw std::domain_error("regauge: gauge lambda must be positive");
    RealField green_new = sampled_green(s.phi.grid, lambda_new);
    RealField diff{s.phi.grid, s.green_cache.values - green_new.values};
    // The singular parts cancel in G_old - G_new, so the origin entry is
    // the analytic limit rather than a difference of cell averages; this
    // keeps phi(0) - (alpha + theta) q exactly gauge-invariant.
    const int mid = s.phi.grid.points_per_axis_N / 2;
    diff.values(mid, mid) = std::log(lambda_new / s.gauge_lambda) / (4.0 * M_PI);
    ComplexField phi_new{s.phi.grid,
                         s.phi.values + s.charge_q * diff.values.cast<std::complex<double>>()};
    return {std::move(phi_new), s.charge_q, lambda_new, std::move(green_new)};
}

PointState convenient_gauge(const PointState& s) {
    const double q_sq = std::norm(s.charge_q);
    if (!(q_sq > 0.0))
        throw std::domain_error("convenient_gauge: charge is zero, gauge undefined");
    const double m = mass(s);
    if (!(m > 0.0))
        throw std::domain_error("convenient_gauge: state has zero mass");
    return regauge(s, q_sq / m);
}

PointState normalize(const PointState& s, double c) {
    if (!(c > 0.0))
        throw std::domain_error("normalize: target mass must be positive");
    const double m = mass(s);
    if (!(m > 0.0))
        throw std::domain_error("normalize: state has zero mass");
    const double scale = std::sqrt(c / m);
    return {ComplexField{s.phi.grid, s.phi.values * scale}, s.charge_q * scale,
            s.gauge_lambda, s.green_cache};
}

}  // namespace pinewton
