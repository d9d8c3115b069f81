#include <doctest.h>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "pinewton/bounds.hpp"
#include "pinewton/energy.hpp"

using namespace pinewton;
using cd = std::complex<double>;

namespace {

ComplexField gaussian_phi(const GridSpec& g) {
    ComplexField f = ComplexField::zero(g);
    const int n = g.points_per_axis_N;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const double x = g.coord(i), y = g.coord(j);
            f.values(i, j) = std::exp(-(x * x + y * y));
        }
    return f;
}

}  // namespace

TEST_CASE("bounds: gate case selection") {
    GateDecision d = admissible(0.0, -1.0, 3.0, 1.0, 1.0);
    CHECK(d.case_tag == CaseTag::NEG_BETA);
    CHECK(d.admissible);

    d = admissible(0.0, 1.0, 3.0, 1.0, 1.0);
    CHECK(d.case_tag == CaseTag::SUBCRITICAL);
    CHECK(d.admissible);

    d = admissible(0.0, 1.0, 4.0, 3.0, 1.0);  // 3 >= 2/(1*1)
    CHECK(d.case_tag == CaseTag::REJECTED);
    CHECK_FALSE(d.admissible);

    d = admissible(0.0, 1.0, 4.0, 0.9, 2.0);  // 0.9 < 2/(1*2) = 1
    CHECK(d.case_tag == CaseTag::CRITICAL_MASS_OK);
    CHECK(d.admissible);
    CHECK(d.detail.find("heuristic") != std::string::npos);
}

TEST_CASE("bounds: gate rejects the uncovered corners") {
    GateDecision d = admissible(0.0, 1.0, 2.0, 1.0, 1.0);
    CHECK(d.case_tag == CaseTag::REJECTED);
    CHECK(d.detail == "p must exceed 2");

    d = admissible(0.5, 1.0, 1.5, 1.0, 1.0);
    CHECK(d.case_tag == CaseTag::REJECTED);
    CHECK(d.detail == "p must exceed 2");

    d = admissible(0.0, 1.0, 5.0, 1.0, 1.0);
    CHECK(d.case_tag == CaseTag::REJECTED);

    // the critical-mass threshold is strict
    d = admissible(0.0, 1.0, 4.0, 2.0, 1.0);
    CHECK(d.case_tag == CaseTag::REJECTED);

    CHECK_THROWS_AS(admissible(0.0, 1.0, 3.0, 0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(admissible(0.0, 1.0, 3.0, -1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(admissible(0.0, 1.0, 3.0, 1.0, 0.0), std::domain_error);
}

TEST_CASE("bounds: admissibility flag always mirrors the tag") {
    for (double beta : {-1.0, 0.0, 0.5}) {
        for (double p : {2.0, 3.0, 4.0, 5.0}) {
            for (double c : {0.5, 1.0, 4.0}) {
                const GateDecision d = admissible(0.3, beta, p, c, 1.0);
                CHECK(d.admissible == (d.case_tag != CaseTag::REJECTED));
            }
        }
    }
}

TEST_CASE("bounds: tag names") {
    CHECK(std::string(to_string(CaseTag::NEG_BETA)) == "NEG_BETA");
    CHECK(std::string(to_string(CaseTag::SUBCRITICAL)) == "SUBCRITICAL");
    CHECK(std::string(to_string(CaseTag::CRITICAL_MASS_OK)) == "CRITICAL_MASS_OK");
    CHECK(std::string(to_string(CaseTag::REJECTED)) == "REJECTED");
}

TEST_CASE("bounds: estimates are reproducible bit for bit") {
    const GridSpec g = make_grid(6.0, 48);
    const ConstantEstimates a = estimate_gn_constants(3.0, 12, 4242, g);
    const ConstantEstimates b = estimate_gn_constants(3.0, 12, 4242, g);
    CHECK(a.k_gn_lower == b.k_gn_lower);
    CHECK(a.k_gn_tilde_lower == b.k_gn_tilde_lower);
    CHECK(a.k_hls_ratio_max == b.k_hls_ratio_max);
    CHECK(a.skipped == b.skipped);
    CHECK(a.sample_count == 12);
    CHECK(a.seed == 4242);
}

TEST_CASE("bounds: estimates are positive and nondecreasing in the sample count") {
    const GridSpec g = make_grid(6.0, 48);
    const ConstantEstimates e6 = estimate_gn_constants(3.0, 6, 4242, g);
    const ConstantEstimates e12 = estimate_gn_constants(3.0, 12, 4242, g);
    CHECK(e6.k_gn_lower > 0.0);
    CHECK(e6.k_gn_tilde_lower > 0.0);
    CHECK(e6.k_hls_ratio_max > 0.0);
    CHECK(e12.k_gn_lower >= e6.k_gn_lower);
    CHECK(e12.k_gn_tilde_lower >= e6.k_gn_tilde_lower);
    CHECK(e12.k_hls_ratio_max >= e6.k_hls_ratio_max);
}

TEST_CASE("bounds: estimator validates its inputs") {
    const GridSpec g = make_grid(6.0, 48);
    CHECK_THROWS_AS(estimate_gn_constants(2.0, 4, 1, g), std::domain_error);
    CHECK_THROWS_AS(estimate_gn_constants(3.0, 0, 1, g), std::invalid_argument);
}

TEST_CASE("bounds: ratio convention on a plain Gaussian") {
    // |u|_3^3 / (|phi|_W |phi|_2^2) for e^{-|x|^2} has the closed form
    // (pi/3) / (sqrt(pi) pi/2) = 2/(3 sqrt(pi))
    const GridSpec g = make_grid(12.0, 256);
    const PointState s = assemble(gaussian_phi(g), 0.0, 1.0);
    const double h2 = g.spacing_h * g.spacing_h;
    const double num = c_p(s, 3.0);
    const double den =
        std::sqrt(grad_norm_sq(s.phi)) * h2 * s.phi.values.abs2().sum();
    const double ratio = num / den;
    const double closed = 2.0 / (3.0 * std::sqrt(M_PI));
    CHECK(std::abs(ratio - closed) <= 5e-3 * closed);
}

TEST_CASE("bounds: coercivity diagnostic is labeled and deterministic") {
    const GridSpec g = make_grid(4.0, 32);
    const ConstantEstimates est = estimate_gn_constants(3.0, 8, 99, g);

    const PointState charged = assemble(gaussian_phi(g), cd(0.7, -0.4), 1.0);
    const std::string r1 = coercivity_report(charged, 0.2, 0.0, 3.0, est);
    const std::string r2 = coercivity_report(charged, 0.2, 0.0, 3.0, est);
    CHECK(r1 == r2);
    CHECK(r1.find("heuristic") != std::string::npos);
    CHECK(r1.find("charged, convenient gauge") != std::string::npos);
    CHECK(r1.find("slack") != std::string::npos);
    CHECK(r1.find("nan") == std::string::npos);
    CHECK(r1.find("inf") == std::string::npos);

    const PointState plain = assemble(gaussian_phi(g), 0.0, 1.0);
    const std::string r3 = coercivity_report(plain, 0.2, 0.5, 3.0, est);
    CHECK(r3.find("uncharged") != std::string::npos);
    CHECK(r3.find("beta > 0") != std::string::npos);
    CHECK(r3.find("nan") == std::string::npos);
}
