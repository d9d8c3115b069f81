#include "pinewton/specfun.hpp"

#include <cmath>
#include <stdexcept>

namespace pinewton {

namespace {

// Chebyshev fit of sqrt(x) e^x K0(x) in u = 2/x on [0, 1], interpolated
// at 30-digit precision (tools/gen_chebyshev.py); max relative error of
// the fit is 4.5e-15 over x in [2, inf).
constexpr double k0_tail_cheb[] = {
    +1.22015154103297752e+00, -3.14481013119645436e-02, +1.56988388572995704e-03,
    -1.28495495816166860e-04, +1.39498137187853459e-05, -1.83175552267063791e-06,
    +2.76681363893989841e-07, -4.66048988395904129e-08, +8.57403409646567942e-09,
    -1.69753430360028020e-09, +3.57739763738133323e-10, -7.95746220239563869e-11,
    +1.85600212447633613e-11, -4.51391305286311468e-12, +1.14080173878911791e-12,
    -2.98026154019853917e-13, +7.87888273142319383e-14, -2.45042081863695242e-14,
    +6.42343321390269107e-15, -1.35077134662727373e-15, -1.47765397801300584e-15,
};

// K0 = -(log(x/2)+gamma) I0(x) + sum_k (x^2/4)^k/(k!)^2 H_k, H_k the
// harmonic numbers; converges fast for x <= 2 with no cancellation.
double k0_series(double x) {
    const double z2 = 0.25 * x * x;
    const double lg = -std::log(0.5 * x) - constants.euler_gamma;
    double term = 1.0, harmonic = 0.0;
    double i0 = 1.0, hsum = 0.0;
    for (int k = 1; k < 80; ++k) {
        term *= z2 / (static_cast<double>(k) * k);
        harmonic += 1.0 / k;
        i0 += term;
        hsum += term * harmonic;
        if (term * (std::abs(lg) + harmonic + 1.0) < 1e-18 * (std::abs(i0 * lg) + hsum + 1.0))
            break;
    }
    return lg * i0 + hsum;
}

double k0_tail(double x) {
    const double t = 2.0 * (2.0 / x) - 1.0;  // map u = 2/x in [0,1] to [-1,1]
    double b1 = 0.0, b2 = 0.0;
    constexpr int n = static_cast<int>(sizeof(k0_tail_cheb) / sizeof(double));
    for (int j = n - 1; j >= 1; --j) {
        const double b0 = 2.0 * t * b1 - b2 + k0_tail_cheb[j];
        b2 = b1;
        b1 = b0;
    }
    const double poly = t * b1 - b2 + k0_tail_cheb[0];
    return std::exp(-x) / std::sqrt(x) * poly;
}

}  // namespace

double bessel_k0(double x) {
    if (!(x > 0.0))
        throw std::domain_error("bessel_k0: argument must be positive");
    return x <= 2.0 ? k0_series(x) : k0_tail(x);
}

double green_value(double lambda, double r) {
    if (!(lambda > 0.0))
        throw std::domain_error("green_value: lambda must be positive");
    if (!(r > 0.0))
        throw std::domain_error("green_value: r must be positive (r = 0 is the singular point)");
    return bessel_k0(std::sqrt(lambda) * r) / (2.0 * M_PI);
}

double theta(double lambda) {
    if (!(lambda > 0.0))
        throw std::domain_error("theta: lambda must be positive");
    return (constants.euler_gamma + std::log(0.5 * std::sqrt(lambda))) / (2.0 * M_PI);
}

double omega_alpha(double alpha) {
    return 4.0 * std::exp(-4.0 * M_PI * alpha - 2.0 * constants.euler_gamma);
}

}  // namespace pinewton
