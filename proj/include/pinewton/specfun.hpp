#ifndef PINEWTON_SPECFUN_HPP
#define PINEWTON_SPECFUN_HPP

// Special functions and closed-form constants: the modified Bessel
// function K0, the screened-Laplace Green's function on the plane, and
// the two scalars theta(lambda) and omega(alpha) tied to the point
// interaction at the origin.

namespace pinewton {

struct Constants {
    double euler_gamma;  // Euler-Mascheroni constant, 20 digits
};

inline constexpr Constants constants{0.57721566490153286061};

// K0(x) for x > 0.  Ascending series (with the -log(z/2) I0(z) term) for
// x <= 2, Chebyshev fit of sqrt(x) e^x K0(x) in 2/x for x > 2.  Relative
// error stays below 1e-13 over the double range; underflows gracefully
// to 0 past x ~ 745.  Throws std::domain_error for x <= 0.
double bessel_k0(double x);

// (1/2pi) K0(sqrt(lambda) r); strictly decreasing in r.  Throws
// std::domain_error for lambda <= 0 or r <= 0 (the origin is singular;
// cell-averaged handling lives with the grid code).
double green_value(double lambda, double r);

// theta(lambda) = gamma/(2pi) + log(sqrt(lambda)/2)/(2pi), lambda > 0.
double theta(double lambda);

// omega(alpha) = 4 exp(-4 pi alpha - 2 gamma) > 0; satisfies
// alpha + theta(omega(alpha)) == 0 identically.
double omega_alpha(double alpha);

}  // namespace pinewton

#endif
