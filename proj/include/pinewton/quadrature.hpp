#ifndef PINEWTON_QUADRATURE_HPP
#define PINEWTON_QUADRATURE_HPP

#include <functional>

// Adaptive 2-D quadrature over an axis-aligned square, used for the
// singular-cell averages (integrable log-type singularities at a corner
// or the center of the cell).  Worst-first box subdivision with an
// embedded Gauss-Legendre pair; deterministic.

namespace pinewton {

// Integral of f over [cx-half, cx+half] x [cy-half, cy+half] to the
// requested relative tolerance.
double adaptive_cell_integral(const std::function<double(double, double)>& f,
                              double cx, double cy, double half,
                              double rel_tol);

// Same, divided by the cell area.
double adaptive_cell_average(const std::function<double(double, double)>& f,
                             double cx, double cy, double half,
                             double rel_tol);

}  // namespace pinewton

#endif
