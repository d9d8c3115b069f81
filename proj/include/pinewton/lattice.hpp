#ifndef PINEWTON_LATTICE_HPP
#define PINEWTON_LATTICE_HPP

#include <Eigen/Core>
#include <complex>
#include <memory>
#include <utility>

// Truncated square grid on [-L, L]^2, discrete calculus (rectangle-rule
// quadrature, 5-point Laplacian with zero Dirichlet extension, the
// forward-difference Dirichlet form), and exact linear convolution
// against radial kernels via zero-padded FFTs.

namespace pinewton {

struct GridSpec {
    double half_width_L;
    int points_per_axis_N;
    double spacing_h;  // 2L/N

    // coordinate of node index i (0 <= i < N); index N/2 is the origin
    double coord(int i) const { return (i - points_per_axis_N / 2) * spacing_h; }
};

inline bool operator==(const GridSpec& a, const GridSpec& b) {
    return a.half_width_L == b.half_width_L &&
           a.points_per_axis_N == b.points_per_axis_N;
}

// Throws std::invalid_argument unless L > 0 and N >= 8 is even (even N
// puts the origin exactly on node (N/2, N/2)).
GridSpec make_grid(double L, int N);

template <class Scalar>
struct Field {
    GridSpec grid;
    Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic> values;

    static Field zero(const GridSpec& g) {
        return {g, Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(
                       g.points_per_axis_N, g.points_per_axis_N)};
    }
};

using RealField = Field<double>;
using ComplexField = Field<std::complex<double>>;

enum class KernelKind { LOG1P_R, LOG1P_INV_R };  // log(1+r) and log(1+1/r)

// h^2 * sum over all nodes.
template <class Scalar>
Scalar integrate(const Field<Scalar>& f) {
    return f.values.sum() * (f.grid.spacing_h * f.grid.spacing_h);
}

// 5-point stencil, zero values outside the box.
template <class Scalar>
Field<Scalar> laplacian(const Field<Scalar>& f) {
    const int n = f.grid.points_per_axis_N;
    const double inv_h2 = 1.0 / (f.grid.spacing_h * f.grid.spacing_h);
    Field<Scalar> out{f.grid, -4.0 * f.values};
    out.values.bottomRows(n - 1) += f.values.topRows(n - 1);
    out.values.topRows(n - 1) += f.values.bottomRows(n - 1);
    out.values.rightCols(n - 1) += f.values.leftCols(n - 1);
    out.values.leftCols(n - 1) += f.values.rightCols(n - 1);
    out.values *= inv_h2;
    return out;
}

// Dirichlet form sum |f(x+h e) - f(x)|^2 over both axes, including the
// stubs to the zero exterior, so that grad_norm_sq(f) equals the exact
// rectangle-rule pairing of f against -laplacian(f).
template <class Scalar>
double grad_norm_sq(const Field<Scalar>& f) {
    const int n = f.grid.points_per_axis_N;
    const auto& v = f.values;
    double s = (v.bottomRows(n - 1) - v.topRows(n - 1)).abs2().sum() +
               (v.rightCols(n - 1) - v.leftCols(n - 1)).abs2().sum();
    s += v.row(0).abs2().sum() + v.row(n - 1).abs2().sum();
    s += v.col(0).abs2().sum() + v.col(n - 1).abs2().sum();
    return s;
}

// Exact discrete linear convolution h^2 sum_y K(x-y) density(y) against a
// radial kernel tabulated on the (2N-1)^2 difference grid; spectra are
// cached per (grid, kernel).  The log(1+1/r) zero-difference entry is the
// one-cell average by adaptive quadrature (rel. tol. 1e-10); log(1+r)
// vanishes at zero difference.
RealField log_convolve(const RealField& density, KernelKind kind);

// Convolution against a caller-supplied radial kernel on the same
// difference grid.  `radial` is evaluated at r > 0; `origin_value` is the
// zero-difference entry.  The spectral plan is built once per instance.
class KernelPlan {
  public:
    template <class F>
    KernelPlan(const GridSpec& grid, F&& radial, double origin_value)
        : KernelPlan(grid, Table{grid, std::forward<F>(radial), origin_value}) {}

    RealField apply(const RealField& density) const;
    const GridSpec& grid() const;

    struct Table {
        template <class F>
        Table(const GridSpec& g, F&& radial, double origin_value)
            : values(table_radii(g)) {
            const int m = values.rows();
            for (int j = 0; j < m; ++j)
                for (int i = 0; i < m; ++i)
                    values(i, j) = values(i, j) > 0 ? radial(values(i, j)) : origin_value;
        }
        Eigen::ArrayXXd values;
    };

    KernelPlan(const GridSpec& grid, Table table);
    ~KernelPlan();
    KernelPlan(KernelPlan&&) noexcept;
    KernelPlan& operator=(KernelPlan&&) noexcept;

  private:
    static Eigen::ArrayXXd table_radii(const GridSpec& g);
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

namespace detail {
// Both logarithmic potentials of one density with two FFTs instead of
// four (the two inverse transforms share one complex pass).  This is the
// solver's hot path; log_convolve keeps the plain per-kernel route.
std::pair<RealField, RealField> log_convolve_pair(const RealField& density);

// Thread budget for data-parallel loops: min(hardware, PINEWTON_THREADS).
int thread_budget();
}  // namespace detail

}  // namespace pinewton

#endif
