#include "pinewton/lattice.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "pinewton/quadrature.hpp"

namespace pinewton {

namespace {

using Eigen::ArrayXXcd;
using Eigen::ArrayXXd;
using cd = std::complex<double>;

void parallel_for(int n, const std::function<void(int, int)>& body) {
    const int budget = std::min(detail::thread_budget(), n);
    if (budget <= 1) {
        body(0, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(budget));
    const int chunk = (n + budget - 1) / budget;
    for (int t = 0; t < budget; ++t) {
        const int lo = t * chunk;
        const int hi = std::min(n, lo + chunk);
        if (lo < hi)
            pool.emplace_back(body, lo, hi);
    }
    for (auto& th : pool)
        th.join();
}

// In-place 2-D transform: column pass (contiguous) then row pass.  Each
// worker owns its FFT object and writes disjoint slices, so the result
// is bitwise independent of the thread count.
void fft_2d(ArrayXXcd& a, bool inverse) {
    const int m = static_cast<int>(a.rows());
    parallel_for(m, [&](int lo, int hi) {
        Eigen::FFT<double> fft;
        std::vector<cd> out(static_cast<std::size_t>(m));
        for (int j = lo; j < hi; ++j) {
            cd* col = a.data() + static_cast<std::ptrdiff_t>(j) * m;
            if (inverse)
                fft.inv(out.data(), col, m);
            else
                fft.fwd(out.data(), col, m);
            std::copy(out.begin(), out.end(), col);
        }
    });
    parallel_for(m, [&](int lo, int hi) {
        Eigen::FFT<double> fft;
        std::vector<cd> in(static_cast<std::size_t>(m)), out(static_cast<std::size_t>(m));
        for (int i = lo; i < hi; ++i) {
            for (int j = 0; j < m; ++j)
                in[static_cast<std::size_t>(j)] = a(i, j);
            if (inverse)
                fft.inv(out.data(), in.data(), m);
            else
                fft.fwd(out.data(), in.data(), m);
            for (int j = 0; j < m; ++j)
                a(i, j) = out[static_cast<std::size_t>(j)];
        }
    });
}

int padded_size(int n) {
    int m = 1;
    while (m < 2 * n - 1)
        m *= 2;
    return m;
}

// Kernel spectrum: the (2N-1)^2 difference table wrapped periodically
// into an M x M array, transformed, and premultiplied by h^2 so one
// pointwise product yields the rectangle-rule convolution.
ArrayXXcd kernel_spectrum(const ArrayXXd& table, const GridSpec& g, int m) {
    const int n = g.points_per_axis_N;
    ArrayXXcd pad = ArrayXXcd::Zero(m, m);
    for (int dj = -(n - 1); dj <= n - 1; ++dj)
        for (int di = -(n - 1); di <= n - 1; ++di)
            pad((di + m) % m, (dj + m) % m) = table(di + n - 1, dj + n - 1);
    fft_2d(pad, false);
    return pad * (g.spacing_h * g.spacing_h);
}

ArrayXXcd density_spectrum(const RealField& density, int m) {
    const int n = density.grid.points_per_axis_N;
    ArrayXXcd pad = ArrayXXcd::Zero(m, m);
    pad.topLeftCorner(n, n) = density.values.cast<cd>();
    fft_2d(pad, false);
    return pad;
}

ArrayXXd log1p_r_table(const GridSpec& g) {
    const int n = g.points_per_axis_N;
    ArrayXXd table(2 * n - 1, 2 * n - 1);
    for (int dj = -(n - 1); dj <= n - 1; ++dj)
        for (int di = -(n - 1); di <= n - 1; ++di)
            table(di + n - 1, dj + n - 1) = std::log1p(std::hypot(di * g.spacing_h, dj * g.spacing_h));
    return table;  // zero difference gives log(1+0) = 0
}

ArrayXXd log1p_inv_r_table(const GridSpec& g) {
    const int n = g.points_per_axis_N;
    ArrayXXd table(2 * n - 1, 2 * n - 1);
    for (int dj = -(n - 1); dj <= n - 1; ++dj)
        for (int di = -(n - 1); di <= n - 1; ++di) {
            const double r = std::hypot(di * g.spacing_h, dj * g.spacing_h);
            table(di + n - 1, dj + n - 1) = r > 0 ? std::log1p(1.0 / r) : 0.0;
        }
    // integrable singularity: the zero-difference entry is the one-cell
    // average of log(1+1/r)
    table(n - 1, n - 1) = adaptive_cell_average(
        [](double x, double y) { return std::log1p(1.0 / std::hypot(x, y)); },
        0.0, 0.0, 0.5 * g.spacing_h, 1e-10);
    return table;
}

struct GridSpectra {
    int m;
    ArrayXXcd k_log1p_r;
    ArrayXXcd k_log1p_inv_r;
};

// One spectra pair per grid, built lazily; the cache never invalidates
// because spectra depend only on (N, h).
std::shared_ptr<const GridSpectra> spectra_for(const GridSpec& g) {
    using Key = std::pair<int, std::uint64_t>;
    static std::mutex mu;
    static std::map<Key, std::shared_ptr<const GridSpectra>> cache;
    const Key key{g.points_per_axis_N, std::bit_cast<std::uint64_t>(g.spacing_h)};
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end())
            return it->second;
    }
    auto fresh = std::make_shared<GridSpectra>();
    fresh->m = padded_size(g.points_per_axis_N);
    fresh->k_log1p_r = kernel_spectrum(log1p_r_table(g), g, fresh->m);
    fresh->k_log1p_inv_r = kernel_spectrum(log1p_inv_r_table(g), g, fresh->m);
    std::lock_guard<std::mutex> lock(mu);
    auto [it, inserted] = cache.emplace(key, std::move(fresh));
    (void)inserted;  // a concurrent builder may have won; use theirs
    return it->second;
}

}  // namespace

GridSpec make_grid(double L, int N) {
    if (!(L > 0.0))
        throw std::invalid_argument("make_grid: half-width L must be positive");
    if (N < 8 || N % 2 != 0)
        throw std::invalid_argument("make_grid: N must be an even integer >= 8");
    return {L, N, 2.0 * L / N};
}

RealField log_convolve(const RealField& density, KernelKind kind) {
    const GridSpec& g = density.grid;
    auto spectra = spectra_for(g);
    const auto& khat = kind == KernelKind::LOG1P_R ? spectra->k_log1p_r
                                                   : spectra->k_log1p_inv_r;
    ArrayXXcd z = density_spectrum(density, spectra->m);
    z *= khat;
    fft_2d(z, true);
    const int n = g.points_per_axis_N;
    return {g, z.topLeftCorner(n, n).real()};
}

namespace detail {

std::pair<RealField, RealField> log_convolve_pair(const RealField& density) {
    const GridSpec& g = density.grid;
    auto spectra = spectra_for(g);
    ArrayXXcd rho_hat = density_spectrum(density, spectra->m);
    // pack both real-valued results into one inverse transform:
    // ifft(k1 rho + i k2 rho) = W1 + i W2
    ArrayXXcd z = spectra->k_log1p_r * rho_hat + cd(0.0, 1.0) * (spectra->k_log1p_inv_r * rho_hat);
    fft_2d(z, true);
    const int n = g.points_per_axis_N;
    return {RealField{g, z.topLeftCorner(n, n).real()},
            RealField{g, z.topLeftCorner(n, n).imag()}};
}

int thread_budget() {
    static const int budget = [] {
        int hw = static_cast<int>(std::thread::hardware_concurrency());
        int value = std::min(hw > 0 ? hw : 1, 4);
        if (const char* env = std::getenv("PINEWTON_THREADS")) {
            char* end = nullptr;
            const long parsed = std::strtol(env, &end, 10);
            if (end != env && parsed >= 1 && parsed <= 64)
                value = static_cast<int>(parsed);
        }
        return value;
    }();
    return budget;
}

}  // namespace detail

struct KernelPlan::Impl {
    GridSpec grid;
    int m;
    ArrayXXcd khat;
};

KernelPlan::KernelPlan(const GridSpec& grid, Table table)
    : impl_(new Impl{grid, padded_size(grid.points_per_axis_N), {}}) {
    impl_->khat = kernel_spectrum(table.values, grid, impl_->m);
}

KernelPlan::~KernelPlan() = default;
KernelPlan::KernelPlan(KernelPlan&&) noexcept = default;
KernelPlan& KernelPlan::operator=(KernelPlan&&) noexcept = default;

const GridSpec& KernelPlan::grid() const { return impl_->grid; }

Eigen::ArrayXXd KernelPlan::table_radii(const GridSpec& g) {
    const int n = g.points_per_axis_N;
    ArrayXXd radii(2 * n - 1, 2 * n - 1);
    for (int dj = -(n - 1); dj <= n - 1; ++dj)
        for (int di = -(n - 1); di <= n - 1; ++di)
            radii(di + n - 1, dj + n - 1) = std::hypot(di * g.spacing_h, dj * g.spacing_h);
    return radii;
}

RealField KernelPlan::apply(const RealField& density) const {
    if (!(density.grid == impl_->grid))
        throw std::invalid_argument("KernelPlan::apply: density grid does not match the plan");
    ArrayXXcd z = density_spectrum(density, impl_->m);
    z *= impl_->khat;
    fft_2d(z, true);
    const int n = impl_->grid.points_per_axis_N;
    return {impl_->grid, z.topLeftCorner(n, n).real()};
}

}  // namespace pinewton
