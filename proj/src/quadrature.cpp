#include "pinewton/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace pinewton {

namespace {

// 4-point Gauss-Legendre on [-1, 1]; tensorized per box.  The nodes are
// strictly interior and never land on box corners or centers, so
// integrable point singularities there are sampled but never hit.
constexpr double gl_x[4] = {-0.86113631159405258, -0.33998104358485626,
                            0.33998104358485626, 0.86113631159405258};
constexpr double gl_w[4] = {0.34785484513745386, 0.65214515486254614,
                            0.65214515486254614, 0.34785484513745386};

struct Box {
    double cx, cy, half;
    double integral;  // fine estimate (sum over the 4 children)
    double error;     // |fine - coarse|
};

double gl_box(const std::function<double(double, double)>& f, double cx,
              double cy, double half) {
    double s = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            s += gl_w[i] * gl_w[j] * f(cx + half * gl_x[i], cy + half * gl_x[j]);
    return s * half * half;
}

Box make_box(const std::function<double(double, double)>& f, double cx,
             double cy, double half) {
    const double coarse = gl_box(f, cx, cy, half);
    const double h2 = 0.5 * half;
    double fine = 0.0;
    for (int sx = -1; sx <= 1; sx += 2)
        for (int sy = -1; sy <= 1; sy += 2)
            fine += gl_box(f, cx + sx * h2, cy + sy * h2, h2);
    return {cx, cy, half, fine, std::abs(fine - coarse)};
}

}  // namespace

double adaptive_cell_integral(const std::function<double(double, double)>& f,
                              double cx, double cy, double half,
                              double rel_tol) {
    if (!(half > 0.0) || !(rel_tol > 0.0))
        throw std::invalid_argument("adaptive_cell_integral: half-width and tolerance must be positive");

    std::vector<Box> boxes{make_box(f, cx, cy, half)};
    double total = boxes[0].integral;
    double err = boxes[0].error;

    // worst-first refinement; deterministic because ties resolve to the
    // lowest index
    constexpr int max_boxes = 40000;
    while (err > rel_tol * std::max(std::abs(total), 1e-300) &&
           static_cast<int>(boxes.size()) < max_boxes) {
        std::size_t worst = 0;
        for (std::size_t k = 1; k < boxes.size(); ++k)
            if (boxes[k].error > boxes[worst].error)
                worst = k;
        const Box parent = boxes[worst];
        boxes.erase(boxes.begin() + static_cast<std::ptrdiff_t>(worst));
        total -= parent.integral;
        err -= parent.error;
        const double h2 = 0.5 * parent.half;
        for (int sx = -1; sx <= 1; sx += 2)
            for (int sy = -1; sy <= 1; sy += 2) {
                boxes.push_back(make_box(f, parent.cx + sx * h2, parent.cy + sy * h2, h2));
                total += boxes.back().integral;
                err += boxes.back().error;
            }
    }
    return total;
}

double adaptive_cell_average(const std::function<double(double, double)>& f,
                             double cx, double cy, double half,
                             double rel_tol) {
    return adaptive_cell_integral(f, cx, cy, half, rel_tol) / (4.0 * half * half);
}

}  // namespace pinewton
