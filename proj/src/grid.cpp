#include "tclock/grid.hpp"

#include <numbers>

namespace tclock {

namespace {
bool is_power_of_two(int n) { return n >= 2 && (n & (n - 1)) == 0; }
}

SpatialGrid::SpatialGrid(double y_min, double y_max, int n_points)
    : y_min_(y_min), y_max_(y_max), n_(n_points) {
    if (!(y_max > y_min))
        throw ConfigError("SpatialGrid: y_max must exceed y_min");
    if (!is_power_of_two(n_points))
        throw ConfigError("SpatialGrid: n_points must be a power of two >= 2");
    dy_ = (y_max - y_min) / n_;
}

Eigen::ArrayXd SpatialGrid::positions() const {
    Eigen::ArrayXd y(n_);
    for (int i = 0; i < n_; ++i) y[i] = position(i);
    return y;
}

Eigen::ArrayXd SpatialGrid::wavenumbers() const {
    const double dk = 2.0 * std::numbers::pi / (y_max_ - y_min_);
    Eigen::ArrayXd k(n_);
    for (int j = 0; j < n_; ++j) {
        const int jj = (j < n_ / 2) ? j : j - n_;
        k[j] = dk * jj;
    }
    return k;
}

SpatialGrid make_grid(double y_min, double y_max, int n_points) {
    return SpatialGrid(y_min, y_max, n_points);
}

} // namespace tclock
