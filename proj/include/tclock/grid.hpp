#ifndef TCLOCK_GRID_HPP
#define TCLOCK_GRID_HPP

#include <Eigen/Dense>

#include "tclock/errors.hpp"

namespace tclock {

/// Uniform 1D spatial grid with the conjugate wavenumber grid used by the
/// spectral stepper.  n_points must be a power of two; points are
/// y_i = y_min + i*dy with y_max excluded (periodic convention).
class SpatialGrid {
public:
    SpatialGrid(double y_min, double y_max, int n_points);

    double y_min() const { return y_min_; }
    double y_max() const { return y_max_; }
    int size() const { return n_; }
    double dy() const { return dy_; }

    double position(int i) const { return y_min_ + i * dy_; }

    Eigen::ArrayXd positions() const;

    /// Wavenumbers in FFT order: k_j = 2*pi*j/L for j < n/2, negative branch after.
    Eigen::ArrayXd wavenumbers() const;

    bool contains(double a, double b) const { return a >= y_min_ && b <= y_max_ && a <= b; }

private:
    double y_min_, y_max_, dy_;
    int n_;
};

SpatialGrid make_grid(double y_min, double y_max, int n_points);

} // namespace tclock

#endif
