#ifndef TCLOCK_POTENTIAL_HPP
#define TCLOCK_POTENTIAL_HPP

#include <Eigen/Dense>
#include <optional>
#include <variant>

#include "tclock/grid.hpp"
#include "tclock/units.hpp"

namespace tclock {

// Potentials are stored in "velocity-squared" units u = 2V/m, i.e. the
// square of the equivalent velocity, in (um/ms)^2.  A barrier of height
// v_b has peak u = v_b^2.

struct GaussianBarrier {
    double height_v;     // equivalent velocity, um/ms
    double e2_radius_um; // 1/e^2 intensity radius sigma; profile exp(-2 y^2/sigma^2)
    double center_um = 0.0;
};

struct SquareBarrier {
    double height_v;
    double width_um;
    double center_um = 0.0;
};

struct TabulatedBarrier {
    SpatialGrid grid;
    Eigen::ArrayXd energy_vsq; // u(y) samples, may be signed
};

struct HarmonicWaveguide {
    double frequency_hz;
    double center_um = 0.0;
};

/// A 1D potential: one barrier plus an optional harmonic waveguide.
class PotentialProfile {
public:
    static PotentialProfile gaussian(double height_v, double e2_radius_um, double center_um = 0.0);
    static PotentialProfile square(double height_v, double width_um, double center_um = 0.0);
    static PotentialProfile tabulated(SpatialGrid grid, Eigen::ArrayXd energy_vsq);

    PotentialProfile& with_waveguide(double frequency_hz, double center_um = 0.0);

    /// Barrier-only potential in velocity-squared units.
    double barrier_vsq(double y) const;
    /// Waveguide-only potential (0 when absent).
    double waveguide_vsq(double y) const;
    double total_vsq(double y) const { return barrier_vsq(y) + waveguide_vsq(y); }

    /// Dimensionless spatial profile of the barrier, normalized to 1 at peak.
    /// For the Gaussian barrier this is G(y) = exp(-2 (y-c)^2/sigma^2); the
    /// square barrier uses its indicator; tabulated uses samples over max.
    double profile_weight(double y) const;

    /// Truncation window for stationary scattering (drops below double
    /// precision relevance outside: +-5 sigma for the Gaussian default).
    double window_min() const;
    double window_max() const;

    /// Peak equivalent velocity of the barrier.
    double peak_height_v() const;

    bool has_waveguide() const { return waveguide_.has_value(); }
    const HarmonicWaveguide& waveguide() const { return *waveguide_; }

    bool is_gaussian() const { return std::holds_alternative<GaussianBarrier>(barrier_); }
    const GaussianBarrier& gaussian_barrier() const { return std::get<GaussianBarrier>(barrier_); }
    double barrier_center() const;

    /// Window half-width in units of the barrier length scale (default 5).
    void set_window_factor(double f);
    double window_factor() const { return window_factor_; }

private:
    PotentialProfile() = default;
    std::variant<GaussianBarrier, SquareBarrier, TabulatedBarrier> barrier_;
    std::optional<HarmonicWaveguide> waveguide_;
    double window_factor_ = 5.0;
};

} // namespace tclock

#endif
