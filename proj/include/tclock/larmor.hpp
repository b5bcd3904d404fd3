#ifndef TCLOCK_LARMOR_HPP
#define TCLOCK_LARMOR_HPP

#include "tclock/scattering.hpp"
#include "tclock/velocity_distribution.hpp"

namespace tclock {

/// The complex conditional time for transmission: tau_y is the in-plane
/// (precession) time, tau_z the signed out-of-plane (back-action) time.
/// Below the barrier tau_z is negative: raising the barrier lowers |t|.
struct LarmorTimes {
    double tau_y_ms = 0.0;
    double tau_z_ms = 0.0;
};

struct LarmorOptions {
    int slices = default_slices;
    double relative_step = 1e-6;   // of the barrier scale; grown when the signal is tiny
    double quality_tol = 1e-4;     // Richardson agreement gate
};

/// Larmor times from the logarithmic derivative of the transmission
/// amplitude with respect to a uniform rescaling of the barrier, by central
/// finite differences with a Richardson consistency check.
LarmorTimes larmor_times_global(const PotentialProfile& barrier, double v,
                                const LarmorOptions& opt = {});

/// Stationary dwell time over [y1, y2]: regional eigenstate density over the
/// incident flux ("hard window", no profile weighting).
double dwell_time(const PotentialProfile& barrier, double v, double y1, double y2,
                  int slices = default_slices);

/// Dwell time with the barrier's own profile G(y) as spatial weight, the
/// quantity a probe shaped like the barrier actually measures.
double weighted_dwell_time(const PotentialProfile& barrier, double v,
                           int slices = default_slices);

/// Position-resolved complex time per unit length: cell-by-cell potential
/// perturbations of ln t.  Values live at cell midpoints of `grid`.
struct TimeDensity {
    SpatialGrid grid;
    Eigen::ArrayXd tau_y_density; // ms per um
    Eigen::ArrayXd tau_z_density;
};

TimeDensity weak_value_density(const PotentialProfile& barrier, double v,
                               int slices = default_slices);

/// Semiclassical traversal integral for a Gaussian barrier,
/// int G(y)/sqrt(v^2 - v_b^2 G(y)) dy, in ms.  Requires v > v_b.
double semiclassical_angle(double v, double v_b, double sigma_um);

enum class EnsembleWeights {
    Probability, // dist(v) * T(v); the convention used throughout
    Amplitude    // dist(v) * t(v), complex weights (alternative convention)
};

struct EnsembleOptions {
    int slices = default_slices;
    int quadrature_nodes = 257;
    EnsembleWeights weights = EnsembleWeights::Probability;
};

/// Transmission-conditioned velocity-ensemble average of the complex time.
struct EnsembleTimes {
    LarmorTimes times;
    double transmission = 0.0;       // int dist * T
    double tunneled_fraction = 0.0;  // transmitted weight with v < v_b
    double mean_transmitted_v = 0.0;
    double rms_transmitted_v = 0.0;
};

EnsembleTimes ensemble_average_times(const PotentialProfile& barrier,
                                     const VelocityDistribution& dist,
                                     const EnsembleOptions& opt = {});

} // namespace tclock

#endif
