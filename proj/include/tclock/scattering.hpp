#ifndef TCLOCK_SCATTERING_HPP
#define TCLOCK_SCATTERING_HPP

#include <complex>
#include <span>
#include <vector>

#include "tclock/potential.hpp"

namespace tclock {

/// Scattering amplitudes at one incident velocity for a unit-amplitude wave
/// incident from the left.  t is referenced to free propagation across the
/// truncation window, so V = 0 gives t = 1 exactly.
struct ScatteringSolution {
    double velocity = 0.0;
    std::complex<double> t{1.0, 0.0};
    std::complex<double> r{0.0, 0.0};

    double transmission() const { return std::norm(t); }
    double reflectivity() const { return std::norm(r); }
    /// Principal-branch transmission phase; see transmission_curve for unwrapping.
    double phase() const { return std::arg(t); }
};

inline constexpr int default_slices = 4096;

/// Stationary 1D scattering by the transfer-matrix method over a
/// piecewise-constant discretization of the barrier (waveguide excluded).
/// Evanescent slices are propagated with rescaled real exponentials, so
/// opaque barriers do not overflow.
ScatteringSolution transfer_matrix_solve(const PotentialProfile& potential, double v,
                                         int slices = default_slices);

/// Same solve for a wave incident from the right (reciprocity checks).
ScatteringSolution transfer_matrix_solve_from_right(const PotentialProfile& potential, double v,
                                                    int slices = default_slices);

struct TransmissionPoint {
    double v;
    double transmission;
    double phase; // unwrapped along the scan, seeded at the highest velocity
    std::complex<double> t;
};

/// T and unwrapped phase over a monotone velocity grid.
std::vector<TransmissionPoint> transmission_curve(const PotentialProfile& potential,
                                                  std::span<const double> velocities,
                                                  int slices = default_slices);

/// Closed-form square-barrier transmission, both tunneling and over-barrier
/// branches, with the analytic limit at v = v_b.  Heights/velocities in um/ms.
double square_barrier_transmission(double v_b, double width_um, double v);

/// rms width (in velocity) of dT/dv for a Gaussian barrier of the given
/// height and 1/e^2 radius: the smearing that tunneling itself adds to a
/// knife-edge transmission profile.
double tunneling_rms_width(double v_b, double sigma_um, int slices = default_slices);

// --- internals shared with the larmor module ---

/// The piecewise-constant discretization used by the solver.
struct SliceTable {
    double window_min = 0.0;
    double dy = 0.0;
    Eigen::ArrayXd u; // potential at slice midpoints, velocity-squared units
    double midpoint(int j) const { return window_min + (j + 0.5) * dy; }
};

SliceTable make_slice_table(const PotentialProfile& potential, int slices);

/// Solve directly from a slice table (u may be modified by callers).
ScatteringSolution solve_slices(const SliceTable& table, double v);

/// Per-slice plane-wave coefficients of the scattering eigenstate,
/// referenced at each slice's left edge.
struct ScatteringField {
    SliceTable table;
    std::vector<std::complex<double>> a, b; // psi(d) = a e^{ikd} + b e^{-ikd} within slice
    std::vector<std::complex<double>> k;    // local wavenumber (positive imaginary when evanescent)
    ScatteringSolution solution;

    /// Exact integral of |psi|^2 over [y1, y2] (within the window).
    double density_integral(double y1, double y2) const;
    /// Integral of |psi|^2 over slice j alone.
    double slice_density(int j) const;
};

ScatteringField scattering_eigenstate(const PotentialProfile& potential, double v,
                                      int slices = default_slices);

/// d(ln t)/du_j for every slice j by symmetric difference du, computed with
/// cached prefix/suffix transfer products (O(slices) total).
std::vector<std::complex<double>> log_t_slice_gradient(const SliceTable& table, double v,
                                                       double du);

} // namespace tclock

#endif
