#ifndef TCLOCK_SPINOR_HPP
#define TCLOCK_SPINOR_HPP

#include <complex>

#include "tclock/grid.hpp"

namespace tclock {

enum class ComponentMask { One, Two, Both };

/// Two-component condensate wavefunction on a spatial grid.  Component 1 is
/// the |x> clock state, component 2 the |-x> state.  The total norm
/// int (|psi1|^2 + |psi2|^2) dy is 1 for a physical state; atom_number
/// scales the interaction terms.
struct SpinorField {
    SpatialGrid grid;
    Eigen::ArrayXcd psi1, psi2;
    double atom_number = 1.0;
    double time_ms = 0.0;

    static SpinorField zero(const SpatialGrid& grid, double atom_number = 1.0);

    double norm() const;
    void normalize();

    double norm_in(double y1, double y2) const;

    /// Density-weighted mean position of both components.
    double center_of_mass() const;
    double position_rms() const;
};

struct MomentumStats {
    double mean_v = 0.0;
    double rms_v = 0.0;
};

/// Mean and rms velocity of the state restricted to [y1, y2], from the
/// windowed wavenumber spectrum of the selected component(s).
MomentumStats momentum_stats(const SpinorField& field, ComponentMask mask,
                             double y1, double y2);

/// Windowed velocity spectrum: probability weight per velocity bin, in FFT
/// order remapped to ascending velocity.  Used to build empirical incident
/// distributions.
void velocity_spectrum(const SpinorField& field, ComponentMask mask, double y1, double y2,
                       Eigen::ArrayXd& velocities, Eigen::ArrayXd& weights);

} // namespace tclock

#endif
