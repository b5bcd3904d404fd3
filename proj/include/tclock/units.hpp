#ifndef TCLOCK_UNITS_HPP
#define TCLOCK_UNITS_HPP

#include "tclock/errors.hpp"

namespace tclock {

// Internal unit system: lengths in micrometers, times in milliseconds,
// velocities in um/ms (numerically equal to mm/s).  Energies are carried
// either as temperature equivalents (nK) or as "equivalent velocity" v_b
// with E = m v_b^2 / 2; most barrier heights in this library are the latter.

namespace constants {
inline constexpr double hbar_si = 1.054571817e-34;       // J s
inline constexpr double atomic_mass_unit_si = 1.66053906660e-27; // kg
inline constexpr double boltzmann_si = 1.380649e-23;     // J/K
inline constexpr double rb87_mass_u = 86.909180531;      // atomic mass units
inline constexpr double bohr_radius_um = 5.29177210903e-5;
} // namespace constants

/// Conversions between velocity and energy for one atomic species.
/// Hard-coded to 87Rb by default but constructible for any mass.
class UnitSystem {
public:
    explicit UnitSystem(double mass_u = constants::rb87_mass_u);

    /// hbar/m in um^2/ms (about 0.7307 for 87Rb).
    double hbar_over_m() const { return hbar_over_m_; }

    double mass_kg() const { return mass_kg_; }

    /// Kinetic energy m v^2/2 of velocity v (um/ms), as a temperature in nK.
    double velocity_to_energy(double v) const;

    /// Inverse of velocity_to_energy.
    double energy_to_velocity(double energy_nk) const;

    /// Effective temperature m v_rms^2 / k_B of a 1D rms velocity width, in nK.
    double effective_temperature(double v_rms) const;

    static const UnitSystem& rb87();

private:
    double mass_kg_;
    double hbar_over_m_; // um^2/ms
};

/// hbar/m for 87Rb in um^2/ms.
double hbar_over_m();

/// m v^2 / 2 in nK for 87Rb.
double velocity_to_energy(double v);

/// Inverse conversion for 87Rb.
double energy_to_velocity(double energy_nk);

} // namespace tclock

#endif
