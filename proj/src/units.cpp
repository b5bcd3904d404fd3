#include "tclock/units.hpp"

#include <cmath>

namespace tclock {

UnitSystem::UnitSystem(double mass_u) {
    if (mass_u <= 0.0) throw ConfigError("UnitSystem: mass must be positive");
    mass_kg_ = mass_u * constants::atomic_mass_unit_si;
    // m^2/s -> um^2/ms is a factor 1e9.
    hbar_over_m_ = constants::hbar_si / mass_kg_ * 1e9;
}

double UnitSystem::velocity_to_energy(double v) const {
    if (v < 0.0) throw DomainError("velocity_to_energy: negative velocity");
    // v in um/ms = 1e-3 m/s; result in nK.
    const double v_si = v * 1e-3;
    return 0.5 * mass_kg_ * v_si * v_si / constants::boltzmann_si * 1e9;
}

double UnitSystem::energy_to_velocity(double energy_nk) const {
    if (energy_nk < 0.0) throw DomainError("energy_to_velocity: negative energy");
    const double v_si = std::sqrt(2.0 * energy_nk * 1e-9 * constants::boltzmann_si / mass_kg_);
    return v_si * 1e3;
}

double UnitSystem::effective_temperature(double v_rms) const {
    if (v_rms < 0.0) throw DomainError("effective_temperature: negative width");
    const double v_si = v_rms * 1e-3;
    return mass_kg_ * v_si * v_si / constants::boltzmann_si * 1e9;
}

const UnitSystem& UnitSystem::rb87() {
    static const UnitSystem instance;
    return instance;
}

double hbar_over_m() { return UnitSystem::rb87().hbar_over_m(); }
double velocity_to_energy(double v) { return UnitSystem::rb87().velocity_to_energy(v); }
double energy_to_velocity(double energy_nk) { return UnitSystem::rb87().energy_to_velocity(energy_nk); }

} // namespace tclock
