#ifndef TCLOCK_EXPERIMENT_HPP
#define TCLOCK_EXPERIMENT_HPP

#include <functional>
#include <optional>
#include <vector>

#include "tclock/bloch.hpp"
#include "tclock/split_step.hpp"

namespace tclock {

/// Wavepacket preparation: release from the crossing trap, expansion in the
/// waveguide, then a harmonic lens pulse from the same beam with tunable
/// duration.
struct LensPlan {
    double crossing_nu_hz = 40.0;  // longitudinal frequency of the crossing trap
    double expand_time_ms = 40.0;
    double lens_nu_hz = 40.0;      // the lens pulse reuses the crossing beam
    double lens_duration_ms = 0.14;
};

/// Everything one simulated run of the Larmor experiment needs.
/// incident_velocity is the mean velocity at the barrier; the kick applied
/// at the offset position accounts for the waveguide's acceleration.
struct SimulationPlan {
    double grid_min_um = -400.0, grid_max_um = 400.0;
    int grid_points = 4096;
    double trap_nu_y_hz = 2.5;
    double trap_nu_perp_hz = 250.0;
    double barrier_height_v = 4.71;
    double barrier_sigma_um = 1.3;
    double barrier_center_um = 0.0;
    double omega_eff_hz = 250.0; // effective precession rate (coupling is half)
    double delta_hz = 0.0;
    double atom_number = 3000.0;
    double a11_a0 = 100.0, a22_a0 = 100.0, a12_a0 = 100.0; // scattering lengths, Bohr radii
    double initial_offset_um = -150.0;
    double incident_velocity = 4.26;
    double dt_ms = 5e-3;
    double total_time_ms = 250.0; // cap on the post-kick evolution
    LensPlan lens;

    SpatialGrid make_grid() const { return SpatialGrid(grid_min_um, grid_max_um, grid_points); }
    double omega_y() const;        // rad/ms
    double omega_perp() const;     // rad/ms
    double omega_gp_rad_per_ms() const;  // coupling amplitude, = Omega_eff/2
    double omega_eff_rad_per_ms() const;
    // quasi-1D interaction strengths 2*omega_perp*a, um^2/ms
    double g11() const;
    double g22() const;
    double g12() const;
    PotentialProfile barrier() const;

    void validate() const;
};

struct SimResult {
    double transmission = 0.0;
    BlochVector transmitted_bloch;
    LarmorTimes times;
    double incident_mean_v = 0.0, incident_rms_v = 0.0;
    double transmitted_mean_v = 0.0, transmitted_rms_v = 0.0;
    double final_time_ms = 0.0;
    Eigen::ArrayXd incident_velocities, incident_weights; // barrier-free arrival spectrum
};

/// Called with the field whenever a requested snapshot time is reached.
using SnapshotSink = std::function<void(const SpinorField&)>;

/// Ground state of the initial crossed-trap configuration (component 1).
SpinorField initial_ground_state(const SimulationPlan& plan);

/// Expansion stage: waveguide-only evolution for the planned time.
void expand_in_waveguide(SpinorField& field, const SimulationPlan& plan);

/// Harmonic lens pulse centred on the crossing-trap site.
void lens_pulse(SpinorField& field, const SimulationPlan& plan, double duration_ms);

/// Full preparation: expansion then lens pulse at the planned duration.
/// The input must be a trap ground state.
SpinorField matter_wave_lens(SpinorField field, const SimulationPlan& plan);

/// Kick the prepared packet so its mean velocity at the barrier equals
/// plan.incident_velocity, then propagate without the barrier until the
/// packet's centre crosses the barrier position; returns the velocity
/// statistics there.  This mirrors how the experiment calibrates incident
/// velocities (motion in the absence of the barrier).
struct IncidentProfile {
    double mean_v = 0.0, rms_v = 0.0;
    Eigen::ArrayXd velocities, weights; // windowed spectrum at arrival
    double arrival_time_ms = 0.0;
};
IncidentProfile incident_profile(const SimulationPlan& plan, const SpinorField& prepared);

/// Kick velocity that makes the packet arrive at the barrier with mean
/// velocity v_target, given current mean position/velocity.
double kick_for_arrival(const SimulationPlan& plan, const SpinorField& field, double v_target);

/// Tune the lens duration until the pre-collision rms velocity width at the
/// barrier equals target_rms for a packet arriving at v_ref.  Returns the
/// calibrated duration (also written into plan.lens).
double calibrate_lens_duration(SimulationPlan& plan, double target_rms, double v_ref);

/// The full pipeline: ground state, lens, kick, evolution through
/// barrier + Raman coupling until the transmitted and reflected packets are
/// separated by more than four packet widths, then Bloch extraction and
/// conversion to Larmor times.
SimResult run_larmor_experiment(const SimulationPlan& plan,
                                std::span<const double> snapshot_times = {},
                                const SnapshotSink& sink = {});

/// Write a field snapshot as CSV rows (y_um, re_psi1, im_psi1, re_psi2, im_psi2).
void write_snapshot_csv(const SpinorField& field, const std::string& path);

} // namespace tclock

#endif
