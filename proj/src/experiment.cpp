#include "tclock/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "tclock/units.hpp"

namespace tclock {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;

Eigen::ArrayXd waveguide_vsq(const SimulationPlan& plan, const SpatialGrid& grid) {
    const double w = plan.omega_y();
    Eigen::ArrayXd u(grid.size());
    for (int i = 0; i < grid.size(); ++i) {
        const double y = grid.position(i);
        u[i] = w * w * y * y;
    }
    return u;
}

Eigen::ArrayXd harmonic_vsq(const SpatialGrid& grid, double omega, double center) {
    Eigen::ArrayXd u(grid.size());
    for (int i = 0; i < grid.size(); ++i) {
        const double d = grid.position(i) - center;
        u[i] = omega * omega * d * d;
    }
    return u;
}

StepperTerms interacting_terms(const SimulationPlan& plan, Eigen::ArrayXd potential) {
    StepperTerms t;
    t.potential_vsq = std::move(potential);
    t.g11 = plan.g11();
    t.g22 = plan.g22();
    t.g12 = plan.g12();
    t.delta = two_pi * plan.delta_hz * 1e-3;
    return t;
}

double mean_velocity(const SpinorField& field) {
    return momentum_stats(field, ComponentMask::Both, field.grid.y_min(), field.grid.y_max())
        .mean_v;
}

} // namespace

double SimulationPlan::omega_y() const { return two_pi * trap_nu_y_hz * 1e-3; }
double SimulationPlan::omega_perp() const { return two_pi * trap_nu_perp_hz * 1e-3; }
double SimulationPlan::omega_eff_rad_per_ms() const { return two_pi * omega_eff_hz * 1e-3; }
double SimulationPlan::omega_gp_rad_per_ms() const { return 0.5 * omega_eff_rad_per_ms(); }

double SimulationPlan::g11() const {
    return 2.0 * omega_perp() * a11_a0 * constants::bohr_radius_um;
}
double SimulationPlan::g22() const {
    return 2.0 * omega_perp() * a22_a0 * constants::bohr_radius_um;
}
double SimulationPlan::g12() const {
    return 2.0 * omega_perp() * a12_a0 * constants::bohr_radius_um;
}

PotentialProfile SimulationPlan::barrier() const {
    return PotentialProfile::gaussian(barrier_height_v, barrier_sigma_um, barrier_center_um);
}

void SimulationPlan::validate() const {
    if (!(dt_ms > 0.0)) throw ConfigError("plan: dt must be positive");
    if (!(atom_number > 0.0)) throw ConfigError("plan: atom number must be positive");
    if (!(incident_velocity > 0.0)) throw ConfigError("plan: incident velocity must be positive");
    if (barrier_sigma_um <= 0.0) throw ConfigError("plan: barrier sigma must be positive");
    if (barrier_height_v < 0.0) throw ConfigError("plan: barrier height must be non-negative");
    if (lens.expand_time_ms < 0.0 || lens.lens_duration_ms < 0.0)
        throw ConfigError("plan: lens stage durations must be non-negative");

    const SpatialGrid grid = make_grid(); // validates the power-of-two requirement
    const double hm = hbar_over_m();
    if (incident_velocity > std::numbers::pi * hm / grid.dy())
        throw ConfigError("plan: incident velocity beyond the grid's Nyquist velocity");

    // transit coverage: ballistic time to the barrier plus dispersion margin
    const double transit = std::abs(initial_offset_um - barrier_center_um) / incident_velocity;
    if (total_time_ms < 1.2 * transit)
        throw ConfigError("plan: total time does not cover the barrier transit");

    // phase advance per step of the main-run potential must stay small
    const double w = omega_y();
    const double edge = std::max(std::abs(grid.y_min()), std::abs(grid.y_max()));
    const double u_max = w * w * edge * edge + barrier_height_v * barrier_height_v;
    if (u_max / (2.0 * hm) * dt_ms >= 0.5)
        throw ConfigError("plan: potential phase per step exceeds 0.5 rad; reduce dt");
    // same check for the crossing trap over the region the trapped cloud
    // occupies (twice its Thomas-Fermi radius)
    const double wc = two_pi * lens.crossing_nu_hz * 1e-3;
    if (wc > 0.0) {
        const double r_tf = std::cbrt(1.5 * atom_number * g11() * hm / (wc * wc));
        const double span = 2.0 * std::max(5.0, r_tf);
        const double local = wc * wc * span * span;
        if (local / (2.0 * hm) * dt_ms >= 0.5)
            throw ConfigError("plan: crossing-trap phase per step exceeds 0.5 rad; reduce dt");
    }
}

SpinorField initial_ground_state(const SimulationPlan& plan) {
    const SpatialGrid grid = plan.make_grid();
    const double wc = two_pi * plan.lens.crossing_nu_hz * 1e-3;
    const Eigen::ArrayXd pot =
        waveguide_vsq(plan, grid) + harmonic_vsq(grid, wc, plan.initial_offset_um);
    auto gs = ground_state(grid, pot, plan.atom_number, plan.g11());
    return std::move(gs.field);
}

void expand_in_waveguide(SpinorField& field, const SimulationPlan& plan) {
    if (plan.lens.expand_time_ms <= 0.0) return;
    SplitStepper stepper(field.grid, interacting_terms(plan, waveguide_vsq(plan, field.grid)),
                         plan.dt_ms);
    stepper.evolve(field, plan.lens.expand_time_ms);
}

void lens_pulse(SpinorField& field, const SimulationPlan& plan, double duration_ms) {
    if (duration_ms <= 0.0) return;
    const double wl = two_pi * plan.lens.lens_nu_hz * 1e-3;
    Eigen::ArrayXd pot = waveguide_vsq(plan, field.grid) +
                         harmonic_vsq(field.grid, wl, plan.initial_offset_um);
    SplitStepper stepper(field.grid, interacting_terms(plan, std::move(pot)), plan.dt_ms);
    stepper.evolve(field, duration_ms);
}

SpinorField matter_wave_lens(SpinorField field, const SimulationPlan& plan) {
    expand_in_waveguide(field, plan);
    lens_pulse(field, plan, plan.lens.lens_duration_ms);
    return field;
}

double kick_for_arrival(const SimulationPlan& plan, const SpinorField& field, double v_target) {
    const double w = plan.omega_y();
    const double y = field.center_of_mass() - plan.barrier_center_um;
    const double pot = w * y * w * y;
    if (v_target * v_target <= pot)
        throw DomainError("kick_for_arrival: requested arrival velocity cannot be reached "
                          "from the packet's position in the waveguide");
    return std::sqrt(v_target * v_target - pot) - mean_velocity(field);
}

IncidentProfile incident_profile(const SimulationPlan& plan, const SpinorField& prepared) {
    SpinorField field = prepared;
    apply_velocity_kick(field, kick_for_arrival(plan, field, plan.incident_velocity));

    SplitStepper stepper(field.grid, interacting_terms(plan, waveguide_vsq(plan, field.grid)),
                         plan.dt_ms);
    const double w = plan.omega_y();
    const double y0 = field.center_of_mass() - plan.barrier_center_um;
    const double v0 = mean_velocity(field);
    const double t_est = std::atan2(-y0 * w, v0) / w;

    const double chunk = 0.5;
    double t = 0.0;
    while (field.center_of_mass() < plan.barrier_center_um) {
        if (t > 3.0 * t_est + 10.0)
            throw NumericsError("incident_profile: packet failed to reach the barrier");
        stepper.evolve(field, chunk);
        t += chunk;
    }

    IncidentProfile p;
    const auto stats =
        momentum_stats(field, ComponentMask::Both, field.grid.y_min(), field.grid.y_max());
    p.mean_v = stats.mean_v;
    p.rms_v = stats.rms_v;
    p.arrival_time_ms = t;
    velocity_spectrum(field, ComponentMask::Both, field.grid.y_min(), field.grid.y_max(),
                      p.velocities, p.weights);
    return p;
}

double calibrate_lens_duration(SimulationPlan& plan, double target_rms, double v_ref) {
    SimulationPlan probe = plan;
    probe.incident_velocity = v_ref;

    SpinorField ground = initial_ground_state(probe);
    SpinorField expanded = ground;
    expand_in_waveguide(expanded, probe);

    const auto width_at_barrier = [&](double duration) {
        SpinorField f = expanded;
        lens_pulse(f, probe, duration);
        return incident_profile(probe, f).rms_v;
    };

    // the width falls with pulse duration on the collimating branch; walk
    // until the target is bracketed, then bisect
    const double step = 0.25, max_duration = 10.0;
    double lo = 0.0, lo_w = width_at_barrier(0.0);
    if (lo_w < target_rms)
        throw CalibrationError("calibrate_lens_duration: width already below target "
                               "with no lens pulse");
    double hi = 0.0, hi_w = lo_w;
    while (hi_w > target_rms) {
        lo = hi;
        lo_w = hi_w;
        hi += step;
        if (hi > max_duration)
            throw CalibrationError("calibrate_lens_duration: failed to bracket the target "
                                   "width within the maximum pulse duration");
        hi_w = width_at_barrier(hi);
    }
    for (int i = 0; i < 12; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (width_at_barrier(mid) > target_rms) lo = mid; else hi = mid;
    }
    const double duration = 0.5 * (lo + hi);
    plan.lens.lens_duration_ms = duration;
    return duration;
}

SimResult run_larmor_experiment(const SimulationPlan& plan, std::span<const double> snapshot_times,
                                const SnapshotSink& sink) {
    plan.validate();
    const SpatialGrid grid = plan.make_grid();

    SpinorField field = matter_wave_lens(initial_ground_state(plan), plan);
    apply_velocity_kick(field, kick_for_arrival(plan, field, plan.incident_velocity));

    const IncidentProfile incident = incident_profile(plan, field);

    // main run: waveguide + barrier, Raman coupling shaped like the barrier
    const PotentialProfile barrier = plan.barrier();
    Eigen::ArrayXd pot = waveguide_vsq(plan, grid);
    for (int i = 0; i < grid.size(); ++i) pot[i] += barrier.barrier_vsq(grid.position(i));
    StepperTerms terms = interacting_terms(plan, std::move(pot));
    terms.omega_gp = Eigen::ArrayXd(grid.size());
    for (int i = 0; i < grid.size(); ++i)
        terms.omega_gp[i] = plan.omega_gp_rad_per_ms() * barrier.profile_weight(grid.position(i));
    SplitStepper stepper(grid, std::move(terms), plan.dt_ms);

    const double cut_hi = plan.barrier_center_um + 4.0 * plan.barrier_sigma_um;
    const double cut_lo = plan.barrier_center_um - 4.0 * plan.barrier_sigma_um;

    std::vector<double> snaps(snapshot_times.begin(), snapshot_times.end());
    std::sort(snaps.begin(), snaps.end());
    size_t next_snap = 0;
    const auto emit_snapshots_until = [&](double t_now) {
        while (next_snap < snaps.size() && snaps[next_snap] <= t_now + 1e-9) {
            if (sink) sink(field);
            ++next_snap;
        }
    };

    const auto side_stats = [&](double a, double b, double& weight, double& com, double& rms) {
        double m0 = 0.0, m1 = 0.0, m2 = 0.0;
        for (int i = 0; i < grid.size(); ++i) {
            const double y = grid.position(i);
            if (y < a || y > b) continue;
            const double d = std::norm(field.psi1[i]) + std::norm(field.psi2[i]);
            m0 += d;
            m1 += d * y;
            m2 += d * y * y;
        }
        weight = m0 * grid.dy();
        if (m0 > 0.0) {
            com = m1 / m0;
            rms = std::sqrt(std::max(0.0, m2 / m0 - com * com));
        } else {
            com = 0.0;
            rms = 0.0;
        }
    };

    // run to an arrival estimate first, then poll for separation
    const double t_min = std::max(0.0, incident.arrival_time_ms - 5.0);
    const double chunk = 2.0;
    const double settle = 4.0;
    double t = 0.0;
    double separated_at = -1.0;
    while (t < plan.total_time_ms) {
        double advance = (t < t_min) ? std::min(chunk, t_min - t)
                                     : std::min(chunk, plan.total_time_ms - t);
        if (next_snap < snaps.size()) {
            const double rel = snaps[next_snap] - field.time_ms;
            if (rel > 1e-9 && rel < advance) advance = rel;
        }
        stepper.evolve(field, advance);
        t += advance;
        emit_snapshots_until(field.time_ms);
        if (t < t_min) continue;

        if (separated_at < 0.0) {
            double wt, ct, rt, wr, cr, rr;
            side_stats(cut_hi, grid.y_max(), wt, ct, rt);
            side_stats(grid.y_min(), cut_lo, wr, cr, rr);
            if (wt > 1e-9 && wr > 1e-9 && (ct - cr) > 4.0 * std::max(rt, rr))
                separated_at = t;
        } else if (t >= separated_at + settle) {
            break;
        }
    }
    if (separated_at < 0.0)
        throw NumericsError("run_larmor_experiment: transmitted and reflected packets did not "
                            "separate; increase total_time (ran " +
                            std::to_string(plan.total_time_ms) + " ms)");

    SimResult result;
    result.final_time_ms = field.time_ms;
    result.incident_mean_v = incident.mean_v;
    result.incident_rms_v = incident.rms_v;
    result.incident_velocities = incident.velocities;
    result.incident_weights = incident.weights;
    result.transmission = field.norm_in(cut_hi, grid.y_max()) / field.norm();
    result.transmitted_bloch = bloch_from_spinor(field, cut_hi, grid.y_max());
    const auto angles = angles_from_bloch(result.transmitted_bloch);
    result.times = times_from_angles(angles.theta_y, angles.alpha_z, plan.omega_eff_rad_per_ms());
    const auto tstats = momentum_stats(field, ComponentMask::Both, cut_hi, grid.y_max());
    result.transmitted_mean_v = tstats.mean_v;
    result.transmitted_rms_v = tstats.rms_v;
    return result;
}

void write_snapshot_csv(const SpinorField& field, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw ParseError("write_snapshot_csv: cannot open " + path);
    std::fprintf(f, "# time_ms = %.9g\n", field.time_ms);
    std::fprintf(f, "y_um,re_psi1,im_psi1,re_psi2,im_psi2\n");
    for (int i = 0; i < field.grid.size(); ++i) {
        std::fprintf(f, "%.9g,%.9g,%.9g,%.9g,%.9g\n", field.grid.position(i),
                     field.psi1[i].real(), field.psi1[i].imag(), field.psi2[i].real(),
                     field.psi2[i].imag());
    }
    std::fclose(f);
}

} // namespace tclock
