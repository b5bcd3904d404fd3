#include "tclock/split_step.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <numbers>

#include "tclock/errors.hpp"
#include "tclock/units.hpp"

namespace tclock {

namespace {
const std::complex<double> I_unit(0.0, 1.0);
}

struct SplitStepper::Fft {
    Eigen::FFT<double> impl;
    Eigen::VectorXcd buf, spec;
};

SplitStepper::SplitStepper(const SpatialGrid& grid, StepperTerms terms, double dt_ms)
    : grid_(grid), terms_(std::move(terms)), dt_(dt_ms), fft_(std::make_shared<Fft>()) {
    if (!(dt_ms > 0.0)) throw ConfigError("SplitStepper: dt must be positive");
    const int n = grid_.size();
    if (terms_.potential_vsq.size() != n)
        throw ConfigError("SplitStepper: potential size mismatch");
    if (terms_.omega_gp.size() == 0) terms_.omega_gp = Eigen::ArrayXd::Zero(n);
    if (terms_.omega_gp.size() != n)
        throw ConfigError("SplitStepper: coupling size mismatch");

    const double hm = hbar_over_m();
    pot_rate_ = terms_.potential_vsq / (2.0 * hm);
    const Eigen::ArrayXd k = grid_.wavenumbers();
    kinetic_rate_ = 0.5 * hm * k * k;
    kinetic_phase_ = (-I_unit * kinetic_rate_ * dt_).exp();
    coupled_ = (terms_.omega_gp != 0.0).any();

    n1_.resize(n); n2_.resize(n); h11_.resize(n); h22_.resize(n);
    dhalf_.resize(n); cap_delta_.resize(n); cosd_.resize(n); sincd_.resize(n);
    common_phase_.resize(n); tmp_.resize(n);
}

void SplitStepper::position_half_step(SpinorField& field, double h) {
    const double N = field.atom_number;
    n1_ = N * field.psi1.abs2();
    n2_ = N * field.psi2.abs2();
    h11_ = pot_rate_ + terms_.g11 * n1_ + terms_.g12 * n2_ + terms_.delta;
    h22_ = pot_rate_ + terms_.g22 * n2_ + terms_.g12 * n1_;

    if (!coupled_) {
        field.psi1 *= (-I_unit * h * h11_).exp();
        field.psi2 *= (-I_unit * h * h22_).exp();
        return;
    }

    // exact exponential of the local 2x2 Hamiltonian, split as
    // common*I + dhalf*sigma_z + omega*sigma_x
    dhalf_ = 0.5 * (h11_ - h22_);
    cap_delta_ = (dhalf_.square() + terms_.omega_gp.square()).sqrt();
    common_phase_ = (-I_unit * (0.5 * h * (h11_ + h22_))).exp();
    cosd_ = (cap_delta_ * h).cos();
    // sin(x h)/x, continuous through x = 0
    for (int i = 0; i < cap_delta_.size(); ++i) {
        const double x = cap_delta_[i];
        sincd_[i] = (x * h < 1e-8) ? h : std::sin(x * h) / x;
    }

    tmp_ = field.psi1;
    field.psi1 = common_phase_ *
                 (cosd_ * tmp_ - I_unit * sincd_ * (dhalf_ * tmp_ + terms_.omega_gp * field.psi2));
    field.psi2 = common_phase_ *
                 (cosd_ * field.psi2 -
                  I_unit * sincd_ * (-dhalf_ * field.psi2 + terms_.omega_gp * tmp_));
}

void SplitStepper::kinetic_full_step(SpinorField& field, double dt) {
    auto advance = [&](Eigen::ArrayXcd& psi) {
        if ((psi == std::complex<double>(0.0)).all()) return;
        fft_->buf = psi.matrix();
        fft_->impl.fwd(fft_->spec, fft_->buf);
        if (dt == dt_) {
            fft_->spec.array() *= kinetic_phase_;
        } else {
            fft_->spec.array() *= (-I_unit * kinetic_rate_ * dt).exp();
        }
        fft_->impl.inv(fft_->buf, fft_->spec);
        psi = fft_->buf.array();
    };
    advance(field.psi1);
    advance(field.psi2);
}

void SplitStepper::step(SpinorField& field) {
    position_half_step(field, 0.5 * dt_);
    kinetic_full_step(field, dt_);
    position_half_step(field, 0.5 * dt_);
    field.time_ms += dt_;
}

void SplitStepper::evolve(SpinorField& field, double duration_ms) {
    if (duration_ms < 0.0) throw ConfigError("evolve: negative duration");
    const long full = static_cast<long>(std::floor(duration_ms / dt_ + 1e-9));
    for (long s = 0; s < full; ++s) {
        step(field);
        if (s % 100 == 99) {
            if (!field.psi1.allFinite() || !field.psi2.allFinite())
                throw NumericsError("evolve: instability (NaN) at step " + std::to_string(s + 1) +
                                    ", max |psi| = " +
                                    std::to_string(std::sqrt(std::max(field.psi1.abs2().maxCoeff(),
                                                                      field.psi2.abs2().maxCoeff()))));
        }
    }
    const double rest = duration_ms - full * dt_;
    if (rest > 1e-12) {
        position_half_step(field, 0.5 * rest);
        kinetic_full_step(field, rest);
        position_half_step(field, 0.5 * rest);
        field.time_ms += rest;
    }
    if (!field.psi1.allFinite() || !field.psi2.allFinite())
        throw NumericsError("evolve: instability (NaN) at end of stage");
}

double energy_functional(const SpinorField& field, const StepperTerms& terms) {
    const int n = field.grid.size();
    const double dy = field.grid.dy();
    const double hm = hbar_over_m();
    const Eigen::ArrayXd k = field.grid.wavenumbers();

    Eigen::FFT<double> fft;
    Eigen::VectorXcd buf(n), spec(n);
    double kinetic = 0.0;
    for (const auto* psi : {&field.psi1, &field.psi2}) {
        if ((psi->abs2().sum()) == 0.0) continue;
        buf = psi->matrix();
        fft.fwd(spec, buf);
        kinetic += 0.5 * hm * (spec.array().abs2() * k * k).sum() / n * dy;
    }

    const Eigen::ArrayXd n1 = field.psi1.abs2(), n2 = field.psi2.abs2();
    const Eigen::ArrayXd pot_rate = terms.potential_vsq / (2.0 * hm);
    double e = kinetic;
    e += (pot_rate * (n1 + n2)).sum() * dy;
    e += terms.delta * n1.sum() * dy;
    if (terms.omega_gp.size() == field.psi1.size())
        e += 2.0 * (terms.omega_gp * (field.psi1.conjugate() * field.psi2).real()).sum() * dy;
    const double N = field.atom_number;
    e += 0.5 * N * (terms.g11 * n1.square() + terms.g22 * n2.square()
                    + 2.0 * terms.g12 * n1 * n2).sum() * dy;
    return e;
}

GroundStateResult ground_state(const SpatialGrid& grid, const Eigen::ArrayXd& potential_vsq,
                               double atom_number, double g11, const GroundStateOptions& opt) {
    if (potential_vsq.size() != grid.size())
        throw ConfigError("ground_state: potential size mismatch");
    const int n = grid.size();
    const double hm = hbar_over_m();
    const Eigen::ArrayXd pot_rate = potential_vsq / (2.0 * hm);
    const Eigen::ArrayXd k = grid.wavenumbers();
    const Eigen::ArrayXd kin_rate = 0.5 * hm * k * k;

    // Gaussian seed at the potential minimum, width from the local curvature
    int i_min = 0;
    pot_rate.minCoeff(&i_min);
    const double y0 = grid.position(i_min);
    double width = 10.0 * grid.dy();
    if (i_min > 0 && i_min < n - 1) {
        const double curv = (pot_rate[i_min - 1] - 2.0 * pot_rate[i_min] + pot_rate[i_min + 1]) /
                            (grid.dy() * grid.dy());
        if (curv > 0.0) {
            const double omega = std::sqrt(hm * curv);
            width = std::max(width, std::sqrt(0.5 * hm / omega));
        }
    }

    SpinorField field = SpinorField::zero(grid, atom_number);
    for (int i = 0; i < n; ++i) {
        const double d = (grid.position(i) - y0) / width;
        field.psi1[i] = std::exp(-0.5 * d * d);
    }
    field.normalize();

    StepperTerms terms;
    terms.potential_vsq = potential_vsq;
    terms.g11 = g11;

    Eigen::FFT<double> fft;
    Eigen::VectorXcd buf(n), spec(n);
    GroundStateResult result{std::move(field), 0.0, 0, {}};
    result.energy = energy_functional(result.field, terms);
    result.energy_history.push_back(result.energy);

    double dtau = opt.coarse_dtau;
    bool fine_phase = (opt.coarse_dtau <= opt.fine_dtau);
    Eigen::ArrayXd kin_decay = (-kin_rate * dtau).exp();
    Eigen::ArrayXcd previous = result.field.psi1;
    double step_norm_prev = -1.0;

    for (int it = 0; it < opt.max_iterations; ++it) {
        auto& psi = result.field.psi1;
        // half potential + interaction decay
        psi *= (-(0.5 * dtau) * (pot_rate + g11 * atom_number * psi.abs2())).exp();
        // full kinetic decay
        buf = psi.matrix();
        fft.fwd(spec, buf);
        spec.array() *= kin_decay;
        fft.inv(buf, spec);
        psi = buf.array();
        // second potential half
        psi *= (-(0.5 * dtau) * (pot_rate + g11 * atom_number * psi.abs2())).exp();
        result.field.normalize();
        ++result.iterations;

        const double e = energy_functional(result.field, terms);
        const double change = std::abs(e - result.energy) / std::max(std::abs(e), 1e-12);
        result.energy = e;
        result.energy_history.push_back(e);

        if (!fine_phase) {
            if (change < opt.coarse_tol) {
                fine_phase = true;
                dtau = opt.fine_dtau;
                kin_decay = (-kin_rate * dtau).exp();
                step_norm_prev = -1.0;
            }
            previous = psi;
            continue;
        }

        // energy alone is quadratically blind near the minimum, so pair it
        // with a state-change estimate: the per-step L2 change contracts
        // geometrically, and delta * rho/(1 - rho) bounds the remaining error
        const double step_norm =
            std::sqrt(((psi - previous).abs2().sum()) * grid.dy());
        previous = psi;
        if (change < opt.fine_tol) {
            if (step_norm < 1e-14) return result; // roundoff floor
            if (step_norm_prev > 0.0 && step_norm < step_norm_prev) {
                const double rho = step_norm / step_norm_prev;
                const double remaining = step_norm * rho / (1.0 - rho);
                if (remaining < opt.state_tol) return result;
            }
        }
        step_norm_prev = step_norm;
    }
    throw NumericsError("ground_state: did not converge within max iterations; "
                        "the potential may be non-confining");
}

void apply_velocity_kick(SpinorField& field, double v0) {
    const double hm = hbar_over_m();
    const double nyquist = std::numbers::pi * hm / field.grid.dy();
    if (std::abs(v0) > nyquist)
        throw DomainError("apply_velocity_kick: kick beyond the grid's Nyquist velocity");
    if (v0 == 0.0) return;
    const Eigen::ArrayXd y = field.grid.positions();
    const Eigen::ArrayXcd phase = (I_unit * (v0 / hm) * y).exp();
    field.psi1 *= phase;
    field.psi2 *= phase;
}

} // namespace tclock
