#ifndef TCLOCK_SPLIT_STEP_HPP
#define TCLOCK_SPLIT_STEP_HPP

#include <functional>
#include <memory>

#include "tclock/spinor.hpp"

namespace tclock {

/// Couplings and potential for one evolution stage.  All rates in rad/ms,
/// potentials in velocity-squared units, interaction strengths g in um^2/ms
/// (so g * density is a rate).
struct StepperTerms {
    Eigen::ArrayXd potential_vsq;  // common trapping + barrier potential
    Eigen::ArrayXd omega_gp;       // off-diagonal coupling profile, rad/ms
    double delta = 0.0;            // energy offset on component 1, rad/ms
    double g11 = 0.0, g22 = 0.0, g12 = 0.0;
};

/// Strang-split spectral stepper for the coupled two-component equations:
/// half-step in position space (potential + interaction + offset + exact
/// local 2x2 rotation of the coupling), full kinetic step in wavenumber
/// space, half-step in position space.  Norm-conserving by construction.
class SplitStepper {
public:
    SplitStepper(const SpatialGrid& grid, StepperTerms terms, double dt_ms);

    double dt() const { return dt_; }

    void step(SpinorField& field);

    /// Advance by `duration` (a trailing partial step covers any remainder);
    /// checks for NaNs every 100 steps.
    void evolve(SpinorField& field, double duration_ms);

private:
    void position_half_step(SpinorField& field, double h);
    void kinetic_full_step(SpinorField& field, double dt);

    SpatialGrid grid_;
    StepperTerms terms_;
    double dt_;
    bool coupled_;
    Eigen::ArrayXd pot_rate_;      // potential / hbar, rad/ms
    Eigen::ArrayXd kinetic_rate_;  // (hbar/2m) k^2, rad/ms
    Eigen::ArrayXcd kinetic_phase_;
    struct Fft;
    std::shared_ptr<Fft> fft_;
    // step scratch
    Eigen::ArrayXd n1_, n2_, h11_, h22_, dhalf_, cap_delta_, cosd_, sincd_;
    Eigen::ArrayXcd common_phase_, tmp_;
};

struct GroundStateOptions {
    double coarse_dtau = 0.05;
    double fine_dtau = 0.002;
    double coarse_tol = 1e-6;  // relative energy change per step, stage switch
    double fine_tol = 1e-10;   // relative energy change per step, convergence
    double state_tol = 1e-7;   // estimated remaining L2 state error
    int max_iterations = 200000;
};

struct GroundStateResult {
    SpinorField field;      // all weight in component 1
    double energy;          // E/hbar in rad/ms
    int iterations = 0;
    std::vector<double> energy_history;
};

/// Ground state by imaginary-time propagation of the single-component
/// problem with renormalization each step.  Converged when the relative
/// energy change per step falls below tolerance.
GroundStateResult ground_state(const SpatialGrid& grid, const Eigen::ArrayXd& potential_vsq,
                               double atom_number, double g11,
                               const GroundStateOptions& opt = {});

/// Energy functional E/hbar of a (possibly two-component) state, in rad/ms.
double energy_functional(const SpinorField& field, const StepperTerms& terms);

/// Multiply both components by exp(i v0 y / (hbar/m)): shifts the mean
/// velocity by exactly v0.  Throws when |v0| exceeds the grid's Nyquist
/// velocity pi*(hbar/m)/dy.
void apply_velocity_kick(SpinorField& field, double v0);

} // namespace tclock

#endif
