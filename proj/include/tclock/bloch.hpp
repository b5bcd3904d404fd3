#ifndef TCLOCK_BLOCH_HPP
#define TCLOCK_BLOCH_HPP

#include <span>
#include <vector>

#include "tclock/larmor.hpp"
#include "tclock/spinor.hpp"

namespace tclock {

/// Net magnetization of a (sub)ensemble.  weight is the norm fraction it was
/// computed from.
struct BlochVector {
    double sx = 0.0, sy = 0.0, sz = 0.0;
    double weight = 1.0;

    double norm() const { return std::sqrt(sx * sx + sy * sy + sz * sz); }
};

/// Bloch vector of the spinor restricted to [y1, y2].  With a = psi1 (|x>)
/// and b = psi2 (|-x>):  S_x = (|a|^2 - |b|^2)/n,  S_z = 2 Re(a* b)/n,
/// S_y = -2 Im(a* b)/n.  The S_y sign is fixed by the convention that a
/// positive coupling produces a positive precession angle theta_y.
BlochVector bloch_from_spinor(const SpinorField& field, double y1, double y2);

/// Constrained maximum-likelihood estimate of a noisy tomography triple:
/// under isotropic Gaussian noise this is the nearest point of the unit
/// ball (identity inside, radial projection outside).
BlochVector mle_project(double sx, double sy, double sz);
BlochVector mle_project(const BlochVector& raw);

struct LarmorAngles {
    double theta_y = 0.0; // rad, quadrant-aware
    double alpha_z = 0.0; // arctanh(S_z): the finite-field out-of-plane measure
};

LarmorAngles angles_from_bloch(const BlochVector& s);

/// tau_y = theta_y / Omega, tau_z = alpha_z / Omega with Omega in rad/ms.
/// The tau_z sign is fixed so below-barrier results match the stationary
/// weak value (negative: raising the barrier lowers |t|).
LarmorTimes times_from_angles(double theta_y, double alpha_z, double omega_eff_rad_per_ms);

/// Fixed-angle rotation of the (S_y, S_z) pair about the x-axis; hook for
/// reproducing the experiment's measurement-axis compensations.
BlochVector rotate_yz(const BlochVector& s, double angle_rad);

struct CalibrationRun {
    double velocity = 0.0; // above the barrier
    double theta_y = 0.0;  // measured precession angle, rad
};

struct OmegaCalibration {
    double omega_eff_rad_per_ms = 0.0;
    double residual_rms = 0.0;
};

/// Least-squares fit of theta_y = Omega * semiclassical_angle(v) over
/// high-velocity runs.  A single run returns the plain ratio.
OmegaCalibration calibrate_omega(std::span<const CalibrationRun> runs, double v_b,
                                 double sigma_um);

} // namespace tclock

#endif
