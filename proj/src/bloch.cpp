#include "tclock/bloch.hpp"

#include <cmath>

namespace tclock {

BlochVector bloch_from_spinor(const SpinorField& field, double y1, double y2) {
    double n = 0.0, dx = 0.0, re = 0.0, im = 0.0;
    for (int i = 0; i < field.grid.size(); ++i) {
        const double y = field.grid.position(i);
        if (y < y1 || y > y2) continue;
        const auto a = field.psi1[i], b = field.psi2[i];
        n += std::norm(a) + std::norm(b);
        dx += std::norm(a) - std::norm(b);
        const auto cross = std::conj(a) * b;
        re += cross.real();
        im += cross.imag();
    }
    if (n <= 1e-12)
        throw NumericsError("bloch_from_spinor: degenerate statistics (empty region)");
    BlochVector s;
    s.sx = dx / n;
    s.sz = 2.0 * re / n;
    s.sy = -2.0 * im / n;
    s.weight = n * field.grid.dy() / field.norm();
    return s;
}

BlochVector mle_project(double sx, double sy, double sz) {
    if (!std::isfinite(sx) || !std::isfinite(sy) || !std::isfinite(sz))
        throw DomainError("mle_project: non-finite components");
    BlochVector s{sx, sy, sz, 1.0};
    const double n = s.norm();
    if (n > 1.0) {
        s.sx /= n;
        s.sy /= n;
        s.sz /= n;
    }
    return s;
}

BlochVector mle_project(const BlochVector& raw) {
    BlochVector s = mle_project(raw.sx, raw.sy, raw.sz);
    s.weight = raw.weight;
    return s;
}

LarmorAngles angles_from_bloch(const BlochVector& s) {
    if (std::abs(s.sz) >= 1.0)
        throw DomainError("angles_from_bloch: |S_z| >= 1 (saturated out-of-plane component)");
    if (s.sx == 0.0 && s.sy == 0.0)
        throw DomainError("angles_from_bloch: in-plane phase undefined (S_x = S_y = 0)");
    LarmorAngles a;
    a.theta_y = std::atan2(s.sy, s.sx);
    a.alpha_z = std::atanh(s.sz);
    return a;
}

LarmorTimes times_from_angles(double theta_y, double alpha_z, double omega_eff_rad_per_ms) {
    if (omega_eff_rad_per_ms == 0.0)
        throw DomainError("times_from_angles: zero Larmor frequency");
    return LarmorTimes{theta_y / omega_eff_rad_per_ms, alpha_z / omega_eff_rad_per_ms};
}

BlochVector rotate_yz(const BlochVector& s, double angle_rad) {
    BlochVector r = s;
    const double c = std::cos(angle_rad), sn = std::sin(angle_rad);
    r.sy = c * s.sy - sn * s.sz;
    r.sz = sn * s.sy + c * s.sz;
    return r;
}

OmegaCalibration calibrate_omega(std::span<const CalibrationRun> runs, double v_b,
                                 double sigma_um) {
    if (runs.empty())
        throw DomainError("calibrate_omega: no runs (underdetermined)");
    double num = 0.0, den = 0.0;
    std::vector<double> model(runs.size());
    for (size_t i = 0; i < runs.size(); ++i) {
        if (runs[i].velocity <= v_b)
            throw DomainError("calibrate_omega: all runs must be above the barrier");
        model[i] = semiclassical_angle(runs[i].velocity, v_b, sigma_um);
        num += model[i] * runs[i].theta_y;
        den += model[i] * model[i];
    }
    OmegaCalibration cal;
    cal.omega_eff_rad_per_ms = num / den;
    double ss = 0.0;
    for (size_t i = 0; i < runs.size(); ++i) {
        const double r = runs[i].theta_y - cal.omega_eff_rad_per_ms * model[i];
        ss += r * r;
    }
    cal.residual_rms = std::sqrt(ss / runs.size());
    return cal;
}

} // namespace tclock
