#include "tclock/spinor.hpp"

#include <unsupported/Eigen/FFT>

#include "tclock/errors.hpp"
#include "tclock/units.hpp"

namespace tclock {

SpinorField SpinorField::zero(const SpatialGrid& grid, double atom_number) {
    SpinorField f{grid, Eigen::ArrayXcd::Zero(grid.size()), Eigen::ArrayXcd::Zero(grid.size()),
                  atom_number, 0.0};
    return f;
}

double SpinorField::norm() const {
    return (psi1.abs2().sum() + psi2.abs2().sum()) * grid.dy();
}

void SpinorField::normalize() {
    const double n = norm();
    if (n <= 0.0) throw NumericsError("SpinorField::normalize: zero norm");
    const double s = 1.0 / std::sqrt(n);
    psi1 *= s;
    psi2 *= s;
}

double SpinorField::norm_in(double y1, double y2) const {
    double acc = 0.0;
    for (int i = 0; i < grid.size(); ++i) {
        const double y = grid.position(i);
        if (y >= y1 && y <= y2) acc += std::norm(psi1[i]) + std::norm(psi2[i]);
    }
    return acc * grid.dy();
}

double SpinorField::center_of_mass() const {
    double m0 = 0.0, m1 = 0.0;
    for (int i = 0; i < grid.size(); ++i) {
        const double d = std::norm(psi1[i]) + std::norm(psi2[i]);
        m0 += d;
        m1 += d * grid.position(i);
    }
    if (m0 <= 0.0) throw NumericsError("center_of_mass: zero norm");
    return m1 / m0;
}

double SpinorField::position_rms() const {
    double m0 = 0.0, m1 = 0.0, m2 = 0.0;
    for (int i = 0; i < grid.size(); ++i) {
        const double d = std::norm(psi1[i]) + std::norm(psi2[i]);
        const double y = grid.position(i);
        m0 += d;
        m1 += d * y;
        m2 += d * y * y;
    }
    if (m0 <= 0.0) throw NumericsError("position_rms: zero norm");
    m1 /= m0;
    return std::sqrt(std::max(0.0, m2 / m0 - m1 * m1));
}

namespace {

void windowed_spectrum(const SpinorField& field, ComponentMask mask, double y1, double y2,
                       Eigen::ArrayXd& weight_k) {
    const int n = field.grid.size();
    Eigen::VectorXcd buf1 = Eigen::VectorXcd::Zero(n), buf2 = Eigen::VectorXcd::Zero(n);
    bool any = false;
    for (int i = 0; i < n; ++i) {
        const double y = field.grid.position(i);
        if (y < y1 || y > y2) continue;
        any = true;
        if (mask != ComponentMask::Two) buf1[i] = field.psi1[i];
        if (mask != ComponentMask::One) buf2[i] = field.psi2[i];
    }
    if (!any) throw NumericsError("momentum_stats: empty region");

    Eigen::FFT<double> fft;
    Eigen::VectorXcd spec(n);
    weight_k = Eigen::ArrayXd::Zero(n);
    if (mask != ComponentMask::Two) {
        fft.fwd(spec, buf1);
        weight_k += spec.array().abs2();
    }
    if (mask != ComponentMask::One) {
        fft.fwd(spec, buf2);
        weight_k += spec.array().abs2();
    }
}

} // namespace

MomentumStats momentum_stats(const SpinorField& field, ComponentMask mask,
                             double y1, double y2) {
    Eigen::ArrayXd w;
    windowed_spectrum(field, mask, y1, y2, w);
    const Eigen::ArrayXd k = field.grid.wavenumbers();
    const double hm = hbar_over_m();

    const double m0 = w.sum();
    if (m0 <= 1e-12 * field.grid.size())
        throw NumericsError("momentum_stats: degenerate statistics (region nearly empty)");
    const double m1 = (w * k).sum() / m0;
    const double m2 = (w * k * k).sum() / m0;
    MomentumStats s;
    s.mean_v = hm * m1;
    s.rms_v = hm * std::sqrt(std::max(0.0, m2 - m1 * m1));
    return s;
}

void velocity_spectrum(const SpinorField& field, ComponentMask mask, double y1, double y2,
                       Eigen::ArrayXd& velocities, Eigen::ArrayXd& weights) {
    Eigen::ArrayXd w;
    windowed_spectrum(field, mask, y1, y2, w);
    const Eigen::ArrayXd k = field.grid.wavenumbers();
    const double hm = hbar_over_m();
    const int n = field.grid.size();

    velocities.resize(n);
    weights.resize(n);
    // FFT order -> ascending velocity: negative branch first
    int idx = 0;
    for (int j = n / 2; j < n; ++j, ++idx) { velocities[idx] = hm * k[j]; weights[idx] = w[j]; }
    for (int j = 0; j < n / 2; ++j, ++idx) { velocities[idx] = hm * k[j]; weights[idx] = w[j]; }
    const double total = weights.sum();
    if (total <= 0.0) throw NumericsError("velocity_spectrum: empty spectrum");
    weights /= total;
}

} // namespace tclock
