#include "tclock/potential.hpp"

#include <cmath>
#include <numbers>

namespace tclock {

PotentialProfile PotentialProfile::gaussian(double height_v, double e2_radius_um, double center_um) {
    if (e2_radius_um <= 0.0) throw DomainError("gaussian barrier: radius must be positive");
    if (height_v < 0.0) throw DomainError("gaussian barrier: height must be non-negative");
    PotentialProfile p;
    p.barrier_ = GaussianBarrier{height_v, e2_radius_um, center_um};
    return p;
}

PotentialProfile PotentialProfile::square(double height_v, double width_um, double center_um) {
    if (width_um <= 0.0) throw DomainError("square barrier: width must be positive");
    if (height_v < 0.0) throw DomainError("square barrier: height must be non-negative");
    PotentialProfile p;
    p.barrier_ = SquareBarrier{height_v, width_um, center_um};
    return p;
}

PotentialProfile PotentialProfile::tabulated(SpatialGrid grid, Eigen::ArrayXd energy_vsq) {
    if (energy_vsq.size() != grid.size())
        throw ConfigError("tabulated barrier: sample count must match grid");
    PotentialProfile p;
    p.barrier_ = TabulatedBarrier{grid, std::move(energy_vsq)};
    return p;
}

PotentialProfile& PotentialProfile::with_waveguide(double frequency_hz, double center_um) {
    if (frequency_hz < 0.0) throw DomainError("waveguide: frequency must be non-negative");
    waveguide_ = HarmonicWaveguide{frequency_hz, center_um};
    return *this;
}

double PotentialProfile::barrier_vsq(double y) const {
    if (const auto* g = std::get_if<GaussianBarrier>(&barrier_)) {
        const double u = (y - g->center_um) / g->e2_radius_um;
        return g->height_v * g->height_v * std::exp(-2.0 * u * u);
    }
    if (const auto* s = std::get_if<SquareBarrier>(&barrier_)) {
        return (std::abs(y - s->center_um) < 0.5 * s->width_um) ? s->height_v * s->height_v : 0.0;
    }
    const auto& t = std::get<TabulatedBarrier>(barrier_);
    // linear interpolation, zero outside the table
    const double x = (y - t.grid.y_min()) / t.grid.dy();
    if (x < 0.0 || x > t.grid.size() - 1) return 0.0;
    const int i = std::min<int>(static_cast<int>(x), t.grid.size() - 2);
    const double f = x - i;
    return (1.0 - f) * t.energy_vsq[i] + f * t.energy_vsq[i + 1];
}

double PotentialProfile::waveguide_vsq(double y) const {
    if (!waveguide_) return 0.0;
    const double omega = 2.0 * std::numbers::pi * waveguide_->frequency_hz * 1e-3; // rad/ms
    const double d = y - waveguide_->center_um;
    return omega * omega * d * d;
}

double PotentialProfile::profile_weight(double y) const {
    if (const auto* g = std::get_if<GaussianBarrier>(&barrier_)) {
        const double u = (y - g->center_um) / g->e2_radius_um;
        return std::exp(-2.0 * u * u);
    }
    if (const auto* s = std::get_if<SquareBarrier>(&barrier_)) {
        return (std::abs(y - s->center_um) < 0.5 * s->width_um) ? 1.0 : 0.0;
    }
    const auto& t = std::get<TabulatedBarrier>(barrier_);
    const double peak = t.energy_vsq.abs().maxCoeff();
    if (peak == 0.0) return 0.0;
    return barrier_vsq(y) / peak;
}

double PotentialProfile::window_min() const {
    if (const auto* g = std::get_if<GaussianBarrier>(&barrier_))
        return g->center_um - window_factor_ * g->e2_radius_um;
    if (const auto* s = std::get_if<SquareBarrier>(&barrier_))
        return s->center_um - s->width_um;
    return std::get<TabulatedBarrier>(barrier_).grid.y_min();
}

double PotentialProfile::window_max() const {
    if (const auto* g = std::get_if<GaussianBarrier>(&barrier_))
        return g->center_um + window_factor_ * g->e2_radius_um;
    if (const auto* s = std::get_if<SquareBarrier>(&barrier_))
        return s->center_um + s->width_um;
    return std::get<TabulatedBarrier>(barrier_).grid.y_max();
}

double PotentialProfile::peak_height_v() const {
    if (const auto* g = std::get_if<GaussianBarrier>(&barrier_)) return g->height_v;
    if (const auto* s = std::get_if<SquareBarrier>(&barrier_)) return s->height_v;
    const auto& t = std::get<TabulatedBarrier>(barrier_);
    const double m = t.energy_vsq.maxCoeff();
    return m > 0.0 ? std::sqrt(m) : 0.0;
}

double PotentialProfile::barrier_center() const {
    if (const auto* g = std::get_if<GaussianBarrier>(&barrier_)) return g->center_um;
    if (const auto* s = std::get_if<SquareBarrier>(&barrier_)) return s->center_um;
    const auto& t = std::get<TabulatedBarrier>(barrier_);
    return 0.5 * (t.grid.y_min() + t.grid.y_max());
}

void PotentialProfile::set_window_factor(double f) {
    if (f <= 0.0) throw ConfigError("window factor must be positive");
    window_factor_ = f;
}

} // namespace tclock
