#include "tclock/velocity_distribution.hpp"

#include <cmath>
#include <numbers>

namespace tclock {

VelocityDistribution VelocityDistribution::thomas_fermi(double center, double radius) {
    if (radius <= 0.0) throw DomainError("thomas_fermi: radius must be positive");
    VelocityDistribution d;
    d.kind_ = Kind::ThomasFermi;
    d.center_ = center;
    d.width_ = radius;
    d.amplitude_ = 15.0 / (16.0 * radius); // normalizes the quartic profile
    d.support_min_ = center - radius;
    d.support_max_ = center + radius;
    return d;
}

VelocityDistribution VelocityDistribution::gaussian(double center, double rms) {
    if (rms <= 0.0) throw DomainError("gaussian: rms must be positive");
    VelocityDistribution d;
    d.kind_ = Kind::Gaussian;
    d.center_ = center;
    d.width_ = rms;
    d.amplitude_ = 1.0 / (rms * std::sqrt(2.0 * std::numbers::pi));
    // support truncated where the density falls to ~1e-14 of peak
    d.support_min_ = center - 8.0 * rms;
    d.support_max_ = center + 8.0 * rms;
    return d;
}

VelocityDistribution VelocityDistribution::empirical(Eigen::ArrayXd bin_edges, Eigen::ArrayXd weights) {
    if (bin_edges.size() != weights.size() + 1)
        throw ConfigError("empirical: edges must have one more entry than weights");
    if (weights.size() < 1) throw ConfigError("empirical: no bins");
    for (Eigen::Index i = 0; i + 1 < bin_edges.size(); ++i)
        if (!(bin_edges[i + 1] > bin_edges[i]))
            throw ConfigError("empirical: edges must be strictly increasing");
    if ((weights < 0.0).any()) throw DomainError("empirical: negative weight");
    const double total = weights.sum();
    if (total <= 0.0) throw DomainError("empirical: zero total weight");

    VelocityDistribution d;
    d.kind_ = Kind::EmpiricalHistogram;
    d.edges_ = std::move(bin_edges);
    d.bin_pdf_ = Eigen::ArrayXd(weights.size());
    double mean = 0.0;
    for (Eigen::Index i = 0; i < weights.size(); ++i) {
        const double w = weights[i] / total;
        d.bin_pdf_[i] = w / (d.edges_[i + 1] - d.edges_[i]);
        mean += w * 0.5 * (d.edges_[i] + d.edges_[i + 1]);
    }
    d.center_ = mean;
    d.width_ = 0.0;
    d.support_min_ = d.edges_[0];
    d.support_max_ = d.edges_[d.edges_.size() - 1];
    return d;
}

double VelocityDistribution::pdf(double v) const {
    switch (kind_) {
    case Kind::ThomasFermi: {
        const double u = (v - center_) / width_;
        if (std::abs(u) >= 1.0) return 0.0;
        const double q = 1.0 - u * u;
        return amplitude_ * q * q;
    }
    case Kind::Gaussian: {
        const double u = (v - center_) / width_;
        return amplitude_ * std::exp(-0.5 * u * u);
    }
    case Kind::EmpiricalHistogram: {
        if (v < support_min_ || v >= support_max_) return 0.0;
        // binary search for bin
        Eigen::Index lo = 0, hi = edges_.size() - 1;
        while (hi - lo > 1) {
            const Eigen::Index mid = (lo + hi) / 2;
            if (v < edges_[mid]) hi = mid; else lo = mid;
        }
        return bin_pdf_[lo];
    }
    }
    return 0.0;
}

double VelocityDistribution::mean() const {
    std::vector<double> v, w;
    quadrature(513, v, w);
    double m = 0.0, n = 0.0;
    for (size_t i = 0; i < v.size(); ++i) { m += w[i] * v[i]; n += w[i]; }
    return m / n;
}

double VelocityDistribution::rms_width() const {
    std::vector<double> v, w;
    quadrature(513, v, w);
    double m = 0.0, m2 = 0.0, n = 0.0;
    for (size_t i = 0; i < v.size(); ++i) { m += w[i] * v[i]; m2 += w[i] * v[i] * v[i]; n += w[i]; }
    m /= n;
    return std::sqrt(std::max(0.0, m2 / n - m * m));
}

VelocityDistribution distribution_from_spectrum(const Eigen::ArrayXd& velocities,
                                                const Eigen::ArrayXd& weights,
                                                double weight_floor) {
    if (velocities.size() != weights.size() || velocities.size() < 2)
        throw ConfigError("distribution_from_spectrum: bad spectrum");
    const double peak = weights.maxCoeff();
    std::vector<double> edges, w;
    for (Eigen::Index i = 0; i < velocities.size(); ++i) {
        const double dv_lo = (i > 0) ? velocities[i] - velocities[i - 1]
                                     : velocities[i + 1] - velocities[i];
        const double lo = velocities[i] - 0.5 * dv_lo;
        if (lo <= 0.0) continue;
        if (weights[i] < weight_floor * peak) continue;
        if (edges.empty() || lo > edges.back() + 1e-12) {
            if (!edges.empty() && !w.empty() && lo > edges.back() + 1e-12) {
                // keep contiguity: pad a zero-weight gap as separate bins is
                // unnecessary; just restart from the new edge
            }
            if (edges.empty()) edges.push_back(lo);
        }
        edges.push_back(velocities[i] + 0.5 * dv_lo);
        w.push_back(weights[i]);
    }
    if (w.empty()) throw DomainError("distribution_from_spectrum: no usable bins");
    Eigen::ArrayXd e = Eigen::Map<Eigen::ArrayXd>(edges.data(), edges.size());
    Eigen::ArrayXd ww = Eigen::Map<Eigen::ArrayXd>(w.data(), w.size());
    return VelocityDistribution::empirical(std::move(e), std::move(ww));
}

void VelocityDistribution::quadrature(int n, std::vector<double>& nodes,
                                      std::vector<double>& weights) const {
    nodes.clear();
    weights.clear();
    if (kind_ == Kind::EmpiricalHistogram) {
        for (Eigen::Index i = 0; i < bin_pdf_.size(); ++i) {
            const double width = edges_[i + 1] - edges_[i];
            nodes.push_back(0.5 * (edges_[i] + edges_[i + 1]));
            weights.push_back(bin_pdf_[i] * width);
        }
        return;
    }
    if (n < 3) n = 3;
    if (n % 2 == 0) ++n; // composite Simpson needs an odd node count
    const double a = support_min_, b = support_max_;
    const double h = (b - a) / (n - 1);
    for (int i = 0; i < n; ++i) {
        const double v = a + i * h;
        double w = (i == 0 || i == n - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        nodes.push_back(v);
        weights.push_back(w * h / 3.0 * pdf(v));
    }
}

} // namespace tclock
