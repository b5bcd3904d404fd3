#ifndef TCLOCK_VELOCITY_DISTRIBUTION_HPP
#define TCLOCK_VELOCITY_DISTRIBUTION_HPP

#include <Eigen/Dense>
#include <vector>

#include "tclock/errors.hpp"

namespace tclock {

/// Normalized 1D velocity distribution of an incident wavepacket.
///
/// The Thomas-Fermi form is the quartic (1 - (v-v0)^2/vR^2)^2 on
/// |v - v0| < vR, the marginal of a 3D momentum-space inverted parabola.
class VelocityDistribution {
public:
    enum class Kind { ThomasFermi, Gaussian, EmpiricalHistogram };

    static VelocityDistribution thomas_fermi(double center, double radius);
    static VelocityDistribution gaussian(double center, double rms);
    /// Piecewise-constant histogram; edges has size weights.size()+1.
    static VelocityDistribution empirical(Eigen::ArrayXd bin_edges, Eigen::ArrayXd weights);

    Kind kind() const { return kind_; }
    double center() const { return center_; }
    /// Thomas-Fermi radius or Gaussian rms, whichever applies.
    double width_parameter() const { return width_; }

    double pdf(double v) const;

    double support_min() const { return support_min_; }
    double support_max() const { return support_max_; }

    double mean() const;
    double rms_width() const;

    /// Quadrature nodes and weights such that sum(w_i f(v_i)) ~ int pdf(v) f(v) dv.
    /// n is a node-count hint for the analytic kinds (rounded up to odd);
    /// the empirical kind uses its own bins.
    void quadrature(int n, std::vector<double>& nodes, std::vector<double>& weights) const;

private:
    VelocityDistribution() = default;

    Kind kind_ = Kind::Gaussian;
    double center_ = 0.0, width_ = 0.0;
    double support_min_ = 0.0, support_max_ = 0.0;
    double amplitude_ = 0.0;
    Eigen::ArrayXd edges_, bin_pdf_;
};

/// Empirical distribution from a sampled velocity spectrum (uniform spacing
/// assumed); drops non-positive velocities and bins below weight_floor.
VelocityDistribution distribution_from_spectrum(const Eigen::ArrayXd& velocities,
                                                const Eigen::ArrayXd& weights,
                                                double weight_floor = 1e-10);

} // namespace tclock

#endif
