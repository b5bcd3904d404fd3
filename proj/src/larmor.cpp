#include "tclock/larmor.hpp"

#include <cmath>
#include <numbers>

namespace tclock {

namespace {

using cplx = std::complex<double>;

/// ln t as a function of a dimensionless scale s applied to the barrier.
cplx log_t_at_scale(const SliceTable& base, double v, double s) {
    SliceTable scaled = base;
    scaled.u *= s;
    const auto sol = solve_slices(scaled, v);
    return std::log(sol.t);
}

/// Central difference of ln t w.r.t. the barrier scale at s = 1.
cplx scale_derivative(const SliceTable& base, double v, double h) {
    const cplx lp = log_t_at_scale(base, v, 1.0 + h);
    const cplx lm = log_t_at_scale(base, v, 1.0 - h);
    const cplx d = lp - lm;
    // the perturbed phases must stay on one branch for naive differencing
    if (std::abs(d.imag()) > 0.5 * std::numbers::pi)
        throw NumericsError("larmor_times_global: phase step too large for branch-safe "
                            "differencing; reduce the derivative step");
    return d / (2.0 * h);
}

} // namespace

LarmorTimes larmor_times_global(const PotentialProfile& barrier, double v,
                                const LarmorOptions& opt) {
    if (v <= 0.0) throw DomainError("larmor_times_global: velocity must be positive");
    const double v_b = barrier.peak_height_v();
    if (!(v_b > 0.0)) throw DomainError("larmor_times_global: barrier height must be positive");

    const SliceTable base = make_slice_table(barrier, opt.slices);
    const double hm = hbar_over_m();

    // grow the step until the differenced signal clears roundoff noise
    double h = opt.relative_step;
    cplx d1 = scale_derivative(base, v, h);
    while (std::abs(d1) * 2.0 * h < 1e-9 && h < 0.05) {
        h *= 10.0;
        d1 = scale_derivative(base, v, h);
    }
    const cplx d2 = scale_derivative(base, v, 2.0 * h);
    const cplx extrap = (4.0 * d1 - d2) / 3.0;
    const double disagreement = std::abs(d1 - d2);
    if (disagreement > opt.quality_tol * std::max(std::abs(extrap), 1e-300))
        throw NumericsError("larmor_times_global: derivative did not converge "
                            "(Richardson disagreement above tolerance)");

    // tau_y + i tau_z = i hbar d ln t / dV0 with V0 = m v_b^2/2
    const cplx tau = cplx(0.0, 1.0) * (2.0 * hm / (v_b * v_b)) * extrap;
    return LarmorTimes{tau.real(), tau.imag()};
}

double dwell_time(const PotentialProfile& barrier, double v, double y1, double y2, int slices) {
    if (v <= 0.0) throw DomainError("dwell_time: velocity must be positive");
    const auto field = scattering_eigenstate(barrier, v, slices);
    return field.density_integral(y1, y2) / v; // j_in = v for unit incident amplitude
}

double weighted_dwell_time(const PotentialProfile& barrier, double v, int slices) {
    if (v <= 0.0) throw DomainError("weighted_dwell_time: velocity must be positive");
    const auto field = scattering_eigenstate(barrier, v, slices);
    double acc = 0.0;
    const int n = static_cast<int>(field.a.size());
    for (int j = 0; j < n; ++j)
        acc += barrier.profile_weight(field.table.midpoint(j)) * field.slice_density(j);
    return acc / v;
}

TimeDensity weak_value_density(const PotentialProfile& barrier, double v, int slices) {
    if (v <= 0.0) throw DomainError("weak_value_density: velocity must be positive");
    const SliceTable table = make_slice_table(barrier, slices);
    const double hm = hbar_over_m();
    const double peak = std::max(barrier.peak_height_v(), 0.0);
    const double scale = std::max(peak * peak, v * v);
    const double du = 1e-6 * scale;

    const auto grad = log_t_slice_gradient(table, v, du);

    SpatialGrid grid(table.window_min, table.window_min + table.dy * slices, slices);
    TimeDensity density{grid, Eigen::ArrayXd(slices), Eigen::ArrayXd(slices)};
    for (int j = 0; j < slices; ++j) {
        // per-cell time = 2 i (hbar/m) dln t/du_j; density is per unit length
        const cplx tau = cplx(0.0, 2.0 * hm) * grad[j] / table.dy;
        density.tau_y_density[j] = tau.real();
        density.tau_z_density[j] = tau.imag();
    }
    return density;
}

double semiclassical_angle(double v, double v_b, double sigma_um) {
    if (sigma_um <= 0.0) throw DomainError("semiclassical_angle: sigma must be positive");
    if (!(v > v_b))
        throw DomainError("semiclassical_angle: requires v > v_b (integrand is singular "
                          "at and below the barrier top; use the full quantum calculation)");

    const auto integrand = [&](double y) {
        const double g = std::exp(-2.0 * y * y / (sigma_um * sigma_um));
        return g / std::sqrt(v * v - v_b * v_b * g);
    };

    // adaptive Simpson over [-6 sigma, 6 sigma]; the tail beyond is below
    // double precision for any admissible v
    struct Quad {
        const decltype(integrand)& f;
        double eval(double a, double b, double fa, double fm, double fb, double whole,
                    double tol, int depth) const {
            const double m = 0.5 * (a + b);
            const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
            const double flm = f(lm), frm = f(rm);
            const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
                return left + right + (left + right - whole) / 15.0;
            return eval(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
                   eval(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
        }
    } quad{integrand};

    const double a = -6.0 * sigma_um, b = 6.0 * sigma_um;
    const double fa = integrand(a), fb = integrand(b), fm = integrand(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return quad.eval(a, b, fa, fm, fb, whole, 1e-12, 48);
}

EnsembleTimes ensemble_average_times(const PotentialProfile& barrier,
                                     const VelocityDistribution& dist,
                                     const EnsembleOptions& opt) {
    if (dist.support_min() <= 0.0)
        throw DomainError("ensemble_average_times: distribution support must be positive");
    const double v_b = barrier.peak_height_v();

    std::vector<double> nodes, weights;
    dist.quadrature(opt.quadrature_nodes, nodes, weights);

    const SliceTable table = make_slice_table(barrier, opt.slices);
    const LarmorOptions lopt{opt.slices, 1e-6, 1e-4};

    double norm = 0.0, tunneled = 0.0, m1 = 0.0, m2 = 0.0;
    cplx time_acc = 0.0;
    cplx amp_norm = 0.0;
    for (size_t i = 0; i < nodes.size(); ++i) {
        if (weights[i] == 0.0) continue;
        const double v = nodes[i];
        const auto sol = solve_slices(table, v);
        const double transmission = sol.transmission();
        const auto times = larmor_times_global(barrier, v, lopt);
        const cplx tau(times.tau_y_ms, times.tau_z_ms);

        const double wp = weights[i] * transmission;
        norm += wp;
        if (v < v_b) tunneled += wp;
        m1 += wp * v;
        m2 += wp * v * v;
        if (opt.weights == EnsembleWeights::Probability) {
            time_acc += wp * tau;
        } else {
            const cplx wa = weights[i] * sol.t;
            time_acc += wa * tau;
            amp_norm += wa;
        }
    }
    if (norm <= 0.0)
        throw NumericsError("ensemble_average_times: no transmitted weight");

    EnsembleTimes out;
    const cplx avg = (opt.weights == EnsembleWeights::Probability) ? time_acc / norm
                                                                   : time_acc / amp_norm;
    out.times = LarmorTimes{avg.real(), avg.imag()};
    out.transmission = norm;
    out.tunneled_fraction = tunneled / norm;
    out.mean_transmitted_v = m1 / norm;
    out.rms_transmitted_v = std::sqrt(std::max(0.0, m2 / norm - out.mean_transmitted_v *
                                                                out.mean_transmitted_v));
    return out;
}

} // namespace tclock
