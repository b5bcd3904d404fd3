#include "tclock/knife_edge.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "tclock/scattering.hpp"

namespace tclock {

void TransmissionScan::validate() const {
    if (rows.size() < 3) throw ConfigError("scan: need at least 3 rows");
    for (size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].transmission < -1e-9 || rows[i].transmission > 1.0 + 1e-9)
            throw DomainError("scan: transmission outside [0, 1] at row " + std::to_string(i));
        if (i > 0 && !(rows[i].scan_var > rows[i - 1].scan_var))
            throw ConfigError("scan: rows must be sorted by the scanned variable");
    }
}

double knife_edge_model(double v_b, double v0, double amplitude, double v_r) {
    // int (1-u^2)^2 du has antiderivative u - 2u^3/3 + u^5/5
    const auto prim = [](double u) { return u * (1.0 + u * u * (-2.0 / 3.0 + u * u / 5.0)); };
    const double lo = std::max(-1.0, (0.0 - v0) / v_r);
    const double hi = std::min(1.0, (v_b - v0) / v_r);
    if (hi <= lo) return 1.0; // barrier below the profile's support
    return 1.0 - amplitude * v_r * (prim(hi) - prim(lo));
}

namespace {

double percentile_crossing_guess(const TransmissionScan& scan, double level) {
    // first scan_var где T drops through `level` (scan is decreasing in v_b)
    for (size_t i = 1; i < scan.rows.size(); ++i) {
        const double t0 = scan.rows[i - 1].transmission, t1 = scan.rows[i].transmission;
        if ((t0 - level) * (t1 - level) <= 0.0 && t0 != t1) {
            const double f = (t0 - level) / (t0 - t1);
            return scan.rows[i - 1].scan_var +
                   f * (scan.rows[i].scan_var - scan.rows[i - 1].scan_var);
        }
    }
    throw CalibrationError("knife_edge_fit: scan does not span the transition region");
}

} // namespace

KnifeEdgeFit knife_edge_fit(const TransmissionScan& scan) {
    scan.validate();
    const double v0 = scan.incident_v;
    if (v0 <= 0.0) throw DomainError("knife_edge_fit: incident velocity must be positive");

    // identifiability gate: the scan must cross both 0.8 and 0.2
    const double x20 = percentile_crossing_guess(scan, 0.2);
    const double x80 = percentile_crossing_guess(scan, 0.8);

    // initial guesses: the 16-84 spread of an integrated quartic profile is
    // close to 1.0 vR; amplitude from normalization
    double v_r = std::max(0.05, std::abs(x20 - x80));
    double amp = 15.0 / (16.0 * v_r);

    const int n = static_cast<int>(scan.rows.size());
    Eigen::VectorXd resid(n);
    Eigen::MatrixXd jac(n, 2);

    const auto residuals = [&](double a, double r, Eigen::VectorXd& out) {
        double ss = 0.0;
        for (int i = 0; i < n; ++i) {
            out[i] = knife_edge_model(scan.rows[i].scan_var, v0, a, r) -
                     scan.rows[i].transmission;
            ss += out[i] * out[i];
        }
        return ss;
    };

    double ss = residuals(amp, v_r, resid);
    double lambda = 1e-3;
    int it = 0;
    bool converged = false;
    const int max_iterations = 200;
    for (; it < max_iterations && !converged; ++it) {
        // numeric Jacobian (2 parameters)
        const double da = 1e-7 * std::max(1.0, std::abs(amp));
        const double dr = 1e-7 * std::max(0.01, std::abs(v_r));
        Eigen::VectorXd ra(n), rr(n);
        residuals(amp + da, v_r, ra);
        residuals(amp, v_r + dr, rr);
        jac.col(0) = (ra - resid) / da;
        jac.col(1) = (rr - resid) / dr;

        const Eigen::Matrix2d jtj = jac.transpose() * jac;
        const Eigen::Vector2d jtr = jac.transpose() * resid;
        bool improved = false;
        for (int attempt = 0; attempt < 12; ++attempt) {
            Eigen::Matrix2d damped = jtj;
            damped(0, 0) += lambda * jtj(0, 0);
            damped(1, 1) += lambda * jtj(1, 1);
            const Eigen::Vector2d step = damped.ldlt().solve(-jtr);
            const double amp_try = amp + step[0];
            const double v_r_try = std::max(1e-6, v_r + step[1]);
            Eigen::VectorXd r_try(n);
            const double ss_try = residuals(amp_try, v_r_try, r_try);
            if (ss_try < ss) {
                amp = amp_try;
                v_r = v_r_try;
                resid = r_try;
                const double rel = (ss - ss_try) / std::max(ss, 1e-300);
                ss = ss_try;
                lambda = std::max(lambda * 0.3, 1e-12);
                improved = true;
                if (rel < 1e-14) converged = true;
                break;
            }
            lambda *= 10.0;
        }
        if (!improved) converged = true; // stalled at machine precision
    }
    if (!converged && ss > 1e-3 * n)
        throw CalibrationError("knife_edge_fit: did not converge; last v_r = " +
                               std::to_string(v_r));

    KnifeEdgeFit fit;
    fit.v_r = v_r;
    fit.amplitude = amp;
    fit.residual_rms = std::sqrt(ss / n);
    fit.iterations = it;
    return fit;
}

double interpolate_crossing(const TransmissionScan& scan, double level) {
    scan.validate();
    const int n = static_cast<int>(scan.rows.size());
    std::vector<double> x(n), t(n);
    for (int i = 0; i < n; ++i) {
        x[i] = scan.rows[i].scan_var;
        t[i] = scan.rows[i].transmission;
    }

    // Fritsch-Carlson monotone cubic slopes
    std::vector<double> h(n - 1), delta(n - 1), m(n);
    for (int i = 0; i < n - 1; ++i) {
        h[i] = x[i + 1] - x[i];
        delta[i] = (t[i + 1] - t[i]) / h[i];
    }
    m[0] = delta[0];
    m[n - 1] = delta[n - 2];
    for (int i = 1; i < n - 1; ++i)
        m[i] = (delta[i - 1] * delta[i] <= 0.0) ? 0.0 : 0.5 * (delta[i - 1] + delta[i]);
    for (int i = 0; i < n - 1; ++i) {
        if (delta[i] == 0.0) { m[i] = m[i + 1] = 0.0; continue; }
        const double a = m[i] / delta[i], b = m[i + 1] / delta[i];
        const double s = a * a + b * b;
        if (s > 9.0) {
            const double tau = 3.0 / std::sqrt(s);
            m[i] = tau * a * delta[i];
            m[i + 1] = tau * b * delta[i];
        }
    }

    const auto hermite = [&](int i, double xx) {
        const double s = (xx - x[i]) / h[i];
        const double s2 = s * s, s3 = s2 * s;
        return (2 * s3 - 3 * s2 + 1) * t[i] + (s3 - 2 * s2 + s) * h[i] * m[i] +
               (-2 * s3 + 3 * s2) * t[i + 1] + (s3 - s2) * h[i] * m[i + 1];
    };

    for (int i = 0; i < n - 1; ++i) {
        if ((t[i] - level) * (t[i + 1] - level) > 0.0) continue;
        double lo = x[i], hi = x[i + 1];
        const bool falling = t[i] > t[i + 1];
        for (int k = 0; k < 80; ++k) {
            const double mid = 0.5 * (lo + hi);
            const double val = hermite(i, mid);
            if ((val > level) == falling) lo = mid; else hi = mid;
        }
        return 0.5 * (lo + hi);
    }
    throw CalibrationError("interpolate_crossing: scan does not cross the requested level");
}

BarrierCalibration calibrate_barrier_height(std::span<const TransmissionScan> scans) {
    if (scans.size() < 2)
        throw CalibrationError("calibrate_barrier_height: need scans at >= 2 intensities");

    const int n = static_cast<int>(scans.size());
    Eigen::MatrixXd design(n, 2);
    Eigen::VectorXd target(n);
    BarrierCalibration cal;
    for (int i = 0; i < n; ++i) {
        const double crossing = interpolate_crossing(scans[i], 0.5);
        cal.crossing_intensity.push_back(crossing);
        design(i, 0) = crossing;
        design(i, 1) = 1.0;
        target[i] = scans[i].incident_v * scans[i].incident_v;
    }

    const Eigen::Vector2d beta =
        (design.transpose() * design).ldlt().solve(design.transpose() * target);
    cal.slope = beta[0];
    cal.intercept = beta[1];

    if (n > 2) {
        const Eigen::VectorXd resid = target - design * beta;
        const double s2 = resid.squaredNorm() / (n - 2);
        const Eigen::Matrix2d cov = s2 * (design.transpose() * design).inverse();
        cal.slope_err = std::sqrt(cov(0, 0));
        cal.intercept_err = std::sqrt(cov(1, 1));
    }
    return cal;
}

double deconvolve_width(double measured_rms, double tunneling_rms) {
    if (measured_rms <= tunneling_rms)
        throw DomainError("deconvolve_width: measured width does not exceed the tunneling "
                          "contribution (non-physical input)");
    return std::sqrt(measured_rms * measured_rms - tunneling_rms * tunneling_rms);
}

double deconvolve_width_for_barrier(double measured_rms, double sigma_um, double v_b) {
    return deconvolve_width(measured_rms, tunneling_rms_width(v_b, sigma_um));
}

} // namespace tclock
