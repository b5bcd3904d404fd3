#ifndef TCLOCK_KNIFE_EDGE_HPP
#define TCLOCK_KNIFE_EDGE_HPP

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "tclock/errors.hpp"

namespace tclock {

struct ScanRow {
    double scan_var = 0.0;     // barrier height (mm/s) or control intensity (a.u.)
    double transmission = 0.0; // fraction
    double shots = 1.0;
};

/// A transmission scan at one incident velocity, sorted by the scanned
/// variable.
struct TransmissionScan {
    std::vector<ScanRow> rows;
    double incident_v = 0.0;
    std::string scan_var_unit = "mm_s";

    void validate() const;
};

/// Transmission predicted by the integrated Thomas-Fermi velocity profile:
/// 1 - A * int_0^{v_b} (1 - (v'-v0)^2/vR^2)^2 dv' on the profile's support.
double knife_edge_model(double v_b, double v0, double amplitude, double v_r);

struct KnifeEdgeFit {
    double v_r = 0.0;       // Thomas-Fermi radius of the velocity profile
    double amplitude = 0.0; // profile normalization (absorbs detection losses)
    double residual_rms = 0.0;
    int iterations = 0;

    double rms_width() const { return v_r / std::sqrt(7.0); } // quartic profile
};

/// Nonlinear least squares over (amplitude, v_r) with the incident velocity
/// held fixed; Levenberg-Marquardt with the initial radius taken from the
/// 16-84 percentile spread of the scan.
KnifeEdgeFit knife_edge_fit(const TransmissionScan& scan);

struct BarrierCalibration {
    double slope = 0.0;     // d(v_b^2)/d(intensity)
    double intercept = 0.0;
    double slope_err = 0.0;
    double intercept_err = 0.0;
    std::vector<double> crossing_intensity; // per scan: intensity where T = 0.5
};

/// Calibrate barrier height against control intensity: each scan (T versus
/// intensity at fixed incident velocity) pins v_b = incident_v at its
/// interpolated T = 0.5 point; v_b^2 is then fitted linear in intensity.
BarrierCalibration calibrate_barrier_height(std::span<const TransmissionScan> scans);

/// Locate where a scan crosses the given transmission level by monotone
/// cubic interpolation of T against the scanned variable.
double interpolate_crossing(const TransmissionScan& scan, double level);

/// Remove the tunneling contribution from a measured width in quadrature.
double deconvolve_width(double measured_rms, double tunneling_rms);

/// Same, computing the tunneling width from the barrier geometry.
double deconvolve_width_for_barrier(double measured_rms, double sigma_um, double v_b);

} // namespace tclock

#endif
