#include "tclock/scattering.hpp"

#include <cmath>
#include <numbers>

namespace tclock {

namespace {

using cplx = std::complex<double>;
using Eigen::Matrix2cd;

constexpr double kappa_segment_limit = 700.0; // exp() stays finite below this

/// Local wavenumber for kinetic term v^2 - u, positive imaginary when evanescent.
cplx local_wavenumber(double vsq, double u, double hbar_m) {
    const double d = vsq - u;
    if (d >= 0.0) return cplx(std::sqrt(d) / hbar_m, 0.0);
    return cplx(0.0, std::sqrt(-d) / hbar_m);
}

Matrix2cd interface_matrix(cplx k_from, cplx k_to) {
    const cplx ratio = k_from / k_to;
    Matrix2cd d;
    d << 0.5 * (1.0 + ratio), 0.5 * (1.0 - ratio),
         0.5 * (1.0 - ratio), 0.5 * (1.0 + ratio);
    return d;
}

Matrix2cd propagation_matrix(cplx k, double dy) {
    if (k.imag() * dy > kappa_segment_limit)
        throw NumericsError("transfer matrix: evanescent segment too opaque; "
                            "use more slices or a narrower window");
    const cplx ph = std::exp(cplx(0.0, 1.0) * k * dy);
    Matrix2cd p;
    p << ph, 0.0, 0.0, 1.0 / ph;
    return p;
}

/// Rescale a running product to unit max-magnitude, accumulating the log.
/// Keeping the product at O(1) means even a single near-opaque segment
/// (kappa*dy up to 700) cannot overflow the next multiply.
void rescale(Matrix2cd& m, double& log_scale) {
    const double s = m.cwiseAbs().maxCoeff();
    if (s > 0.0) {
        m /= s;
        log_scale += std::log(s);
    }
}

struct Chain {
    std::vector<cplx> k;   // slice wavenumbers
    cplx k0;               // asymptotic wavenumber
    double dy;
    double width;
};

Chain make_chain(const SliceTable& table, double v) {
    if (v <= 0.0) throw DomainError("transfer matrix: incident velocity must be positive");
    const double hm = hbar_over_m();
    Chain c;
    c.dy = table.dy;
    c.width = table.dy * table.u.size();
    c.k0 = cplx(v / hm, 0.0);
    c.k.resize(table.u.size());
    const double vsq = v * v;
    for (Eigen::Index j = 0; j < table.u.size(); ++j) {
        cplx k = local_wavenumber(vsq, table.u[j], hm);
        if (std::abs(k) < 1e-12) k = cplx(1e-12, 0.0); // grazing incidence guard
        c.k[j] = k;
    }
    return c;
}

ScatteringSolution amplitudes_from_product(const Matrix2cd& m, double log_scale,
                                           const Chain& chain, double v) {
    const cplx m11 = m(1, 1);
    if (m11 == cplx(0.0, 0.0))
        throw NumericsError("transfer matrix: singular product");
    const double log_t = -log_scale - std::log(std::abs(m11));
    if (log_t < -700.0)
        throw NumericsError("transfer matrix: transmission below double range; "
                            "use a narrower window");
    ScatteringSolution s;
    s.velocity = v;
    // det of the full product is exactly 1 (equal asymptotics), so t = 1/M22.
    s.t = std::exp(-log_scale) / m11;
    s.r = -m(1, 0) / m11;
    // reference the transmitted amplitude to free propagation across the window
    s.t *= std::exp(cplx(0.0, -1.0) * chain.k0 * chain.width);
    return s;
}

Matrix2cd chain_product(const Chain& chain, double& log_scale) {
    Matrix2cd m = Matrix2cd::Identity();
    log_scale = 0.0;
    cplx k_prev = chain.k0;
    for (size_t j = 0; j < chain.k.size(); ++j) {
        m = propagation_matrix(chain.k[j], chain.dy) * interface_matrix(k_prev, chain.k[j]) * m;
        rescale(m, log_scale);
        k_prev = chain.k[j];
    }
    m = interface_matrix(k_prev, chain.k0) * m;
    rescale(m, log_scale);
    return m;
}

} // namespace

SliceTable make_slice_table(const PotentialProfile& potential, int slices) {
    if (slices < 8) throw ConfigError("transfer matrix: need at least 8 slices");
    SliceTable t;
    t.window_min = potential.window_min();
    const double width = potential.window_max() - t.window_min;
    if (!(width > 0.0)) throw ConfigError("transfer matrix: empty window");
    t.dy = width / slices;
    t.u = Eigen::ArrayXd(slices);
    for (int j = 0; j < slices; ++j) t.u[j] = potential.barrier_vsq(t.midpoint(j));
    return t;
}

ScatteringSolution solve_slices(const SliceTable& table, double v) {
    const Chain chain = make_chain(table, v);
    double log_scale = 0.0;
    const Matrix2cd m = chain_product(chain, log_scale);
    return amplitudes_from_product(m, log_scale, chain, v);
}

ScatteringSolution transfer_matrix_solve(const PotentialProfile& potential, double v, int slices) {
    return solve_slices(make_slice_table(potential, slices), v);
}

ScatteringSolution transfer_matrix_solve_from_right(const PotentialProfile& potential, double v,
                                                    int slices) {
    SliceTable table = make_slice_table(potential, slices);
    table.u.reverseInPlace();
    return solve_slices(table, v);
}

std::vector<TransmissionPoint> transmission_curve(const PotentialProfile& potential,
                                                  std::span<const double> velocities,
                                                  int slices) {
    if (velocities.empty()) throw ConfigError("transmission_curve: empty velocity list");
    if (velocities.size() > 1) {
        const bool up = velocities[1] > velocities[0];
        for (size_t i = 0; i + 1 < velocities.size(); ++i) {
            const bool step_up = velocities[i + 1] > velocities[i];
            if (velocities[i + 1] == velocities[i] || step_up != up)
                throw ConfigError("transmission_curve: velocity grid must be strictly monotone");
        }
    }

    const SliceTable table = make_slice_table(potential, slices);
    std::vector<TransmissionPoint> out(velocities.size());
    for (size_t i = 0; i < velocities.size(); ++i) {
        const auto s = solve_slices(table, velocities[i]);
        out[i] = TransmissionPoint{velocities[i], s.transmission(), s.phase(), s.t};
    }

    // unwrap by continuity, seeded at the highest velocity where the
    // free-referenced phase sits well inside the principal branch
    const bool increasing = velocities.back() > velocities.front();
    const int n = static_cast<int>(out.size());
    const int seed = increasing ? n - 1 : 0;
    const int step = increasing ? -1 : 1;
    constexpr double two_pi = 2.0 * std::numbers::pi;
    for (int i = seed + step; i >= 0 && i < n; i += step) {
        const double prev = out[i - step].phase;
        out[i].phase += two_pi * std::round((prev - out[i].phase) / two_pi);
    }
    return out;
}

double square_barrier_transmission(double v_b, double width_um, double v) {
    if (v_b <= 0.0 || width_um <= 0.0) throw DomainError("square barrier oracle: bad barrier");
    if (v <= 0.0) throw DomainError("square barrier oracle: bad energy");
    const double hm = hbar_over_m();
    const double u0 = v_b * v_b;
    const double e = v * v;
    if (std::abs(e - u0) <= 1e-10 * u0) {
        const double kappa0_l = v_b / hm * width_um;
        return 1.0 / (1.0 + 0.25 * kappa0_l * kappa0_l);
    }
    if (e < u0) {
        const double kappa_l = std::sqrt(u0 - e) / hm * width_um;
        if (kappa_l > 300.0) // sinh overflow; asymptotic branch
            return 16.0 * e * (u0 - e) / (u0 * u0) * std::exp(-2.0 * kappa_l);
        const double sh = std::sinh(kappa_l);
        return 1.0 / (1.0 + u0 * u0 * sh * sh / (4.0 * e * (u0 - e)));
    }
    const double k_l = std::sqrt(e - u0) / hm * width_um;
    const double sn = std::sin(k_l);
    return 1.0 / (1.0 + u0 * u0 * sn * sn / (4.0 * e * (e - u0)));
}

double tunneling_rms_width(double v_b, double sigma_um, int slices) {
    if (v_b <= 0.0) throw DomainError("tunneling_rms_width: barrier height must be positive");
    const auto barrier = PotentialProfile::gaussian(v_b, sigma_um);
    const SliceTable table = make_slice_table(barrier, slices);

    // Gaussian-equivalent rms of the dT/dv profile, taken as half the
    // spread between the 16% and 84% transmission crossings (the same
    // convention a knife-edge scan uses for a beam radius).  The raw second
    // moment of dT/dv is ~10% larger because of its exponential tails.
    const auto crossing = [&](double level) {
        double lo = 0.25 * v_b, hi = 2.5 * v_b;
        for (int i = 0; i < 64; ++i) {
            const double mid = 0.5 * (lo + hi);
            if (solve_slices(table, mid).transmission() < level) lo = mid; else hi = mid;
        }
        return 0.5 * (lo + hi);
    };
    return 0.5 * (crossing(0.84) - crossing(0.16));
}

ScatteringField scattering_eigenstate(const PotentialProfile& potential, double v, int slices) {
    ScatteringField f;
    f.table = make_slice_table(potential, slices);
    const Chain chain = make_chain(f.table, v);
    f.solution = solve_slices(f.table, v);

    const int n = static_cast<int>(chain.k.size());
    f.a.resize(n);
    f.b.resize(n);
    f.k = chain.k;
    // forward sweep from the known left-side coefficients (1, r)
    Eigen::Vector2cd c(1.0, f.solution.r);
    cplx k_prev = chain.k0;
    for (int j = 0; j < n; ++j) {
        c = interface_matrix(k_prev, chain.k[j]) * c;
        f.a[j] = c[0];
        f.b[j] = c[1];
        c = propagation_matrix(chain.k[j], chain.dy) * c;
        k_prev = chain.k[j];
    }
    return f;
}

double ScatteringField::slice_density(int j) const {
    return density_integral(table.window_min + j * table.dy,
                            table.window_min + (j + 1) * table.dy);
}

double ScatteringField::density_integral(double y1, double y2) const {
    const int n = static_cast<int>(a.size());
    const double w_min = table.window_min, d = table.dy;
    if (y1 < w_min - 1e-9 || y2 > w_min + n * d + 1e-9 || y2 < y1)
        throw DomainError("density_integral: region outside solver window");

    double total = 0.0;
    const int j_first = std::max(0, static_cast<int>(std::floor((y1 - w_min) / d)));
    const int j_last = std::min(n - 1, static_cast<int>(std::floor((y2 - w_min) / d - 1e-15)));
    for (int j = j_first; j <= j_last; ++j) {
        const double left = w_min + j * d;
        const double d1 = std::max(0.0, y1 - left);
        const double d2 = std::min(d, y2 - left);
        if (d2 <= d1) continue;
        const cplx kj = k[j];
        const cplx A = a[j], B = b[j];
        if (kj.imag() > 0.0) {
            // evanescent: psi = A e^{-kappa d} + B e^{kappa d}
            const double kap = kj.imag();
            const double ii = (std::exp(-2.0 * kap * d1) - std::exp(-2.0 * kap * d2)) / (2.0 * kap);
            const double gg = (std::exp(2.0 * kap * d2) - std::exp(2.0 * kap * d1)) / (2.0 * kap);
            total += std::norm(A) * ii + std::norm(B) * gg +
                     2.0 * std::real(A * std::conj(B)) * (d2 - d1);
        } else {
            const double kr = kj.real();
            if (std::abs(kr) * (d2 - d1) < 1e-9) {
                const double mid = 0.5 * (d1 + d2);
                const cplx psi = A * std::exp(cplx(0, kr * mid)) + B * std::exp(cplx(0, -kr * mid));
                total += std::norm(psi) * (d2 - d1);
            } else {
                const cplx osc = (std::exp(cplx(0, 2.0 * kr * d2)) - std::exp(cplx(0, 2.0 * kr * d1)))
                                 / cplx(0, 2.0 * kr);
                total += (std::norm(A) + std::norm(B)) * (d2 - d1) +
                         2.0 * std::real(A * std::conj(B) * osc);
            }
        }
    }
    return total;
}

std::vector<cplx> log_t_slice_gradient(const SliceTable& table, double v, double du) {
    if (du <= 0.0) throw ConfigError("log_t_slice_gradient: step must be positive");
    const Chain chain = make_chain(table, v);
    const int n = static_cast<int>(chain.k.size());
    const double hm = hbar_over_m();
    const double vsq = v * v;

    // prefix[j] = F_j ... F_1 (scaled), suffix[j] = D_final F_n ... F_j
    std::vector<Matrix2cd> prefix(n + 1), suffix(n + 2);
    std::vector<double> pre_log(n + 1, 0.0), suf_log(n + 2, 0.0);
    prefix[0] = Matrix2cd::Identity();
    cplx k_prev = chain.k0;
    for (int j = 1; j <= n; ++j) {
        prefix[j] = propagation_matrix(chain.k[j - 1], chain.dy) *
                    interface_matrix(k_prev, chain.k[j - 1]) * prefix[j - 1];
        pre_log[j] = pre_log[j - 1];
        rescale(prefix[j], pre_log[j]);
        k_prev = chain.k[j - 1];
    }
    suffix[n + 1] = interface_matrix(chain.k[n - 1], chain.k0);
    for (int j = n; j >= 1; --j) {
        const cplx k_before = (j >= 2) ? chain.k[j - 2] : chain.k0;
        suffix[j] = suffix[j + 1] * propagation_matrix(chain.k[j - 1], chain.dy) *
                    interface_matrix(k_before, chain.k[j - 1]);
        suf_log[j] = suf_log[j + 1];
        rescale(suffix[j], suf_log[j]);
    }

    std::vector<cplx> grad(n);
    for (int j = 1; j <= n; ++j) {
        const cplx k_before = (j >= 2) ? chain.k[j - 2] : chain.k0;
        const cplx k_after = (j <= n - 1) ? chain.k[j] : chain.k0;
        cplx m11[2];
        for (int sgn = 0; sgn < 2; ++sgn) {
            cplx kj = local_wavenumber(vsq, table.u[j - 1] + (sgn ? -du : du), hm);
            if (std::abs(kj) < 1e-12) kj = cplx(1e-12, 0.0);
            // the perturbed slice touches its own factor and the next interface
            Matrix2cd mid = interface_matrix(kj, k_after) *
                            propagation_matrix(kj, chain.dy) *
                            interface_matrix(k_before, kj);
            Matrix2cd m;
            if (j <= n - 1) {
                // fold the following slice's propagation into the suffix side
                m = suffix[j + 2] * propagation_matrix(chain.k[j], chain.dy) * mid * prefix[j - 1];
            } else {
                m = mid * prefix[j - 1]; // mid already ends on the final interface
            }
            m11[sgn] = m(1, 1);
        }
        // ln t = -ln M22 up to perturbation-independent scale factors
        grad[j - 1] = -std::log(m11[0] / m11[1]) / (2.0 * du);
    }
    return grad;
}

} // namespace tclock
