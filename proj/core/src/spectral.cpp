#include "fracrd/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

#include "fracrd/errors.hpp"
#include "fracrd/fft.hpp"

namespace fracrd {

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0) || alpha > 1.0) {
        throw std::invalid_argument("alpha must lie in (0, 1], got " + std::to_string(alpha));
    }
}

// Least squares of y against x; returns (slope, intercept, stderr of slope).
struct LineFit {
    double slope, intercept, stderr_slope;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double ss_res = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (intercept + slope * x[i]);
        ss_res += r * r;
    }
    const double dof = (n > 2) ? static_cast<double>(n - 2) : 1.0;
    return {slope, intercept, std::sqrt(ss_res / dof / sxx)};
}

} // namespace

std::vector<double> frac_laplacian(const std::vector<double>& field, double alpha, const Grid& grid) {
    check_alpha(alpha);
    if (field.size() != grid.n()) {
        throw std::invalid_argument("frac_laplacian: field size does not match grid");
    }
    RealFft fft(grid.n());
    std::vector<double> multiplier(fft.n_half());
    const auto& xi = grid.freq_abs_half();
    for (std::size_t k = 0; k < multiplier.size(); ++k) {
        multiplier[k] = std::pow(xi[k], 2.0 * alpha);
    }
    multiplier[0] = 0.0; // symbol vanishes at xi = 0
    std::vector<double> out = field;
    fft.apply_multiplier(out, multiplier);
    return out;
}

KernelProfile heat_kernel(double alpha, double t, const Grid& grid) {
    check_alpha(alpha);
    if (!(t > 0.0)) {
        throw std::invalid_argument("heat_kernel: t must be positive");
    }
    const std::size_t n = grid.n();
    RealFft fft(n);
    std::vector<std::complex<double>> spec(fft.n_half());
    const auto& xi = grid.freq_abs_half();
    for (std::size_t k = 0; k < spec.size(); ++k) {
        spec[k] = std::exp(-t * std::pow(xi[k], 2.0 * alpha));
    }
    std::vector<double> raw(n);
    fft.inverse(spec.data(), raw.data());

    KernelProfile profile;
    profile.alpha = alpha;
    profile.t = t;
    profile.values.resize(n);
    // The inverse transform delivers the kernel with its peak at index 0;
    // rotate so values align with grid.x() (peak at x = 0). Scale 1/dx turns
    // discrete coefficients into density samples.
    const std::size_t half = n / 2;
    const double inv_dx = 1.0 / grid.dx();
    for (std::size_t j = 0; j < n; ++j) {
        profile.values[j] = raw[(j + half) % n] * inv_dx;
    }

    double mn = 0.0, mass = 0.0;
    for (double v : profile.values) {
        mn = std::min(mn, v);
        mass += v;
    }
    mass *= grid.dx();
    const double mx = *std::max_element(profile.values.begin(), profile.values.end());
    if (mn < -1e-12 * mx) {
        throw CertificateError("heat_kernel: negative values beyond roundoff, min = " +
                               std::to_string(mn));
    }
    for (double& v : profile.values) v = std::max(v, 0.0);
    if (std::abs(mass - 1.0) > 1e-6) {
        throw CertificateError("heat_kernel: mass deviates from 1 by " + std::to_string(mass - 1.0));
    }

    // Two-sided tail constants on |x| in [L/16, L/8]: extremize
    // p * (t^{1/2a+1} + |x|^{1+2a}) / t.
    const double lo = grid.length() / 16.0, hi = grid.length() / 8.0;
    const double t_pow = std::pow(t, 1.0 / (2.0 * alpha) + 1.0);
    double rho_min = 0.0, rho_max = 0.0;
    bool any = false;
    for (std::size_t j = 0; j < n; ++j) {
        const double ax = std::abs(grid.x()[j]);
        if (ax < lo || ax > hi) continue;
        const double rho = profile.values[j] * (t_pow + std::pow(ax, 1.0 + 2.0 * alpha)) / t;
        if (!any) {
            rho_min = rho_max = rho;
            any = true;
        } else {
            rho_min = std::min(rho_min, rho);
            rho_max = std::max(rho_max, rho);
        }
    }
    if (any && rho_min > 0.0) {
        profile.tail_constant_upper = 1.0 / rho_min; // B_up
        profile.tail_constant_lower = 1.0 / rho_max; // B_lo
    } else {
        profile.tail_constant_upper = std::numeric_limits<double>::infinity();
        profile.tail_constant_lower = 0.0;
    }
    return profile;
}

TailFit kernel_tail_fit(const KernelProfile& profile, const Grid& grid, double window_lo,
                        double window_hi) {
    if (!(window_lo > 0.0) || !(window_hi > window_lo)) {
        throw std::invalid_argument("kernel_tail_fit: bad window");
    }
    if (window_hi / window_lo < 10.0) {
        throw std::invalid_argument("kernel_tail_fit: window must span at least one decade");
    }
    if (window_hi > 7.0 * grid.length() / 16.0) {
        throw std::invalid_argument("kernel_tail_fit: window touches the guard band");
    }
    std::vector<double> lx, lp;
    for (std::size_t j = 0; j < grid.n(); ++j) {
        const double x = grid.x()[j];
        if (x < window_lo || x > window_hi) continue; // positive side only; profiles are even
        if (profile.values[j] <= 0.0) continue;
        lx.push_back(std::log(x));
        lp.push_back(std::log(profile.values[j]));
    }
    if (lx.size() < 8) {
        throw std::invalid_argument("kernel_tail_fit: too few points in window");
    }
    const LineFit full = least_squares(lx, lp);

    // Split-window slopes detect non-algebraic (e.g. Gaussian) decay: the
    // local slope then drifts strongly across the window.
    const double mid = 0.5 * (std::log(window_lo) + std::log(window_hi));
    std::vector<double> lx1, lp1, lx2, lp2;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        if (lx[i] <= mid) {
            lx1.push_back(lx[i]);
            lp1.push_back(lp[i]);
        } else {
            lx2.push_back(lx[i]);
            lp2.push_back(lp[i]);
        }
    }
    TailFit fit;
    fit.slope = full.slope;
    fit.constant = std::exp(full.intercept);
    fit.stderr_slope = full.stderr_slope;
    if (lx1.size() >= 4 && lx2.size() >= 4) {
        const double s1 = least_squares(lx1, lp1).slope;
        const double s2 = least_squares(lx2, lp2).slope;
        fit.algebraic = std::abs(s2 - s1) < 0.5;
    }
    return fit;
}

ConvolutionBoundReport kernel_convolution_bound_check(double alpha_i, double alpha_min, double t,
                                                      double s, const Grid& grid) {
    check_alpha(alpha_i);
    check_alpha(alpha_min);
    if (!(t >= 1.0)) throw std::invalid_argument("kernel_convolution_bound_check: t must be >= 1");
    if (s < 0.0 || s > t - 1.0) {
        throw std::invalid_argument("kernel_convolution_bound_check: s must lie in [0, t-1]");
    }
    const double tau = t - s;
    const KernelProfile p = heat_kernel(alpha_i, tau, grid);

    const double s_pow = std::pow(s, 1.0 / (2.0 * alpha_min) + 1.0);
    const double tail_exp = 1.0 + 2.0 * alpha_min;
    const std::size_t n = grid.n();
    std::vector<double> g(n);
    ConvolutionBoundReport report;
    for (std::size_t j = 0; j < n; ++j) {
        g[j] = 1.0 / (s_pow + std::pow(std::abs(grid.x()[j]), tail_exp));
    }
    if (s_pow == 0.0) {
        // s = 0: the profile is singular at the origin; resolve the origin
        // cell at the half-cell point. The continuous convolution is +inf
        // there, so this truncation only makes the check conservative.
        g[grid.index_of_zero()] = 1.0 / std::pow(0.5 * grid.dx(), tail_exp);
        report.origin_regularized = true;
    }

    const std::vector<double> lhs = periodic_convolve(grid, p.values, g);

    report.constant = (alpha_i == 1.0) ? std::pow(4.0 * M_PI * tau, -0.5) : std::pow(tau, -1.0 / (2.0 * alpha_i));
    bool any = false, any_outer = false;
    for (std::size_t j = 0; j < n; ++j) {
        const double x = grid.x()[j];
        if (!grid.in_core(x)) continue;
        if (report.origin_regularized && j == grid.index_of_zero()) continue;
        const double rhs = report.constant * g[j];
        const double ratio = lhs[j] / rhs;
        if (!any || ratio < report.min_ratio) {
            report.min_ratio = ratio;
            report.argmin_x = x;
            any = true;
        }
        if (std::abs(x) >= 1.0 && (!any_outer || ratio < report.min_ratio_outer)) {
            report.min_ratio_outer = ratio;
            any_outer = true;
        }
    }
    if (!any || !(report.min_ratio > 0.0)) {
        throw CertificateError("kernel_convolution_bound_check: nonpositive ratio " +
                               std::to_string(report.min_ratio) + " at x = " +
                               std::to_string(report.argmin_x));
    }
    return report;
}

} // namespace fracrd
