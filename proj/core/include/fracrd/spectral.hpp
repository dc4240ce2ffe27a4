#pragma once

#include <cstddef>
#include <vector>

#include "fracrd/grid.hpp"

namespace fracrd {

/// Sampled alpha-stable heat kernel p_alpha(t, .) on a grid, with the fitted
/// two-sided tail constants of the bound  B_up^-1 t / (t^{1/2a+1} + |x|^{1+2a})
/// <= p <= B_lo^-1 t / (...)  on the window |x| in [L/16, L/8].
struct KernelProfile {
    double alpha = 0.0;
    double t = 0.0;
    std::vector<double> values; // aligned with grid.x(), peak at x = 0
    double tail_constant_upper = 0.0; // B_up
    double tail_constant_lower = 0.0; // B_lo
};

/// Log-log least-squares fit of an algebraic tail.
struct TailFit {
    double slope = 0.0;
    double constant = 0.0; // multiplicative constant exp(intercept)
    double stderr_slope = 0.0;
    bool algebraic = true; // false when the slope estimate diverges across the window
};

struct ConvolutionBoundReport {
    double min_ratio = 0.0; // min over core of LHS / RHS
    double argmin_x = 0.0;
    /// Min restricted to 1 <= |x| <= L/8, where the s = 0 display carries
    /// content (at the regularized singular cell both sides are artifacts of
    /// the cutoff).
    double min_ratio_outer = 0.0;
    double constant = 1.0;      // explicit constant used in RHS (alpha_i = 1 case)
    bool origin_regularized = false; // s = 0: singular origin cell resolved at dx/2
};

/// (-Delta)^alpha via the Fourier multiplier |xi|^{2 alpha}, alpha in (0, 1].
/// Output is real by construction (real-symmetric transform path).
std::vector<double> frac_laplacian(const std::vector<double>& field, double alpha, const Grid& grid);

/// Heat kernel of (-Delta)^alpha at time t > 0: inverse transform of
/// exp(-t |xi|^{2 alpha}), periodized over the box.
KernelProfile heat_kernel(double alpha, double t, const Grid& grid);

/// Least-squares slope of log p vs log |x| over the radius window
/// [window_lo, window_hi]; requires window_hi / window_lo >= 10 and the
/// window to stay out of the guard band.
TailFit kernel_tail_fit(const KernelProfile& profile, const Grid& grid, double window_lo,
                        double window_hi);

/// Checks the Step-2 convolution lower bound
///   p_{alpha_i}(t-s, .) * (s^{1/2a+1} + |.|^{1+2a})^{-1} >= c (t-s)^{-1/2a_i} (s^{1/2a+1} + |x|^{1+2a})^{-1}
/// on the core |x| <= L/8, with c = (4 pi (t-s))^{-1/2} explicit when
/// alpha_i = 1 and c = 1 (reported ratio carries the constant) otherwise.
/// Requires t >= 1 and 0 <= s <= t-1. Throws CertificateError if the ratio is
/// not positive.
ConvolutionBoundReport kernel_convolution_bound_check(double alpha_i, double alpha_min, double t,
                                                      double s, const Grid& grid);

} // namespace fracrd
