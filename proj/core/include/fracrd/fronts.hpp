#pragma once

#include <optional>
#include <vector>

#include "fracrd/evolve.hpp"

namespace fracrd {

enum class FrontSide { both, left, right };

/// Largest |x| with u_i >= mu, linearly interpolated between the bracketing
/// grid points; nullopt when max u_i < mu. Requires mu >= 1e-14.
/// FrontSide::left / ::right restrict the scan to x < 0 / x > 0 (the d = 1
/// realization of direction independence).
std::optional<double> level_radius(const FieldState& state, std::size_t component, double mu,
                                   FrontSide side = FrontSide::both);

struct ExponentFit {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
    std::size_t n_samples = 0;
};

/// Least squares of ln R against t over samples with t inside the window.
/// Requires at least 5 windowed samples with a valid radius.
ExponentFit fit_exponent(const std::vector<std::pair<double, double>>& samples, double window_lo,
                         double window_hi);

/// lambda1 / (d + 2 alpha_min); throws std::domain_error when lambda1 <= 0
/// (outside the spreading regime).
double theoretical_exponent(double lambda1, int dim, double alpha_min);

/// Per-component, per-level time series of front radii plus the fitted
/// spreading exponent.
struct FrontTrace {
    std::size_t component = 0;
    double mu = 0.0;
    std::vector<std::pair<double, double>> samples; // (t, R), only valid radii
    ExponentFit fit;
    double predicted = 0.0;
    bool sufficient_data = true;
};

struct ExponentReport {
    std::vector<FrontTrace> traces;
    double max_mu_spread = 0.0;        // max over components of slope spread across mu
    double max_component_spread = 0.0; // max over mu of slope spread across components
    double predicted = 0.0;
};

/// Builds traces from trajectory snapshots (radii restricted to the validity
/// range [10 dx, L/4]) and fits each on the window. Traces with insufficient
/// data are flagged, not fatal.
ExponentReport exponent_report(const Trajectory& traj, const ModelSpec& model, double lambda1,
                               const std::vector<double>& mu_list, double window_lo,
                               double window_hi);

/// Streaming front extraction for large runs: feed snapshots one by one,
/// then fit.
class FrontTracker {
public:
    FrontTracker(std::vector<double> mu_list, std::size_t n_components);
    void observe(const FieldState& state);
    /// Same analysis as exponent_report over the collected samples.
    ExponentReport report(const ModelSpec& model, double lambda1, double window_lo,
                          double window_hi) const;
    const std::vector<std::vector<std::vector<std::pair<double, double>>>>& raw() const {
        return samples_;
    }

private:
    std::vector<double> mu_list_;
    std::size_t n_components_;
    // samples_[component][mu_index] -> (t, R)
    std::vector<std::vector<std::vector<std::pair<double, double>>>> samples_;
};

} // namespace fracrd
