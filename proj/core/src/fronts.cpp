#include "fracrd/fronts.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fracrd {

namespace {

std::optional<double> crossing_right(const FieldState& state, std::size_t component, double mu) {
    const Grid& grid = *state.grid;
    const auto& u = state.u[component];
    const std::size_t zero = grid.index_of_zero();
    for (std::size_t j = grid.n(); j-- > zero;) {
        if (u[j] >= mu) {
            if (j + 1 >= grid.n()) return grid.x()[j]; // touches the domain edge
            const double frac = (u[j] - mu) / (u[j] - u[j + 1]);
            return grid.x()[j] + frac * grid.dx();
        }
    }
    return std::nullopt;
}

std::optional<double> crossing_left(const FieldState& state, std::size_t component, double mu) {
    const Grid& grid = *state.grid;
    const auto& u = state.u[component];
    const std::size_t zero = grid.index_of_zero();
    for (std::size_t j = 0; j <= zero; ++j) {
        if (u[j] >= mu) {
            if (j == 0) return std::abs(grid.x()[0]);
            const double frac = (u[j] - mu) / (u[j] - u[j - 1]);
            return std::abs(grid.x()[j] - frac * grid.dx());
        }
    }
    return std::nullopt;
}

ExponentReport analyze(const std::vector<std::vector<std::vector<std::pair<double, double>>>>& samples,
                       const std::vector<double>& mu_list, std::size_t n_components,
                       double predicted, double window_lo, double window_hi) {
    ExponentReport report;
    report.predicted = predicted;
    for (std::size_t i = 0; i < n_components; ++i) {
        for (std::size_t k = 0; k < mu_list.size(); ++k) {
            FrontTrace trace;
            trace.component = i;
            trace.mu = mu_list[k];
            trace.samples = samples[i][k];
            trace.predicted = predicted;
            try {
                trace.fit = fit_exponent(trace.samples, window_lo, window_hi);
            } catch (const std::invalid_argument&) {
                trace.sufficient_data = false;
            }
            report.traces.push_back(std::move(trace));
        }
    }
    // mu spread per component, component spread per mu.
    for (std::size_t i = 0; i < n_components; ++i) {
        for (std::size_t a = 0; a < mu_list.size(); ++a) {
            for (std::size_t b = a + 1; b < mu_list.size(); ++b) {
                const auto& ta = report.traces[i * mu_list.size() + a];
                const auto& tb = report.traces[i * mu_list.size() + b];
                if (ta.sufficient_data && tb.sufficient_data) {
                    report.max_mu_spread =
                        std::max(report.max_mu_spread, std::abs(ta.fit.slope - tb.fit.slope));
                }
            }
        }
    }
    for (std::size_t k = 0; k < mu_list.size(); ++k) {
        for (std::size_t i = 0; i < n_components; ++i) {
            for (std::size_t j = i + 1; j < n_components; ++j) {
                const auto& ti = report.traces[i * mu_list.size() + k];
                const auto& tj = report.traces[j * mu_list.size() + k];
                if (ti.sufficient_data && tj.sufficient_data) {
                    report.max_component_spread = std::max(
                        report.max_component_spread, std::abs(ti.fit.slope - tj.fit.slope));
                }
            }
        }
    }
    return report;
}

} // namespace

std::optional<double> level_radius(const FieldState& state, std::size_t component, double mu,
                                   FrontSide side) {
    if (component >= state.u.size()) throw std::invalid_argument("level_radius: bad component");
    if (!(mu >= 1e-14)) {
        throw std::invalid_argument("level_radius: mu below the floating guard (1e-14)");
    }
    std::optional<double> right, left;
    if (side != FrontSide::left) right = crossing_right(state, component, mu);
    if (side != FrontSide::right) left = crossing_left(state, component, mu);
    if (right && left) return std::max(*right, *left);
    if (right) return right;
    return left;
}

ExponentFit fit_exponent(const std::vector<std::pair<double, double>>& samples, double window_lo,
                         double window_hi) {
    std::vector<double> ts, lr;
    for (const auto& [t, r] : samples) {
        if (t < window_lo - 1e-12 || t > window_hi + 1e-12) continue;
        if (!(r > 0.0)) continue;
        ts.push_back(t);
        lr.push_back(std::log(r));
    }
    if (ts.size() < 5) {
        throw std::invalid_argument("fit_exponent: need at least 5 windowed samples, have " +
                                    std::to_string(ts.size()));
    }
    double mt = 0, ml = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        mt += ts[i];
        ml += lr[i];
    }
    mt /= ts.size();
    ml /= ts.size();
    double num = 0, den = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        num += (ts[i] - mt) * (lr[i] - ml);
        den += (ts[i] - mt) * (ts[i] - mt);
    }
    ExponentFit fit;
    fit.slope = num / den;
    fit.intercept = ml - fit.slope * mt;
    double ss = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double resid = lr[i] - (fit.intercept + fit.slope * ts[i]);
        ss += resid * resid;
    }
    const double dof = (ts.size() > 2) ? static_cast<double>(ts.size() - 2) : 1.0;
    fit.stderr_slope = std::sqrt(ss / dof / den);
    fit.n_samples = ts.size();
    return fit;
}

double theoretical_exponent(double lambda1, int dim, double alpha_min) {
    if (!(lambda1 > 0.0)) {
        throw std::domain_error(
            "theoretical_exponent: lambda1 must be positive (0 is not linearly unstable)");
    }
    if (dim < 1) throw std::invalid_argument("theoretical_exponent: dim must be >= 1");
    if (!(alpha_min > 0.0) || alpha_min > 1.0) {
        throw std::invalid_argument("theoretical_exponent: alpha must lie in (0, 1]");
    }
    return lambda1 / (static_cast<double>(dim) + 2.0 * alpha_min);
}

ExponentReport exponent_report(const Trajectory& traj, const ModelSpec& model, double lambda1,
                               const std::vector<double>& mu_list, double window_lo,
                               double window_hi) {
    FrontTracker tracker(mu_list, model.m());
    for (const auto& snap : traj.snapshots) tracker.observe(snap);
    return tracker.report(model, lambda1, window_lo, window_hi);
}

FrontTracker::FrontTracker(std::vector<double> mu_list, std::size_t n_components)
    : mu_list_(std::move(mu_list)), n_components_(n_components) {
    samples_.assign(n_components_,
                    std::vector<std::vector<std::pair<double, double>>>(mu_list_.size()));
}

void FrontTracker::observe(const FieldState& state) {
    const double r_min = 10.0 * state.grid->dx();
    const double r_max = state.grid->length() / 4.0;
    for (std::size_t i = 0; i < n_components_; ++i) {
        for (std::size_t k = 0; k < mu_list_.size(); ++k) {
            const auto radius = level_radius(state, i, mu_list_[k]);
            if (radius && *radius >= r_min && *radius <= r_max) {
                samples_[i][k].emplace_back(state.t, *radius);
            }
        }
    }
}

ExponentReport FrontTracker::report(const ModelSpec& model, double lambda1, double window_lo,
                                    double window_hi) const {
    const double predicted = theoretical_exponent(lambda1, model.dim(), model.alpha_min());
    return analyze(samples_, mu_list_, n_components_, predicted, window_lo, window_hi);
}

} // namespace fracrd
