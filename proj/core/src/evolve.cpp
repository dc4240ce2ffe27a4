#include "fracrd/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "fracrd/errors.hpp"
#include "fracrd/fft.hpp"

namespace fracrd {

namespace {

// Allocation-free reaction evaluation for the integrator hot path.
// Same family as eval_reaction_extended.
void reaction_into(const ModelSpec& model, const double* s, double* f) {
    const std::size_t m = model.m();
    const double delta = model.delta();
    const double lambda_big = model.lambda_big();
    for (std::size_t i = 0; i < m; ++i) {
        const double si = s[i];
        double sat;
        if (si <= 0.0) {
            sat = 0.0;
        } else if (si <= lambda_big) {
            sat = (delta == 1.0) ? si * si : std::pow(si, 1.0 + delta);
        } else {
            const double corner =
                (delta == 1.0) ? lambda_big * lambda_big : std::pow(lambda_big, 1.0 + delta);
            sat = corner + (1.0 + delta) * std::pow(lambda_big, delta) * (si - lambda_big);
        }
        double v = model.linear_rates()[i] * si - model.saturation()[i] * sat;
        const auto& row = model.coupling()[i];
        for (std::size_t j = 0; j < m; ++j) {
            if (j != i) v += row[j] * s[j];
        }
        f[i] = v;
    }
}

// Strang stepper with cached FFT plans, multipliers and scratch.
class Stepper {
public:
    Stepper(const ModelSpec& model, const Grid& grid, double dt)
        : model_(model), grid_(grid), dt_(dt), fft_(grid.n()) {
        if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
        const auto& xi = grid.freq_abs_half();
        multipliers_.resize(model.m());
        for (std::size_t i = 0; i < model.m(); ++i) {
            auto& mult = multipliers_[i];
            mult.resize(xi.size());
            for (std::size_t k = 0; k < xi.size(); ++k) {
                mult[k] = std::exp(-dt * std::pow(xi[k], 2.0 * model.alpha()[i]));
            }
        }
        const std::size_t m = model.m();
        s_.resize(m);
        k1_.resize(m);
        k2_.resize(m);
        k3_.resize(m);
        k4_.resize(m);
        tmp_.resize(m);
    }

    void advance(FieldState& state) {
        reaction_half(state.u);
        diffuse_and_project(state.u);
        reaction_half(state.u);
        state.t += dt_;
        check_finite(state);
    }

    double min_before_projection() const { return min_before_projection_; }

private:
    void reaction_half(std::vector<std::vector<double>>& u) {
        const std::size_t m = model_.m();
        const std::size_t n = grid_.n();
        const double h = 0.5 * dt_;
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t i = 0; i < m; ++i) s_[i] = u[i][j];
            reaction_into(model_, s_.data(), k1_.data());
            for (std::size_t i = 0; i < m; ++i) tmp_[i] = s_[i] + 0.5 * h * k1_[i];
            reaction_into(model_, tmp_.data(), k2_.data());
            for (std::size_t i = 0; i < m; ++i) tmp_[i] = s_[i] + 0.5 * h * k2_[i];
            reaction_into(model_, tmp_.data(), k3_.data());
            for (std::size_t i = 0; i < m; ++i) tmp_[i] = s_[i] + h * k3_[i];
            reaction_into(model_, tmp_.data(), k4_.data());
            for (std::size_t i = 0; i < m; ++i) {
                u[i][j] = s_[i] + (h / 6.0) * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
            }
        }
    }

    void diffuse_and_project(std::vector<std::vector<double>>& u) {
        for (std::size_t i = 0; i < model_.m(); ++i) {
            fft_.apply_multiplier(u[i], multipliers_[i]);
            for (double& v : u[i]) {
                if (v < 0.0) {
                    min_before_projection_ = std::min(min_before_projection_, v);
                    v = 0.0;
                }
            }
        }
        if (min_before_projection_ < -1e-6 * model_.lambda_big()) {
            throw BlowUpError("step: spectral undershoot " +
                              std::to_string(min_before_projection_) +
                              " signals an under-resolved field (refine the grid)");
        }
    }

    void check_finite(const FieldState& state) const {
        for (std::size_t i = 0; i < model_.m(); ++i) {
            for (double v : state.u[i]) {
                if (!std::isfinite(v)) {
                    throw BlowUpError("step: non-finite value in component " + std::to_string(i) +
                                      " at t = " + std::to_string(state.t));
                }
            }
        }
    }

    const ModelSpec& model_;
    const Grid& grid_;
    double dt_;
    RealFft fft_;
    std::vector<std::vector<double>> multipliers_;
    std::vector<double> s_, k1_, k2_, k3_, k4_, tmp_;
    double min_before_projection_ = 0.0;
};

void check_state(const FieldState& state, const ModelSpec& model) {
    if (!state.grid) throw std::invalid_argument("FieldState: missing grid");
    if (state.u.size() != model.m()) {
        throw std::invalid_argument("FieldState: component count does not match model");
    }
    for (const auto& comp : state.u) {
        if (comp.size() != state.grid->n()) {
            throw std::invalid_argument("FieldState: field size does not match grid");
        }
    }
}

} // namespace

FieldState make_initial(InitialKind kind, const std::vector<double>& heights, double radius,
                        const ModelSpec& model, std::shared_ptr<const Grid> grid) {
    if (!grid) throw std::invalid_argument("make_initial: missing grid");
    if (heights.size() != model.m()) {
        throw std::invalid_argument("make_initial: heights must have one entry per component");
    }
    for (double h : heights) {
        if (!(h > 0.0)) {
            throw std::invalid_argument(
                "make_initial: every component height must be positive (the initial condition "
                "must not vanish identically)");
        }
        if (h > model.lambda_big()) {
            throw std::invalid_argument("make_initial: heights must not exceed Lambda");
        }
    }
    if (kind == InitialKind::compact_bump) {
        if (!(radius > 0.0) || radius >= grid->length() / 8.0) {
            throw std::invalid_argument(
                "make_initial: bump radius must lie in (0, L/8) clear of the guard band");
        }
    }

    FieldState state;
    state.t = 0.0;
    state.grid = std::move(grid);
    const std::size_t n = state.grid->n();
    state.u.assign(model.m(), std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < model.m(); ++i) {
        const double tail_exp = 1.0 + 2.0 * model.alpha()[i];
        for (std::size_t j = 0; j < n; ++j) {
            const double x = state.grid->x()[j];
            if (kind == InitialKind::compact_bump) {
                const double w = 1.0 - (x / radius) * (x / radius);
                state.u[i][j] = (w > 0.0) ? heights[i] * w * w : 0.0;
            } else {
                state.u[i][j] = heights[i] / (1.0 + std::pow(std::abs(x), tail_exp));
            }
        }
    }
    return state;
}

void diffusion_step(std::vector<std::vector<double>>& u, const std::vector<double>& alphas,
                    double dt, const Grid& grid) {
    if (u.size() != alphas.size()) {
        throw std::invalid_argument("diffusion_step: one alpha per component required");
    }
    if (!(dt >= 0.0)) throw std::invalid_argument("diffusion_step: dt must be >= 0");
    RealFft fft(grid.n());
    const auto& xi = grid.freq_abs_half();
    std::vector<double> mult(xi.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        for (std::size_t k = 0; k < xi.size(); ++k) {
            mult[k] = std::exp(-dt * std::pow(xi[k], 2.0 * alphas[i]));
        }
        fft.apply_multiplier(u[i], mult);
    }
}

FieldState step(const FieldState& state, const ModelSpec& model, double dt) {
    check_state(state, model);
    FieldState out = state;
    Stepper stepper(model, *state.grid, dt);
    stepper.advance(out);
    return out;
}

Trajectory simulate(const ModelSpec& model, const FieldState& u0, double t_end, double dt,
                    std::vector<double> snapshot_times, const SimulateOptions& opts) {
    check_state(u0, model);
    if (!(t_end >= 0.0)) throw std::invalid_argument("simulate: t_end must be >= 0");
    if (!(dt > 0.0)) throw std::invalid_argument("simulate: dt must be positive");

    const Grid& grid = *u0.grid;
    const double lambda_big = model.lambda_big();

    // Snap requested times to the step grid; the initial state is always
    // snapshot zero.
    const auto total_steps = static_cast<std::size_t>(std::llround(t_end / dt));
    std::vector<std::size_t> snap_steps;
    snap_steps.push_back(0);
    for (double t : snapshot_times) {
        if (t < -1e-12 || t > t_end + 1e-12) {
            throw std::invalid_argument("simulate: snapshot time outside [0, t_end]");
        }
        const auto k = static_cast<std::size_t>(std::llround(t / dt));
        snap_steps.push_back(std::min(k, total_steps));
    }
    std::sort(snap_steps.begin(), snap_steps.end());
    snap_steps.erase(std::unique(snap_steps.begin(), snap_steps.end()), snap_steps.end());

    bool initial_in_box = true;
    for (const auto& comp : u0.u) {
        for (double v : comp) {
            if (v < 0.0 || v > lambda_big) initial_in_box = false;
        }
    }

    Trajectory traj;
    traj.meta = {dt, t_end, model.hash(), grid.n(), grid.length(), opts.seed};

    FieldState state = u0;
    Stepper stepper(model, grid, dt);
    std::size_t next_snap = 0;

    const auto emit = [&](const FieldState& s) {
        if (opts.observer) opts.observer(s);
        if (opts.keep_snapshots) traj.snapshots.push_back(s);
    };
    const auto monitor = [&](const FieldState& s) {
        if (initial_in_box) {
            double mx = 0.0;
            for (const auto& comp : s.u) {
                for (double v : comp) mx = std::max(mx, v);
            }
            if (mx > lambda_big * (1.0 + 1e-9)) {
                throw CertificateError("simulate: box invariant violated, max = " +
                                       std::to_string(mx) + " at t = " + std::to_string(s.t));
            }
        }
        double guard_max = 0.0;
        for (std::size_t j = 0; j < grid.n(); ++j) {
            if (!grid.in_guard_band(grid.x()[j])) continue;
            for (const auto& comp : s.u) guard_max = std::max(guard_max, comp[j]);
        }
        if (guard_max > opts.guard_tol_rel * lambda_big) {
            throw DomainTooSmallError("simulate: guard-band level " + std::to_string(guard_max) +
                                      " exceeds " + std::to_string(opts.guard_tol_rel * lambda_big) +
                                      " at t = " + std::to_string(s.t) +
                                      "; enlarge L or shorten the run");
        }
    };

    monitor(state);
    if (next_snap < snap_steps.size() && snap_steps[next_snap] == 0) {
        emit(state);
        ++next_snap;
    }
    for (std::size_t k = 1; k <= total_steps; ++k) {
        stepper.advance(state);
        state.t = static_cast<double>(k) * dt; // avoid accumulated roundoff in timestamps
        monitor(state);
        if (next_snap < snap_steps.size() && snap_steps[next_snap] == k) {
            emit(state);
            ++next_snap;
        }
    }
    return traj;
}

double compare_evolutions(const ModelSpec& model, const FieldState& u0_low,
                          const FieldState& u0_high, double t_end, double dt) {
    check_state(u0_low, model);
    check_state(u0_high, model);
    if (u0_low.grid->n() != u0_high.grid->n()) {
        throw std::invalid_argument("compare_evolutions: grids must match");
    }
    for (std::size_t i = 0; i < model.m(); ++i) {
        for (std::size_t j = 0; j < u0_low.grid->n(); ++j) {
            if (u0_low.u[i][j] > u0_high.u[i][j]) {
                throw std::invalid_argument("compare_evolutions: initial data not ordered");
            }
        }
    }

    FieldState low = u0_low, high = u0_high;
    Stepper stepper_low(model, *low.grid, dt);
    Stepper stepper_high(model, *high.grid, dt);
    double violation = -std::numeric_limits<double>::infinity();
    const auto scan = [&]() {
        for (std::size_t i = 0; i < model.m(); ++i) {
            for (std::size_t j = 0; j < low.grid->n(); ++j) {
                violation = std::max(violation, low.u[i][j] - high.u[i][j]);
            }
        }
    };
    scan();
    const auto total_steps = static_cast<std::size_t>(std::llround(t_end / dt));
    for (std::size_t k = 1; k <= total_steps; ++k) {
        stepper_low.advance(low);
        stepper_high.advance(high);
        scan();
    }
    return violation;
}

} // namespace fracrd
