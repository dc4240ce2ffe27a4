#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "fracrd/grid.hpp"
#include "fracrd/model.hpp"

namespace fracrd {

/// m-component real field at one time.
struct FieldState {
    double t = 0.0;
    std::vector<std::vector<double>> u; // [component][node], aligned with grid->x()
    std::shared_ptr<const Grid> grid;
};

struct RunMeta {
    double dt = 0.0;
    double t_end = 0.0;
    std::uint64_t model_hash = 0;
    std::size_t grid_n = 0;
    double grid_length = 0.0;
    std::uint64_t seed = 0;
};

struct Trajectory {
    std::vector<FieldState> snapshots; // strictly increasing t, first is the IC
    RunMeta meta;
};

enum class InitialKind { compact_bump, algebraic_tail };

/// Initial data in the decay class O(|x|^{-(1+2 alpha_i)}):
///   compact_bump:   u_i = h_i max(0, 1-(x/r)^2)^2
///   algebraic_tail: u_i = h_i / (1 + |x|^{1+2 alpha_i})
/// Every h_i must lie in (0, Lambda]; the bump radius must satisfy r < L/8.
FieldState make_initial(InitialKind kind, const std::vector<double>& heights, double radius,
                        const ModelSpec& model, std::shared_ptr<const Grid> grid);

/// Pure diffusion substep: exact multiplier exp(-dt |xi|^{2 alpha_i}) per
/// component. No projection is applied (test hook for the splitting).
void diffusion_step(std::vector<std::vector<double>>& u, const std::vector<double>& alphas,
                    double dt, const Grid& grid);

/// One Strang step: half-step reaction (one classical RK4 step on the
/// pointwise ODE), exact spectral diffusion, half-step reaction. After the
/// diffusion substep, negative values from spectral truncation are floored at
/// zero (order-preserving projection); a pre-projection undershoot below
/// 1e-6 * Lambda is treated as a resolution failure. Throws BlowUpError on
/// non-finite values.
FieldState step(const FieldState& state, const ModelSpec& model, double dt);

struct SimulateOptions {
    /// Abort threshold for the guard-band monitor, relative to Lambda.
    double guard_tol_rel = 1e-6;
    /// Retain snapshots in the returned Trajectory (disable for large grids
    /// and consume them through the observer instead).
    bool keep_snapshots = true;
    /// Called with every snapshot, including the initial state.
    std::function<void(const FieldState&)> observer;
    std::uint64_t seed = 0; // recorded in the manifest only
};

/// Deterministic trajectory with box-invariant and guard-band monitoring each
/// step. snapshot_times must lie in [0, t_end]; they are snapped to the step
/// grid and the initial state is always the first snapshot.
/// Throws BlowUpError / DomainTooSmallError per the monitors.
Trajectory simulate(const ModelSpec& model, const FieldState& u0, double t_end, double dt,
                    std::vector<double> snapshot_times, const SimulateOptions& opts = {});

/// Runs both initial states with identical discretization and returns the
/// maximum over steps, nodes and components of (low - high).
double compare_evolutions(const ModelSpec& model, const FieldState& u0_low,
                          const FieldState& u0_high, double t_end, double dt);

} // namespace fracrd
