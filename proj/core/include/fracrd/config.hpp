#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "fracrd/evolve.hpp"
#include "fracrd/model.hpp"

namespace fracrd {

/// Parsed and validated run configuration (strict JSON schema: unknown keys
/// are rejected at every nesting level).
///
/// Sections: model {m, alpha[], K[][], r[], q[], delta, lambda_big, dim},
/// grid {n, L}, time {dt, t_end, snapshot_cadence | snapshot_times[]},
/// ic {kind, h[], r}, fronts {mu[], window[2]?}, verify {...}?, output {...}?.
struct RunConfig {
    // model
    std::vector<double> alpha;
    std::vector<std::vector<double>> coupling;
    std::vector<double> linear_rates;
    std::vector<double> saturation;
    double delta = 1.0;
    double lambda_big = 2.0;
    int dim = 1;
    // grid
    std::size_t grid_n = 0;
    double grid_length = 0.0;
    // time
    double dt = 0.01;
    double t_end = 0.0;
    double snapshot_cadence = 0.0;       // 0 when explicit times are given
    std::vector<double> snapshot_times;  // empty when cadence is given
    // ic
    InitialKind ic_kind = InitialKind::compact_bump;
    std::vector<double> ic_heights;
    double ic_radius = 1.0;
    // fronts
    std::vector<double> mu;
    bool window_explicit = false;
    double window_lo = 0.0;
    double window_hi = 0.0;
    // verify (defaults per the certificate contracts)
    double guard_tol_rel = 1e-6;
    double front_rel_err = 0.10;
    double residual_tol_rel = 1e-6;
    double domination_tol = 1e-8;
    double b_env = 0.05;
    double t0_align = 1.0;
    std::size_t hypothesis_samples = 200;
    // output
    std::string out_dir = "out";
    std::string prefix;

    ModelSpec make_model() const;
    std::shared_ptr<const Grid> make_grid() const;
    /// Explicit times, or cadence expanded over [0, t_end].
    std::vector<double> resolved_snapshot_times() const;
    /// Fit window; defaults to [0.5, 0.9] * t_end when not explicit.
    double resolved_window_lo() const;
    double resolved_window_hi() const;
};

/// Parses and validates; throws ConfigError naming the offending key/path.
RunConfig parse_config(const std::string& text);

/// Canonical serialization; parse(serialize(c)) reproduces c exactly.
std::string serialize_config(const RunConfig& config);

RunConfig load_config_file(const std::string& path);

} // namespace fracrd
