#include "fracrd/config.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "fracrd/errors.hpp"

namespace fracrd {

namespace {

using json = nlohmann::ordered_json;

void check_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
    for (const auto& item : obj.items()) {
        if (!allowed.count(item.key())) {
            throw ConfigError("unknown key '" + path + item.key() + "'");
        }
    }
}

const json& require(const json& obj, const std::string& path, const std::string& key) {
    if (!obj.contains(key)) {
        throw ConfigError("missing key '" + path + key + "'");
    }
    return obj.at(key);
}

double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) throw ConfigError("'" + path + "' must be a number");
    return v.get<double>();
}

std::int64_t as_integer(const json& v, const std::string& path) {
    if (!v.is_number_integer()) throw ConfigError("'" + path + "' must be an integer");
    return v.get<std::int64_t>();
}

std::vector<double> as_vector(const json& v, const std::string& path) {
    if (!v.is_array()) throw ConfigError("'" + path + "' must be an array");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(as_number(v[i], path + "[" + std::to_string(i) + "]"));
    }
    return out;
}

bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

} // namespace

ModelSpec RunConfig::make_model() const {
    return ModelSpec(alpha, coupling, linear_rates, saturation, delta, lambda_big, dim);
}

std::shared_ptr<const Grid> RunConfig::make_grid() const {
    return std::make_shared<const Grid>(grid_n, grid_length);
}

std::vector<double> RunConfig::resolved_snapshot_times() const {
    if (!snapshot_times.empty()) return snapshot_times;
    std::vector<double> times;
    if (snapshot_cadence > 0.0) {
        for (double t = 0.0; t <= t_end + 1e-12; t += snapshot_cadence) times.push_back(t);
    } else {
        times = {0.0, t_end};
    }
    return times;
}

double RunConfig::resolved_window_lo() const { return window_explicit ? window_lo : 0.5 * t_end; }
double RunConfig::resolved_window_hi() const { return window_explicit ? window_hi : 0.9 * t_end; }

RunConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config root must be an object");
    check_keys(root, "", {"model", "grid", "time", "ic", "fronts", "verify", "output"});

    RunConfig cfg;

    // model
    const json& model = require(root, "", "model");
    check_keys(model, "model.", {"m", "alpha", "K", "r", "q", "delta", "lambda_big", "dim"});
    const auto m = as_integer(require(model, "model.", "m"), "model.m");
    if (m < 1) throw ConfigError("'model.m' must be >= 1");
    cfg.alpha = as_vector(require(model, "model.", "alpha"), "model.alpha");
    if (cfg.alpha.size() != static_cast<std::size_t>(m)) {
        throw ConfigError("'model.alpha' must have m entries");
    }
    for (std::size_t i = 0; i < cfg.alpha.size(); ++i) {
        if (!(cfg.alpha[i] > 0.0) || cfg.alpha[i] > 1.0) {
            throw ConfigError("'model.alpha[" + std::to_string(i) + "]' must lie in (0, 1]");
        }
    }
    const json& k_rows = require(model, "model.", "K");
    if (!k_rows.is_array() || k_rows.size() != static_cast<std::size_t>(m)) {
        throw ConfigError("'model.K' must be an m x m array of arrays (row-major)");
    }
    for (std::size_t i = 0; i < k_rows.size(); ++i) {
        auto row = as_vector(k_rows[i], "model.K[" + std::to_string(i) + "]");
        if (row.size() != static_cast<std::size_t>(m)) {
            throw ConfigError("'model.K[" + std::to_string(i) + "]' must have m entries");
        }
        cfg.coupling.push_back(std::move(row));
    }
    cfg.linear_rates = as_vector(require(model, "model.", "r"), "model.r");
    cfg.saturation = as_vector(require(model, "model.", "q"), "model.q");
    if (cfg.linear_rates.size() != static_cast<std::size_t>(m) ||
        cfg.saturation.size() != static_cast<std::size_t>(m)) {
        throw ConfigError("'model.r' and 'model.q' must have m entries");
    }
    cfg.delta = as_number(require(model, "model.", "delta"), "model.delta");
    cfg.lambda_big = as_number(require(model, "model.", "lambda_big"), "model.lambda_big");
    if (!(cfg.lambda_big > 1.0)) throw ConfigError("'model.lambda_big' must exceed 1");
    cfg.dim = static_cast<int>(as_integer(require(model, "model.", "dim"), "model.dim"));
    if (cfg.dim < 1) throw ConfigError("'model.dim' must be >= 1");

    // grid
    const json& grid = require(root, "", "grid");
    check_keys(grid, "grid.", {"n", "L"});
    const auto n = as_integer(require(grid, "grid.", "n"), "grid.n");
    if (n < 8 || !is_power_of_two(static_cast<std::size_t>(n))) {
        throw ConfigError("'grid.n' must be a power of two >= 8");
    }
    cfg.grid_n = static_cast<std::size_t>(n);
    cfg.grid_length = as_number(require(grid, "grid.", "L"), "grid.L");
    if (!(cfg.grid_length > 0.0)) throw ConfigError("'grid.L' must be positive");

    // time
    const json& time = require(root, "", "time");
    check_keys(time, "time.", {"dt", "t_end", "snapshot_cadence", "snapshot_times"});
    cfg.dt = as_number(require(time, "time.", "dt"), "time.dt");
    if (!(cfg.dt > 0.0)) throw ConfigError("'time.dt' must be positive");
    cfg.t_end = as_number(require(time, "time.", "t_end"), "time.t_end");
    if (cfg.t_end < 0.0) throw ConfigError("'time.t_end' must be >= 0");
    const bool has_cadence = time.contains("snapshot_cadence");
    const bool has_times = time.contains("snapshot_times");
    if (has_cadence == has_times) {
        throw ConfigError("'time' must set exactly one of snapshot_cadence, snapshot_times");
    }
    if (has_cadence) {
        cfg.snapshot_cadence = as_number(time.at("snapshot_cadence"), "time.snapshot_cadence");
        if (!(cfg.snapshot_cadence > 0.0)) {
            throw ConfigError("'time.snapshot_cadence' must be positive");
        }
    } else {
        cfg.snapshot_times = as_vector(time.at("snapshot_times"), "time.snapshot_times");
        for (double t : cfg.snapshot_times) {
            if (t < 0.0 || t > cfg.t_end) {
                throw ConfigError("'time.snapshot_times' must lie in [0, t_end]");
            }
        }
    }

    // ic
    const json& ic = require(root, "", "ic");
    check_keys(ic, "ic.", {"kind", "h", "r"});
    const json& kind = require(ic, "ic.", "kind");
    if (!kind.is_string()) throw ConfigError("'ic.kind' must be a string");
    const std::string kind_str = kind.get<std::string>();
    if (kind_str == "compact_bump") {
        cfg.ic_kind = InitialKind::compact_bump;
    } else if (kind_str == "algebraic_tail") {
        cfg.ic_kind = InitialKind::algebraic_tail;
    } else {
        throw ConfigError("'ic.kind' must be compact_bump or algebraic_tail");
    }
    cfg.ic_heights = as_vector(require(ic, "ic.", "h"), "ic.h");
    if (cfg.ic_heights.size() != static_cast<std::size_t>(m)) {
        throw ConfigError("'ic.h' must have m entries");
    }
    if (ic.contains("r")) {
        cfg.ic_radius = as_number(ic.at("r"), "ic.r");
        if (!(cfg.ic_radius > 0.0)) throw ConfigError("'ic.r' must be positive");
    } else if (cfg.ic_kind == InitialKind::compact_bump) {
        throw ConfigError("missing key 'ic.r' (bump radius)");
    }

    // fronts
    const json& fronts = require(root, "", "fronts");
    check_keys(fronts, "fronts.", {"mu", "window"});
    cfg.mu = as_vector(require(fronts, "fronts.", "mu"), "fronts.mu");
    if (cfg.mu.empty()) throw ConfigError("'fronts.mu' must not be empty");
    for (double mu : cfg.mu) {
        if (!(mu > 0.0)) throw ConfigError("'fronts.mu' entries must be positive");
    }
    if (fronts.contains("window")) {
        auto window = as_vector(fronts.at("window"), "fronts.window");
        if (window.size() != 2 || !(window[0] < window[1])) {
            throw ConfigError("'fronts.window' must be [lo, hi] with lo < hi");
        }
        cfg.window_explicit = true;
        cfg.window_lo = window[0];
        cfg.window_hi = window[1];
    }

    // verify (optional)
    if (root.contains("verify")) {
        const json& verify = root.at("verify");
        check_keys(verify, "verify.",
                   {"guard_tol_rel", "front_rel_err", "residual_tol_rel", "domination_tol", "b_env",
                    "t0_align", "hypothesis_samples"});
        if (verify.contains("guard_tol_rel")) {
            cfg.guard_tol_rel = as_number(verify.at("guard_tol_rel"), "verify.guard_tol_rel");
            if (!(cfg.guard_tol_rel > 0.0)) throw ConfigError("'verify.guard_tol_rel' must be > 0");
        }
        if (verify.contains("front_rel_err")) {
            cfg.front_rel_err = as_number(verify.at("front_rel_err"), "verify.front_rel_err");
            if (!(cfg.front_rel_err > 0.0)) throw ConfigError("'verify.front_rel_err' must be > 0");
        }
        if (verify.contains("residual_tol_rel")) {
            cfg.residual_tol_rel =
                as_number(verify.at("residual_tol_rel"), "verify.residual_tol_rel");
            if (!(cfg.residual_tol_rel > 0.0)) {
                throw ConfigError("'verify.residual_tol_rel' must be > 0");
            }
        }
        if (verify.contains("domination_tol")) {
            cfg.domination_tol = as_number(verify.at("domination_tol"), "verify.domination_tol");
            if (!(cfg.domination_tol > 0.0)) throw ConfigError("'verify.domination_tol' must be > 0");
        }
        if (verify.contains("b_env")) {
            cfg.b_env = as_number(verify.at("b_env"), "verify.b_env");
            if (!(cfg.b_env > 0.0)) throw ConfigError("'verify.b_env' must be > 0");
        }
        if (verify.contains("t0_align")) {
            cfg.t0_align = as_number(verify.at("t0_align"), "verify.t0_align");
            if (!(cfg.t0_align > 0.0)) throw ConfigError("'verify.t0_align' must be > 0");
        }
        if (verify.contains("hypothesis_samples")) {
            const auto samples =
                as_integer(verify.at("hypothesis_samples"), "verify.hypothesis_samples");
            if (samples < 1) throw ConfigError("'verify.hypothesis_samples' must be >= 1");
            cfg.hypothesis_samples = static_cast<std::size_t>(samples);
        }
    }

    // output (optional)
    if (root.contains("output")) {
        const json& output = root.at("output");
        check_keys(output, "output.", {"directory", "prefix"});
        if (output.contains("directory")) {
            if (!output.at("directory").is_string()) {
                throw ConfigError("'output.directory' must be a string");
            }
            cfg.out_dir = output.at("directory").get<std::string>();
        }
        if (output.contains("prefix")) {
            if (!output.at("prefix").is_string()) throw ConfigError("'output.prefix' must be a string");
            cfg.prefix = output.at("prefix").get<std::string>();
        }
    }

    // Cross-validate the model section as a whole (ranges beyond per-key).
    try {
        cfg.make_model();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("model section invalid: ") + e.what());
    }
    return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
    json root;
    json model;
    model["m"] = cfg.alpha.size();
    model["alpha"] = cfg.alpha;
    model["K"] = cfg.coupling;
    model["r"] = cfg.linear_rates;
    model["q"] = cfg.saturation;
    model["delta"] = cfg.delta;
    model["lambda_big"] = cfg.lambda_big;
    model["dim"] = cfg.dim;
    root["model"] = model;
    root["grid"] = {{"n", cfg.grid_n}, {"L", cfg.grid_length}};
    json time;
    time["dt"] = cfg.dt;
    time["t_end"] = cfg.t_end;
    if (!cfg.snapshot_times.empty()) {
        time["snapshot_times"] = cfg.snapshot_times;
    } else {
        time["snapshot_cadence"] = cfg.snapshot_cadence;
    }
    root["time"] = time;
    json ic;
    ic["kind"] = (cfg.ic_kind == InitialKind::compact_bump) ? "compact_bump" : "algebraic_tail";
    ic["h"] = cfg.ic_heights;
    ic["r"] = cfg.ic_radius;
    root["ic"] = ic;
    json fronts;
    fronts["mu"] = cfg.mu;
    if (cfg.window_explicit) fronts["window"] = {cfg.window_lo, cfg.window_hi};
    root["fronts"] = fronts;
    json verify;
    verify["guard_tol_rel"] = cfg.guard_tol_rel;
    verify["front_rel_err"] = cfg.front_rel_err;
    verify["residual_tol_rel"] = cfg.residual_tol_rel;
    verify["domination_tol"] = cfg.domination_tol;
    verify["b_env"] = cfg.b_env;
    verify["t0_align"] = cfg.t0_align;
    verify["hypothesis_samples"] = cfg.hypothesis_samples;
    root["verify"] = verify;
    root["output"] = {{"directory", cfg.out_dir}, {"prefix", cfg.prefix}};
    return root.dump(2) + "\n";
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

} // namespace fracrd
