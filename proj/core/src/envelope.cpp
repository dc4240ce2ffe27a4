#include "fracrd/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "fracrd/errors.hpp"
#include "fracrd/spectral.hpp"

namespace fracrd {

namespace {

double sign_of(EnvelopeSign s) { return s == EnvelopeSign::super ? -1.0 : +1.0; }

double tail_power(const ModelSpec& model) {
    return static_cast<double>(model.dim()) + 2.0 * model.alpha_min();
}

} // namespace

double Envelope::b(double t) const {
    const double p = dim + 2.0 * alpha_min;
    const double q = 2.0 * alpha_min / (delta * p);
    const double kappa = 2.0 * alpha_min * lambda1 / p;
    const double y = sign_of(sign) * d_const / lambda1 + std::pow(b_env, -q) * std::exp(kappa * t);
    return std::pow(y, -1.0 / q);
}

double Envelope::b_deriv(double t) const {
    const double p = dim + 2.0 * alpha_min;
    const double q = 2.0 * alpha_min / (delta * p);
    const double kappa = 2.0 * alpha_min * lambda1 / p;
    const double y = sign_of(sign) * d_const / lambda1 + std::pow(b_env, -q) * std::exp(kappa * t);
    const double y_deriv = kappa * std::pow(b_env, -q) * std::exp(kappa * t);
    return -(1.0 / q) * std::pow(y, -1.0 / q - 1.0) * y_deriv;
}

double homogeneity_constant(double delta, int dim, const std::vector<double>& alphas,
                            const Grid& grid) {
    if (alphas.empty()) throw std::invalid_argument("homogeneity_constant: empty alpha list");
    double alpha_min = alphas.front();
    for (double a : alphas) alpha_min = std::min(alpha_min, a);
    const double p = delta * (dim + 2.0 * alpha_min);
    if (p < 2.0 - 1e-12) {
        throw std::invalid_argument(
            "homogeneity_constant: delta (d+2a) must be >= 2 for envelope regularity, got " +
            std::to_string(p));
    }
    std::vector<double> w(grid.n());
    for (std::size_t j = 0; j < grid.n(); ++j) {
        w[j] = std::pow(1.0 + std::pow(std::abs(grid.x()[j]), p), -1.0 / delta);
    }
    double d_const = 0.0;
    for (double alpha : alphas) {
        const auto lap = frac_laplacian(w, alpha, grid);
        for (std::size_t j = 0; j < grid.n(); ++j) {
            if (!grid.in_core(grid.x()[j])) continue;
            d_const = std::max(d_const, std::abs(lap[j]) / w[j]);
        }
    }
    return d_const;
}

Envelope build_supersolution(const ModelSpec& model, const EigenPair& eig, double d_const,
                             double b_env) {
    Envelope env;
    env.sign = EnvelopeSign::super;
    env.d_const = d_const;
    env.delta = model.delta();
    env.lambda1 = eig.lambda1;
    env.phi1 = eig.phi1;
    env.dim = model.dim();
    env.alpha_min = model.alpha_min();
    if (!(eig.lambda1 > 0.0)) {
        throw std::invalid_argument("build_supersolution: lambda1 must be positive (H1)");
    }

    const double p = env.spatial_power();
    const double b_cap = std::pow(1.0 + d_const / eig.lambda1, -p / (2.0 * env.alpha_min));
    if (!(b_env > 0.0) || !(b_env < b_cap)) {
        throw std::invalid_argument("build_supersolution: B must lie in (0, " +
                                    std::to_string(b_cap) + "), got " + std::to_string(b_env));
    }
    env.b_env = b_env;

    // a >= ((D + lambda1)/c_h)^{1/delta} max_i 1/phi_i with c_h the (H3)
    // constant; a 1% margin keeps the amplitude brace strictly positive.
    double inv_phi_max = 0.0;
    for (double phi : eig.phi1) inv_phi_max = std::max(inv_phi_max, 1.0 / phi);
    env.a = 1.01 * std::pow((d_const + eig.lambda1) / model.c_delta1(), 1.0 / env.delta) *
            inv_phi_max;

    if (env.b(0.0) > 1.0 + 1e-12) {
        throw CertificateError("build_supersolution: b(0) > 1");
    }
    return env;
}

Envelope build_subsolution(const ModelSpec& model, const EigenPair& eig, double d_const, double t1,
                           double c_lower, double gamma_mm, const Grid& grid) {
    if (!(eig.lambda1 > 0.0)) {
        throw std::invalid_argument("build_subsolution: lambda1 must be positive (H1)");
    }
    const double t1_floor = std::max(1.0, 2.0 * d_const / eig.lambda1);
    if (t1 < t1_floor - 1e-12) {
        throw std::invalid_argument("build_subsolution: t1 must be >= max(1, 2D/lambda1) = " +
                                    std::to_string(t1_floor));
    }
    if (!(c_lower > 0.0)) {
        throw std::invalid_argument("build_subsolution: c_lower must be positive");
    }

    Envelope env;
    env.sign = EnvelopeSign::sub;
    env.d_const = d_const;
    env.delta = model.delta();
    env.lambda1 = eig.lambda1;
    env.phi1 = eig.phi1;
    env.dim = model.dim();
    env.alpha_min = model.alpha_min();
    env.t_shift = t1;

    const double p = env.spatial_power();
    const double d2a = tail_power(model);
    env.b_env = std::pow(2.0 / t1, p / (2.0 * env.alpha_min));

    double phi_max = 0.0, phi_min = std::numeric_limits<double>::infinity();
    for (double phi : eig.phi1) {
        phi_max = std::max(phi_max, phi);
        phi_min = std::min(phi_min, phi);
    }
    const double a_formula = c_lower * std::exp(-gamma_mm * t1) /
                             (2.0 * phi_max * std::pow(t1, model.dim() / (2.0 * env.alpha_min)));
    const double a_cap = std::pow(phi_min * eig.lambda1 / (2.0 * model.c_delta2()), 1.0 / env.delta);
    if (a_formula > a_cap) {
        // a decreases in t1; suggest the smallest doubling that respects the cap.
        double t_suggest = t1;
        for (int k = 0; k < 64 && c_lower * std::exp(-gamma_mm * t_suggest) /
                                          (2.0 * phi_max *
                                           std::pow(t_suggest, model.dim() / (2.0 * env.alpha_min))) >
                                      a_cap;
             ++k) {
            t_suggest *= 2.0;
        }
        throw std::invalid_argument(
            "build_subsolution: amplitude formula exceeds the cap; increase t1 to about " +
            std::to_string(t_suggest));
    }
    env.a = a_formula;

    // Envelope at time 0 must sit below the algebraic lower-bound profile at
    // t1 everywhere on the grid.
    const double b0 = env.b(0.0);
    const double profile_scale = c_lower * t1 * std::exp(-gamma_mm * t1);
    for (std::size_t j = 0; j < grid.n(); ++j) {
        const double ax = std::abs(grid.x()[j]);
        const double profile =
            profile_scale / (std::pow(t1, model.dim() / (2.0 * env.alpha_min) + 1.0) +
                             std::pow(ax, d2a));
        for (double phi : eig.phi1) {
            const double v = env.a * phi * std::pow(1.0 + b0 * std::pow(ax, p), -1.0 / env.delta);
            if (v > profile * (1.0 + 1e-9)) {
                throw CertificateError(
                    "build_subsolution: envelope exceeds the lower-bound profile at x = " +
                    std::to_string(grid.x()[j]));
            }
        }
    }
    return env;
}

std::vector<std::vector<double>> eval_envelope(const Envelope& env, double t,
                                               const std::vector<double>& xs) {
    if (t < 0.0) throw std::invalid_argument("eval_envelope: t must be >= 0");
    const double p = env.spatial_power();
    const double bt = env.b(t);
    std::vector<std::vector<double>> v(env.phi1.size(), std::vector<double>(xs.size()));
    for (std::size_t j = 0; j < xs.size(); ++j) {
        const double shape = std::pow(1.0 + bt * std::pow(std::abs(xs[j]), p), -1.0 / env.delta);
        for (std::size_t i = 0; i < env.phi1.size(); ++i) {
            v[i][j] = env.a * env.phi1[i] * shape;
        }
    }
    return v;
}

std::vector<std::vector<double>> envelope_residual(const Envelope& env, const ModelSpec& model,
                                                   double t, const Grid& grid) {
    if (env.phi1.size() != model.m()) {
        throw std::invalid_argument("envelope_residual: component count mismatch");
    }
    const std::size_t m = model.m();
    const std::size_t n = grid.n();
    const double p = env.spatial_power();
    const double bt = env.b(t);
    const double bdot = env.b_deriv(t);

    const auto fields = eval_envelope(env, t, grid.x());

    std::vector<std::vector<double>> residual(m, std::vector<double>(n));
    // d_t v_i = -(1/delta) a phi_i (1 + b|x|^p)^{-1/delta - 1} b'(t) |x|^p
    for (std::size_t i = 0; i < m; ++i) {
        const auto lap = frac_laplacian(fields[i], model.alpha()[i], grid);
        for (std::size_t j = 0; j < n; ++j) {
            const double xp = std::pow(std::abs(grid.x()[j]), p);
            const double dt_v = -(1.0 / env.delta) * env.a * env.phi1[i] *
                                std::pow(1.0 + bt * xp, -1.0 / env.delta - 1.0) * bdot * xp;
            residual[i][j] = dt_v + lap[j];
        }
    }
    std::vector<double> s(m);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < m; ++i) s[i] = fields[i][j];
        const auto f = eval_reaction(model, s);
        for (std::size_t i = 0; i < m; ++i) residual[i][j] -= f[i];
    }
    return residual;
}

ResidualReport envelope_residual_check(const Envelope& env, const ModelSpec& model,
                                       const std::vector<double>& times, const Grid& grid,
                                       double tol_rel) {
    ResidualReport report;
    report.tolerance = tol_rel * env.a;
    const bool is_super = env.sign == EnvelopeSign::super;
    bool first = true;
    for (double t : times) {
        const auto residual = envelope_residual(env, model, t, grid);
        for (std::size_t i = 0; i < model.m(); ++i) {
            for (std::size_t j = 0; j < grid.n(); ++j) {
                if (!grid.in_core(grid.x()[j])) continue;
                const double r = residual[i][j];
                const bool worse = first || (is_super ? r < report.worst_value
                                                      : r > report.worst_value);
                if (worse) {
                    report.worst_value = r;
                    report.worst_t = t;
                    report.worst_x = grid.x()[j];
                    report.worst_component = i;
                    first = false;
                }
            }
        }
    }
    report.pass = is_super ? report.worst_value >= -report.tolerance
                           : report.worst_value <= report.tolerance;
    return report;
}

LowerBoundReport lower_bound_check(const Trajectory& traj, const ModelSpec& model, double gamma_mm,
                                   double fit_lo, double fit_hi) {
    LowerBoundReport report;
    report.gamma_mm = gamma_mm;
    const double d2a = tail_power(model);
    const double t_exp = model.dim() / (2.0 * model.alpha_min()) + 1.0;

    double c_fit = std::numeric_limits<double>::infinity();
    bool any_fit = false;
    for (const auto& snap : traj.snapshots) {
        if (snap.t < 1.0) continue; // the bound is asserted for t >= 1 only
        const Grid& grid = *snap.grid;
        LowerBoundReport::Row row;
        row.t = snap.t;
        row.min_ratio = std::numeric_limits<double>::infinity();
        const double denom_t = snap.t * std::exp(-gamma_mm * snap.t);
        for (std::size_t i = 0; i < model.m(); ++i) {
            for (std::size_t j = 0; j < grid.n(); ++j) {
                const double x = grid.x()[j];
                if (!grid.in_core(x)) continue;
                const double weight = std::pow(snap.t, t_exp) + std::pow(std::abs(x), d2a);
                const double ratio = snap.u[i][j] * weight / denom_t;
                if (ratio < row.min_ratio) {
                    row.min_ratio = ratio;
                    row.argmin_x = x;
                    row.component = i;
                }
            }
        }
        report.rows.push_back(row);
        if (snap.t >= fit_lo - 1e-12 && snap.t <= fit_hi + 1e-12) {
            c_fit = std::min(c_fit, row.min_ratio);
            any_fit = true;
        }
    }
    if (!any_fit) {
        throw CertificateError("lower_bound_check: no snapshots in the fit window [" +
                               std::to_string(fit_lo) + ", " + std::to_string(fit_hi) + "]");
    }
    report.c_lower = c_fit;
    if (!(report.c_lower > 0.0)) {
        throw CertificateError("lower_bound_check: fitted constant is not positive");
    }
    for (const auto& row : report.rows) {
        if (row.t > fit_hi + 1e-12 && row.min_ratio < report.c_lower * (1.0 - 1e-12)) {
            report.valid_later = false;
        }
    }
    return report;
}

UpperBoundReport upper_bound_check(const Trajectory& traj, const ModelSpec& model, double lambda1) {
    UpperBoundReport report;
    const double d2a = tail_power(model);
    std::vector<double> ts, logs;
    for (const auto& snap : traj.snapshots) {
        const Grid& grid = *snap.grid;
        const double lo = grid.length() / 16.0, hi = grid.length() / 8.0;
        UpperBoundReport::Row row;
        row.t = snap.t;
        for (std::size_t i = 0; i < model.m(); ++i) {
            for (std::size_t j = 0; j < grid.n(); ++j) {
                const double ax = std::abs(grid.x()[j]);
                if (ax < lo || ax > hi) continue;
                row.c1 = std::max(row.c1, snap.u[i][j] * std::pow(ax, d2a));
            }
        }
        if (!std::isfinite(row.c1)) {
            throw CertificateError("upper_bound_check: C1 not finite at t = " +
                                   std::to_string(snap.t));
        }
        report.rows.push_back(row);
        if (row.c1 > 0.0) {
            ts.push_back(snap.t);
            logs.push_back(std::log(row.c1));
        }
    }
    if (ts.size() >= 2) {
        double mt = 0, ml = 0;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            mt += ts[i];
            ml += logs[i];
        }
        mt /= ts.size();
        ml /= ts.size();
        double num = 0, den = 0;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            num += (ts[i] - mt) * (logs[i] - ml);
            den += (ts[i] - mt) * (ts[i] - mt);
        }
        report.log_slope = num / den;
        report.pass_growth = report.log_slope <= 1.2 * lambda1;
    }
    return report;
}

FrontBoundConstants front_constants(const Envelope& env_super, const Envelope& env_sub,
                                    const std::vector<double>& mu, double t0, double t1_sub) {
    if (env_super.sign != EnvelopeSign::super || env_sub.sign != EnvelopeSign::sub) {
        throw std::invalid_argument("front_constants: envelope signs mixed up");
    }
    (void)t0; // the super alignment shift t1 - t0 is stored in env_super.t_shift
    FrontBoundConstants out;
    out.mu = mu;
    const double d2a = env_super.dim + 2.0 * env_super.alpha_min;
    out.c_per_component.resize(mu.size());
    out.eps.resize(env_sub.phi1.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        const double c_pow = env_super.a * env_super.phi1[i] *
                             std::exp(env_super.lambda1 * env_super.t_shift) /
                             (mu[i] * std::pow(env_super.b_env, 1.0 / env_super.delta));
        out.c_per_component[i] = std::pow(c_pow, 1.0 / d2a);
        out.c_upper = std::max(out.c_upper, out.c_per_component[i]);
    }
    for (std::size_t i = 0; i < env_sub.phi1.size(); ++i) {
        out.eps[i] = env_sub.a * env_sub.phi1[i] / std::pow(2.0, 1.0 / env_sub.delta);
    }
    const double c_low_pow =
        std::exp(-env_sub.lambda1 * t1_sub) * std::pow(env_sub.b_env, -1.0 / env_sub.delta);
    out.c_lower = std::pow(c_low_pow, 1.0 / d2a);
    out.tau = std::max(t0, t1_sub);
    return out;
}

double align_supersolution(Envelope& env, const Trajectory& traj, double t0) {
    const FieldState* base = nullptr;
    for (const auto& snap : traj.snapshots) {
        if (std::abs(snap.t - t0) < 1e-9) base = &snap;
    }
    if (!base) throw std::invalid_argument("align_supersolution: no snapshot at t0");

    for (const auto& snap : traj.snapshots) {
        const double t1 = snap.t;
        const auto env_fields = eval_envelope(env, t1, base->grid->x());
        bool dominates = true;
        for (std::size_t i = 0; i < env.phi1.size() && dominates; ++i) {
            for (std::size_t j = 0; j < base->grid->n(); ++j) {
                if (base->grid->in_guard_band(base->grid->x()[j])) continue;
                if (base->u[i][j] > env_fields[i][j]) {
                    dominates = false;
                    break;
                }
            }
        }
        if (dominates) {
            env.t_shift = t1 - t0;
            return t1;
        }
    }
    throw CertificateError("align_supersolution: no snapshot time dominates u(t0, .)");
}

DominationReport check_super_domination(const Envelope& env, const Trajectory& traj, double t0,
                                        double tol) {
    DominationReport report;
    bool first = true;
    for (const auto& snap : traj.snapshots) {
        if (snap.t < t0 - 1e-12) continue;
        const auto env_fields = eval_envelope(env, snap.t + env.t_shift, snap.grid->x());
        for (std::size_t i = 0; i < env.phi1.size(); ++i) {
            for (std::size_t j = 0; j < snap.grid->n(); ++j) {
                if (snap.grid->in_guard_band(snap.grid->x()[j])) continue;
                const double gap = env_fields[i][j] + tol - snap.u[i][j];
                if (first || gap < report.worst_gap) {
                    report.worst_gap = gap;
                    report.worst_t = snap.t;
                    report.worst_x = snap.grid->x()[j];
                    report.worst_component = i;
                    first = false;
                }
            }
        }
    }
    report.pass = report.worst_gap >= 0.0;
    return report;
}

DominationReport check_sub_domination(const Envelope& env, const Trajectory& traj, double t1,
                                      double tol) {
    DominationReport report;
    bool first = true;
    for (const auto& snap : traj.snapshots) {
        if (snap.t < t1 - 1e-12) continue;
        const auto env_fields = eval_envelope(env, snap.t - t1, snap.grid->x());
        for (std::size_t i = 0; i < env.phi1.size(); ++i) {
            for (std::size_t j = 0; j < snap.grid->n(); ++j) {
                if (snap.grid->in_guard_band(snap.grid->x()[j])) continue;
                const double gap = snap.u[i][j] + tol - env_fields[i][j];
                if (first || gap < report.worst_gap) {
                    report.worst_gap = gap;
                    report.worst_t = snap.t;
                    report.worst_x = snap.grid->x()[j];
                    report.worst_component = i;
                    first = false;
                }
            }
        }
    }
    report.pass = report.worst_gap >= 0.0;
    return report;
}

} // namespace fracrd
