#include "fracrd/model.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>
#include <string>

#include "fracrd/eigenpair.hpp"
#include "fracrd/rng.hpp"

namespace fracrd {

namespace {

void fnv1a64_update(std::uint64_t& h, const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
}

void fnv1a64_update_double(std::uint64_t& h, double v) { fnv1a64_update(h, &v, sizeof(v)); }

// Saturation s_i^{1+delta} on [0, Lambda], slope-continuous linear extension
// above, zero below (the power's slope vanishes at 0 for delta > 0).
double saturation_term(double x, double delta, double lambda_big) {
    if (x <= 0.0) return 0.0;
    if (x <= lambda_big) return std::pow(x, 1.0 + delta);
    const double corner = std::pow(lambda_big, 1.0 + delta);
    const double slope = (1.0 + delta) * std::pow(lambda_big, delta);
    return corner + slope * (x - lambda_big);
}

double saturation_slope(double x, double delta, double lambda_big) {
    if (x <= 0.0) return 0.0;
    if (x <= lambda_big) return (1.0 + delta) * std::pow(x, delta);
    return (1.0 + delta) * std::pow(lambda_big, delta);
}

} // namespace

ModelSpec::ModelSpec(std::vector<double> alpha, std::vector<std::vector<double>> coupling,
                     std::vector<double> linear_rates, std::vector<double> saturation, double delta,
                     double lambda_big, int dim)
    : alpha_(std::move(alpha)),
      coupling_(std::move(coupling)),
      linear_rates_(std::move(linear_rates)),
      saturation_(std::move(saturation)),
      delta_(delta),
      lambda_big_(lambda_big),
      dim_(dim) {
    const std::size_t m = alpha_.size();
    if (m == 0) throw std::invalid_argument("ModelSpec: m must be >= 1");
    if (coupling_.size() != m || linear_rates_.size() != m || saturation_.size() != m) {
        throw std::invalid_argument("ModelSpec: inconsistent dimensions");
    }
    for (const auto& row : coupling_) {
        if (row.size() != m) throw std::invalid_argument("ModelSpec: K must be m x m");
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (!(alpha_[i] > 0.0) || alpha_[i] > 1.0) {
            throw std::invalid_argument("ModelSpec: alpha must lie in (0, 1]");
        }
        if (i + 1 < m && alpha_[i + 1] > alpha_[i]) {
            throw std::invalid_argument("ModelSpec: alpha must be nonincreasing");
        }
    }
    if (!(alpha_.back() < 1.0)) {
        throw std::invalid_argument("ModelSpec: min alpha must be < 1");
    }
    if (dim_ < 1) throw std::invalid_argument("ModelSpec: dim must be >= 1");
    if (!(lambda_big_ > 1.0)) throw std::invalid_argument("ModelSpec: Lambda must exceed 1");
    const double delta_floor = 2.0 / (dim_ + 2.0 * alpha_.back());
    if (delta_ < delta_floor - 1e-12) {
        throw std::invalid_argument("ModelSpec: delta must be >= 2/(d+2*alpha) = " +
                                    std::to_string(delta_floor));
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (coupling_[i][i] != 0.0) throw std::invalid_argument("ModelSpec: K_ii must be 0");
        for (std::size_t j = 0; j < m; ++j) {
            if (i != j && !(coupling_[i][j] > 0.0)) {
                throw std::invalid_argument("ModelSpec: K_ij must be > 0 for i != j");
            }
        }
        if (!(saturation_[i] > 0.0)) throw std::invalid_argument("ModelSpec: q_i must be > 0");
        double row = linear_rates_[i] - saturation_[i] * std::pow(lambda_big_, delta_);
        for (std::size_t j = 0; j < m; ++j) {
            if (j != i) row += coupling_[i][j];
        }
        if (row > 1e-12) {
            throw std::invalid_argument(
                "ModelSpec: corner condition sum_j K_ij + r_i - q_i Lambda^delta <= 0 fails for i = " +
                std::to_string(i) + " (value " + std::to_string(row) + ")");
        }
    }
}

double ModelSpec::c_delta1() const {
    double c = saturation_[0];
    for (double q : saturation_) c = std::min(c, q);
    return c;
}

double ModelSpec::c_delta2() const {
    double q = saturation_[0];
    for (double v : saturation_) q = std::max(q, v);
    return std::pow(static_cast<double>(m()), 0.5 * (1.0 + delta_)) * q;
}

std::uint64_t ModelSpec::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    const auto mm = static_cast<std::uint64_t>(m());
    fnv1a64_update(h, &mm, sizeof(mm));
    for (double a : alpha_) fnv1a64_update_double(h, a);
    for (const auto& row : coupling_)
        for (double k : row) fnv1a64_update_double(h, k);
    for (double r : linear_rates_) fnv1a64_update_double(h, r);
    for (double q : saturation_) fnv1a64_update_double(h, q);
    fnv1a64_update_double(h, delta_);
    fnv1a64_update_double(h, lambda_big_);
    const auto d = static_cast<std::uint64_t>(dim_);
    fnv1a64_update(h, &d, sizeof(d));
    return h;
}

ModelSpec preset_model() {
    return ModelSpec({1.0, 0.5}, {{0.0, 1.0}, {1.0, 0.0}}, {0.0, 0.0}, {1.0, 1.0}, 1.0, 2.0, 1);
}

std::vector<double> eval_reaction_extended(const ModelSpec& model, const std::vector<double>& s) {
    const std::size_t m = model.m();
    if (s.size() != m) throw std::invalid_argument("eval_reaction: state size mismatch");
    std::vector<double> f(m);
    for (std::size_t i = 0; i < m; ++i) {
        double v = model.linear_rates()[i] * s[i] -
                   model.saturation()[i] * saturation_term(s[i], model.delta(), model.lambda_big());
        for (std::size_t j = 0; j < m; ++j) {
            if (j != i) v += model.coupling()[i][j] * s[j];
        }
        f[i] = v;
    }
    return f;
}

std::vector<double> eval_reaction(const ModelSpec& model, const std::vector<double>& s) {
    for (double v : s) {
        if (v < 0.0) throw std::domain_error("eval_reaction: negative component");
    }
    return eval_reaction_extended(model, s);
}

std::vector<std::vector<double>> jacobian_at_zero(const ModelSpec& model) {
    const std::size_t m = model.m();
    std::vector<std::vector<double>> jac(m, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            jac[i][j] = (i == j) ? model.linear_rates()[i] : model.coupling()[i][j];
        }
    }
    return jac;
}

HypothesisReport validate_hypotheses(const ModelSpec& model, std::size_t n_samples,
                                     std::uint64_t seed) {
    if (n_samples < 1) throw std::invalid_argument("validate_hypotheses: n_samples must be >= 1");
    const std::size_t m = model.m();
    const double lambda_big = model.lambda_big();
    const double delta = model.delta();
    HypothesisReport report;

    // H1 via the Perron eigenpair of DF(0). For m = 1 the "eigenpair" is the
    // scalar rate itself.
    const auto jac = jacobian_at_zero(model);
    report.h1_lambda1 = principal_eigenpair(jac, 1e-12).lambda1;
    report.pass_h1 = report.h1_lambda1 > 0.0;

    // H2 at the corner Lambda*1 and on the faces {s_i = Lambda} (all such
    // points have |s| >= Lambda). f_i <= 0 is checked for the face's own
    // component only; demanding it globally on {|s| >= Lambda} is incompatible
    // with strict cooperativity.
    std::vector<double> corner(m, lambda_big);
    report.h2_corner_values = eval_reaction(model, corner);
    double h2_worst = 0.0;
    for (double v : report.h2_corner_values) h2_worst = std::max(h2_worst, v);

    SplitMix64 rng(seed);
    for (std::size_t k = 0; k < n_samples; ++k) {
        std::vector<double> s(m);
        for (auto& v : s) v = rng.uniform(0.0, lambda_big);
        for (std::size_t i = 0; i < m; ++i) {
            std::vector<double> face = s;
            face[i] = lambda_big;
            h2_worst = std::max(h2_worst, eval_reaction(model, face)[i]);
        }
    }
    report.pass_h2 = h2_worst <= 1e-12;

    // H3/H4 sandwich and the Lipschitz/cooperativity estimates on samples in
    // the box, corners included so suprema of the monotone slopes are hit.
    const double c1 = model.c_delta1();
    const double c2 = model.c_delta2();
    rng = SplitMix64(seed + 1);
    double h3_min = 0.0, h4_min = 0.0, lip = 0.0, coop_min = 0.0;
    bool first = true, coop_first = true;
    const double fd_h = 1e-6 * lambda_big;
    for (std::size_t k = 0; k < n_samples + 2; ++k) {
        std::vector<double> s(m);
        if (k == n_samples) {
            std::fill(s.begin(), s.end(), 0.0);
        } else if (k == n_samples + 1) {
            std::fill(s.begin(), s.end(), lambda_big);
        } else {
            for (auto& v : s) v = rng.uniform(0.0, lambda_big);
        }
        const auto fs = eval_reaction(model, s);
        double norm_s = 0.0;
        for (double v : s) norm_s += v * v;
        norm_s = std::sqrt(norm_s);
        for (std::size_t i = 0; i < m; ++i) {
            double df0s = 0.0;
            for (std::size_t j = 0; j < m; ++j) df0s += jac[i][j] * s[j];
            const double gap = df0s - fs[i];
            const double m3 = gap - c1 * std::pow(s[i], 1.0 + delta);
            const double m4 = c2 * std::pow(norm_s, 1.0 + delta) - gap;
            if (first) {
                h3_min = m3;
                h4_min = m4;
            } else {
                h3_min = std::min(h3_min, m3);
                h4_min = std::min(h4_min, m4);
            }
            first = false;

            // Row sums of |DF| (analytic slopes for this family) for l, and
            // the off-diagonal minimum for cooperativity.
            double row = std::abs(model.linear_rates()[i] -
                                  model.saturation()[i] *
                                      saturation_slope(s[i], delta, lambda_big));
            for (std::size_t j = 0; j < m; ++j) {
                if (j == i) continue;
                row += model.coupling()[i][j];
                // Centered finite difference of f_i in s_j.
                std::vector<double> sp = s, sm = s;
                sp[j] += fd_h;
                sm[j] = std::max(0.0, sm[j] - fd_h);
                const double denom = sp[j] - sm[j];
                if (denom > 0.0) {
                    const double dji =
                        (eval_reaction(model, sp)[i] - eval_reaction(model, sm)[i]) / denom;
                    coop_min = coop_first ? dji : std::min(coop_min, dji);
                    coop_first = false;
                }
            }
            lip = std::max(lip, row);
        }
    }
    report.h3_min_margin = h3_min;
    report.h4_min_margin = h4_min;
    report.pass_h3 = h3_min >= -1e-10;
    report.pass_h4 = h4_min >= -1e-10;
    report.lipschitz_estimate = lip;
    report.pass_h5 = std::isfinite(lip);
    report.cooperativity_min = (m >= 2) ? coop_min : 1.0; // vacuous for m = 1
    report.pass_cooperative = report.cooperativity_min > 0.0;
    return report;
}

} // namespace fracrd
