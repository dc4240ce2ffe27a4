#include "fracrd/eigenpair.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fracrd/errors.hpp"
#include "fracrd/rng.hpp"

namespace fracrd {

EigenPair principal_eigenpair(const std::vector<std::vector<double>>& metzler, double tol) {
    const std::size_t m = metzler.size();
    if (m == 0) throw std::invalid_argument("principal_eigenpair: empty matrix");
    for (const auto& row : metzler) {
        if (row.size() != m) throw std::invalid_argument("principal_eigenpair: matrix not square");
    }
    if (!(tol > 0.0)) throw std::invalid_argument("principal_eigenpair: tol must be positive");
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (i != j && !(metzler[i][j] > 0.0)) {
                throw std::invalid_argument("principal_eigenpair: off-diagonal entries must be > 0");
            }
        }
    }
    if (m == 1) {
        return {metzler[0][0], {1.0}};
    }

    double shift = 0.0;
    for (std::size_t i = 0; i < m; ++i) shift = std::max(shift, std::abs(metzler[i][i]));
    shift += 1.0;

    std::vector<double> v(m, 1.0 / std::sqrt(static_cast<double>(m)));
    std::vector<double> w(m);
    double theta_prev = 0.0;
    const std::size_t cap = 2'000'000;
    for (std::size_t it = 0; it < cap; ++it) {
        // w = (M + shift I) v
        for (std::size_t i = 0; i < m; ++i) {
            double acc = shift * v[i];
            for (std::size_t j = 0; j < m; ++j) acc += metzler[i][j] * v[j];
            w[i] = acc;
        }
        double theta = 0.0;
        for (std::size_t i = 0; i < m; ++i) theta += v[i] * w[i]; // Rayleigh, ||v||_2 = 1
        double resid = 0.0;
        for (std::size_t i = 0; i < m; ++i) resid = std::max(resid, std::abs(w[i] - theta * v[i]));

        double norm = 0.0;
        for (double val : w) norm += val * val;
        norm = std::sqrt(norm);
        for (std::size_t i = 0; i < m; ++i) v[i] = w[i] / norm;

        const double lambda = theta - shift;
        if (it > 0 && std::abs(theta - theta_prev) < tol &&
            resid <= tol * (1.0 + std::abs(lambda))) {
            double vmax = 0.0;
            for (double val : v) vmax = std::max(vmax, std::abs(val));
            EigenPair pair;
            pair.lambda1 = lambda;
            pair.phi1.resize(m);
            for (std::size_t i = 0; i < m; ++i) {
                pair.phi1[i] = v[i] / vmax;
                if (!(pair.phi1[i] > 0.0)) {
                    throw ConvergenceError("principal_eigenpair: eigenvector not positive");
                }
            }
            return pair;
        }
        theta_prev = theta;
    }
    throw ConvergenceError("principal_eigenpair: no convergence after iteration cap");
}

CouplingBounds coupling_bounds(const ModelSpec& model, std::size_t n_samples, std::uint64_t seed) {
    const std::size_t m = model.m();
    const double delta = model.delta();
    const double lambda_big = model.lambda_big();
    CouplingBounds bounds;
    bounds.gamma.assign(m, std::vector<double>(m, 0.0));

    // Analytic values for this reaction family: d_j f_i = K_ij (constant) for
    // j != i, and d_i f_i = r_i - (1+delta) q_i s_i^delta is monotone in s_i,
    // so its absolute sup over the box sits at an endpoint.
    for (std::size_t i = 0; i < m; ++i) {
        const double r = model.linear_rates()[i];
        const double at_top = r - (1.0 + delta) * model.saturation()[i] * std::pow(lambda_big, delta);
        bounds.gamma[i][i] = std::max(std::abs(r), std::abs(at_top));
        for (std::size_t j = 0; j < m; ++j) {
            if (j != i) bounds.gamma[i][j] = model.coupling()[i][j];
        }
    }
    double l = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double row = bounds.gamma[i][i];
        for (std::size_t j = 0; j < m; ++j) {
            if (j != i) row += model.coupling()[i][j];
        }
        l = std::max(l, row);
    }
    bounds.l = l;
    bounds.b_lin.assign(m, std::vector<double>(m, l));
    bounds.damping.resize(m);
    const double gmm = bounds.gamma[m - 1][m - 1];
    for (std::size_t i = 0; i < m; ++i) {
        bounds.damping[i] = std::max(bounds.gamma[i][i], gmm + 1.0);
    }

    // Cross-check against centered finite differences at sampled points
    // (corners 0 and Lambda*1 included).
    SplitMix64 rng(seed);
    const double h = 1e-6 * lambda_big;
    for (std::size_t k = 0; k < n_samples + 2; ++k) {
        std::vector<double> s(m);
        if (k == n_samples) {
            std::fill(s.begin(), s.end(), 0.0);
        } else if (k == n_samples + 1) {
            std::fill(s.begin(), s.end(), lambda_big);
        } else {
            for (auto& v : s) v = rng.uniform(0.0, lambda_big);
        }
        for (std::size_t j = 0; j < m; ++j) {
            std::vector<double> sp = s, sm = s;
            sp[j] = std::min(lambda_big, sp[j] + h);
            sm[j] = std::max(0.0, sm[j] - h);
            const double denom = sp[j] - sm[j];
            if (denom <= 0.0) continue;
            const auto fp = eval_reaction(model, sp);
            const auto fm = eval_reaction(model, sm);
            for (std::size_t i = 0; i < m; ++i) {
                const double dji = (fp[i] - fm[i]) / denom;
                if (i == j) {
                    if (std::abs(dji) > bounds.gamma[i][i] + 1e-8) {
                        throw CertificateError(
                            "coupling_bounds: sampled |d_i f_i| exceeds gamma_ii at i = " +
                            std::to_string(i));
                    }
                } else if (dji < bounds.gamma[i][j] - 1e-8) {
                    throw CertificateError("coupling_bounds: sampled d_j f_i below gamma_ij at (" +
                                           std::to_string(i) + "," + std::to_string(j) + ")");
                }
            }
        }
    }
    return bounds;
}

} // namespace fracrd
