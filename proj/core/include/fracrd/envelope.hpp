#pragma once

#include <vector>

#include "fracrd/eigenpair.hpp"
#include "fracrd/evolve.hpp"
#include "fracrd/grid.hpp"
#include "fracrd/model.hpp"

namespace fracrd {

enum class EnvelopeSign { super, sub };

/// Radial comparison envelope v(t,x) = a (1 + b(t) |x|^{delta (d+2a)})^{-1/delta} phi1
/// with the closed-form b(t); super and sub differ by the sign of D/lambda1
/// inside b and by how (a, B) are chosen.
struct Envelope {
    EnvelopeSign sign = EnvelopeSign::super;
    double a = 0.0;
    double b_env = 0.0;  // constant B
    double d_const = 0.0; // homogeneity constant D
    double delta = 0.0;
    double lambda1 = 0.0;
    std::vector<double> phi1;
    double t_shift = 0.0; // alignment time: t1 - t0 (super) or t1 (sub)
    int dim = 1;
    double alpha_min = 0.0;

    double spatial_power() const { return delta * (dim + 2.0 * alpha_min); }

    /// b(t) = (-+ D/lambda1 + B^{-q} exp(kappa t))^{-1/q},
    /// q = 2 alpha / (delta (d+2alpha)), kappa = 2 alpha lambda1 / (d+2alpha).
    double b(double t) const;
    /// Exact derivative of the closed form (not routed through the ODE).
    double b_deriv(double t) const;
};

struct FrontBoundConstants {
    double c_upper = 0.0;               // c of the upper level-set bound
    double c_lower = 0.0;               // C of the lower level-set bound
    std::vector<double> c_per_component;
    std::vector<double> eps;            // epsilon_i
    std::vector<double> mu;
    double tau = 0.0;                   // onset time
};

/// D = max_i sup_{core} |(-Delta)^{alpha_i} w| / w for the profile
/// w = (1 + |x|^{delta (d+2a)})^{-1/delta}, a = min alpha. Requires
/// delta (d+2a) >= 2 (envelope regularity threshold).
double homogeneity_constant(double delta, int dim, const std::vector<double>& alphas,
                            const Grid& grid);

/// Supersolution: a is the Lemma feasibility bound with a 1.01 margin,
/// B must lie in (0, (1 + D/lambda1)^{-delta (d+2a)/(2a)}).
Envelope build_supersolution(const ModelSpec& model, const EigenPair& eig, double d_const,
                             double b_env);

/// Subsolution at onset time t1 >= max(1, 2 D / lambda1):
///   B = (2/t1)^{(d+2a) delta / (2a)},
///   a = c_lower exp(-gamma_mm t1) / (2 max phi t1^{d/2a}),
/// capped by (min phi lambda1 / (2 c_delta2))^{1/delta}. Validates on the grid
/// that the envelope at time 0 sits below the algebraic lower-bound profile at
/// t1. Throws std::invalid_argument with a suggested larger t1 when the cap is
/// violated.
Envelope build_subsolution(const ModelSpec& model, const EigenPair& eig, double d_const, double t1,
                           double c_lower, double gamma_mm, const Grid& grid);

/// Pointwise envelope values at the given positions; one vector per component.
std::vector<std::vector<double>> eval_envelope(const Envelope& env, double t,
                                               const std::vector<double>& xs);

/// N_i[v] = d_t v_i + (-Delta)^{alpha_i} v_i - f_i(v) on the grid
/// (time derivative analytic, fractional Laplacian spectral).
std::vector<std::vector<double>> envelope_residual(const Envelope& env, const ModelSpec& model,
                                                   double t, const Grid& grid);

struct ResidualReport {
    double worst_value = 0.0; // min residual (super) or max residual (sub) over the sweep
    double worst_t = 0.0;
    double worst_x = 0.0;
    std::size_t worst_component = 0;
    double tolerance = 0.0; // in absolute residual units (tol_rel * a)
    bool pass = false;
};

/// Sweeps the residual over times and the core region; pass means
/// min >= -tol_rel*a (super) or max <= +tol_rel*a (sub).
ResidualReport envelope_residual_check(const Envelope& env, const ModelSpec& model,
                                       const std::vector<double>& times, const Grid& grid,
                                       double tol_rel = 1e-6);

struct LowerBoundReport {
    double c_lower = 0.0; // fitted on snapshots with t in [fit_lo, fit_hi]
    double gamma_mm = 0.0;
    struct Row {
        double t = 0.0;
        double min_ratio = 0.0;
        double argmin_x = 0.0;
        std::size_t component = 0;
    };
    std::vector<Row> rows;   // one per snapshot with t >= 1
    bool valid_later = true; // fitted constant still lower-bounds all later snapshots
};

/// Fits c = min u_i (t^{d/2a+1} + |x|^{d+2a}) / (t exp(-gamma_mm t)) over the
/// core region and snapshots with t in [fit_lo, fit_hi], then checks the
/// constant remains valid for every later snapshot. Throws CertificateError
/// when the fit window is empty or c is not positive.
LowerBoundReport lower_bound_check(const Trajectory& traj, const ModelSpec& model, double gamma_mm,
                                   double fit_lo = 1.0, double fit_hi = 2.0);

struct UpperBoundReport {
    struct Row {
        double t = 0.0;
        double c1 = 0.0; // max over the tail window of u_i |x|^{d+2a}
    };
    std::vector<Row> rows;
    double log_slope = 0.0; // least-squares slope of log C1(t)
    bool pass_growth = true;
};

/// Per-snapshot C1(t) on the tail window [L/16, L/8]; asserts finiteness and
/// log-growth slope <= 1.2 lambda1 (report only, never throws on failure).
UpperBoundReport upper_bound_check(const Trajectory& traj, const ModelSpec& model, double lambda1);

/// Exact evaluation of the Theorem constants from the built envelopes.
FrontBoundConstants front_constants(const Envelope& env_super, const Envelope& env_sub,
                                    const std::vector<double>& mu, double t0, double t1_sub);

/// Finds the smallest snapshot time t1 with env(t1, .) >= u(t0, .) outside the
/// guard band, sets env.t_shift = t1 - t0 and returns t1.
/// Throws CertificateError when no snapshot dominates.
double align_supersolution(Envelope& env, const Trajectory& traj, double t0);

struct DominationReport {
    bool pass = true;
    double worst_gap = 0.0; // most negative margin encountered
    double worst_t = 0.0;
    double worst_x = 0.0;
    std::size_t worst_component = 0;
};

/// u_i(t,x) <= env_i(t + t_shift, x) + tol for snapshots t >= t0 (guard band
/// excluded).
DominationReport check_super_domination(const Envelope& env, const Trajectory& traj, double t0,
                                        double tol);

/// u_i(t,x) >= env_i(t - t1, x) - tol for snapshots t >= t1.
DominationReport check_sub_domination(const Envelope& env, const Trajectory& traj, double t1,
                                      double tol);

} // namespace fracrd
