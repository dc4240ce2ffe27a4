#pragma once

#include <cstdint>
#include <vector>

namespace fracrd {

/// Full system definition for the m-component cooperative reaction-diffusion
/// model with per-component fractional diffusion exponents.
///
/// The reaction family is
///   f_i(s) = sum_{j != i} K_ij s_j + r_i s_i - q_i sat_i(s_i),
/// with sat_i(x) = x^{1+delta} on [0, Lambda], extended with continuous slope
/// (linearly) above Lambda and by zero below 0, so F is globally Lipschitz and
/// the dynamics are guarded against numerical overshoot outside the invariant
/// box [0, Lambda]^m.
class ModelSpec {
public:
    /// Validates all invariants; throws std::invalid_argument on violation:
    ///  - alpha_i in (0,1], nonincreasing, min alpha < 1
    ///  - K_ij > 0 for i != j, K_ii = 0
    ///  - q_i > 0, Lambda > 1, delta >= 2/(d + 2*min_alpha)
    ///  - sum_{j != i} K_ij + r_i - q_i Lambda^delta <= 0 for every i
    ModelSpec(std::vector<double> alpha, std::vector<std::vector<double>> coupling,
              std::vector<double> linear_rates, std::vector<double> saturation, double delta,
              double lambda_big, int dim = 1);

    std::size_t m() const { return alpha_.size(); }
    const std::vector<double>& alpha() const { return alpha_; }
    double alpha_min() const { return alpha_.back(); }
    const std::vector<std::vector<double>>& coupling() const { return coupling_; }
    const std::vector<double>& linear_rates() const { return linear_rates_; }
    const std::vector<double>& saturation() const { return saturation_; }
    double delta() const { return delta_; }
    double lambda_big() const { return lambda_big_; }
    int dim() const { return dim_; }

    double c_delta1() const; // min_i q_i
    double c_delta2() const; // m^{(1+delta)/2} max_i q_i

    /// FNV-1a hash of the defining parameters (run manifests).
    std::uint64_t hash() const;

private:
    std::vector<double> alpha_;
    std::vector<std::vector<double>> coupling_;
    std::vector<double> linear_rates_;
    std::vector<double> saturation_;
    double delta_;
    double lambda_big_;
    int dim_;
};

/// Default two-component benchmark model: alpha = (1, 0.5), K = [[0,1],[1,0]],
/// r = 0, q = 1, delta = 1, Lambda = 2, d = 1. Principal eigenvalue 1,
/// predicted spreading exponent 1/2.
ModelSpec preset_model();

struct HypothesisReport {
    double h1_lambda1 = 0.0;
    std::vector<double> h2_corner_values; // F(Lambda * 1)
    double h3_min_margin = 0.0;
    double h4_min_margin = 0.0;
    double lipschitz_estimate = 0.0; // l
    double cooperativity_min = 0.0;  // min sampled off-diagonal partial
    bool pass_h1 = false, pass_h2 = false, pass_h3 = false, pass_h4 = false, pass_h5 = false;
    bool pass_cooperative = false;

    bool all_pass() const {
        return pass_h1 && pass_h2 && pass_h3 && pass_h4 && pass_h5 && pass_cooperative;
    }
};

/// F(s) for s >= 0 componentwise; throws std::domain_error on negative input.
/// f(0) = 0 exactly.
std::vector<double> eval_reaction(const ModelSpec& model, const std::vector<double>& s);

/// Same reaction family extended to all of R^m (used by the time integrator,
/// which may produce roundoff-level overshoots); no sign precondition.
std::vector<double> eval_reaction_extended(const ModelSpec& model, const std::vector<double>& s);

/// DF(0) = K + diag(r).
std::vector<std::vector<double>> jacobian_at_zero(const ModelSpec& model);

/// Machine-checks (H1)-(H5) with n_samples points in [0, Lambda]^m
/// (deterministic given seed). Never throws on a failing hypothesis; the
/// report carries margins and pass flags.
HypothesisReport validate_hypotheses(const ModelSpec& model, std::size_t n_samples,
                                     std::uint64_t seed);

} // namespace fracrd
