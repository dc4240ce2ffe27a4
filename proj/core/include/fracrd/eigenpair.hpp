#pragma once

#include <cstdint>
#include <vector>

#include "fracrd/model.hpp"

namespace fracrd {

/// Perron eigenpair of a Metzler matrix with positive off-diagonals.
/// phi1 > 0 componentwise, normalized so max_i phi1_i = 1, and
/// ||M phi1 - lambda1 phi1||_inf <= tol * (1 + |lambda1|).
struct EigenPair {
    double lambda1 = 0.0;
    std::vector<double> phi1;
};

/// Per-component slope bounds on the invariant box [0, Lambda]^m:
///   gamma_ii >= |d_i f_i|,  gamma_ij <= d_j f_i (i != j),
/// the Lipschitz bound l = max_i sup sum_j |d_j f_i|, and the matrix B with
/// all entries l used by the linearized comparison system.
struct CouplingBounds {
    std::vector<std::vector<double>> gamma;
    double l = 0.0;
    std::vector<std::vector<double>> b_lin;
    /// Damping rates delta_i = max(gamma_ii, gamma_mm + 1) used by the
    /// lower-bound argument.
    std::vector<double> damping;

    double gamma_mm() const { return gamma.back().back(); }
};

/// Power iteration on M + cI with shift c = 1 + max_i |M_ii|; stops when
/// successive Rayleigh quotients differ by less than tol and the residual
/// meets the EigenPair contract. Throws std::invalid_argument on a
/// nonpositive off-diagonal entry and ConvergenceError past the iteration cap.
EigenPair principal_eigenpair(const std::vector<std::vector<double>>& metzler, double tol);

/// Analytic slope bounds for the model's reaction family, cross-checked
/// against centered finite differences at sampled points (corners included).
/// Throws CertificateError if a sampled slope violates an analytic bound.
CouplingBounds coupling_bounds(const ModelSpec& model, std::size_t n_samples, std::uint64_t seed);

} // namespace fracrd
