#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "fracrd/grid.hpp"

namespace fracrd {

/// The linearized comparison system d_t v + diag((-Delta)^{alpha_i}) v = B v
/// with B the all-l matrix. In Fourier variables the generator at frequency z
/// is A(z) + B with A(z) = diag(-z^{2 alpha_1}, ..., -z^{2 alpha_m}).
class LinearizedSystem {
public:
    /// alpha nonincreasing in (0,1]; l >= 0 (l = 0 gives the decoupled system).
    LinearizedSystem(std::vector<double> alpha, double l);

    std::size_t m() const { return alpha_.size(); }
    const std::vector<double>& alpha() const { return alpha_; }
    double alpha_max() const { return alpha_.front(); }
    double alpha_min() const { return alpha_.back(); }
    double l() const { return l_; }

    const Eigen::MatrixXd& b_matrix() const { return b_; }
    double b_norm2() const; // spectral norm of B = l * m

    /// Sector half-angle: arg(z) must lie in [0, pi / (4 alpha_1)).
    double sector_limit() const;
    bool in_sector(std::complex<double> z) const;

    /// A(z) as a diagonal complex matrix (principal branch of z^{2 alpha}).
    Eigen::MatrixXcd a_matrix(std::complex<double> z) const;

    /// diag(exp(s * A(z))) computed entrywise.
    Eigen::MatrixXcd exp_a(std::complex<double> z, double s) const;

private:
    std::vector<double> alpha_;
    double l_;
    Eigen::MatrixXd b_;
};

/// I_t(z) = int_0^t exp((t-s)(A(z)+B)) [exp(sB), A(z)] exp(sA(z)) ds by
/// composite 8-point Gauss-Legendre quadrature with n_panels panels.
/// Throws std::domain_error when z is outside the sector.
Eigen::MatrixXcd commutator_integral(const LinearizedSystem& sys, std::complex<double> z, double t,
                                     std::size_t n_panels);

/// || exp(t(A+B)) - exp(tB) exp(tA) + I_t(z) ||_2 with quadrature refined
/// until the residual is stable.
double duhamel_identity_residual(const LinearizedSystem& sys, std::complex<double> z, double t);

struct SectorNormSample {
    std::complex<double> z;
    double t = 0.0;
    double lhs = 0.0; // ||exp((A(z)+B) t)||_2
    double rhs = 0.0; // sum of the two sector exponentials
};

struct SectorNormReport {
    std::vector<SectorNormSample> samples;
    std::vector<SectorNormSample> violations; // lhs > rhs
    double min_slack = 0.0;                   // min over samples of rhs - lhs
    double max_slack = 0.0;
    bool pass = true;
};

/// Checks ||e^{(A(z)+B)t}||_2 <= e^{(||B|| - |z|^{2a1} cos(2 a1 arg z)) t}
///                              + e^{(||B|| - |z|^{2a} cos(2 a1 arg z)) t}
/// for every (z, t) sample. Violations are collected in the report, not thrown.
SectorNormReport sector_norm_check(const LinearizedSystem& sys,
                                   const std::vector<std::complex<double>>& z_samples,
                                   const std::vector<double>& t_samples);

/// The m x m matrix-valued kernel F^{-1}(exp((A(|.|)+B) t)) on the grid;
/// entries[i][j] is aligned with grid.x().
struct MatrixKernel {
    double t = 0.0;
    std::vector<std::vector<std::vector<double>>> entries;
};

MatrixKernel linear_matrix_kernel(const LinearizedSystem& sys, double t, const Grid& grid);

/// v(t) = F^{-1}(exp((A(|.|)+B) t)) * u0, the dominating linear field of the
/// comparison argument. u0 holds one vector per component.
std::vector<std::vector<double>> linear_upper_field(const LinearizedSystem& sys,
                                                    const std::vector<std::vector<double>>& u0,
                                                    double t, const Grid& grid);

/// Matrix 2-norm (largest singular value) helper shared by the checks.
double matrix_norm2(const Eigen::MatrixXcd& m);

} // namespace fracrd
