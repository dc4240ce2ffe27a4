#include "fracrd/linsys.hpp"

#include <cmath>
#include <stdexcept>

#include "fracrd/fft.hpp"
#include "fracrd/matexp.hpp"

namespace fracrd {

namespace {

constexpr double kGauss8Nodes[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                                    0.9602898564975363};
constexpr double kGauss8Weights[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                                      0.1012285362903763};

std::complex<double> pow_principal(std::complex<double> z, double p) {
    if (z == std::complex<double>(0.0, 0.0)) return {0.0, 0.0};
    return std::pow(z, p);
}

} // namespace

LinearizedSystem::LinearizedSystem(std::vector<double> alpha, double l)
    : alpha_(std::move(alpha)), l_(l) {
    if (alpha_.empty()) throw std::invalid_argument("LinearizedSystem: empty alpha");
    for (std::size_t i = 0; i < alpha_.size(); ++i) {
        if (!(alpha_[i] > 0.0) || alpha_[i] > 1.0) {
            throw std::invalid_argument("LinearizedSystem: alpha must lie in (0, 1]");
        }
        if (i + 1 < alpha_.size() && alpha_[i + 1] > alpha_[i]) {
            throw std::invalid_argument("LinearizedSystem: alpha must be nonincreasing");
        }
    }
    if (l_ < 0.0) throw std::invalid_argument("LinearizedSystem: l must be >= 0");
    const auto m = static_cast<Eigen::Index>(alpha_.size());
    b_ = Eigen::MatrixXd::Constant(m, m, l_);
}

double LinearizedSystem::b_norm2() const { return l_ * static_cast<double>(m()); }

double LinearizedSystem::sector_limit() const { return M_PI / (4.0 * alpha_.front()); }

bool LinearizedSystem::in_sector(std::complex<double> z) const {
    if (z == std::complex<double>(0.0, 0.0)) return true; // arg 0 by convention
    const double arg = std::arg(z);
    return arg >= 0.0 && arg < sector_limit();
}

Eigen::MatrixXcd LinearizedSystem::a_matrix(std::complex<double> z) const {
    const auto m = static_cast<Eigen::Index>(alpha_.size());
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        a(i, i) = -pow_principal(z, 2.0 * alpha_[static_cast<std::size_t>(i)]);
    }
    return a;
}

Eigen::MatrixXcd LinearizedSystem::exp_a(std::complex<double> z, double s) const {
    const auto m = static_cast<Eigen::Index>(alpha_.size());
    Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        e(i, i) = std::exp(-s * pow_principal(z, 2.0 * alpha_[static_cast<std::size_t>(i)]));
    }
    return e;
}

double matrix_norm2(const Eigen::MatrixXcd& m) {
    return m.jacobiSvd().singularValues()(0);
}

Eigen::MatrixXcd commutator_integral(const LinearizedSystem& sys, std::complex<double> z, double t,
                                     std::size_t n_panels) {
    if (!sys.in_sector(z)) {
        throw std::domain_error("commutator_integral: z outside the sector [0, pi/(4 alpha_1))");
    }
    if (!(t >= 0.0)) throw std::invalid_argument("commutator_integral: t must be >= 0");
    if (n_panels == 0) throw std::invalid_argument("commutator_integral: n_panels must be >= 1");

    const auto m = static_cast<Eigen::Index>(sys.m());
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(m, m);
    if (t == 0.0) return acc;

    const Eigen::MatrixXcd a = sys.a_matrix(z);
    const Eigen::MatrixXcd apb = a + sys.b_matrix().cast<std::complex<double>>();
    const double panel = t / static_cast<double>(n_panels);
    for (std::size_t p = 0; p < n_panels; ++p) {
        const double mid = (static_cast<double>(p) + 0.5) * panel;
        for (int q = 0; q < 4; ++q) {
            for (int sign = -1; sign <= 1; sign += 2) {
                const double s = mid + 0.5 * panel * sign * kGauss8Nodes[q];
                const Eigen::MatrixXcd exp_sb =
                    matrix_exponential<double>(sys.b_matrix(), s).cast<std::complex<double>>();
                const Eigen::MatrixXcd commutator = exp_sb * a - a * exp_sb;
                const Eigen::MatrixXcd left = matrix_exponential<std::complex<double>>(apb, t - s);
                acc += (0.5 * panel * kGauss8Weights[q]) * (left * commutator * sys.exp_a(z, s));
            }
        }
    }
    return acc;
}

double duhamel_identity_residual(const LinearizedSystem& sys, std::complex<double> z, double t) {
    if (!sys.in_sector(z)) {
        throw std::domain_error("duhamel_identity_residual: z outside the sector");
    }
    const Eigen::MatrixXcd apb = sys.a_matrix(z) + sys.b_matrix().cast<std::complex<double>>();
    const Eigen::MatrixXcd lhs = matrix_exponential<std::complex<double>>(apb, t);
    const Eigen::MatrixXcd split =
        matrix_exponential<double>(sys.b_matrix(), t).cast<std::complex<double>>() * sys.exp_a(z, t);

    // Refine the quadrature until the residual is stable at oracle grade.
    std::size_t panels = 16;
    Eigen::MatrixXcd it = commutator_integral(sys, z, t, panels);
    double residual = matrix_norm2(lhs - split + it);
    for (int round = 0; round < 5; ++round) {
        panels *= 2;
        const Eigen::MatrixXcd it2 = commutator_integral(sys, z, t, panels);
        const double residual2 = matrix_norm2(lhs - split + it2);
        const double change = matrix_norm2(it2 - it);
        it = it2;
        residual = residual2;
        if (change < 1e-12 * (1.0 + matrix_norm2(it))) break;
    }
    return residual;
}

SectorNormReport sector_norm_check(const LinearizedSystem& sys,
                                   const std::vector<std::complex<double>>& z_samples,
                                   const std::vector<double>& t_samples) {
    SectorNormReport report;
    const double a1 = sys.alpha_max();
    const double am = sys.alpha_min();
    const double bnorm = sys.b_norm2();
    bool first = true;
    for (const auto& z : z_samples) {
        if (!sys.in_sector(z)) {
            throw std::domain_error("sector_norm_check: sample outside the sector");
        }
        const double az = std::abs(z);
        const double argz = (az == 0.0) ? 0.0 : std::arg(z);
        const double cosf = std::cos(2.0 * a1 * argz);
        for (double t : t_samples) {
            SectorNormSample sample;
            sample.z = z;
            sample.t = t;
            const Eigen::MatrixXcd apb =
                sys.a_matrix(z) + sys.b_matrix().cast<std::complex<double>>();
            sample.lhs = matrix_norm2(matrix_exponential<std::complex<double>>(apb, t));
            sample.rhs = std::exp((bnorm - std::pow(az, 2.0 * a1) * cosf) * t) +
                         std::exp((bnorm - std::pow(az, 2.0 * am) * cosf) * t);
            report.samples.push_back(sample);
            const double slack = sample.rhs - sample.lhs;
            if (first) {
                report.min_slack = report.max_slack = slack;
                first = false;
            } else {
                report.min_slack = std::min(report.min_slack, slack);
                report.max_slack = std::max(report.max_slack, slack);
            }
            if (slack < 0.0) {
                report.violations.push_back(sample);
                report.pass = false;
            }
        }
    }
    return report;
}

MatrixKernel linear_matrix_kernel(const LinearizedSystem& sys, double t, const Grid& grid) {
    if (!(t > 0.0)) throw std::invalid_argument("linear_matrix_kernel: t must be positive");
    const std::size_t m = sys.m();
    const std::size_t n = grid.n();
    const std::size_t nh = n / 2 + 1;

    // exp((A(|xi_k|)+B) t) is real symmetric-in-frequency, so each entry is a
    // real even multiplier and the kernel entries come out real.
    std::vector<Eigen::MatrixXd> spectra(nh);
    const auto& xi = grid.freq_abs_half();
    for (std::size_t k = 0; k < nh; ++k) {
        Eigen::MatrixXd apb = sys.b_matrix();
        for (std::size_t i = 0; i < m; ++i) {
            apb(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) -=
                std::pow(xi[k], 2.0 * sys.alpha()[i]);
        }
        spectra[k] = matrix_exponential<double>(apb, t);
    }

    MatrixKernel kernel;
    kernel.t = t;
    kernel.entries.assign(m, std::vector<std::vector<double>>(m));
    RealFft fft(n);
    std::vector<std::complex<double>> spec(nh);
    std::vector<double> raw(n);
    const std::size_t half = n / 2;
    const double inv_dx = 1.0 / grid.dx();
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            for (std::size_t k = 0; k < nh; ++k) {
                spec[k] = spectra[k](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            }
            fft.inverse(spec.data(), raw.data());
            auto& entry = kernel.entries[i][j];
            entry.resize(n);
            for (std::size_t p = 0; p < n; ++p) entry[p] = raw[(p + half) % n] * inv_dx;
        }
    }
    return kernel;
}

std::vector<std::vector<double>> linear_upper_field(const LinearizedSystem& sys,
                                                    const std::vector<std::vector<double>>& u0,
                                                    double t, const Grid& grid) {
    const std::size_t m = sys.m();
    if (u0.size() != m) throw std::invalid_argument("linear_upper_field: component count mismatch");
    const std::size_t n = grid.n();
    for (const auto& comp : u0) {
        if (comp.size() != n) throw std::invalid_argument("linear_upper_field: field size mismatch");
    }
    if (!(t >= 0.0)) throw std::invalid_argument("linear_upper_field: t must be >= 0");

    const std::size_t nh = n / 2 + 1;
    RealFft fft(n);
    std::vector<std::vector<std::complex<double>>> spectra(m,
                                                           std::vector<std::complex<double>>(nh));
    for (std::size_t i = 0; i < m; ++i) fft.forward(u0[i].data(), spectra[i].data());

    const auto& xi = grid.freq_abs_half();
    std::vector<std::vector<std::complex<double>>> out_spec(m,
                                                            std::vector<std::complex<double>>(nh));
    Eigen::VectorXcd in_vec(static_cast<Eigen::Index>(m)), out_vec(static_cast<Eigen::Index>(m));
    for (std::size_t k = 0; k < nh; ++k) {
        Eigen::MatrixXd apb = sys.b_matrix();
        for (std::size_t i = 0; i < m; ++i) {
            apb(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) -=
                std::pow(xi[k], 2.0 * sys.alpha()[i]);
        }
        const Eigen::MatrixXd e = matrix_exponential<double>(apb, t);
        for (std::size_t i = 0; i < m; ++i) in_vec(static_cast<Eigen::Index>(i)) = spectra[i][k];
        out_vec = e.cast<std::complex<double>>() * in_vec;
        for (std::size_t i = 0; i < m; ++i) out_spec[i][k] = out_vec(static_cast<Eigen::Index>(i));
    }

    std::vector<std::vector<double>> v(m, std::vector<double>(n));
    for (std::size_t i = 0; i < m; ++i) fft.inverse(out_spec[i].data(), v[i].data());
    return v;
}

} // namespace fracrd
