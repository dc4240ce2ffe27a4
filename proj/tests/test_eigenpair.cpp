#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

#include "fracrd/eigenpair.hpp"
#include "fracrd/errors.hpp"
#include "fracrd/rng.hpp"

using namespace fracrd;

namespace {

// Dense-eigensolver oracle: full spectrum, pick the eigenvalue with maximal
// real part, normalize the eigenvector to sup-norm 1 with positive sign.
std::pair<double, std::vector<double>> dense_perron(const std::vector<std::vector<double>>& m) {
    const auto dim = static_cast<Eigen::Index>(m.size());
    Eigen::MatrixXd mat(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) mat(i, j) = m[i][j];
    Eigen::EigenSolver<Eigen::MatrixXd> solver(mat);
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < dim; ++i) {
        if (solver.eigenvalues()(i).real() > solver.eigenvalues()(best).real()) best = i;
    }
    REQUIRE(std::abs(solver.eigenvalues()(best).imag()) < 1e-9);
    Eigen::VectorXcd vec = solver.eigenvectors().col(best);
    Eigen::Index argmax = 0;
    for (Eigen::Index i = 1; i < dim; ++i) {
        if (std::abs(vec(i)) > std::abs(vec(argmax))) argmax = i;
    }
    vec /= vec(argmax);
    std::vector<double> phi(m.size());
    for (Eigen::Index i = 0; i < dim; ++i) {
        REQUIRE(std::abs(vec(i).imag()) < 1e-9);
        phi[static_cast<std::size_t>(i)] = vec(i).real();
    }
    return {solver.eigenvalues()(best).real(), phi};
}

std::vector<std::vector<double>> random_metzler(SplitMix64& rng, std::size_t m) {
    std::vector<std::vector<double>> mat(m, std::vector<double>(m));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            mat[i][j] = (i == j) ? rng.uniform(-1.5, 1.5) : rng.uniform(0.05, 2.0);
        }
    }
    return mat;
}

} // namespace

TEST_CASE("symmetric circulant pair") {
    const auto pair = principal_eigenpair({{0.0, 1.0}, {1.0, 0.0}}, 1e-13);
    CHECK(pair.lambda1 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pair.phi1[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(pair.phi1[1] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("nonsymmetric example with Perron root 1") {
    // char poly lambda^2 + lambda - 2 = 0 -> roots 1, -2; kernel of M - I is (1,1)
    const auto pair = principal_eigenpair({{-1.0, 2.0}, {1.0, 0.0}}, 1e-13);
    CHECK(pair.lambda1 == doctest::Approx(1.0).epsilon(1e-11));
    CHECK(pair.phi1[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(pair.phi1[1] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(principal_eigenpair({{0.0, -1.0}, {1.0, 0.0}}, 1e-12), std::invalid_argument);
    CHECK_THROWS_AS(principal_eigenpair({{0.0, 0.0}, {1.0, 0.0}}, 1e-12), std::invalid_argument);
}

TEST_CASE("scalar matrix") {
    const auto pair = principal_eigenpair({{-3.5}}, 1e-12);
    CHECK(pair.lambda1 == -3.5);
    CHECK(pair.phi1[0] == 1.0);
}

TEST_CASE("matches the dense oracle on seeded random Metzler matrices") {
    SplitMix64 rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t m = 2 + static_cast<std::size_t>(rng.next_u64() % 4); // 2..5
        const auto mat = random_metzler(rng, m);
        const auto pair = principal_eigenpair(mat, 1e-13);
        const auto [lam, phi] = dense_perron(mat);
        CHECK(std::abs(pair.lambda1 - lam) <= 1e-10 * (1.0 + std::abs(lam)));
        for (std::size_t i = 0; i < m; ++i) {
            CHECK(std::abs(pair.phi1[i] - phi[i]) <= 1e-8);
        }
    }
}

TEST_CASE("residual contract") {
    SplitMix64 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        const auto mat = random_metzler(rng, 5);
        const auto pair = principal_eigenpair(mat, 1e-12);
        double resid = 0.0;
        for (std::size_t i = 0; i < 5; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < 5; ++j) acc += mat[i][j] * pair.phi1[j];
            resid = std::max(resid, std::abs(acc - pair.lambda1 * pair.phi1[i]));
        }
        CHECK(resid <= 1e-10 * (1.0 + std::abs(pair.lambda1)));
    }
}

TEST_CASE("scale and shift equivariance") {
    SplitMix64 rng(7);
    const auto mat = random_metzler(rng, 4);
    const auto base = principal_eigenpair(mat, 1e-13);

    auto scaled = mat;
    for (auto& row : scaled)
        for (auto& v : row) v *= 3.0;
    const auto pair_scaled = principal_eigenpair(scaled, 1e-13);
    CHECK(pair_scaled.lambda1 == doctest::Approx(3.0 * base.lambda1).epsilon(1e-10));
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(std::abs(pair_scaled.phi1[i] - base.phi1[i]) < 1e-9);
    }

    auto shifted = mat;
    for (std::size_t i = 0; i < 4; ++i) shifted[i][i] += 2.5;
    const auto pair_shifted = principal_eigenpair(shifted, 1e-13);
    CHECK(pair_shifted.lambda1 == doctest::Approx(base.lambda1 + 2.5).epsilon(1e-10));
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(std::abs(pair_shifted.phi1[i] - base.phi1[i]) < 1e-9);
    }
}

TEST_CASE("coupling bounds for the preset") {
    const auto model = preset_model();
    const auto bounds = coupling_bounds(model, 500, 31);
    // gamma_ii = max(|r_i|, |r_i - (1+delta) q Lambda^delta|) = |0 - 2*1*2| = 4
    CHECK(bounds.gamma[0][0] == doctest::Approx(4.0));
    CHECK(bounds.gamma[1][1] == doctest::Approx(4.0));
    CHECK(bounds.gamma[0][1] == doctest::Approx(1.0));
    CHECK(bounds.gamma[1][0] == doctest::Approx(1.0));
    CHECK(bounds.l == doctest::Approx(5.0));
    CHECK(bounds.b_lin[0][0] == doctest::Approx(5.0));
    CHECK(bounds.b_lin[1][1] == doctest::Approx(5.0));
    // delta_i = max(gamma_ii, gamma_mm + 1)
    CHECK(bounds.damping[0] == doctest::Approx(5.0));
    CHECK(bounds.damping[1] == doctest::Approx(5.0));
}

TEST_CASE("coupling bounds scalar example") {
    // m=1, r=1, q=1, delta=1, Lambda=2: gamma_11 = max(1, |1-4|) = 3
    ModelSpec model({0.5}, {{0.0}}, {1.0}, {1.0}, 1.0, 2.0);
    const auto bounds = coupling_bounds(model, 200, 5);
    CHECK(bounds.gamma[0][0] == doctest::Approx(3.0));
    CHECK(bounds.l == doctest::Approx(3.0));
}

TEST_CASE("off-diagonal gamma equals K and lower-bounds sampled partials") {
    ModelSpec model({1.0, 0.5}, {{0.0, 2.0}, {3.0, 0.0}}, {0.0, 0.0}, {3.0, 3.0}, 1.0, 2.0);
    const auto bounds = coupling_bounds(model, 300, 17);
    CHECK(bounds.gamma[0][1] == 2.0);
    CHECK(bounds.gamma[1][0] == 3.0);
    SplitMix64 rng(23);
    const double h = 1e-6;
    for (int k = 0; k < 100; ++k) {
        std::vector<double> s = {rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0)};
        for (std::size_t i = 0; i < 2; ++i) {
            const std::size_t j = 1 - i;
            auto sp = s, sm = s;
            sp[j] += h;
            const double d = (eval_reaction_extended(model, sp)[i] -
                              eval_reaction_extended(model, sm)[i]) /
                             h;
            CHECK(d >= bounds.gamma[i][j] - 1e-8);
        }
    }
}
