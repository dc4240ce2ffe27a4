#include <doctest.h>

#include <cmath>
#include <memory>
#include <stdexcept>

#include "fracrd/errors.hpp"
#include "fracrd/fft.hpp"
#include "fracrd/grid.hpp"
#include "fracrd/rng.hpp"
#include "fracrd/spectral.hpp"

using namespace fracrd;

TEST_CASE("grid invariants") {
    Grid grid(1024, 256.0);
    CHECK(grid.dx() * static_cast<double>(grid.n()) == doctest::Approx(grid.length()));
    CHECK(grid.x()[grid.index_of_zero()] == 0.0);
    CHECK(grid.freq()[0] == 0.0);
    CHECK(grid.freq()[1] == doctest::Approx(2.0 * M_PI / 256.0));
    CHECK(grid.freq()[1023] == doctest::Approx(-2.0 * M_PI / 256.0));
    CHECK_THROWS_AS(Grid(1000, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(Grid(1024, -1.0), std::invalid_argument);
}

TEST_CASE("periodic_convolve against a direct sum") {
    Grid grid(64, 8.0);
    SplitMix64 rng(3);
    std::vector<double> f(64), g(64);
    for (std::size_t j = 0; j < 64; ++j) {
        f[j] = rng.uniform(-1.0, 1.0);
        g[j] = rng.uniform(-1.0, 1.0);
    }
    const auto h = periodic_convolve(grid, f, g);
    // direct: h(x_j) = dx * sum_k f(x_k) g(offset (j-k) dx)
    for (std::size_t j = 0; j < 64; j += 7) {
        double acc = 0.0;
        for (std::size_t k = 0; k < 64; ++k) {
            const std::size_t off = (j + 64 - k) % 64;
            acc += f[k] * g[(off + 32) % 64];
        }
        acc *= grid.dx();
        CHECK(h[j] == doctest::Approx(acc).epsilon(1e-12));
    }
}

TEST_CASE("fractional laplacian of a constant vanishes") {
    Grid grid(256, 100.0);
    std::vector<double> field(256, 3.7);
    const auto out = frac_laplacian(field, 0.5, grid);
    for (double v : out) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("plane waves are eigenfunctions") {
    // cos(2x) on L = 2*pi*64: exactly the grid mode k = 128; |2|^{2*0.5} = 2
    const double length = 2.0 * M_PI * 64.0;
    Grid grid(4096, length);
    std::vector<double> field(grid.n());
    for (std::size_t j = 0; j < grid.n(); ++j) field[j] = std::cos(2.0 * grid.x()[j]);
    const auto out = frac_laplacian(field, 0.5, grid);
    for (std::size_t j = 0; j < grid.n(); j += 97) {
        CHECK(out[j] == doctest::Approx(2.0 * field[j]).epsilon(1e-10).scale(1.0));
    }
}

TEST_CASE("half laplacian of the Cauchy profile") {
    // (-Delta)^{1/2} (1+x^2)^{-1} = (1-x^2)/(1+x^2)^2 (Poisson semigroup
    // generator applied at t = 1)
    Grid grid(1 << 15, 4096.0);
    std::vector<double> w(grid.n());
    for (std::size_t j = 0; j < grid.n(); ++j) {
        w[j] = 1.0 / (1.0 + grid.x()[j] * grid.x()[j]);
    }
    const auto out = frac_laplacian(w, 0.5, grid);
    for (std::size_t j = 0; j < grid.n(); ++j) {
        const double x = grid.x()[j];
        if (std::abs(x) > grid.length() / 8.0) continue;
        const double expected = (1.0 - x * x) / ((1.0 + x * x) * (1.0 + x * x));
        CHECK(std::abs(out[j] - expected) < 1e-6);
    }
}

TEST_CASE("linearity to machine precision") {
    Grid grid(2048, 128.0);
    SplitMix64 rng(77);
    std::vector<double> f(grid.n()), g(grid.n());
    for (std::size_t j = 0; j < grid.n(); ++j) {
        f[j] = rng.uniform(-1.0, 1.0);
        g[j] = rng.uniform(-1.0, 1.0);
    }
    const double a = 2.25, b = -0.75;
    std::vector<double> combo(grid.n());
    for (std::size_t j = 0; j < grid.n(); ++j) combo[j] = a * f[j] + b * g[j];
    const auto lap_combo = frac_laplacian(combo, 0.75, grid);
    const auto lap_f = frac_laplacian(f, 0.75, grid);
    const auto lap_g = frac_laplacian(g, 0.75, grid);
    double scale = 0.0;
    for (double v : lap_combo) scale = std::max(scale, std::abs(v));
    for (std::size_t j = 0; j < grid.n(); ++j) {
        CHECK(std::abs(lap_combo[j] - (a * lap_f[j] + b * lap_g[j])) < 1e-12 * scale);
    }
}

TEST_CASE("alpha domain errors") {
    Grid grid(256, 64.0);
    std::vector<double> field(256, 1.0);
    CHECK_THROWS_AS(frac_laplacian(field, 0.0, grid), std::invalid_argument);
    CHECK_THROWS_AS(frac_laplacian(field, 1.5, grid), std::invalid_argument);
    CHECK_THROWS_AS(heat_kernel(0.5, 0.0, grid), std::invalid_argument);
    CHECK_THROWS_AS(heat_kernel(0.5, -1.0, grid), std::invalid_argument);
}

TEST_CASE("Cauchy kernel closed form") {
    Grid grid(1 << 17, 16384.0);
    const auto profile = heat_kernel(0.5, 1.0, grid);
    CHECK(profile.values[grid.index_of_zero()] == doctest::Approx(1.0 / M_PI).epsilon(1e-8));
    for (std::size_t j = 0; j < grid.n(); ++j) {
        const double x = grid.x()[j];
        if (std::abs(x) > 8.0) continue;
        const double expected = (1.0 / M_PI) / (1.0 + x * x);
        CHECK(std::abs(profile.values[j] - expected) / expected < 1e-6);
    }
}

TEST_CASE("Gaussian kernel closed form at alpha = 1") {
    Grid grid(1 << 12, 64.0);
    const auto profile = heat_kernel(1.0, 1.0, grid);
    for (std::size_t j = 0; j < grid.n(); ++j) {
        const double x = grid.x()[j];
        if (std::abs(x) > 8.0) continue;
        const double expected = std::exp(-x * x / 4.0) / std::sqrt(4.0 * M_PI);
        CHECK(std::abs(profile.values[j] - expected) < 1e-8);
    }
}

TEST_CASE("kernel mass is one") {
    Grid grid(1 << 14, 1024.0);
    for (double alpha : {0.3, 0.5, 0.75, 1.0}) {
        for (double t : {0.5, 1.0, 3.0}) {
            const auto profile = heat_kernel(alpha, t, grid);
            double mass = 0.0;
            for (double v : profile.values) mass += v;
            CHECK(std::abs(mass * grid.dx() - 1.0) < 1e-6);
        }
    }
}

TEST_CASE("self-similarity via matched grids") {
    // p(t, x) = t^{-1/2a} p(1, t^{-1/2a} x): computing p(1, .) on the grid
    // scaled by t^{-1/2a} makes the identity hold at the nodes.
    for (double alpha : {0.25, 0.5, 0.75}) {
        for (double t : {0.5, 1.0, 2.0}) {
            const std::size_t n = 1 << 14;
            const double length = 512.0;
            Grid grid_t(n, length);
            const double scale = std::pow(t, -1.0 / (2.0 * alpha));
            Grid grid_1(n, length * scale);
            const auto pt = heat_kernel(alpha, t, grid_t);
            const auto p1 = heat_kernel(alpha, 1.0, grid_1);
            for (std::size_t j = 0; j < n; ++j) {
                if (!grid_t.in_core(grid_t.x()[j])) continue;
                const double lhs = pt.values[j];
                const double rhs = scale * p1.values[j];
                if (lhs > 1e-300) CHECK(std::abs(lhs - rhs) / lhs < 1e-6);
            }
        }
    }
}

TEST_CASE("semigroup property under discrete convolution") {
    struct Case {
        double alpha;
        std::size_t n;
    };
    // alpha = 0.25 has a slowly decaying spectrum and needs the fine grid.
    for (const auto& c : {Case{0.5, 1 << 14}, Case{0.75, 1 << 14}, Case{0.25, 1 << 19}}) {
        Grid grid(c.n, 512.0);
        const double t1 = 0.7, t2 = 1.3;
        const auto p1 = heat_kernel(c.alpha, t1, grid);
        const auto p2 = heat_kernel(c.alpha, t2, grid);
        const auto p12 = heat_kernel(c.alpha, t1 + t2, grid);
        const auto conv = periodic_convolve(grid, p1.values, p2.values);
        for (std::size_t j = 0; j < grid.n(); ++j) {
            if (!grid.in_core(grid.x()[j])) continue;
            if (p12.values[j] > 1e-300) {
                CHECK(std::abs(conv[j] - p12.values[j]) / p12.values[j] < 1e-6);
            }
        }
    }
}

TEST_CASE("tail slopes of stable kernels") {
    SUBCASE("alpha = 0.5 decays like x^-2") {
        Grid grid(1 << 15, 4096.0);
        const auto profile = heat_kernel(0.5, 1.0, grid);
        const auto fit = kernel_tail_fit(profile, grid, grid.length() / 80.0, grid.length() / 8.0);
        CHECK(fit.algebraic);
        CHECK(fit.slope == doctest::Approx(-2.0).epsilon(0.025));
    }
    SUBCASE("alpha = 0.25 decays like x^-1.5") {
        Grid grid(1 << 19, 1024.0);
        const auto profile = heat_kernel(0.25, 1.0, grid);
        const auto fit = kernel_tail_fit(profile, grid, grid.length() / 80.0, grid.length() / 8.0);
        CHECK(fit.algebraic);
        CHECK(fit.slope == doctest::Approx(-1.5).epsilon(1.0 / 30.0));
    }
    SUBCASE("Gaussian is flagged non-algebraic") {
        Grid grid(1 << 14, 512.0);
        const auto profile = heat_kernel(1.0, 1.0, grid);
        const auto fit = kernel_tail_fit(profile, grid, grid.length() / 80.0, grid.length() / 8.0);
        CHECK_FALSE(fit.algebraic);
    }
    SUBCASE("window preconditions") {
        Grid grid(1 << 14, 512.0);
        const auto profile = heat_kernel(0.5, 1.0, grid);
        CHECK_THROWS_AS(kernel_tail_fit(profile, grid, 30.0, 64.0), std::invalid_argument);
        CHECK_THROWS_AS(kernel_tail_fit(profile, grid, 24.0, 250.0), std::invalid_argument);
    }
}

TEST_CASE("two-sided tail sandwich is grid stable") {
    for (double alpha : {0.25, 0.5, 0.75}) {
        for (double t : {1.0, 2.0, 4.0}) {
            const std::size_t n = (alpha == 0.25) ? (1 << 18) : (1 << 14);
            Grid coarse(n, 1024.0);
            Grid fine(2 * n, 1024.0);
            const auto pc = heat_kernel(alpha, t, coarse);
            const auto pf = heat_kernel(alpha, t, fine);
            CHECK(pc.tail_constant_lower > 0.0);
            CHECK(std::isfinite(pc.tail_constant_upper));
            const double ratio_c = pc.tail_constant_upper / pc.tail_constant_lower;
            const double ratio_f = pf.tail_constant_upper / pf.tail_constant_lower;
            CHECK(std::abs(ratio_c - ratio_f) / ratio_f < 0.10);
        }
    }
}

TEST_CASE("convolution lower bound: explicit Cauchy oracle") {
    // p_{1/2}(1) * (1 + |.|^2)^{-1} = pi p_1 * p_2-family: LHS = 2/(4+x^2),
    // RHS = (1+x^2)^{-1}; the ratio 2(1+x^2)/(4+x^2) attains its minimum 1/2
    // at x = 0.
    Grid grid(1 << 15, 2048.0);
    const auto report = kernel_convolution_bound_check(0.5, 0.5, 2.0, 1.0, grid);
    CHECK_FALSE(report.origin_regularized);
    CHECK(report.min_ratio == doctest::Approx(0.5).epsilon(0.01));
    CHECK(std::abs(report.argmin_x) < grid.dx() * 1.5);
}

TEST_CASE("convolution lower bound: stability under refinement") {
    Grid coarse(1 << 13, 1024.0);
    Grid fine(1 << 15, 1024.0);
    const auto rc = kernel_convolution_bound_check(0.5, 0.5, 2.0, 1.0, coarse);
    const auto rf = kernel_convolution_bound_check(0.5, 0.5, 2.0, 1.0, fine);
    CHECK(rc.min_ratio > 0.0);
    CHECK(std::abs(rc.min_ratio - rf.min_ratio) / rf.min_ratio < 0.02);
}

TEST_CASE("convolution lower bound: Gaussian display at s = 0") {
    Grid grid(1 << 14, 512.0);
    const auto report = kernel_convolution_bound_check(1.0, 0.5, 2.0, 0.0, grid);
    CHECK(report.origin_regularized);
    CHECK(report.min_ratio > 0.0);
    // Away from the regularized singular cell the display holds with its
    // explicit constant (4 pi (t-s))^{-1/2}.
    CHECK(report.min_ratio_outer >= 1.0);
}

TEST_CASE("convolution lower bound: s = t-1 boundary is defined") {
    Grid grid(1 << 13, 512.0);
    const auto report = kernel_convolution_bound_check(0.75, 0.5, 2.0, 1.0, grid);
    CHECK(report.min_ratio > 0.0);
    CHECK_THROWS_AS(kernel_convolution_bound_check(0.75, 0.5, 2.0, 1.5, grid),
                    std::invalid_argument);
    CHECK_THROWS_AS(kernel_convolution_bound_check(0.75, 0.5, 0.5, 0.0, grid),
                    std::invalid_argument);
}
