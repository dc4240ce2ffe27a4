#include "fracrd/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace fracrd {

namespace {
bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }
} // namespace

Grid::Grid(std::size_t n, double length) : n_(n), length_(length) {
    if (!is_power_of_two(n)) {
        throw std::invalid_argument("Grid: n must be a power of two, got " + std::to_string(n));
    }
    if (n < 8) {
        throw std::invalid_argument("Grid: n must be at least 8");
    }
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw std::invalid_argument("Grid: L must be positive and finite");
    }
    dx_ = length_ / static_cast<double>(n_);

    x_.resize(n_);
    for (std::size_t j = 0; j < n_; ++j) {
        x_[j] = -0.5 * length_ + static_cast<double>(j) * dx_;
    }

    const double dxi = 2.0 * M_PI / length_;
    freq_.resize(n_);
    for (std::size_t k = 0; k < n_; ++k) {
        const auto ks = (k <= n_ / 2 - 1) ? static_cast<long long>(k)
                                          : static_cast<long long>(k) - static_cast<long long>(n_);
        freq_[k] = dxi * static_cast<double>(ks);
    }

    freq_abs_half_.resize(n_ / 2 + 1);
    for (std::size_t k = 0; k <= n_ / 2; ++k) {
        freq_abs_half_[k] = dxi * static_cast<double>(k);
    }
}

bool Grid::in_core(double x) const { return std::abs(x) <= length_ / 8.0; }

bool Grid::in_guard_band(double x) const { return std::abs(x) > 7.0 * length_ / 16.0; }

} // namespace fracrd
