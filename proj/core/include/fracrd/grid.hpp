#pragma once

#include <cstddef>
#include <vector>

namespace fracrd {

/// Uniform periodic 1-D grid on [-L/2, L/2) with precomputed angular frequencies.
///
/// The unbounded line is modeled by a periodic box; the outer eighth of the
/// domain (|x| > 7L/16) is a guard band excluded from every fit and monitored
/// during time integration. "Core" windows used by fits and certificates stay
/// within |x| <= L/8.
class Grid {
public:
    /// n must be a power of two, L > 0.
    Grid(std::size_t n, double length);

    std::size_t n() const { return n_; }
    double length() const { return length_; }
    double dx() const { return dx_; }

    /// Node positions x_j = -L/2 + j*dx, j = 0..n-1.
    const std::vector<double>& x() const { return x_; }

    /// Signed angular frequencies xi_k = 2*pi*k/L, k mapped to [-n/2, n/2).
    const std::vector<double>& freq() const { return freq_; }

    /// |xi_k| for the half-complex (r2c) layout, k = 0..n/2.
    const std::vector<double>& freq_abs_half() const { return freq_abs_half_; }

    std::size_t index_of_zero() const { return n_ / 2; } // x = 0 node

    bool in_core(double x) const;       // |x| <= L/8
    bool in_guard_band(double x) const; // |x| > 7L/16

private:
    std::size_t n_;
    double length_;
    double dx_;
    std::vector<double> x_;
    std::vector<double> freq_;
    std::vector<double> freq_abs_half_;
};

} // namespace fracrd
