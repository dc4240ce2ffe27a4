#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include "fracrd/grid.hpp"

namespace fracrd {

/// Real-to-halfcomplex FFT pair of a fixed size, backed by FFTW.
///
/// Plans are created with FFTW_ESTIMATE so the algorithm choice (and hence the
/// floating-point result) is deterministic across runs. Instances own their
/// work buffers and are not safe for concurrent use; create one per thread.
class RealFft {
public:
    explicit RealFft(std::size_t n);
    ~RealFft();

    RealFft(const RealFft&) = delete;
    RealFft& operator=(const RealFft&) = delete;

    std::size_t n() const { return n_; }
    std::size_t n_half() const { return n_ / 2 + 1; }

    /// spectrum_k = sum_j field_j exp(-i 2 pi j k / n), k = 0..n/2.
    void forward(const double* field, std::complex<double>* spectrum);

    /// field_j = (1/n) sum_k spectrum_k exp(+i 2 pi j k / n); 1/n applied here.
    void inverse(const std::complex<double>* spectrum, double* field);

    /// In-place multiplication of a field by a real even Fourier multiplier
    /// given on the half-complex bins k = 0..n/2.
    void apply_multiplier(std::vector<double>& field, const std::vector<double>& multiplier_half);

private:
    struct Impl;
    std::size_t n_;
    std::unique_ptr<Impl> impl_;
};

/// Number of threads used by FFTW plans created after this call (1 = serial).
void set_fft_threads(int n_threads);

/// dx-scaled periodic convolution h(x_j) ~ integral f(y) g(x_j - y) dy.
/// f and g are given in grid order (aligned with grid.x()).
std::vector<double> periodic_convolve(const Grid& grid, const std::vector<double>& f,
                                      const std::vector<double>& g);

} // namespace fracrd
