#include "fracrd/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>
#include <stdexcept>

namespace fracrd {

namespace {
// FFTW plan creation/destruction is not thread-safe; execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

int g_fft_threads = 1;
bool g_threads_initialized = false;
} // namespace

void set_fft_threads(int n_threads) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (n_threads < 1) n_threads = 1;
    if (!g_threads_initialized) {
        fftw_init_threads();
        g_threads_initialized = true;
    }
    g_fft_threads = n_threads;
}

struct RealFft::Impl {
    double* real = nullptr;
    fftw_complex* spec = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan inv = nullptr;
};

RealFft::RealFft(std::size_t n) : n_(n), impl_(new Impl) {
    if (n < 2) throw std::invalid_argument("RealFft: n must be >= 2");
    impl_->real = fftw_alloc_real(n_);
    impl_->spec = fftw_alloc_complex(n_ / 2 + 1);
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (g_threads_initialized) fftw_plan_with_nthreads(g_fft_threads);
    impl_->fwd = fftw_plan_dft_r2c_1d(static_cast<int>(n_), impl_->real, impl_->spec, FFTW_ESTIMATE);
    impl_->inv = fftw_plan_dft_c2r_1d(static_cast<int>(n_), impl_->spec, impl_->real, FFTW_ESTIMATE);
    if (!impl_->fwd || !impl_->inv) throw std::runtime_error("RealFft: FFTW plan creation failed");
}

RealFft::~RealFft() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (impl_->fwd) fftw_destroy_plan(impl_->fwd);
    if (impl_->inv) fftw_destroy_plan(impl_->inv);
    if (impl_->real) fftw_free(impl_->real);
    if (impl_->spec) fftw_free(impl_->spec);
}

void RealFft::forward(const double* field, std::complex<double>* spectrum) {
    std::memcpy(impl_->real, field, n_ * sizeof(double));
    fftw_execute(impl_->fwd);
    // std::complex<double> is layout-compatible with fftw_complex.
    std::memcpy(reinterpret_cast<fftw_complex*>(spectrum), impl_->spec,
                n_half() * sizeof(fftw_complex));
}

void RealFft::inverse(const std::complex<double>* spectrum, double* field) {
    std::memcpy(impl_->spec, reinterpret_cast<const fftw_complex*>(spectrum),
                n_half() * sizeof(fftw_complex));
    fftw_execute(impl_->inv);
    const double scale = 1.0 / static_cast<double>(n_);
    for (std::size_t j = 0; j < n_; ++j) field[j] = impl_->real[j] * scale;
}

void RealFft::apply_multiplier(std::vector<double>& field, const std::vector<double>& multiplier_half) {
    if (field.size() != n_ || multiplier_half.size() != n_half()) {
        throw std::invalid_argument("RealFft::apply_multiplier: size mismatch");
    }
    std::memcpy(impl_->real, field.data(), n_ * sizeof(double));
    fftw_execute(impl_->fwd);
    for (std::size_t k = 0; k < n_half(); ++k) {
        impl_->spec[k][0] *= multiplier_half[k];
        impl_->spec[k][1] *= multiplier_half[k];
    }
    fftw_execute(impl_->inv);
    const double scale = 1.0 / static_cast<double>(n_);
    for (std::size_t j = 0; j < n_; ++j) field[j] = impl_->real[j] * scale;
}

std::vector<double> periodic_convolve(const Grid& grid, const std::vector<double>& f,
                                      const std::vector<double>& g) {
    const std::size_t n = grid.n();
    if (f.size() != n || g.size() != n) {
        throw std::invalid_argument("periodic_convolve: field size mismatch");
    }
    // g is resampled from grid order to offset order: entry m holds g at the
    // signed periodic offset m*dx.
    std::vector<double> g_offset(n);
    const std::size_t half = n / 2;
    for (std::size_t m = 0; m < n; ++m) g_offset[m] = g[(m + half) % n];

    RealFft fft(n);
    std::vector<std::complex<double>> fs(fft.n_half()), gs(fft.n_half());
    fft.forward(f.data(), fs.data());
    fft.forward(g_offset.data(), gs.data());
    for (std::size_t k = 0; k < fs.size(); ++k) fs[k] *= gs[k] * grid.dx();
    std::vector<double> h(n);
    fft.inverse(fs.data(), h.data());
    return h;
}

} // namespace fracrd
