#include "strichartz/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace strichartz {

namespace {

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

void execute(void* plan, cplx* scratch, std::span<cplx> data) {
    std::copy(data.begin(), data.end(), scratch);
    fftw_execute(static_cast<fftw_plan>(plan));
    std::copy(scratch, scratch + data.size(), data.begin());
}

}  // namespace

Fft1d::Fft1d(std::size_t n) : n_(n) {
    if (n == 0) throw std::invalid_argument("Fft1d: size must be positive");
    scratch_ = static_cast<cplx*>(fftw_malloc(sizeof(cplx) * n));
    const int ni = static_cast<int>(n);
    forward_plan_ = fftw_plan_dft_1d(ni, as_fftw(scratch_), as_fftw(scratch_), FFTW_FORWARD,
                                     FFTW_ESTIMATE);
    backward_plan_ = fftw_plan_dft_1d(ni, as_fftw(scratch_), as_fftw(scratch_), FFTW_BACKWARD,
                                      FFTW_ESTIMATE);
}

Fft1d::~Fft1d() {
    if (forward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
    if (backward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
    if (scratch_) fftw_free(scratch_);
}

Fft1d::Fft1d(Fft1d&& other) noexcept
    : n_(other.n_),
      forward_plan_(std::exchange(other.forward_plan_, nullptr)),
      backward_plan_(std::exchange(other.backward_plan_, nullptr)),
      scratch_(std::exchange(other.scratch_, nullptr)) {}

Fft1d& Fft1d::operator=(Fft1d&& other) noexcept {
    if (this != &other) {
        std::swap(n_, other.n_);
        std::swap(forward_plan_, other.forward_plan_);
        std::swap(backward_plan_, other.backward_plan_);
        std::swap(scratch_, other.scratch_);
    }
    return *this;
}

void Fft1d::forward(std::span<cplx> data) const {
    if (data.size() != n_) throw std::invalid_argument("Fft1d::forward: size mismatch");
    execute(forward_plan_, scratch_, data);
}

void Fft1d::backward(std::span<cplx> data) const {
    if (data.size() != n_) throw std::invalid_argument("Fft1d::backward: size mismatch");
    execute(backward_plan_, scratch_, data);
}

Fft2d::Fft2d(std::size_t n0, std::size_t n1) : n0_(n0), n1_(n1) {
    if (n0 == 0 || n1 == 0) throw std::invalid_argument("Fft2d: sizes must be positive");
    scratch_ = static_cast<cplx*>(fftw_malloc(sizeof(cplx) * n0 * n1));
    const int a = static_cast<int>(n0);
    const int b = static_cast<int>(n1);
    forward_plan_ =
        fftw_plan_dft_2d(a, b, as_fftw(scratch_), as_fftw(scratch_), FFTW_FORWARD, FFTW_ESTIMATE);
    backward_plan_ =
        fftw_plan_dft_2d(a, b, as_fftw(scratch_), as_fftw(scratch_), FFTW_BACKWARD, FFTW_ESTIMATE);
}

Fft2d::~Fft2d() {
    if (forward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
    if (backward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
    if (scratch_) fftw_free(scratch_);
}

void Fft2d::forward(std::span<cplx> data) const {
    if (data.size() != n0_ * n1_) throw std::invalid_argument("Fft2d::forward: size mismatch");
    execute(forward_plan_, scratch_, data);
}

void Fft2d::backward(std::span<cplx> data) const {
    if (data.size() != n0_ * n1_) throw std::invalid_argument("Fft2d::backward: size mismatch");
    execute(backward_plan_, scratch_, data);
}

const char* fft_backend_version() { return fftw_version; }

}  // namespace strichartz
