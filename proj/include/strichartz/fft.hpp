#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace strichartz {

using cplx = std::complex<double>;

// Unnormalized complex DFTs backed by FFTW. Plans are created with
// FFTW_ESTIMATE so the chosen algorithm, and therefore every output bit,
// is the same from run to run.
//
// forward:  X_k = sum_m x_m e^{-2 pi i k m / N}
// backward: x_m = sum_k X_k e^{+2 pi i k m / N}   (no 1/N)
class Fft1d {
public:
    explicit Fft1d(std::size_t n);
    ~Fft1d();
    Fft1d(const Fft1d&) = delete;
    Fft1d& operator=(const Fft1d&) = delete;
    Fft1d(Fft1d&& other) noexcept;
    Fft1d& operator=(Fft1d&& other) noexcept;

    std::size_t size() const { return n_; }
    void forward(std::span<cplx> data) const;
    void backward(std::span<cplx> data) const;

private:
    std::size_t n_ = 0;
    void* forward_plan_ = nullptr;
    void* backward_plan_ = nullptr;
    cplx* scratch_ = nullptr;
};

// Row-major n0 x n1 transform, same conventions as Fft1d.
class Fft2d {
public:
    Fft2d(std::size_t n0, std::size_t n1);
    ~Fft2d();
    Fft2d(const Fft2d&) = delete;
    Fft2d& operator=(const Fft2d&) = delete;

    void forward(std::span<cplx> data) const;
    void backward(std::span<cplx> data) const;

private:
    std::size_t n0_, n1_;
    void* forward_plan_ = nullptr;
    void* backward_plan_ = nullptr;
    cplx* scratch_ = nullptr;
};

// Version string of the FFT backend.
const char* fft_backend_version();

// Frequency (in cycles per unit length) of DFT bin k for n samples spaced dx.
inline double dft_frequency(std::size_t k, std::size_t n, double dx) {
    const auto ki = static_cast<long long>(k);
    const auto ni = static_cast<long long>(n);
    const long long signed_k = (2 * ki < ni) ? ki : ki - ni;
    return static_cast<double>(signed_k) / (static_cast<double>(n) * dx);
}

}  // namespace strichartz
