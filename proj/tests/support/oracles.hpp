#pragma once

// Reference values computed independently of the library.

#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

// Standard J_n(x), n >= 0, x >= 0. Power series in long double for small x,
// Miller backward recurrence normalized by J_0 + 2 sum J_{2k} = 1 otherwise.
inline double bessel_j(int n, double x) {
    if (x == 0.0) return n == 0 ? 1.0 : 0.0;
    if (x <= 8.0) {
        const long double h = 0.5L * x;
        long double term = 1.0L;
        for (int k = 1; k <= n; ++k) term *= h / k;
        long double sum = term;
        for (int k = 1; k < 200; ++k) {
            term *= -h * h / (static_cast<long double>(k) * (k + n));
            sum += term;
            if (std::fabs(term) < 1e-30L * std::fabs(sum)) break;
        }
        return static_cast<double>(sum);
    }
    int start = static_cast<int>(std::max<double>(n, x)) + 40 + static_cast<int>(12 * std::cbrt(x));
    if (start % 2) ++start;
    long double next = 0.0L, cur = 1e-300L, norm = 0.0L, want = 0.0L;
    for (int k = start; k > 0; --k) {
        const long double prev = 2.0L * k / x * cur - next;
        next = cur;
        cur = prev;
        if (k - 1 == n) want = cur;
        if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0L * cur;
        if (std::fabs(cur) > 1e250L) {
            cur *= 1e-250L;
            next *= 1e-250L;
            norm *= 1e-250L;
            want *= 1e-250L;
        }
    }
    norm += cur;
    if (n == 0) want = cur;
    return static_cast<double>(want / norm);
}

// i^n J_n(x)
inline cplx paper_bessel(int n, double x) {
    const int m = ((std::abs(n) % 4) + 4) % 4;
    const cplx in[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return in[m] * bessel_j(std::abs(n), x);
}

// e^{it Delta} applied to z^n e^{-a |x|^2}, z = x1 + i x2:
// (1 + 4iat)^{-1-n} z^n exp(-a|x|^2 / (1 + 4iat)).
inline cplx gaussian_mode_evolved(int n, double a, double t, double x1, double x2) {
    const cplx d(1.0, 4.0 * a * t);
    const cplx z(x1, x2);
    return std::pow(d, -1 - n) * std::pow(z, n) * std::exp(-a * (x1 * x1 + x2 * x2) / d);
}

// e^{-pi|x|^2} evolved: (1 + 4 pi i t)^{-1} exp(-pi|x|^2/(1 + 4 pi i t)).
inline cplx gaussian_evolved(double t, double x1, double x2) {
    return gaussian_mode_evolved(0, M_PI, t, x1, x2);
}

// Same evolution for the L-periodic lattice of copies of the data.
inline cplx gaussian_evolved_periodic(double t, double x1, double x2, double period, int images = 3) {
    cplx s{};
    for (int a = -images; a <= images; ++a)
        for (int b = -images; b <= images; ++b)
            s += gaussian_evolved(t, x1 + a * period, x2 + b * period);
    return s;
}

}  // namespace oracle
