#include "strichartz/bessel.hpp"

#include "strichartz/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace strichartz {

namespace {

constexpr double pi = std::numbers::pi;
constexpr int max_order = 6;
constexpr cplx I{0.0, 1.0};

using Derivs = std::array<cplx, max_order + 1>;

// Points on [0, pi] (P intervals) that make the aliasing terms J_{2P - n}(x)
// negligible: 2P - n must clear the turning point x by a few Airy widths.
int unshifted_intervals(int n, double x) {
    const double need = static_cast<double>(n) + x + 12.0 * std::cbrt(x) + 40.0;
    return std::max(16, static_cast<int>(std::ceil(0.5 * need)));
}

// cos(pi * k * n / P) with the argument reduced in integers.
double cos_reduced(long long k, long long n, long long period_half) {
    const long long two_p = 2 * period_half;
    const long long r = (k * n) % two_p;
    return std::cos(pi * static_cast<double>(r) / static_cast<double>(period_half));
}

// Half-range trapezoid: B^{(k)} = (1/pi) int_0^pi (i cos t)^k e^{ix cos t} cos(n t) dt.
Derivs sum_unshifted(int n, double x, int intervals, int order) {
    Derivs out{};
    for (int k = 0; k <= intervals; ++k) {
        const double theta = pi * static_cast<double>(k) / static_cast<double>(intervals);
        const double c = std::cos(theta);
        const double end = (k == 0 || k == intervals) ? 0.5 : 1.0;
        const double w = end * cos_reduced(k, n, intervals) / static_cast<double>(intervals);
        cplx term = w * std::polar(1.0, x * c);
        out[0] += term;
        for (int o = 1; o <= order; ++o) {
            term *= I * c;
            out[o] += term;
        }
    }
    return out;
}

// Full-period trapezoid on Im(theta) = tau.
Derivs sum_shifted(int n, double x, double tau, int points, int order) {
    Derivs out{};
    const double ch = std::cosh(tau);
    const double sh = std::sinh(tau);
    const double nt = static_cast<double>(n) * tau;
    for (int k = 0; k < points; ++k) {
        const double theta = 2.0 * pi * static_cast<double>(k) / static_cast<double>(points);
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        const long long r = (static_cast<long long>(k) * n) % points;
        const double ntheta = 2.0 * pi * static_cast<double>(r) / static_cast<double>(points);
        // i x cos z + i n z,  z = theta + i tau
        const double re = x * s * sh - nt;
        const double im = x * c * ch + ntheta;
        cplx term = std::exp(re) * std::polar(1.0, im) / static_cast<double>(points);
        out[0] += term;
        const cplx icos = I * cplx(c * ch, -s * sh);
        for (int o = 1; o <= order; ++o) {
            term *= icos;
            out[o] += term;
        }
    }
    return out;
}

bool close_enough(const Derivs& a, const Derivs& b, int order, double rel, double abs) {
    for (int o = 0; o <= order; ++o) {
        if (std::abs(a[o] - b[o]) > abs + rel * std::abs(b[o])) return false;
    }
    return true;
}

Derivs evaluate(int n_signed, double x, int order) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
        throw PreconditionError("bessel_eval: argument must be finite and nonnegative");
    }
    if (order < 0 || order > max_order) throw PreconditionError("bessel_eval: order out of range");
    const int n = std::abs(n_signed);
    Derivs out{};
    if (x == 0.0) {
        // d^k/dx^k at 0 = (1/2pi) int (i cos t)^k e^{int}: nonzero only for k >= n, k - n even.
        for (int o = 0; o <= order; ++o) {
            if (o < n || (o - n) % 2 != 0) continue;
            // (i/2)^o * binom(o, (o - n)/2)
            double binom = 1.0;
            const int m = (o - n) / 2;
            for (int i = 1; i <= m; ++i) binom = binom * static_cast<double>(o - m + i) / i;
            out[o] = std::pow(I * 0.5, o) * binom;
        }
        return out;
    }
    if (x >= static_cast<double>(n)) {
        int intervals = unshifted_intervals(n, x);
        Derivs prev = sum_unshifted(n, x, intervals, order);
        for (int attempt = 0; attempt < 12; ++attempt) {
            const int next_intervals = intervals + intervals / 4 + 8;
            Derivs next = sum_unshifted(n, x, next_intervals, order);
            // the phase x cos t carries an absolute rounding error ~ eps x
            if (close_enough(prev, next, order, 1e-12, 1e-14 + 1e-15 * x)) return next;
            intervals = 2 * next_intervals;
            prev = sum_unshifted(n, x, intervals, order);
        }
        throw ConvergenceError("bessel_eval: quadrature did not converge for n=" + std::to_string(n) +
                               ", x=" + std::to_string(x));
    }
    const double tau = std::acosh(static_cast<double>(n) / x);
    int points = 32 + 8 * static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
    Derivs prev = sum_shifted(n, x, tau, points, order);
    for (int attempt = 0; attempt < 14; ++attempt) {
        points *= 2;
        Derivs next = sum_shifted(n, x, tau, points, order);
        if (close_enough(prev, next, order, 1e-12, 1e-13 * std::abs(next[0]) + 1e-300)) return next;
        prev = next;
    }
    throw ConvergenceError("bessel_eval: shifted quadrature did not converge for n=" +
                           std::to_string(n) + ", x=" + std::to_string(x));
}

}  // namespace

cplx bessel_eval(int n, double x) { return evaluate(n, x, 0)[0]; }

std::vector<cplx> bessel_derivatives(int n, double x, int order) {
    const Derivs d = evaluate(n, x, order);
    return std::vector<cplx>(d.begin(), d.begin() + order + 1);
}

BesselTable::BesselTable(int n, double x_lo, double x_hi, double spacing)
    : mode_(n), lo_(x_lo), hi_(x_hi) {
    if (!(x_lo >= 0.0) || !(x_hi > x_lo) || !(spacing > 0.0)) {
        throw PreconditionError("BesselTable: need 0 <= x_lo < x_hi and positive spacing");
    }
    const auto cells = static_cast<std::size_t>(std::ceil((x_hi - x_lo) / spacing));
    h_ = (x_hi - x_lo) / static_cast<double>(cells);
    const std::size_t count = cells + 1;
    value_.resize(count);
    d1_.resize(count);
    d2_.resize(count);

    const int an = std::abs(n);
    std::size_t first_fast = count;
    for (std::size_t m = 0; m < count; ++m) {
        const double x = lo_ + h_ * static_cast<double>(m);
        if (x >= static_cast<double>(an) && x > 0.0) {
            first_fast = m;
            break;
        }
        const Derivs d = evaluate(an, x, 2);
        value_[m] = d[0];
        d1_[m] = d[1];
        d2_[m] = d[2];
    }
    if (first_fast == count) return;

    // Above the turning point every node shares one half-range rule; the
    // phasors e^{i x cos t_k} are advanced by multiplication and reseeded
    // every block to keep rounding drift at the 1e-15 level.
    const int intervals = unshifted_intervals(an, hi_);
    const std::size_t nodes = static_cast<std::size_t>(intervals) + 1;
    std::vector<double> c(nodes), w0(nodes), w1(nodes), w2(nodes);
    std::vector<cplx> step(nodes), phasor(nodes);
    for (std::size_t k = 0; k < nodes; ++k) {
        const double theta = pi * static_cast<double>(k) / static_cast<double>(intervals);
        c[k] = std::cos(theta);
        const double end = (k == 0 || k + 1 == nodes) ? 0.5 : 1.0;
        w0[k] = end * cos_reduced(static_cast<long long>(k), an, intervals) /
                static_cast<double>(intervals);
        w1[k] = w0[k] * c[k];
        w2[k] = -w0[k] * c[k] * c[k];
        step[k] = std::polar(1.0, h_ * c[k]);
    }
    constexpr std::size_t block = 64;
    for (std::size_t m = first_fast; m < count; ++m) {
        const double x = lo_ + h_ * static_cast<double>(m);
        if ((m - first_fast) % block == 0) {
            for (std::size_t k = 0; k < nodes; ++k) phasor[k] = std::polar(1.0, x * c[k]);
        } else {
            for (std::size_t k = 0; k < nodes; ++k) phasor[k] *= step[k];
        }
        cplx s0{}, s1{}, s2{};
        for (std::size_t k = 0; k < nodes; ++k) {
            s0 += w0[k] * phasor[k];
            s1 += w1[k] * phasor[k];
            s2 += w2[k] * phasor[k];
        }
        value_[m] = s0;
        d1_[m] = I * s1;
        d2_[m] = s2;
    }
}

cplx BesselTable::operator()(double x) const {
    if (x < lo_ || x > hi_) return bessel_eval(mode_, x);
    const double pos = (x - lo_) / h_;
    auto m = static_cast<std::size_t>(pos);
    if (m + 1 >= value_.size()) m = value_.size() - 2;
    const double t = pos - static_cast<double>(m);
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    const double h0 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
    const double h1 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
    const double h2 = 0.5 * (t2 - 3.0 * t3 + 3.0 * t4 - t5);
    const double h3 = 0.5 * (t3 - 2.0 * t4 + t5);
    const double h4 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
    const double h5 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
    return value_[m] * h0 + (h_ * h1) * d1_[m] + (h_ * h_ * h2) * d2_[m] +
           (h_ * h_ * h3) * d2_[m + 1] + (h_ * h4) * d1_[m + 1] + value_[m + 1] * h5;
}

cplx BesselTable::derivative(double x) const {
    if (x < lo_ || x > hi_) return bessel_derivatives(mode_, x, 1)[1];
    const double pos = (x - lo_) / h_;
    auto m = static_cast<std::size_t>(pos);
    if (m + 1 >= value_.size()) m = value_.size() - 2;
    const double t = pos - static_cast<double>(m);
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t;
    // d/dt of the quintic Hermite basis
    const double h0 = -30.0 * t2 + 60.0 * t3 - 30.0 * t4;
    const double h1 = 1.0 - 18.0 * t2 + 32.0 * t3 - 15.0 * t4;
    const double h2 = 0.5 * (2.0 * t - 9.0 * t2 + 12.0 * t3 - 5.0 * t4);
    const double h3 = 0.5 * (3.0 * t2 - 8.0 * t3 + 5.0 * t4);
    const double h4 = -12.0 * t2 + 28.0 * t3 - 15.0 * t4;
    const double h5 = 30.0 * t2 - 60.0 * t3 + 30.0 * t4;
    const cplx dt = value_[m] * h0 + (h_ * h1) * d1_[m] + (h_ * h_ * h2) * d2_[m] +
                    (h_ * h_ * h3) * d2_[m + 1] + (h_ * h4) * d1_[m + 1] + value_[m + 1] * h5;
    return dt / h_;
}

double smooth_step(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / x);
    const double b = std::exp(-1.0 / (1.0 - x));
    return a / (a + b);
}

double smooth_step_derivative(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    const double a = std::exp(-1.0 / x);
    const double b = std::exp(-1.0 / (1.0 - x));
    const double da = a / (x * x);
    const double db = -b / ((1.0 - x) * (1.0 - x));
    const double sum = a + b;
    return (da * sum - a * (da + db)) / (sum * sum);
}

namespace {

double effective_mode(int n) { return static_cast<double>(std::max(std::abs(n), 1)); }

double low_cutoff(int n, double r) {
    if (n == 0) return 0.0;
    const double e = static_cast<double>(n) / 8.0;
    return 1.0 - smooth_step((r - e) / e);
}

double low_cutoff_derivative(int n, double r) {
    if (n == 0) return 0.0;
    const double e = static_cast<double>(n) / 8.0;
    return -smooth_step_derivative((r - e) / e) / e;
}

double high_cutoff(int n, double r) {
    const double e = 4.0 * effective_mode(n);
    return smooth_step((r - e) / e);
}

double high_cutoff_derivative(int n, double r) {
    const double e = 4.0 * effective_mode(n);
    return smooth_step_derivative((r - e) / e) / e;
}

double dyadic_bump(int j, double r) {
    if (r <= 0.0) return 0.0;
    const double u = std::log2(r);
    return smooth_step(u - j + 1) - smooth_step(u - j);
}

double dyadic_bump_derivative(int j, double r) {
    if (r <= 0.0) return 0.0;
    const double u = std::log2(r);
    return (smooth_step_derivative(u - j + 1) - smooth_step_derivative(u - j)) /
           (r * std::numbers::ln2);
}

}  // namespace

int lowest_dyadic_scale(int n) {
    const double four_n = 4.0 * effective_mode(n);
    int j = 0;
    while (std::ldexp(1.0, j + 1) <= four_n) ++j;
    return j;
}

MultiplierPiece::MultiplierPiece(PieceKind kind, int mode, int scale_j)
    : kind_(kind), mode_(std::abs(mode)), scale_j_(scale_j) {
    const double ne = effective_mode(mode_);
    switch (kind_) {
        case PieceKind::m0:
            if (mode_ == 0) throw PreconditionError("MultiplierPiece: m0 is empty for n = 0");
            lo_ = 0.0;
            hi_ = mode_ / 4.0;
            break;
        case PieceKind::m1:
            lo_ = mode_ / 8.0;
            hi_ = 8.0 * ne;
            break;
        case PieceKind::mj:
            if (scale_j < lowest_dyadic_scale(mode_)) {
                throw PreconditionError("MultiplierPiece: scale j=" + std::to_string(scale_j) +
                                        " lies below the dyadic region of mode " +
                                        std::to_string(mode_));
            }
            lo_ = std::max(std::ldexp(1.0, scale_j - 1), 4.0 * ne);
            hi_ = std::ldexp(1.0, scale_j + 1);
            break;
    }
}

double MultiplierPiece::cutoff(double r) const {
    r = std::abs(r);
    switch (kind_) {
        case PieceKind::m0:
            return low_cutoff(mode_, r);
        case PieceKind::m1:
            return 1.0 - low_cutoff(mode_, r) - high_cutoff(mode_, r);
        case PieceKind::mj:
            return high_cutoff(mode_, r) * dyadic_bump(scale_j_, r);
    }
    return 0.0;
}

double MultiplierPiece::cutoff_derivative(double r) const {
    r = std::abs(r);
    switch (kind_) {
        case PieceKind::m0:
            return low_cutoff_derivative(mode_, r);
        case PieceKind::m1:
            return -low_cutoff_derivative(mode_, r) - high_cutoff_derivative(mode_, r);
        case PieceKind::mj:
            return high_cutoff_derivative(mode_, r) * dyadic_bump(scale_j_, r) +
                   high_cutoff(mode_, r) * dyadic_bump_derivative(scale_j_, r);
    }
    return 0.0;
}

cplx MultiplierPiece::operator()(double r) const {
    const double c = cutoff(r);
    if (c == 0.0) return {};
    return c * bessel_eval(mode_, std::abs(r));
}

cplx MultiplierPiece::operator()(double r, const BesselTable& table) const {
    const double c = cutoff(r);
    if (c == 0.0) return {};
    return c * table(std::abs(r));
}

double BesselPartition::valid_limit() const { return std::ldexp(1.0, jmax); }

cplx BesselPartition::sum(double r) const {
    if (std::abs(r) > valid_limit()) {
        throw PreconditionError("BesselPartition::sum: |r| = " + std::to_string(std::abs(r)) +
                                " exceeds 2^jmax = " + std::to_string(valid_limit()));
    }
    cplx total{};
    for (const auto& p : pieces) total += p(r);
    return total;
}

BesselPartition build_partition(int n, int jmax) {
    const int an = std::abs(n);
    const int jlow = lowest_dyadic_scale(an);
    if (jmax < jlow + 1) {
        throw PreconditionError("build_partition: jmax=" + std::to_string(jmax) +
                                " leaves no dyadic region for mode " + std::to_string(an) +
                                " (need jmax >= " + std::to_string(jlow + 1) + ")");
    }
    BesselPartition out{an, jmax, {}};
    if (an > 0) out.pieces.emplace_back(PieceKind::m0, an, 0);
    out.pieces.emplace_back(PieceKind::m1, an, 0);
    for (int j = jlow; j <= jmax; ++j) out.pieces.emplace_back(PieceKind::mj, an, j);
    return out;
}

M0DecayResult m0_decay_check(int n, int k, int power) {
    if (n < 4) throw PreconditionError("m0_decay_check: need n >= 4");
    if (k < 0) throw PreconditionError("m0_decay_check: derivative order must be nonnegative");
    if (k > 3) {
        throw PreconditionError("m0_decay_check: finite differences of the cutoff are unstable above order 3");
    }
    const MultiplierPiece m0(PieceKind::m0, n, 0);
    const double e = n / 8.0;
    // Derivatives of the cutoff 1 - S((r - e)/e): S' analytic, higher orders
    // by central differences of S'.
    auto cutoff_deriv = [&](int order, double r) -> double {
        if (order == 0) return m0.cutoff(r);
        const double u = (r - e) / e;
        double s = 0.0;
        const double h = 1e-3;
        if (order == 1) {
            s = smooth_step_derivative(u);
        } else if (order == 2) {
            s = (-smooth_step_derivative(u + 2 * h) + 8 * smooth_step_derivative(u + h) -
                 8 * smooth_step_derivative(u - h) + smooth_step_derivative(u - 2 * h)) /
                (12 * h);
        } else {
            s = (-smooth_step_derivative(u + 2 * h) + 16 * smooth_step_derivative(u + h) -
                 30 * smooth_step_derivative(u) + 16 * smooth_step_derivative(u - h) -
                 smooth_step_derivative(u - 2 * h)) /
                (12 * h * h);
        }
        return -s / std::pow(e, order);
    };
    const int samples = 4000;
    double sup = 0.0;
    for (int i = 0; i <= samples; ++i) {
        const double r = m0.support_hi() * static_cast<double>(i) / samples;
        const auto b = bessel_derivatives(n, r, k);
        cplx acc{};
        double binom = 1.0;
        for (int i2 = 0; i2 <= k; ++i2) {
            acc += binom * cutoff_deriv(i2, r) * b[static_cast<std::size_t>(k - i2)];
            binom = binom * (k - i2) / (i2 + 1);
        }
        sup = std::max(sup, std::abs(acc));
    }
    return {n, k, power, sup, sup * std::pow(static_cast<double>(n), power)};
}

double m1_value_envelope(int n, double l) {
    const double c = std::cbrt(static_cast<double>(n));
    return (1.0 / c) * std::pow(1.0 + std::abs(l - n) / c, -0.25);
}

M1EnvelopeResult m1_envelope_check(int n) {
    if (n < 4) throw PreconditionError("m1_envelope_check: need n >= 4");
    const MultiplierPiece m1(PieceKind::m1, n, 0);
    const BesselTable table(n, 0.0, m1.support_hi() + 1.0);
    const double step = 0.02;
    const auto count = static_cast<std::size_t>(std::ceil((m1.support_hi() - m1.support_lo()) / step));
    const double h = (m1.support_hi() - m1.support_lo()) / static_cast<double>(count);
    M1EnvelopeResult out{n, 0.0, 0.0, 0.0};
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    for (std::size_t i = 0; i <= count; ++i) {
        const double l = m1.support_lo() + h * static_cast<double>(i);
        const cplx b = table(l);
        const cplx value = m1.cutoff(l) * b;
        const cplx deriv = m1.cutoff_derivative(l) * b + m1.cutoff(l) * table.derivative(l);
        out.value_constant = std::max(out.value_constant, std::abs(value) / m1_value_envelope(n, l));
        out.derivative_constant = std::max(out.derivative_constant, std::abs(deriv) * sqrt_n);
        const double end = (i == 0 || i == count) ? 0.5 : 1.0;
        out.integral += end * h * (std::norm(value) + std::norm(deriv));
    }
    return out;
}

AsymptoticAmplitude extract_amplitudes(const MultiplierPiece& piece, std::size_t samples) {
    if (piece.kind() != PieceKind::mj) {
        throw PreconditionError("extract_amplitudes: only dyadic pieces have a carrier split");
    }
    if (samples < 4) throw PreconditionError("extract_amplitudes: need at least 4 samples");
    const int j = piece.scale_j();
    const double scale = std::ldexp(1.0, j);
    const double root = std::sqrt(scale);
    const double window = 2.0 * pi;
    const int window_points = 33;
    const BesselTable table(piece.mode(), std::max(0.0, piece.support_lo() - window - 1.0),
                            piece.support_hi() + window + 1.0);

    AsymptoticAmplitude out{piece.mode(), j, {}, {}, {}, 0.0, 0.0, 0.0};
    double sup_m = 0.0;
    std::vector<double> residuals;
    for (std::size_t i = 0; i < samples; ++i) {
        const double frac = (static_cast<double>(i) + 0.5) / static_cast<double>(samples);
        const double x0 = piece.support_lo() + frac * (piece.support_hi() - piece.support_lo());
        Eigen::MatrixXcd a(window_points, 6);
        Eigen::VectorXcd rhs(window_points);
        for (int p = 0; p < window_points; ++p) {
            const double u = -window + 2.0 * window * p / (window_points - 1);
            const cplx ep = std::polar(1.0, x0 + u);
            const cplx em = std::conj(ep);
            a(p, 0) = ep;
            a(p, 1) = u * ep;
            a(p, 2) = u * u * ep;
            a(p, 3) = em;
            a(p, 4) = u * em;
            a(p, 5) = u * u * em;
            rhs(p) = piece(x0 + u, table);
            sup_m = std::max(sup_m, std::abs(rhs(p)));
        }
        const Eigen::VectorXcd coef = a.colPivHouseholderQr().solve(rhs);
        residuals.push_back((a * coef - rhs).cwiseAbs().maxCoeff());
        out.s.push_back(x0 / scale);
        out.psi_plus.push_back(root * coef(0));
        out.psi_minus.push_back(root * coef(3));
    }
    for (std::size_t i = 0; i < samples; ++i) {
        out.sup_psi = std::max({out.sup_psi, std::abs(out.psi_plus[i]), std::abs(out.psi_minus[i])});
        if (i + 1 < samples) {
            const double ds = out.s[i + 1] - out.s[i];
            out.sup_psi_derivative = std::max(
                {out.sup_psi_derivative, std::abs(out.psi_plus[i + 1] - out.psi_plus[i]) / ds,
                 std::abs(out.psi_minus[i + 1] - out.psi_minus[i]) / ds});
        }
    }
    for (double r : residuals) out.fit_residual = std::max(out.fit_residual, r / sup_m);
    return out;
}

}  // namespace strichartz
