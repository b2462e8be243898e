#pragma once

#include "strichartz/fft.hpp"

#include <complex>
#include <memory>
#include <span>
#include <vector>

namespace strichartz {

/// Bessel function in the angular-average normalization
/// \f[ B_n(x) = \frac{1}{2\pi}\int_0^{2\pi} e^{i x\cos\theta} e^{i n\theta}\,d\theta, \f]
/// which equals i^n J_n(x) for the classical J_n. B_{-n} = B_n.
///
/// Evaluated by the trapezoid rule on the periodic integrand. For x < |n| the
/// contour is shifted to Im(theta) = acosh(|n|/x), which removes the
/// cancellation that would otherwise destroy relative accuracy where B_n is
/// exponentially small. Throws ConvergenceError if the point count cap is hit.
cplx bessel_eval(int n, double x);

// Value and derivatives d^k/dx^k B_n(x) for k = 0..order (order <= 6).
std::vector<cplx> bessel_derivatives(int n, double x, int order);

/// Quintic Hermite table of B_n on [x_lo, x_hi] for bulk evaluation.
///
/// Node values and first two derivatives come from the same quadrature as
/// bessel_eval. With spacing h the interpolation error is below
/// h^6 / 46080 (all derivatives of B_n are bounded by 1), i.e. ~1e-10 at the
/// default h = 1/8. Arguments outside the table fall back to bessel_eval.
class BesselTable {
public:
    BesselTable(int n, double x_lo, double x_hi, double spacing = 0.125);

    int mode() const { return mode_; }
    double lo() const { return lo_; }
    double hi() const { return hi_; }

    cplx operator()(double x) const;
    cplx derivative(double x) const;

private:
    int mode_;
    double lo_, hi_, h_;
    std::vector<cplx> value_, d1_, d2_;
};

using BesselTablePtr = std::shared_ptr<const BesselTable>;

// C-infinity step: 0 for x <= 0, 1 for x >= 1, built from e^{-1/x}.
double smooth_step(double x);
double smooth_step_derivative(double x);

enum class PieceKind { m0, m1, mj };

/// One piece of the smooth partition B_n = m0 + m1 + sum_j mj.
///
/// With n_e = max(n, 1):
///   m0: cutoff 1 on [0, n/8], falling to 0 at n/4 (absent for n = 0)
///   mj: cutoff s(r) * a_j(r), where s rises from 0 at 4 n_e to 1 at 8 n_e and
///       a_j(r) = S(log2 r - j + 1) - S(log2 r - j) lives on (2^{j-1}, 2^{j+1})
///   m1: whatever is left, supported on [n/8, 8 n_e]
class MultiplierPiece {
public:
    MultiplierPiece(PieceKind kind, int mode, int scale_j);

    PieceKind kind() const { return kind_; }
    int mode() const { return mode_; }
    int scale_j() const { return scale_j_; }
    double support_lo() const { return lo_; }
    double support_hi() const { return hi_; }

    // Real cutoff at |r|.
    double cutoff(double r) const;
    double cutoff_derivative(double r) const;

    // cutoff(|r|) * B_n(|r|)
    cplx operator()(double r) const;
    cplx operator()(double r, const BesselTable& table) const;

private:
    PieceKind kind_;
    int mode_;
    int scale_j_;
    double lo_, hi_;
};

struct BesselPartition {
    int mode;
    int jmax;
    std::vector<MultiplierPiece> pieces;

    // The dyadic pieces telescope to 1 only below 2^jmax.
    double valid_limit() const;
    // Throws PreconditionError above valid_limit().
    cplx sum(double r) const;
};

int lowest_dyadic_scale(int n);

// Throws PreconditionError if jmax is below the first dyadic scale.
BesselPartition build_partition(int n, int jmax);

struct M0DecayResult {
    int n, k, power;
    double sup_derivative;  // sup over the m0 support of |m0^(k)|
    double constant;        // sup_derivative * n^power
};

// Requires n >= 4 and k <= 3 (finite differences of the cutoff get unstable
// beyond that).
M0DecayResult m0_decay_check(int n, int k, int power);

struct M1EnvelopeResult {
    int n;
    double value_constant;       // max |m1| / (n^{-1/3} (1 + n^{-1/3}|l - n|)^{-1/4})
    double derivative_constant;  // max |m1'| * n^{1/2}
    double integral;             // int (|m1|^2 + |m1'|^2) dl over the support
};

M1EnvelopeResult m1_envelope_check(int n);

// Evaluate the two envelopes at l (used to check they dominate m1).
double m1_value_envelope(int n, double l);

/// Carrier decomposition mj(x) = 2^{-j/2} (e^{ix} psi_+(x/2^j) + e^{-ix} psi_-(x/2^j)).
struct AsymptoticAmplitude {
    int mode;
    int scale_j;
    std::vector<double> s;  // sample points in units of 2^j, covering the support
    std::vector<cplx> psi_plus;
    std::vector<cplx> psi_minus;
    double sup_psi;             // max over both signs
    double sup_psi_derivative;  // finite-difference estimate, same scaling in s
    double fit_residual;        // worst relative least-squares residual
};

// Local least-squares separation of the two unimodular carriers on windows
// of a few periods. Requires kind() == mj.
AsymptoticAmplitude extract_amplitudes(const MultiplierPiece& piece, std::size_t samples = 96);

}  // namespace strichartz
