#pragma once

#include "strichartz/bessel.hpp"
#include "strichartz/discretization.hpp"
#include "strichartz/propagator.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace strichartz {

/// Samples of G on the uniform grid x_k = (k - N/2) h, k = 0..N-1.
class LineSignal {
public:
    LineSignal(double spacing, std::vector<cplx> values);
    LineSignal(std::size_t n, double spacing, const std::function<cplx(double)>& fn);

    std::size_t size() const { return values_.size(); }
    double spacing() const { return h_; }
    double length() const { return h_ * static_cast<double>(values_.size()); }
    double coordinate(std::size_t k) const {
        return h_ * (static_cast<double>(k) - 0.5 * static_cast<double>(values_.size()));
    }

    std::span<const cplx> values() const { return values_; }
    std::vector<cplx>& mutable_values() { return values_; }

    // (h sum |G|^2)^{1/2}
    double l2_norm() const;
    // Fraction of |G|^2 on |x| < L/4.
    double central_mass_fraction() const;

private:
    double h_;
    std::vector<cplx> values_;
};

// Complex white noise on the central half of the window, zero outside.
LineSignal random_signal(std::size_t n, double spacing, std::uint64_t seed);

enum class PieceSelector { full, m0, m1, mj };

/// The symbol r -> piece(|r|), with B_n tabulated over the part of the
/// support that the caller needs (values beyond `r_hint` fall back to direct
/// evaluation).
class PieceSymbol {
public:
    PieceSymbol(PieceSelector piece, int mode, int scale_j = 0, double r_hint = 0.0);

    PieceSelector piece() const { return piece_; }
    int mode() const { return mode_; }
    int scale_j() const { return scale_j_; }
    // Support in r; hi is +inf for the full symbol.
    double support_lo() const { return lo_; }
    double support_hi() const { return hi_; }

    cplx operator()(double r) const;

private:
    PieceSelector piece_;
    int mode_;
    int scale_j_;
    double lo_, hi_;
    std::unique_ptr<MultiplierPiece> cut_;
    std::shared_ptr<const BesselTable> table_;
};

struct MultiplierOperator {
    PieceSelector piece = PieceSelector::full;
    int mode = 0;
    int scale_j = 0;
    double lambda = 1.0;
};

// DFT, multiply bin xi by symbol(xi), inverse DFT.
LineSignal apply_symbol(const LineSignal& g, const std::function<cplx(double xi)>& symbol);

// T_lambda G: the symbol is piece(lambda |xi|^{1/2}).
LineSignal apply_T(const MultiplierOperator& op, const LineSignal& g);

// T_{lambda(x)} G evaluated sample by sample: output k uses lambda[k].
LineSignal apply_T_pointwise(PieceSelector piece, int mode, int scale_j, const LineSignal& g,
                             std::span<const double> lambda);

/// Geometric lambda grid with nested refinement levels: level l has
/// per_octave * 2^l points per octave, and each level contains the previous.
struct LambdaGrid {
    double lo = 1.0;
    double hi = 2.0;
    std::size_t per_octave = 16;
    std::size_t levels = 3;

    // Range that covers every lambda for which piece(lambda |xi|^{1/2}) is
    // nonzero at some nonzero DFT frequency of g.
    static LambdaGrid covering(PieceSelector piece, int mode, int scale_j, const LineSignal& g,
                               std::size_t per_octave = 16, std::size_t levels = 3);

    // Nodes of the finest level, ascending.
    std::vector<double> nodes() const;
    std::size_t finest_per_octave() const { return per_octave << (levels - 1); }
};

struct MaximalResult {
    LineSignal sup;  // finest level
    double ratio = 0.0;
    // (points per octave, ratio), coarse to fine; nondecreasing by nesting
    std::vector<std::pair<std::size_t, double>> refinement_history;
};

// sup over the lambda grid of |T_lambda G|, pointwise. Requires at least 16
// points per octave.
MaximalResult maximal_T(PieceSelector piece, int mode, int scale_j, const LineSignal& g, const LambdaGrid& grid);

struct DecaySetup {
    std::size_t signal_points = 1024;
    double spacing = 1.0 / 64.0;
    std::size_t per_octave = 16;
    std::size_t levels = 2;
    std::uint64_t base_seed = 20240601;
};

struct DecayRow {
    int n;
    int j;
    std::uint64_t seed;
    double ratio;
};

struct DecayScan {
    int n;
    std::vector<DecayRow> rows;
    std::vector<std::pair<int, double>> max_ratio;  // (j, max over trials)
    double slope = 0.0;                             // least squares of log2(max ratio) vs j
    double intercept = 0.0;
};

// Requires 2^j >= 8n over the range and at least four scales.
DecayScan piece_decay_scan(int n, int j_lo, int j_hi, std::size_t trials, const DecaySetup& setup = {});

// Least-squares slope and intercept of y against x.
std::pair<double, double> fit_line(std::span<const double> x, std::span<const double> y);

/// K^j_lambda(x) = int e^{2 pi i x xi} m_j(lambda |xi|^{1/2}) d xi by composite
/// Gauss-Legendre in s = lambda |xi|^{1/2}. Throws ResolutionError unless the
/// x samples are spaced finer than lambda^2 / (2 * 4^{j+1}), the Nyquist
/// spacing of the highest frequency in the kernel.
std::vector<cplx> kernel_K(int mode, int scale_j, double lambda, std::span<const double> x);

/// C min(r^{-1/2}, A, A (A r)^{-10}) with A = 2^j / a.
struct EnvelopePhi {
    int scale_j;
    double a;
    double constant = 1.0;

    double operator()(double r) const;
    // int over the whole line, exact
    double l1_norm() const;
};

struct TtstarSample {
    double a;
    double b;
    double separation;  // x - x'
};

struct TtstarRow {
    int j;
    double a, b, separation;
    double lhs;  // |int m_j(a|xi|^{1/2}) conj(m_j(b|xi|^{1/2})) e^{2 pi i (x-x') xi} d xi|
    double phi;  // EnvelopePhi with C = 1
    double ratio;
};

struct TtstarScan {
    int mode;
    int j;
    std::vector<TtstarRow> rows;
    double max_ratio = 0.0;
};

double ttstar_lhs(int mode, int scale_j, double a, double b, double separation);
TtstarScan ttstar_domination_scan(int mode, int scale_j, std::span<const TtstarSample> samples);

// Grid of samples a = 2^j * {1/8, ..., 8}, b/a in {1/2, 1, 2}, separations
// spread over the decay scales of the envelope.
std::vector<TtstarSample> default_ttstar_samples(int scale_j);

struct PhiL1Row {
    int j;
    double a;
    double l1;
    double scaled;  // l1 * 2^{j/2}
};

// ||Phi_{j,a}||_1 over j in [j_lo, j_hi], a = 2^j * 2^k for k in [k_lo, k_hi].
std::vector<PhiL1Row> phi_l1_scan(int j_lo, int j_hi, int k_lo, int k_hi);

struct SobolevTestFunction {
    std::string name;
    std::function<cplx(double)> g;   // g(lambda)
    std::function<cplx(double)> dg;  // g'(lambda)
    double log_lo;                   // ln(lambda) range that carries g
    double log_hi;
};

struct SobolevMember {
    std::string name;
    double lhs;  // sup |g|
    double rhs;  // (int (n|g|^2 + |lambda g'|^2 / n) dlambda/lambda)^{1/2}
    bool finite;
};

struct SobolevCheck {
    int n;
    std::vector<SobolevMember> members;
    double ratio = 0.0;  // max lhs / rhs over finite members with rhs > 0
    bool any_infinite = false;
};

// Integrates on [log_lo, log_hi] in y = ln(lambda); a member whose integrand
// is not negligible at both ends of its range is flagged infinite.
SobolevCheck lambda_sobolev_check(int n, std::span<const SobolevTestFunction> family);

// phi(n ln lambda) for the bumps e^{-y^2}, y e^{-y^2} and (1 + y^2)^{-1}.
std::vector<SobolevTestFunction> log_bump_family(int n);

struct ReductionRow {
    double t;
    double r;
    double lhs;  // |e^{it Delta} f| from propagate_mode
    double rhs;  // |T_lambda G(x)| / (4|t|), x = 1/(8 pi t), lambda = r / 2|t|
};

struct ReductionReport {
    int mode;
    std::vector<ReductionRow> rows;
    // max |lhs - rhs| over max lhs, per time; zero when both sides vanish
    double max_discrepancy = 0.0;
};

// For each t, compares the two sides at the grid radii r <= sample_rmax. The
// right side is computed by direct quadrature in xi of
// int B_n(lambda xi^{1/2}) e^{2 pi i x xi} g(xi) d xi with g(xi) = f_n(xi^{1/2}).
ReductionReport reduction_check(int mode, const std::function<cplx(double)>& profile, RadialGridPtr grid,
                                std::span<const double> times, double sample_rmax);

struct AdversarialResult {
    double ratio;         // ||T_{lambda(x)} G|| / ||G||
    double maximal_ratio;  // maximal_T ratio on the same lambda grid
};

// Step-function lambda(x) constant on dyadic blocks of 2^block_log2 samples.
// Greedy: each block takes the grid lambda maximizing its energy. Random:
// each block takes a grid lambda drawn from `seed`.
AdversarialResult adversarial_lambda(int mode, int scale_j, const LineSignal& g, const LambdaGrid& grid,
                                     int block_log2, bool greedy, std::uint64_t seed = 0);

}  // namespace strichartz
