#pragma once

#include "strichartz/discretization.hpp"
#include "strichartz/propagator.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace strichartz {

// Exact rational a/b in lowest terms, b > 0.
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n, long long d = 1);

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    friend Rational operator+(Rational a, Rational b);
    friend Rational operator-(Rational a, Rational b);
    friend Rational operator*(Rational a, Rational b);
    friend bool operator==(Rational a, Rational b) { return a.num == b.num && a.den == b.den; }
    friend bool operator<(Rational a, Rational b);
    friend bool operator<=(Rational a, Rational b) { return !(b < a); }
};

/// Lebesgue exponent p in [1, inf], stored as 1/p so that p = inf is exact.
class Exponent {
public:
    static Exponent finite(long long p);
    static Exponent ratio(long long num, long long den);  // p = num/den
    static Exponent infinity();
    // Parses "4", "4/3", "inf".
    static Exponent parse(const std::string& text);

    Rational reciprocal() const { return recip_; }
    bool is_infinite() const { return recip_.num == 0; }
    double value() const;
    std::string str() const;
    friend bool operator==(Exponent a, Exponent b) { return a.recip_ == b.recip_; }

private:
    explicit Exponent(Rational recip) : recip_(recip) {}
    Rational recip_;
};

// q, r >= 2, (q, r, dim) != (2, inf, 2), 1/q + dim/(2r) = dim/4.
bool is_admissible(Exponent q, Exponent r, int dim = 2);

// 1/q + 1/r + 1 = 1/qt' + 1/rt', the dimensional-analysis condition for the
// retarded estimate with output (q, r) and input dual to (qt, rt).
bool scaling_consistent(Exponent q, Exponent r, Exponent qt, Exponent rt);

enum class SpatialNorm {
    lebesgue,     // L^r_x with exponent `spatial_exponent`
    angular_sup,  // sup_r (avg_theta |F|^2)^{1/2}
    angular_l1,   // 2 pi int (avg_theta |F|^2)^{1/2} r dr
};

struct MixedNormSpec {
    Exponent time_exponent = Exponent::finite(2);
    SpatialNorm spatial = SpatialNorm::angular_sup;
    Exponent spatial_exponent = Exponent::finite(2);

    std::string describe() const;
};

/// PolarFields on one grid at the nodes of a time grid.
struct SpacetimeTrace {
    SpacetimeTrace(TimeGrid times, std::vector<PolarField> slices);

    TimeGrid times;
    std::vector<PolarField> slices;
};

double spatial_norm(const PolarField& field, const MixedNormSpec& spec);
double mixed_norm(const SpacetimeTrace& trace, const MixedNormSpec& spec);

struct QuotientReport {
    double value = 0.0;
    std::string input;
    std::string grid;
    // (resolution, value) per ladder level, verbatim
    std::vector<std::pair<std::size_t, double>> refinement_history;
    std::size_t iterations = 0;
    double residual = 0.0;
    // largest relative change between successive refinement levels
    double refinement_spread() const;
};

/// A field given mode by mode, f = sum_n f_n(r) e^{in theta}, so it can be
/// resampled at every level of a refinement ladder.
struct ModeComponent {
    int mode;
    std::function<cplx(double)> profile;
};

struct QuotientLadder {
    RadialGridKind kind = RadialGridKind::graded;
    double rmax = 8.0;
    std::vector<std::size_t> radial_points{64, 128, 256};
    std::vector<std::size_t> time_points_per_side{32, 64, 128};
    double hole = 1e-3;
    double horizon = 1e3;
};

// ||e^{it Delta} f||_spec / ||f||_{L^2}, one value per ladder level (at least
// three). The reported value is the finest level. Zero input is rejected.
QuotientReport strichartz_quotient(const std::vector<ModeComponent>& f, const MixedNormSpec& spec,
                                   const QuotientLadder& ladder = {});

// e^{it Delta} f at the nodes of a time grid, mode by mode through
// propagate_mode, recomposed on enough angles for the modes present.
SpacetimeTrace evolve_modes(const std::vector<ModeComponent>& f, RadialGridPtr grid, const TimeGrid& times);

struct PowerIterationOptions {
    double tolerance = 1e-6;
    std::size_t max_iterations = 2000;
    std::uint64_t seed = 20240601;
};

/// Operator norm of f_n -> e^{itDelta} f_n from L^2(R^2) to L^2_t(spatial),
/// by power ascent on the discretized map. Supports time exponent 2 with
/// spatial L^2 (linear power iteration) or angular_sup (the supremum row is
/// reselected every step; the objective increases monotonically).
/// Throws ConvergenceError at the iteration cap.
QuotientReport estimate_operator_norm(const ModeEvolution& evolution, const MixedNormSpec& spec,
                                      const PowerIterationOptions& opts = {});

struct BandLimitedSetup {
    double band = 1.0;            // Hankel spectrum supported in (0, band]
    double rmax = 128.0;          // output radii (0, rmax)
    std::size_t radial_points = 256;
    double hole = 0.0;
    double horizon = 128.0;
    double time_step = 0.5;
    // frequency nodes per unit of the phase bound (rmax + 2 horizon band) * band
    double oversampling = 1.2;
};

/// e^{itDelta} on mode n for data whose Hankel spectrum lies in (0, band].
/// The input is c_q = sqrt(2 pi kappa_q) ftilde(k_q) on midpoint nodes k_q, so
/// that ||c|| = ||f||_{L^2(R^2)}; the output is u_n(t_m, r_i) on midpoint radii
/// and the symmetric uniform time grid. The frequency nodes resolve the phase
/// k (r + 2|t| k) at six points per period everywhere on the output.
class BandLimitedModeMap {
public:
    BandLimitedModeMap(int mode, const BandLimitedSetup& setup);

    int mode() const { return mode_; }
    const TimeGrid& times() const { return times_; }
    std::span<const double> radii() const { return radii_; }
    std::span<const double> frequencies() const { return freq_; }
    std::size_t input_size() const { return freq_.size(); }

    // (radii x times) matrix of u_n(t_m, r_i)
    Eigen::MatrixXcd apply(const Eigen::VectorXcd& c) const;
    // sum_m conj(P_m)^T y_m, the adjoint for the plain Euclidean products
    Eigen::VectorXcd adjoint(const Eigen::MatrixXcd& y) const;
    // adjoint of a y that is `value` at (row, time) and zero elsewhere
    Eigen::VectorXcd adjoint_column(Eigen::Index row, Eigen::Index time, cplx value) const;

private:
    int mode_;
    TimeGrid times_;
    std::vector<double> radii_;
    std::vector<double> freq_;
    Eigen::MatrixXcd synth_;  // B_n(k_q r_i) sqrt(kappa_q / 2 pi)
    Eigen::MatrixXcd phase_;  // e^{-i t_m k_q^2}, frequencies x times
};

QuotientReport estimate_operator_norm(const BandLimitedModeMap& map, const MixedNormSpec& spec,
                                      const PowerIterationOptions& opts = {});

struct OperatorNormSetup {
    BandLimitedSetup map;
    std::uint64_t base_seed = 20240601;
    double tolerance = 1e-6;
};

// Builds the band-limited map for mode n and runs the estimator; the seed is
// mix_seed(base_seed, n * 2^20 + radial_points).
QuotientReport estimate_operator_norm(int mode, const MixedNormSpec& spec, const OperatorNormSetup& setup = {});

// Closed form of the (2, angular_sup) quotient for e^{-pi lambda^2 |x|^2} on
// the time window hole <= |t| <= horizon.
double gaussian_endpoint_quotient(double lambda, double hole, double horizon);

}  // namespace strichartz
