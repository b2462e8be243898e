#pragma once

#include "strichartz/discretization.hpp"
#include "strichartz/norms.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace strichartz {

/// t -> int_{s < t - epsilon} g(s) / (s - t) ds on the window [lo, hi].
class OneSidedHilbertOp {
public:
    OneSidedHilbertOp(double epsilon, double window_lo, double window_hi);

    double epsilon() const { return epsilon_; }
    double window_lo() const { return lo_; }
    double window_hi() const { return hi_; }

private:
    double epsilon_;
    double lo_, hi_;
};

/// g constant on the cells [t0 + k h, t0 + (k + 1) h).
struct StepSignal {
    double t0 = 0.0;
    double h = 1.0;
    std::vector<cplx> values;

    double edge(std::size_t k) const { return t0 + h * static_cast<double>(k); }
    double l2_norm() const;
};

// chi_[0,1] as a single cell.
StepSignal unit_indicator();

// (erf(s / width) - erf((s - 1) / width)) / 2 on cells of length h over
// [-pad, 1 + pad]; a smooth, frequency-localized stand-in for chi_[0,1].
StepSignal smoothed_indicator(double width, double h, double pad);

// Integrates each cell exactly. The solution of the forced equation with
// F(x, s) = g(s) delta(x) is delta_trace_constant() times this at x = 0.
std::vector<cplx> delta_forcing_reduce(const OneSidedHilbertOp& op, const StepSignal& g,
                                       std::span<const double> times);

// i / (4 pi): the free kernel at the origin is 1 / (4 pi i tau).
cplx delta_trace_constant();

// ||H_epsilon g||_{L^2(window)} by composite Gauss-Legendre, panels graded
// toward every cell edge and every edge shifted by epsilon.
double reduced_l2_norm(const OneSidedHilbertOp& op, const StepSignal& g);

struct DivergenceRow {
    double epsilon;
    double rho;
    double lower_bound;  // ((ln(1/eps) - 1)^2 + 1)^{1/2}, meaningful for chi_[0,1]
};

struct DivergenceScan {
    std::vector<DivergenceRow> rows;  // in the order given
    double slope = 0.0;               // least squares of rho against ln(1/eps)
    double intercept = 0.0;
    bool monotone = false;            // rho strictly increases as eps decreases
};

// rho(eps) = ||H_eps g||_{L^2(window)} / ||g||_2. Requires a decreasing list
// spanning at least four decades and a window containing [0, 2].
DivergenceScan divergence_scan(std::span<const double> epsilons, double window_lo, double window_hi,
                               const StepSignal& g = unit_indicator());

// Header "epsilon,rho,analytic_lower_bound".
void write_divergence_csv(std::ostream& out, const DivergenceScan& scan);

enum class GateOutcome { scaling_inconsistent, admissible, double_endpoint };

struct GateRecord {
    GateOutcome outcome;
    std::string arithmetic;
    std::string route;
};

std::string to_string(GateOutcome outcome);

// Retarded estimate with output (2, inf) in two dimensions and input dual to (qt, rt).
GateRecord endpoint_gate(Exponent qt, Exponent rt);

struct BumpRow {
    double width;
    double max_relative_error;  // over the sample times
};

/// Forcing g(s) phi(x) with phi = e^{-|x|^2 / width^2} / (pi width^2), a unit
/// mass bump. The trace at x = 0 is int_{s < t - eps} g(s) [e^{i(t-s)Delta} phi](0) ds
/// with the evolution from propagate_kernel_at on an N x N grid of side L,
/// compared with delta_trace_constant() * delta_forcing_reduce.
std::vector<BumpRow> narrow_bump_check(const OneSidedHilbertOp& op, const StepSignal& g,
                                       std::span<const double> times, std::span<const double> widths,
                                       std::size_t grid_points = 128, double length = 4.0);

}  // namespace strichartz
