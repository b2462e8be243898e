#include "strichartz/counterexamples.hpp"

#include "strichartz/csv.hpp"
#include "strichartz/errors.hpp"
#include "strichartz/multiplier_lab.hpp"
#include "strichartz/propagator.hpp"
#include "strichartz/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <ostream>
#include <tuple>

namespace strichartz {

namespace {

constexpr double pi = std::numbers::pi;

cplx reduce_at(const OneSidedHilbertOp& op, const StepSignal& g, double t) {
    const double cut = t - op.epsilon();
    cplx acc = 0.0;
    for (std::size_t k = 0; k < g.values.size(); ++k) {
        const double a = g.edge(k);
        if (a >= cut) break;
        const double b = std::min(g.edge(k + 1), cut);
        acc += g.values[k] * std::log1p(-(b - a) / (t - a));
    }
    return acc;
}

// Panels on [a, b] whose widths double away from both ends, starting at scale.
void graded_panels(double a, double b, double scale, std::vector<double>& out) {
    const double mid = 0.5 * (a + b);
    std::vector<double> left{a}, right{b};
    for (double w = scale; a + w < mid; w *= 2.0) left.push_back(a + w);
    for (double w = scale; b - w > mid; w *= 2.0) right.push_back(b - w);
    out.insert(out.end(), left.begin(), left.end());
    out.push_back(mid);
    out.insert(out.end(), right.rbegin(), right.rend() - 1);
}

std::string rational_str(Rational r) {
    if (r.den == 1) return std::to_string(r.num);
    return std::to_string(r.num) + "/" + std::to_string(r.den);
}

}  // namespace

OneSidedHilbertOp::OneSidedHilbertOp(double epsilon, double window_lo, double window_hi)
    : epsilon_(epsilon), lo_(window_lo), hi_(window_hi) {
    if (!(epsilon > 0.0)) throw PreconditionError("OneSidedHilbertOp: epsilon must be positive");
    if (!(window_hi > window_lo)) throw PreconditionError("OneSidedHilbertOp: empty window");
}

double StepSignal::l2_norm() const {
    double s = 0.0;
    for (auto v : values) s += std::norm(v);
    return std::sqrt(h * s);
}

StepSignal unit_indicator() { return StepSignal{0.0, 1.0, {cplx(1.0)}}; }

StepSignal smoothed_indicator(double width, double h, double pad) {
    if (!(width > 0.0) || !(h > 0.0) || !(pad >= 0.0)) throw PreconditionError("smoothed_indicator: bad parameters");
    const auto cells = static_cast<std::size_t>(std::ceil((1.0 + 2.0 * pad) / h));
    StepSignal g{-pad, h, std::vector<cplx>(cells)};
    for (std::size_t k = 0; k < cells; ++k) {
        const double s = g.edge(k) + 0.5 * h;
        g.values[k] = 0.5 * (std::erf(s / width) - std::erf((s - 1.0) / width));
    }
    return g;
}

std::vector<cplx> delta_forcing_reduce(const OneSidedHilbertOp& op, const StepSignal& g,
                                       std::span<const double> times) {
    std::vector<cplx> out;
    out.reserve(times.size());
    for (double t : times) out.push_back(reduce_at(op, g, t));
    return out;
}

cplx delta_trace_constant() { return cplx(0.0, 1.0 / (4.0 * pi)); }

double reduced_l2_norm(const OneSidedHilbertOp& op, const StepSignal& g) {
    const double lo = op.window_lo(), hi = op.window_hi(), eps = op.epsilon();
    std::vector<double> marks{lo, hi};
    for (std::size_t k = 0; k <= g.values.size(); ++k) {
        for (double m : {g.edge(k), g.edge(k) + eps})
            if (m > lo && m < hi) marks.push_back(m);
    }
    std::sort(marks.begin(), marks.end());
    marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
    std::vector<double> breaks;
    for (std::size_t i = 0; i + 1 < marks.size(); ++i) graded_panels(marks[i], marks[i + 1], eps, breaks);
    breaks.push_back(marks.back());
    const double s = integrate_panels([&](double t) { return std::norm(reduce_at(op, g, t)); }, breaks);
    return std::sqrt(s);
}

DivergenceScan divergence_scan(std::span<const double> epsilons, double window_lo, double window_hi,
                               const StepSignal& g) {
    if (epsilons.size() < 2) throw PreconditionError("divergence_scan: need at least two epsilons");
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        if (!(epsilons[i] > 0.0) || !(epsilons[i] < 1.0)) throw PreconditionError("divergence_scan: need 0 < eps < 1");
        if (i > 0 && !(epsilons[i] < epsilons[i - 1])) throw PreconditionError("divergence_scan: epsilons must decrease");
    }
    if (std::log10(epsilons.front() / epsilons.back()) < 4.0 - 1e-9) {
        throw PreconditionError("divergence_scan: epsilons must span at least four decades");
    }
    if (window_lo > 0.0 || window_hi < 2.0) {
        throw PreconditionError("divergence_scan: window must contain [0, 2] (the support of g and a tail)");
    }
    const double gnorm = g.l2_norm();
    if (!(gnorm > 0.0)) throw PreconditionError("divergence_scan: g vanishes identically");

    DivergenceScan scan;
    std::vector<double> x, y;
    for (double eps : epsilons) {
        const OneSidedHilbertOp op(eps, window_lo, window_hi);
        const double rho = reduced_l2_norm(op, g) / gnorm;
        const double L = std::log(1.0 / eps);
        scan.rows.push_back({eps, rho, std::sqrt((L - 1.0) * (L - 1.0) + 1.0)});
        x.push_back(L);
        y.push_back(rho);
    }
    std::tie(scan.slope, scan.intercept) = fit_line(x, y);
    scan.monotone = true;
    for (std::size_t i = 1; i < scan.rows.size(); ++i)
        if (!(scan.rows[i].rho > scan.rows[i - 1].rho)) scan.monotone = false;
    return scan;
}

void write_divergence_csv(std::ostream& out, const DivergenceScan& scan) {
    CsvWriter csv(out, {"epsilon", "rho", "analytic_lower_bound"});
    for (const auto& r : scan.rows) {
        csv.cell(r.epsilon).cell(r.rho).cell(r.lower_bound);
        csv.end_row();
    }
}

std::string to_string(GateOutcome outcome) {
    switch (outcome) {
        case GateOutcome::scaling_inconsistent:
            return "scaling-inconsistent";
        case GateOutcome::admissible:
            return "admissible";
        case GateOutcome::double_endpoint:
            return "double-endpoint";
    }
    return "unknown";
}

GateRecord endpoint_gate(Exponent qt, Exponent rt) {
    const Exponent q = Exponent::finite(2), r = Exponent::infinity();
    const Rational one(1);
    const Rational lhs = q.reciprocal() + r.reciprocal() + one;
    const Rational rhs = (one - qt.reciprocal()) + (one - rt.reciprocal());
    const Rational sum = qt.reciprocal() + rt.reciprocal();
    GateRecord rec;
    rec.arithmetic = "1/q + 1/r + 1 = " + rational_str(lhs) + ", 1/qt' + 1/rt' = " + rational_str(rhs) +
                     "; scaling needs 1/qt + 1/rt = 1/2, got " + rational_str(sum);
    if (!scaling_consistent(q, r, qt, rt)) {
        rec.outcome = GateOutcome::scaling_inconsistent;
        rec.route = "fails by dimensional analysis; nothing to run";
    } else if (is_admissible(qt, rt)) {
        rec.outcome = GateOutcome::admissible;
        rec.route = "retarded_strichartz_pipeline (the retarded estimate holds)";
    } else {
        rec.outcome = GateOutcome::double_endpoint;
        rec.route = "divergence_scan (the estimate fails even for radial forcing)";
    }
    return rec;
}

std::vector<BumpRow> narrow_bump_check(const OneSidedHilbertOp& op, const StepSignal& g,
                                       std::span<const double> times, std::span<const double> widths,
                                       std::size_t grid_points, double length) {
    const std::vector<cplx> reference = delta_forcing_reduce(op, g, times);
    const cplx c = delta_trace_constant();
    const std::array<double, 2> origin{0.0, 0.0};
    std::vector<BumpRow> rows;
    for (double width : widths) {
        if (!(width > 0.0)) throw PreconditionError("narrow_bump_check: widths must be positive");
        const CartesianField bump(grid_points, length, [width](double x1, double x2) {
            return cplx(std::exp(-(x1 * x1 + x2 * x2) / (width * width)) / (pi * width * width));
        });
        auto trace = [&](double tau) { return propagate_kernel_at(bump, tau, std::span(&origin, 1))[0]; };
        double worst = 0.0;
        for (std::size_t m = 0; m < times.size(); ++m) {
            const double t = times[m];
            cplx acc = 0.0;
            for (std::size_t k = 0; k < g.values.size(); ++k) {
                const double a = g.edge(k);
                if (a >= t - op.epsilon()) break;
                const double b = std::min(g.edge(k + 1), t - op.epsilon());
                const auto breaks = geometric_breaks(t - b, t - a, 2.0);
                acc += g.values[k] * integrate_panels(trace, breaks);
            }
            const cplx ref = c * reference[m];
            if (std::abs(ref) > 0.0) worst = std::max(worst, std::abs(acc - ref) / std::abs(ref));
        }
        rows.push_back({width, worst});
    }
    return rows;
}

}  // namespace strichartz
