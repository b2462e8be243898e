#include "strichartz/multiplier_lab.hpp"

#include "strichartz/errors.hpp"
#include "strichartz/fft.hpp"
#include "strichartz/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace strichartz {

namespace {

constexpr double pi = std::numbers::pi;

PieceKind kind_of(PieceSelector piece) {
    switch (piece) {
        case PieceSelector::m0:
            return PieceKind::m0;
        case PieceSelector::m1:
            return PieceKind::m1;
        default:
            return PieceKind::mj;
    }
}

std::vector<cplx> spectrum(const LineSignal& g) {
    std::vector<cplx> data(g.values().begin(), g.values().end());
    Fft1d(g.size()).forward(data);
    return data;
}

// Inverse DFT of symbol * spectrum, normalized.
void synthesize(const Fft1d& fft, std::vector<cplx>& data) {
    fft.backward(data);
    const double scale = 1.0 / static_cast<double>(data.size());
    for (auto& v : data) v *= scale;
}

double l2(std::span<const cplx> v, double h) {
    double s = 0.0;
    for (auto x : v) s += std::norm(x);
    return std::sqrt(h * s);
}

// All T_lambda G on the finest level of a lambda grid, one row per node
// (empty rows where the symbol vanishes on every bin).
struct LambdaSweep {
    std::vector<double> lambdas;
    std::vector<std::vector<cplx>> outputs;
};

LambdaSweep sweep(const PieceSymbol& symbol, const LineSignal& g, const LambdaGrid& grid) {
    const std::size_t n = g.size();
    const std::vector<cplx> hat = spectrum(g);
    std::vector<double> root(n);
    for (std::size_t k = 0; k < n; ++k) root[k] = std::sqrt(std::abs(dft_frequency(k, n, g.spacing())));
    const Fft1d fft(n);
    LambdaSweep out;
    out.lambdas = grid.nodes();
    out.outputs.resize(out.lambdas.size());
    for (std::size_t i = 0; i < out.lambdas.size(); ++i) {
        const double lambda = out.lambdas[i];
        std::vector<cplx> data(n);
        bool any = false;
        for (std::size_t k = 0; k < n; ++k) {
            const double r = lambda * root[k];
            if (r < symbol.support_lo() || r > symbol.support_hi()) continue;
            const cplx m = symbol(r);
            if (m == cplx{}) continue;
            data[k] = m * hat[k];
            any = true;
        }
        if (!any) continue;
        synthesize(fft, data);
        out.outputs[i] = std::move(data);
    }
    return out;
}

}  // namespace

LineSignal::LineSignal(double spacing, std::vector<cplx> values) : h_(spacing), values_(std::move(values)) {
    if (!(spacing > 0.0)) throw PreconditionError("LineSignal: spacing must be positive");
    if (values_.size() < 2) throw PreconditionError("LineSignal: need at least two samples");
}

LineSignal::LineSignal(std::size_t n, double spacing, const std::function<cplx(double)>& fn)
    : LineSignal(spacing, std::vector<cplx>(n)) {
    for (std::size_t k = 0; k < n; ++k) values_[k] = fn(coordinate(k));
}

double LineSignal::l2_norm() const { return l2(values_, h_); }

double LineSignal::central_mass_fraction() const {
    double inner = 0.0, total = 0.0;
    const double quarter = 0.25 * length();
    for (std::size_t k = 0; k < size(); ++k) {
        const double w = std::norm(values_[k]);
        total += w;
        if (std::abs(coordinate(k)) < quarter) inner += w;
    }
    return total > 0.0 ? inner / total : 1.0;
}

LineSignal random_signal(std::size_t n, double spacing, std::uint64_t seed) {
    SeededRng rng(seed);
    LineSignal g(spacing, std::vector<cplx>(n));
    const double quarter = 0.25 * g.length();
    for (std::size_t k = 0; k < n; ++k) {
        if (std::abs(g.coordinate(k)) < quarter) g.mutable_values()[k] = rng.complex_normal();
    }
    return g;
}

PieceSymbol::PieceSymbol(PieceSelector piece, int mode, int scale_j, double r_hint)
    : piece_(piece), mode_(std::abs(mode)), scale_j_(scale_j) {
    if (piece_ == PieceSelector::full) {
        lo_ = 0.0;
        hi_ = std::numeric_limits<double>::infinity();
        if (r_hint > 0.0) table_ = std::make_shared<BesselTable>(mode_, 0.0, r_hint);
        return;
    }
    cut_ = std::make_unique<MultiplierPiece>(kind_of(piece_), mode_, scale_j_);
    lo_ = cut_->support_lo();
    hi_ = cut_->support_hi();
    table_ = std::make_shared<BesselTable>(mode_, lo_, hi_);
}

cplx PieceSymbol::operator()(double r) const {
    r = std::abs(r);
    if (!cut_) return table_ ? (*table_)(r) : bessel_eval(mode_, r);
    return (*cut_)(r, *table_);
}

LineSignal apply_symbol(const LineSignal& g, const std::function<cplx(double)>& symbol) {
    const std::size_t n = g.size();
    std::vector<cplx> data = spectrum(g);
    for (std::size_t k = 0; k < n; ++k) data[k] *= symbol(dft_frequency(k, n, g.spacing()));
    synthesize(Fft1d(n), data);
    return LineSignal(g.spacing(), std::move(data));
}

LineSignal apply_T(const MultiplierOperator& op, const LineSignal& g) {
    if (!(op.lambda > 0.0)) throw PreconditionError("apply_T: lambda must be positive");
    const double rmax = op.lambda * std::sqrt(0.5 / g.spacing()) + 1.0;
    const PieceSymbol symbol(op.piece, op.mode, op.scale_j, rmax);
    return apply_symbol(g, [&](double xi) {
        const double r = op.lambda * std::sqrt(std::abs(xi));
        if (r < symbol.support_lo() || r > symbol.support_hi()) return cplx{};
        return symbol(r);
    });
}

LineSignal apply_T_pointwise(PieceSelector piece, int mode, int scale_j, const LineSignal& g,
                             std::span<const double> lambda) {
    if (lambda.size() != g.size()) throw GridMismatchError("apply_T_pointwise: one lambda per sample");
    std::vector<double> distinct(lambda.begin(), lambda.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    std::vector<cplx> out(g.size());
    for (double value : distinct) {
        const LineSignal t = apply_T({piece, mode, scale_j, value}, g);
        for (std::size_t k = 0; k < g.size(); ++k) {
            if (lambda[k] == value) out[k] = t.values()[k];
        }
    }
    return LineSignal(g.spacing(), std::move(out));
}

LambdaGrid LambdaGrid::covering(PieceSelector piece, int mode, int scale_j, const LineSignal& g,
                                std::size_t per_octave, std::size_t levels) {
    const double xi_min = 1.0 / g.length();
    const double xi_max = 0.5 / g.spacing();
    const int n = std::abs(mode);
    double lo = 0.0, hi = 0.0;
    switch (piece) {
        case PieceSelector::full:
            lo = 1e-2 / std::sqrt(xi_max);
            hi = 16.0 * std::max(n, 8) / std::sqrt(xi_min);
            break;
        case PieceSelector::m0:
            lo = (n / 64.0) / std::sqrt(xi_max);
            hi = (n / 4.0) / std::sqrt(xi_min);
            break;
        default: {
            const MultiplierPiece p(kind_of(piece), n, scale_j);
            lo = std::max(p.support_lo(), 1e-3) / std::sqrt(xi_max);
            hi = p.support_hi() / std::sqrt(xi_min);
        }
    }
    return LambdaGrid{lo, hi, per_octave, levels};
}

std::vector<double> LambdaGrid::nodes() const {
    if (!(lo > 0.0) || !(hi > lo) || levels == 0) throw PreconditionError("LambdaGrid: need 0 < lo < hi");
    const double ppo = static_cast<double>(finest_per_octave());
    const std::size_t stride = std::size_t{1} << (levels - 1);
    auto count = static_cast<std::size_t>(std::ceil(std::log2(hi / lo) * ppo));
    count = (count + stride - 1) / stride * stride;
    std::vector<double> out(count + 1);
    for (std::size_t i = 0; i <= count; ++i) out[i] = lo * std::exp2(static_cast<double>(i) / ppo);
    return out;
}

MaximalResult maximal_T(PieceSelector piece, int mode, int scale_j, const LineSignal& g, const LambdaGrid& grid) {
    if (grid.per_octave < 16) throw PreconditionError("maximal_T: need at least 16 lambda points per octave");
    const double rmax = grid.hi * std::sqrt(0.5 / g.spacing()) * std::exp2(1.0 / grid.per_octave) + 1.0;
    const PieceSymbol symbol(piece, mode, scale_j, piece == PieceSelector::full ? rmax : 0.0);
    const LambdaSweep s = sweep(symbol, g, grid);
    const std::size_t n = g.size();
    std::vector<std::vector<double>> level_sup(grid.levels, std::vector<double>(n, 0.0));
    std::vector<cplx> finest(n);
    for (std::size_t i = 0; i < s.lambdas.size(); ++i) {
        if (s.outputs[i].empty()) continue;
        for (std::size_t l = 0; l < grid.levels; ++l) {
            const std::size_t stride = std::size_t{1} << (grid.levels - 1 - l);
            if (i % stride != 0) continue;
            for (std::size_t k = 0; k < n; ++k) level_sup[l][k] = std::max(level_sup[l][k], std::abs(s.outputs[i][k]));
        }
    }
    const double norm_g = g.l2_norm();
    MaximalResult out{LineSignal(g.spacing(), std::vector<cplx>(n)), 0.0, {}};
    for (std::size_t l = 0; l < grid.levels; ++l) {
        std::vector<cplx> v(n);
        for (std::size_t k = 0; k < n; ++k) v[k] = level_sup[l][k];
        const double ratio = norm_g > 0.0 ? l2(v, g.spacing()) / norm_g : 0.0;
        out.refinement_history.emplace_back(grid.per_octave << l, ratio);
        if (l + 1 == grid.levels) {
            out.ratio = ratio;
            out.sup = LineSignal(g.spacing(), std::move(v));
        }
    }
    return out;
}

std::pair<double, double> fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw PreconditionError("fit_line: need matching samples");
    const double m = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return {slope, (sy - slope * sx) / m};
}

DecayScan piece_decay_scan(int n, int j_lo, int j_hi, std::size_t trials, const DecaySetup& setup) {
    n = std::abs(n);
    if (j_hi - j_lo + 1 < 4) throw PreconditionError("piece_decay_scan: need at least four scales");
    if (std::ldexp(1.0, j_lo) < 8.0 * n) throw PreconditionError("piece_decay_scan: need 2^j >= 8n");
    if (trials == 0) throw PreconditionError("piece_decay_scan: need at least one trial");
    DecayScan out;
    out.n = n;
    std::vector<LineSignal> signals;
    std::vector<std::uint64_t> seeds;
    for (std::size_t t = 0; t < trials; ++t) {
        seeds.push_back(mix_seed(setup.base_seed, t));
        signals.push_back(random_signal(setup.signal_points, setup.spacing, seeds.back()));
    }
    std::vector<double> js, logs;
    for (int j = j_lo; j <= j_hi; ++j) {
        const PieceSymbol symbol(PieceSelector::mj, n, j);
        double best = 0.0;
        for (std::size_t t = 0; t < trials; ++t) {
            const LambdaGrid grid =
                LambdaGrid::covering(PieceSelector::mj, n, j, signals[t], setup.per_octave, setup.levels);
            const LambdaSweep s = sweep(symbol, signals[t], grid);
            std::vector<double> sup(signals[t].size(), 0.0);
            for (const auto& row : s.outputs) {
                for (std::size_t k = 0; k < row.size(); ++k) sup[k] = std::max(sup[k], std::abs(row[k]));
            }
            double ss = 0.0;
            for (double v : sup) ss += v * v;
            const double ratio = std::sqrt(setup.spacing * ss) / signals[t].l2_norm();
            out.rows.push_back({n, j, seeds[t], ratio});
            best = std::max(best, ratio);
        }
        out.max_ratio.emplace_back(j, best);
        js.push_back(j);
        logs.push_back(std::log2(best));
    }
    std::tie(out.slope, out.intercept) = fit_line(js, logs);
    return out;
}

std::vector<cplx> kernel_K(int mode, int scale_j, double lambda, std::span<const double> x) {
    if (!(lambda > 0.0)) throw PreconditionError("kernel_K: lambda must be positive");
    const double limit = lambda * lambda / (2.0 * std::ldexp(1.0, 2 * scale_j + 2));
    for (std::size_t i = 1; i < x.size(); ++i) {
        if (std::abs(x[i] - x[i - 1]) > limit) {
            throw ResolutionError("kernel_K: x spacing " + std::to_string(std::abs(x[i] - x[i - 1])) +
                                  " exceeds the Nyquist spacing " + std::to_string(limit));
        }
    }
    const PieceSymbol symbol(PieceSelector::mj, mode, scale_j);
    const double lo = symbol.support_lo(), hi = symbol.support_hi();
    const double inv = 1.0 / (lambda * lambda);
    std::vector<cplx> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double phase = 2.0 * pi * std::abs(x[i]) * (hi * hi - lo * lo) * inv + (hi - lo);
        const auto panels = static_cast<std::size_t>(std::ceil(phase / 2.0)) + 8;
        const auto breaks = uniform_breaks(lo, hi, panels);
        out[i] = 4.0 * inv * integrate_panels(
                                 [&](double s) { return s * std::cos(2.0 * pi * x[i] * s * s * inv) * symbol(s); },
                                 breaks);
    }
    return out;
}

double EnvelopePhi::operator()(double r) const {
    r = std::abs(r);
    const double big = std::ldexp(1.0, scale_j) / a;
    if (r == 0.0) return constant * big;
    return constant * std::min({1.0 / std::sqrt(r), big, big * std::pow(big * r, -10.0)});
}

double EnvelopePhi::l1_norm() const {
    const double big = std::ldexp(1.0, scale_j) / a;
    double half = 0.0;
    if (big >= 1.0) {
        // A on [0, A^-2], r^{-1/2} up to r3 = A^{-18/19}, then A^-9 r^-10
        const double r1 = 1.0 / (big * big);
        const double r3 = std::pow(big, -18.0 / 19.0);
        half = big * r1 + 2.0 * (std::sqrt(r3) - std::sqrt(r1)) + std::pow(big, -9.0) * std::pow(r3, -9.0) / 9.0;
    } else {
        // A on [0, 1/A], then A^-9 r^-10
        half = 1.0 + 1.0 / 9.0;
    }
    return 2.0 * constant * half;
}

double ttstar_lhs(int mode, int scale_j, double a, double b, double separation) {
    if (!(a > 0.0) || !(b > 0.0)) throw PreconditionError("ttstar_lhs: a and b must be positive");
    const PieceSymbol symbol(PieceSelector::mj, mode, scale_j);
    const double lo = std::max(symbol.support_lo(), symbol.support_lo() * a / b);
    const double hi = std::min(symbol.support_hi(), symbol.support_hi() * a / b);
    if (!(hi > lo)) return 0.0;
    const double inv = 1.0 / (a * a);
    const double phase = 2.0 * pi * std::abs(separation) * (hi * hi - lo * lo) * inv + (hi - lo) * (1.0 + b / a);
    const auto panels = static_cast<std::size_t>(std::ceil(phase / 2.0)) + 8;
    const auto breaks = uniform_breaks(lo, hi, panels);
    const cplx value = 4.0 * inv * integrate_panels(
                                       [&](double s) {
                                           return s * std::cos(2.0 * pi * separation * s * s * inv) * symbol(s) *
                                                  std::conj(symbol(b * s / a));
                                       },
                                       breaks);
    return std::abs(value);
}

TtstarScan ttstar_domination_scan(int mode, int scale_j, std::span<const TtstarSample> samples) {
    TtstarScan out;
    out.mode = std::abs(mode);
    out.j = scale_j;
    for (const auto& s : samples) {
        TtstarRow row{scale_j, s.a, s.b, s.separation, 0.0, 0.0, 0.0};
        row.lhs = ttstar_lhs(mode, scale_j, s.a, s.b, s.separation);
        row.phi = EnvelopePhi{scale_j, s.a}(s.separation);
        row.ratio = row.lhs / row.phi;
        out.max_ratio = std::max(out.max_ratio, row.ratio);
        out.rows.push_back(row);
    }
    return out;
}

std::vector<TtstarSample> default_ttstar_samples(int scale_j) {
    std::vector<TtstarSample> out;
    const double two_j = std::ldexp(1.0, scale_j);
    for (int k = -3; k <= 3; ++k) {
        const double a = two_j * std::exp2(k);
        for (double ratio : {0.5, 1.0, 2.0, 100.0}) {
            for (double d : {0.0, 0.25, 1.0, 4.0, 16.0, 64.0}) out.push_back({a, ratio * a, d * a / two_j});
        }
    }
    return out;
}

std::vector<PhiL1Row> phi_l1_scan(int j_lo, int j_hi, int k_lo, int k_hi) {
    std::vector<PhiL1Row> out;
    for (int j = j_lo; j <= j_hi; ++j) {
        for (int k = k_lo; k <= k_hi; ++k) {
            const double a = std::ldexp(1.0, j + k);
            const double l1 = EnvelopePhi{j, a}.l1_norm();
            out.push_back({j, a, l1, l1 * std::exp2(0.5 * j)});
        }
    }
    return out;
}

SobolevCheck lambda_sobolev_check(int n, std::span<const SobolevTestFunction> family) {
    if (n <= 0) throw PreconditionError("lambda_sobolev_check: need n >= 1");
    SobolevCheck out;
    out.n = n;
    const double nd = static_cast<double>(n);
    for (const auto& f : family) {
        if (!(f.log_hi > f.log_lo)) throw PreconditionError("lambda_sobolev_check: empty range for " + f.name);
        auto density = [&](double y) {
            const double lambda = std::exp(y);
            return nd * std::norm(f.g(lambda)) + std::norm(lambda * f.dg(lambda)) / nd;
        };
        const auto rule = composite_gauss_rule(uniform_breaks(f.log_lo, f.log_hi, 400));
        double integral = 0.0, sup = 0.0, peak = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double d = density(rule.nodes[i]);
            integral += rule.weights[i] * d;
            peak = std::max(peak, d);
            sup = std::max(sup, std::abs(f.g(std::exp(rule.nodes[i]))));
        }
        const double edge = std::max(density(f.log_lo), density(f.log_hi));
        const bool finite = !(edge > 1e-10 * peak);
        out.members.push_back({f.name, sup, std::sqrt(integral), finite});
        if (!finite) {
            out.any_infinite = true;
        } else if (integral > 0.0) {
            out.ratio = std::max(out.ratio, sup / std::sqrt(integral));
        }
    }
    return out;
}

std::vector<SobolevTestFunction> log_bump_family(int n) {
    const double nd = static_cast<double>(n);
    auto make = [&](std::string name, std::function<double(double)> phi, std::function<double(double)> dphi,
                    double reach) {
        return SobolevTestFunction{
            std::move(name), [phi, nd](double l) { return cplx(phi(nd * std::log(l)), 0.0); },
            [dphi, nd](double l) { return cplx(dphi(nd * std::log(l)) * nd / l, 0.0); }, -reach / nd, reach / nd};
    };
    return {
        make("gaussian", [](double y) { return std::exp(-y * y); },
             [](double y) { return -2.0 * y * std::exp(-y * y); }, 12.0),
        make("odd_gaussian", [](double y) { return y * std::exp(-y * y); },
             [](double y) { return (1.0 - 2.0 * y * y) * std::exp(-y * y); }, 12.0),
        make("sech", [](double y) { return 1.0 / std::cosh(y); },
             [](double y) { return -std::tanh(y) / std::cosh(y); }, 40.0),
    };
}

ReductionReport reduction_check(int mode, const std::function<cplx(double)>& profile, RadialGridPtr grid,
                                std::span<const double> times, double sample_rmax) {
    ReductionReport out;
    out.mode = mode;
    const RadialProfile f(mode, grid, profile);
    const double xi_max = grid->rmax() * grid->rmax();
    for (double t : times) {
        if (t == 0.0) throw PreconditionError("reduction_check: t must be nonzero");
        const RadialProfile u = propagate_mode(f, t);
        const double x = 1.0 / (8.0 * pi * t);
        const double lambda_max = sample_rmax / (2.0 * std::abs(t));
        const BesselTable table(mode, 0.0, lambda_max * grid->rmax() + 1.0);
        double worst = 0.0, scale = 0.0;
        const std::size_t first = out.rows.size();
        for (std::size_t i = 0; i < grid->size(); ++i) {
            const double r = grid->node(i);
            if (r > sample_rmax) break;
            const double lambda = r / (2.0 * std::abs(t));
            const double phase = 2.0 * pi * std::abs(x) * xi_max + lambda * grid->rmax();
            const auto panels = static_cast<std::size_t>(std::ceil(phase / 2.0)) + 16;
            const cplx side = integrate_panels(
                [&](double xi) {
                    const double root = std::sqrt(xi);
                    return table(lambda * root) * std::polar(1.0, 2.0 * pi * x * xi) * profile(root);
                },
                uniform_breaks(0.0, xi_max, panels));
            const ReductionRow row{t, r, std::abs(u.values[i]), std::abs(side) / (4.0 * std::abs(t))};
            scale = std::max(scale, row.lhs);
            out.rows.push_back(row);
        }
        for (std::size_t k = first; k < out.rows.size(); ++k) {
            worst = std::max(worst, std::abs(out.rows[k].lhs - out.rows[k].rhs));
        }
        if (scale > 0.0) out.max_discrepancy = std::max(out.max_discrepancy, worst / scale);
        else if (worst > 0.0) out.max_discrepancy = std::numeric_limits<double>::infinity();
    }
    return out;
}

AdversarialResult adversarial_lambda(int mode, int scale_j, const LineSignal& g, const LambdaGrid& grid,
                                     int block_log2, bool greedy, std::uint64_t seed) {
    if (block_log2 < 0 || (std::size_t{1} << block_log2) > g.size()) {
        throw PreconditionError("adversarial_lambda: block size out of range");
    }
    const PieceSymbol symbol(PieceSelector::mj, mode, scale_j);
    const LambdaSweep s = sweep(symbol, g, grid);
    std::vector<std::size_t> live;
    for (std::size_t i = 0; i < s.outputs.size(); ++i) {
        if (!s.outputs[i].empty()) live.push_back(i);
    }
    const std::size_t n = g.size();
    const std::size_t block = std::size_t{1} << block_log2;
    SeededRng rng(seed);
    std::vector<cplx> out(n);
    std::vector<double> sup(n, 0.0);
    for (std::size_t i : live) {
        for (std::size_t k = 0; k < n; ++k) sup[k] = std::max(sup[k], std::abs(s.outputs[i][k]));
    }
    for (std::size_t start = 0; start < n && !live.empty(); start += block) {
        const std::size_t end = std::min(n, start + block);
        std::size_t pick = live[0];
        if (greedy) {
            double best = -1.0;
            for (std::size_t i : live) {
                double e = 0.0;
                for (std::size_t k = start; k < end; ++k) e += std::norm(s.outputs[i][k]);
                if (e > best) {
                    best = e;
                    pick = i;
                }
            }
        } else {
            pick = live[static_cast<std::size_t>(rng.uniform() * static_cast<double>(live.size())) % live.size()];
        }
        for (std::size_t k = start; k < end; ++k) out[k] = s.outputs[pick][k];
    }
    const double norm_g = g.l2_norm();
    std::vector<cplx> sv(sup.begin(), sup.end());
    return {l2(out, g.spacing()) / norm_g, l2(sv, g.spacing()) / norm_g};
}

}  // namespace strichartz
