#include "strichartz/norms.hpp"

#include "strichartz/errors.hpp"
#include "strichartz/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace strichartz {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

}  // namespace

Rational::Rational(long long n, long long d) {
    if (d == 0) throw PreconditionError("Rational: zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    const long long g = std::gcd(n < 0 ? -n : n, d);
    num = g ? n / g : 0;
    den = g ? d / g : 1;
}

Rational operator+(Rational a, Rational b) { return Rational(a.num * b.den + b.num * a.den, a.den * b.den); }
Rational operator-(Rational a, Rational b) { return Rational(a.num * b.den - b.num * a.den, a.den * b.den); }
Rational operator*(Rational a, Rational b) { return Rational(a.num * b.num, a.den * b.den); }
bool operator<(Rational a, Rational b) { return a.num * b.den < b.num * a.den; }

Exponent Exponent::finite(long long p) { return ratio(p, 1); }

Exponent Exponent::ratio(long long num, long long den) {
    if (num <= 0 || den <= 0 || num < den) throw PreconditionError("Exponent: need p = num/den >= 1");
    return Exponent(Rational(den, num));
}

Exponent Exponent::infinity() { return Exponent(Rational(0, 1)); }

Exponent Exponent::parse(const std::string& text) {
    if (text == "inf" || text == "infinity") return infinity();
    const auto slash = text.find('/');
    try {
        std::size_t used = 0;
        if (slash == std::string::npos) {
            const long long p = std::stoll(text, &used);
            if (used != text.size()) throw std::invalid_argument(text);
            return finite(p);
        }
        const long long a = std::stoll(text.substr(0, slash), &used);
        if (used != slash) throw std::invalid_argument(text);
        const std::string rest = text.substr(slash + 1);
        const long long b = std::stoll(rest, &used);
        if (used != rest.size()) throw std::invalid_argument(text);
        return ratio(a, b);
    } catch (const std::logic_error&) {
        throw PreconditionError("Exponent: cannot parse '" + text + "' (expected p, p/q or inf)");
    }
}

double Exponent::value() const {
    return is_infinite() ? HUGE_VAL : static_cast<double>(recip_.den) / static_cast<double>(recip_.num);
}

std::string Exponent::str() const {
    if (is_infinite()) return "inf";
    if (recip_.num == 1) return std::to_string(recip_.den);
    return std::to_string(recip_.den) + "/" + std::to_string(recip_.num);
}

bool is_admissible(Exponent q, Exponent r, int dim) {
    const Rational half(1, 2);
    if (half < q.reciprocal() || half < r.reciprocal()) return false;
    if (dim == 2 && q == Exponent::finite(2) && r.is_infinite()) return false;
    return q.reciprocal() + Rational(dim, 2) * r.reciprocal() == Rational(dim, 4);
}

bool scaling_consistent(Exponent q, Exponent r, Exponent qt, Exponent rt) {
    const Rational one(1);
    return q.reciprocal() + r.reciprocal() + one == (one - qt.reciprocal()) + (one - rt.reciprocal());
}

std::string MixedNormSpec::describe() const {
    std::string s = "L^" + time_exponent.str() + "_t ";
    switch (spatial) {
        case SpatialNorm::lebesgue:
            return s + "L^" + spatial_exponent.str() + "_x";
        case SpatialNorm::angular_sup:
            return s + "L^inf_r L^2_theta";
        case SpatialNorm::angular_l1:
            return s + "L^1_r L^2_theta";
    }
    return s;
}

SpacetimeTrace::SpacetimeTrace(TimeGrid times_, std::vector<PolarField> slices_)
    : times(std::move(times_)), slices(std::move(slices_)) {
    if (slices.size() != times.size()) throw PreconditionError("SpacetimeTrace: one slice per time node");
    for (const auto& s : slices) {
        if (!s.grid()->same_as(*slices.front().grid()) || s.angular_size() != slices.front().angular_size()) {
            throw GridMismatchError("SpacetimeTrace: slices must share one polar grid");
        }
    }
}

double spatial_norm(const PolarField& field, const MixedNormSpec& spec) {
    const RadialGrid& grid = *field.grid();
    const double m = static_cast<double>(field.angular_size());
    if (spec.spatial == SpatialNorm::lebesgue) {
        if (spec.spatial_exponent.is_infinite()) {
            double sup = 0.0;
            for (auto v : field.values()) sup = std::max(sup, std::abs(v));
            return sup;
        }
        const double p = spec.spatial_exponent.value();
        double s = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            double ring = 0.0;
            for (auto v : field.row(i)) ring += std::pow(std::abs(v), p);
            s += grid.weight(i) * ring * (two_pi / m);
        }
        return std::pow(s, 1.0 / p);
    }
    double out = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double ring = 0.0;
        for (auto v : field.row(i)) ring += std::norm(v);
        const double avg = std::sqrt(ring / m);
        if (spec.spatial == SpatialNorm::angular_sup) {
            out = std::max(out, avg);
        } else {
            out += two_pi * grid.weight(i) * avg;
        }
    }
    return out;
}

double mixed_norm(const SpacetimeTrace& trace, const MixedNormSpec& spec) {
    if (spec.time_exponent.is_infinite()) {
        double sup = 0.0;
        for (const auto& s : trace.slices) sup = std::max(sup, spatial_norm(s, spec));
        return sup;
    }
    const double q = spec.time_exponent.value();
    double total = 0.0;
    for (std::size_t k = 0; k < trace.slices.size(); ++k)
        total += trace.times.weight(k) * std::pow(spatial_norm(trace.slices[k], spec), q);
    return std::pow(total, 1.0 / q);
}

double QuotientReport::refinement_spread() const {
    double worst = 0.0;
    for (std::size_t i = 1; i < refinement_history.size(); ++i) {
        const double a = refinement_history[i - 1].second, b = refinement_history[i].second;
        worst = std::max(worst, std::abs(b - a) / std::abs(b));
    }
    return worst;
}

namespace {

std::size_t angles_for(const std::vector<ModeComponent>& f) {
    int nmax = 0;
    for (const auto& c : f) nmax = std::max(nmax, std::abs(c.mode));
    return static_cast<std::size_t>(std::max(16, 4 * (2 * nmax + 2)));
}

}  // namespace

SpacetimeTrace evolve_modes(const std::vector<ModeComponent>& f, RadialGridPtr grid, const TimeGrid& times) {
    if (f.empty()) throw PreconditionError("evolve_modes: no mode components");
    const AngularGrid angles(angles_for(f));
    std::vector<RadialProfile> data;
    for (const auto& c : f) data.emplace_back(c.mode, grid, c.profile);
    std::vector<PolarField> slices;
    slices.reserve(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) {
        std::vector<RadialProfile> evolved;
        for (const auto& p : data) evolved.push_back(propagate_mode(p, times.node(k)));
        slices.push_back(mode_recompose(evolved, angles));
    }
    return SpacetimeTrace(times, std::move(slices));
}

QuotientReport strichartz_quotient(const std::vector<ModeComponent>& f, const MixedNormSpec& spec,
                                   const QuotientLadder& ladder) {
    if (ladder.radial_points.size() < 3 || ladder.radial_points.size() != ladder.time_points_per_side.size()) {
        throw PreconditionError("strichartz_quotient: need at least 3 ladder levels with matching time counts");
    }
    QuotientReport report;
    std::ostringstream in;
    for (const auto& c : f) in << "mode " << c.mode << ";";
    report.input = in.str();
    for (std::size_t level = 0; level < ladder.radial_points.size(); ++level) {
        const auto grid = make_radial_grid(ladder.kind, ladder.rmax, ladder.radial_points[level]);
        const AngularGrid angles(angles_for(f));
        std::vector<RadialProfile> data;
        for (const auto& c : f) data.emplace_back(c.mode, grid, c.profile);
        const double norm_f = l2_norm(mode_recompose(data, angles));
        if (!(norm_f > 0.0)) throw PreconditionError("strichartz_quotient: zero input");
        const TimeGrid times =
            TimeGrid::symmetric_geometric(ladder.hole, ladder.horizon, ladder.time_points_per_side[level]);
        const double value = mixed_norm(evolve_modes(f, grid, times), spec) / norm_f;
        report.refinement_history.emplace_back(ladder.radial_points[level], value);
        report.value = value;
    }
    std::ostringstream g;
    g << "radial " << (ladder.kind == RadialGridKind::graded ? "graded" : "uniform") << " rmax " << ladder.rmax
      << "; time |t| in [" << ladder.hole << ", " << ladder.horizon << "]";
    report.grid = g.str();
    return report;
}

namespace {

void check_operator_spec(const MixedNormSpec& spec) {
    if (!(spec.time_exponent == Exponent::finite(2))) {
        throw PreconditionError("estimate_operator_norm: only time exponent 2 is supported");
    }
    const bool linear = spec.spatial == SpatialNorm::lebesgue && spec.spatial_exponent == Exponent::finite(2);
    if (!linear && spec.spatial != SpatialNorm::angular_sup) {
        throw PreconditionError("estimate_operator_norm: spatial norm must be L^2 or L^inf_r L^2_theta");
    }
}

// Power ascent for Phi(x) = sum_m ||(A x)_m||^2 (linear) or
// sum_m max_i |(A x)_{i m}|^2 (sup), over unit vectors x.
// forward(x) is the (rows x times) matrix A x; back(y, rows) is A^* y, where
// for the sup objective y is zero off the selected rows.
template <class Forward, class Back>
QuotientReport power_ascent(Eigen::Index dim, bool linear, Forward forward, Back back,
                            const PowerIterationOptions& opts) {
    SeededRng rng(opts.seed);
    Eigen::VectorXcd x(dim);
    for (Eigen::Index j = 0; j < dim; ++j) x(j) = rng.complex_normal();
    x.normalize();

    std::vector<Eigen::Index> rows;
    auto select = [&](const Eigen::MatrixXcd& y, double& total) {
        if (linear) {
            total = y.squaredNorm();
            return y;
        }
        Eigen::MatrixXcd peak = Eigen::MatrixXcd::Zero(y.rows(), y.cols());
        rows.assign(static_cast<std::size_t>(y.cols()), 0);
        total = 0.0;
        for (Eigen::Index m = 0; m < y.cols(); ++m) {
            Eigen::Index best = 0;
            y.col(m).cwiseAbs2().maxCoeff(&best);
            peak(best, m) = y(best, m);
            rows[static_cast<std::size_t>(m)] = best;
            total += std::norm(y(best, m));
        }
        return peak;
    };

    double value = 0.0;
    Eigen::MatrixXcd peak = select(forward(x), value);
    QuotientReport report;
    for (std::size_t it = 1; it <= opts.max_iterations; ++it) {
        const Eigen::VectorXcd next = back(peak, linear ? nullptr : &rows);
        const double len = next.norm();
        if (!(len > 0.0)) break;
        x = next / len;
        double updated = 0.0;
        peak = select(forward(x), updated);
        const double change = std::abs(updated - value) / std::max(updated, 1e-300);
        value = updated;
        report.iterations = it;
        report.residual = change;
        if (change < opts.tolerance) {
            report.value = std::sqrt(value);
            return report;
        }
    }
    throw ConvergenceError("estimate_operator_norm: no convergence after " + std::to_string(opts.max_iterations) +
                           " iterations (last relative change " + std::to_string(report.residual) + ")");
}

}  // namespace

QuotientReport estimate_operator_norm(const ModeEvolution& ev, const MixedNormSpec& spec,
                                      const PowerIterationOptions& opts) {
    check_operator_spec(spec);
    const bool linear = spec.spatial == SpatialNorm::lebesgue;
    const RadialGrid& grid = *ev.grid();
    const auto n = static_cast<Eigen::Index>(grid.size());
    const std::size_t times = ev.times().size();
    Eigen::VectorXd sqrt_w(n);
    for (Eigen::Index j = 0; j < n; ++j) sqrt_w(j) = std::sqrt(grid.weight(static_cast<std::size_t>(j)));

    // A_m = sqrt(tau_m) P_m diag(1 / sqrt(2 pi w)) acts on x = sqrt(2 pi w) f,
    // so ||x|| = ||f||_{L^2(R^2)}; for the L^2 spec the rows also carry
    // sqrt(2 pi w_i).
    std::vector<Eigen::MatrixXcd> a(times);
    for (std::size_t m = 0; m < times; ++m) {
        a[m] = std::sqrt(ev.times().weight(m)) * ev.matrix(m);
        for (Eigen::Index j = 0; j < n; ++j) a[m].col(j) /= std::sqrt(two_pi) * sqrt_w(j);
        if (linear) {
            for (Eigen::Index i = 0; i < n; ++i) a[m].row(i) *= std::sqrt(two_pi) * sqrt_w(i);
        }
    }
    auto forward = [&](const Eigen::VectorXcd& x) {
        Eigen::MatrixXcd y(n, static_cast<Eigen::Index>(times));
        for (std::size_t m = 0; m < times; ++m) y.col(static_cast<Eigen::Index>(m)) = a[m] * x;
        return y;
    };
    auto back = [&](const Eigen::MatrixXcd& y, const std::vector<Eigen::Index>* rows) {
        Eigen::VectorXcd x = Eigen::VectorXcd::Zero(n);
        for (std::size_t m = 0; m < times; ++m) {
            const auto col = static_cast<Eigen::Index>(m);
            if (rows) {
                const Eigen::Index i = (*rows)[m];
                x += a[m].row(i).adjoint() * y(i, col);
            } else {
                x += a[m].adjoint() * y.col(col);
            }
        }
        return x;
    };
    QuotientReport report = power_ascent(n, linear, forward, back, opts);
    report.input = "mode " + std::to_string(ev.mode()) + "; seed " + std::to_string(opts.seed);
    std::ostringstream gs;
    gs << "radial " << grid.size() << " rmax " << grid.rmax() << "; times " << times << " ("
       << ev.hankel_times() << " via Hankel)";
    report.grid = gs.str();
    report.refinement_history.emplace_back(grid.size(), report.value);
    return report;
}

BandLimitedModeMap::BandLimitedModeMap(int mode, const BandLimitedSetup& s) : mode_(mode), times_({1.0}, {1.0}) {
    if (!(s.band > 0.0) || !(s.rmax > 0.0) || s.radial_points == 0 || !(s.horizon > s.hole) ||
        !(s.time_step > 0.0) || !(s.oversampling >= 1.0)) {
        throw PreconditionError("BandLimitedModeMap: invalid setup");
    }
    const auto per_side = static_cast<std::size_t>(std::ceil((s.horizon - s.hole) / s.time_step));
    times_ = TimeGrid::symmetric_uniform(s.hole, s.horizon, per_side);
    const double bound = (s.rmax + 2.0 * s.horizon * s.band) * s.band;
    const auto nk = static_cast<std::size_t>(std::ceil(s.oversampling * bound / (two_pi / 6.0)));
    freq_.resize(nk);
    for (std::size_t q = 0; q < nk; ++q) freq_[q] = s.band * (static_cast<double>(q) + 0.5) / static_cast<double>(nk);
    radii_.resize(s.radial_points);
    for (std::size_t i = 0; i < s.radial_points; ++i) {
        radii_[i] = s.rmax * (static_cast<double>(i) + 0.5) / static_cast<double>(s.radial_points);
    }
    const BesselTable table(mode, 0.0, s.band * s.rmax + 1.0);
    const double dk = s.band / static_cast<double>(nk);
    const auto nr = static_cast<Eigen::Index>(radii_.size());
    const auto nq = static_cast<Eigen::Index>(nk);
    synth_.resize(nr, nq);
    for (Eigen::Index q = 0; q < nq; ++q) {
        const double k = freq_[static_cast<std::size_t>(q)];
        const double scale = std::sqrt(k * dk / two_pi);
        for (Eigen::Index i = 0; i < nr; ++i) synth_(i, q) = scale * table(k * radii_[static_cast<std::size_t>(i)]);
    }
    const auto nt = static_cast<Eigen::Index>(times_.size());
    phase_.resize(nq, nt);
    for (Eigen::Index m = 0; m < nt; ++m) {
        const double t = times_.node(static_cast<std::size_t>(m));
        for (Eigen::Index q = 0; q < nq; ++q) {
            const double k = freq_[static_cast<std::size_t>(q)];
            phase_(q, m) = std::polar(1.0, -t * k * k);
        }
    }
}

Eigen::MatrixXcd BandLimitedModeMap::apply(const Eigen::VectorXcd& c) const {
    if (c.size() != static_cast<Eigen::Index>(freq_.size())) {
        throw GridMismatchError("BandLimitedModeMap: input length differs from frequency count");
    }
    return synth_ * (phase_.array().colwise() * c.array()).matrix();
}

Eigen::VectorXcd BandLimitedModeMap::adjoint(const Eigen::MatrixXcd& y) const {
    if (y.rows() != synth_.rows() || y.cols() != phase_.cols()) {
        throw GridMismatchError("BandLimitedModeMap: output shape mismatch");
    }
    const Eigen::MatrixXcd z = synth_.adjoint() * y;
    return (z.array() * phase_.array().conjugate()).rowwise().sum();
}

Eigen::VectorXcd BandLimitedModeMap::adjoint_column(Eigen::Index row, Eigen::Index time, cplx value) const {
    return (synth_.row(row).adjoint().array() * phase_.col(time).array().conjugate()) * value;
}

QuotientReport estimate_operator_norm(const BandLimitedModeMap& map, const MixedNormSpec& spec,
                                      const PowerIterationOptions& opts) {
    check_operator_spec(spec);
    const bool linear = spec.spatial == SpatialNorm::lebesgue;
    const auto radii = map.radii();
    const auto nr = static_cast<Eigen::Index>(radii.size());
    const auto nt = static_cast<Eigen::Index>(map.times().size());
    // Output scaling: sqrt(tau_m) per time, and sqrt(2 pi r dr) per radius for L^2.
    Eigen::MatrixXd scale(nr, nt);
    const double dr = 2.0 * radii[0];
    for (Eigen::Index m = 0; m < nt; ++m) {
        for (Eigen::Index i = 0; i < nr; ++i) {
            const double row = linear ? std::sqrt(two_pi * radii[static_cast<std::size_t>(i)] * dr) : 1.0;
            scale(i, m) = std::sqrt(map.times().weight(static_cast<std::size_t>(m))) * row;
        }
    }
    auto forward = [&](const Eigen::VectorXcd& x) -> Eigen::MatrixXcd {
        return (map.apply(x).array() * scale.array()).matrix();
    };
    auto back = [&](const Eigen::MatrixXcd& y, const std::vector<Eigen::Index>* rows) {
        if (!rows) return map.adjoint((y.array() * scale.array()).matrix());
        Eigen::VectorXcd x = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(map.input_size()));
        for (Eigen::Index m = 0; m < nt; ++m) {
            const Eigen::Index i = (*rows)[static_cast<std::size_t>(m)];
            x += map.adjoint_column(i, m, y(i, m) * scale(i, m));
        }
        return x;
    };
    QuotientReport report =
        power_ascent(static_cast<Eigen::Index>(map.input_size()), linear, forward, back, opts);
    report.input = "mode " + std::to_string(map.mode()) + "; seed " + std::to_string(opts.seed);
    std::ostringstream gs;
    gs << "radial " << nr << " rmax " << radii.back() + radii[0] << "; frequencies " << map.input_size()
       << " band " << map.frequencies().back() + map.frequencies()[0] << "; times " << nt;
    report.grid = gs.str();
    report.refinement_history.emplace_back(static_cast<std::size_t>(nr), report.value);
    return report;
}

QuotientReport estimate_operator_norm(int mode, const MixedNormSpec& spec, const OperatorNormSetup& setup) {
    const BandLimitedModeMap map(mode, setup.map);
    PowerIterationOptions opts;
    opts.tolerance = setup.tolerance;
    opts.seed = mix_seed(setup.base_seed, (static_cast<std::uint64_t>(std::abs(mode)) << 20) + setup.map.radial_points);
    return estimate_operator_norm(map, spec, opts);
}

double gaussian_endpoint_quotient(double lambda, double hole, double horizon) {
    const double a = 4.0 * std::numbers::pi * lambda * lambda;
    return std::sqrt((std::atan(a * horizon) - std::atan(a * hole)) / std::numbers::pi);
}

}  // namespace strichartz
