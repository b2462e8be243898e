#include "strichartz/christ_kiselev.hpp"

#include "strichartz/csv.hpp"
#include "strichartz/errors.hpp"
#include "strichartz/propagator.hpp"
#include "strichartz/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace strichartz {

CumulativeMap::CumulativeMap(const TimeGrid& grid, std::span<const cplx> f, double p) : p_(p), total_(0.0) {
    if (f.size() != grid.size()) throw GridMismatchError("CumulativeMap: f and grid differ in length");
    if (!(p >= 1.0)) throw PreconditionError("CumulativeMap: need p >= 1");
    const std::size_t n = grid.size();
    lo_.resize(n);
    hi_.resize(n);
    std::vector<double> mass(n);
    for (std::size_t k = 0; k < n; ++k) {
        lo_[k] = grid.node(k) - 0.5 * grid.weight(k);
        hi_[k] = grid.node(k) + 0.5 * grid.weight(k);
        if (k > 0 && lo_[k] < hi_[k - 1] - 1e-12 * grid.weight(k)) {
            throw PreconditionError("CumulativeMap: grid cells overlap");
        }
        mass[k] = grid.weight(k) * std::pow(std::abs(f[k]), p);
        total_ += mass[k];
    }
    if (!(total_ > 0.0)) throw PreconditionError("CumulativeMap: f vanishes identically");
    edge_.resize(n + 1);
    edge_[0] = 0.0;
    double run = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        run += mass[k];
        edge_[k + 1] = mass[k] > 0.0 ? run / total_ : edge_[k];
    }
    edge_[n] = 1.0;
    for (std::size_t k = n; k-- > 0;)
        if (mass[k] == 0.0) edge_[k] = edge_[k + 1];
        else break;
}

double CumulativeMap::operator()(double t) const {
    if (t <= lo_.front()) return 0.0;
    if (t >= hi_.back()) return 1.0;
    const auto it = std::upper_bound(lo_.begin(), lo_.end(), t);
    const std::size_t k = static_cast<std::size_t>(it - lo_.begin()) - 1;
    if (t >= hi_[k]) return edge_[k + 1];
    return edge_[k] + (t - lo_[k]) / (hi_[k] - lo_[k]) * (edge_[k + 1] - edge_[k]);
}

double CumulativeMap::inverse(double y) const {
    if (y <= 0.0) return lo_.front();
    if (y > 1.0) return hi_.back();
    const auto it = std::lower_bound(edge_.begin() + 1, edge_.end(), y);
    const std::size_t m = static_cast<std::size_t>(it - edge_.begin());
    const std::size_t k = m - 1;
    const double span = edge_[m] - edge_[k];
    if (!(span > 0.0)) return lo_[k];
    return lo_[k] + (y - edge_[k]) / span * (hi_[k] - lo_[k]);
}

double CumulativeMap::cell_fraction(std::size_t k, double a, double b, bool closed_right) const {
    const double f0 = edge_[k], f1 = edge_[k + 1];
    if (f1 > f0) return std::max(0.0, std::min(b, f1) - std::max(a, f0)) / (f1 - f0);
    return (a <= f0 && (f0 < b || (closed_right && f0 <= b))) ? 1.0 : 0.0;
}

double DyadicInterval::lo() const { return std::ldexp(static_cast<double>(index), -level); }
double DyadicInterval::hi() const { return std::ldexp(static_cast<double>(index + 1), -level); }

bool DyadicInterval::contains(double y) const {
    const bool last = index + 1 == (std::uint64_t{1} << level);
    return lo() <= y && (y < hi() || (last && y <= hi()));
}

namespace {

std::vector<CellShare> cells_in(const CumulativeMap& map, const DyadicInterval& iv) {
    const double a = iv.lo(), b = iv.hi();
    const bool closed = iv.index + 1 == (std::uint64_t{1} << iv.level);
    std::vector<CellShare> out;
    std::size_t k = 0;
    {
        std::size_t lo = 0, hi = map.cells();
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (map.edge(mid + 1) < a) lo = mid + 1;
            else hi = mid;
        }
        k = lo;
    }
    for (; k < map.cells() && map.edge(k) <= b; ++k) {
        const double frac = map.cell_fraction(k, a, b, closed);
        if (frac > 0.0) out.push_back({k, frac});
    }
    return out;
}

void check_tree_input(const KernelOperator& op, std::span<const cplx> f, const DyadicPairTree& tree) {
    const TimeGrid& grid = op.grid();
    if (f.size() != grid.size() || tree.input().size() != f.size() || tree.map().cells() != grid.size()) {
        throw PreconditionError("christ_kiselev: tree, f and operator grid differ in size");
    }
    for (std::size_t k = 0; k < f.size(); ++k) {
        if (tree.input()[k] != f[k]) throw PreconditionError("christ_kiselev: tree was built from a different f");
        if (tree.map().cell_lo(k) != grid.node(k) - 0.5 * grid.weight(k)) {
            throw PreconditionError("christ_kiselev: tree was built on a different time grid");
        }
    }
}

// T(chi_I f) at the cells of J.
std::vector<cplx> pair_block(const KernelOperator& op, std::span<const cplx> f, const SiblingPair& pair) {
    std::vector<cplx> v(pair.right_cells.size());
    const auto& K = op.kernel();
    for (std::size_t r = 0; r < pair.right_cells.size(); ++r) {
        const auto i = static_cast<Eigen::Index>(pair.right_cells[r].cell);
        cplx acc = 0.0;
        for (const auto& src : pair.left_cells) {
            const std::size_t k = src.cell;
            acc += K(i, static_cast<Eigen::Index>(k)) * (op.grid().weight(k) * src.fraction) * f[k];
        }
        v[r] = acc;
    }
    return v;
}

double weighted_l2(const TimeGrid& grid, std::span<const cplx> v) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += grid.weight(i) * std::norm(v[i]);
    return std::sqrt(s);
}

cplx psi(cplx z, double r) {
    const double a = std::abs(z);
    if (a == 0.0) return 0.0;
    return std::pow(a, r - 1.0) * (z / a);
}

double vec_norm(const Eigen::VectorXcd& v, double r) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) s += std::pow(std::abs(v(i)), r);
    return std::pow(s, 1.0 / r);
}

}  // namespace

DyadicPairTree::DyadicPairTree(CumulativeMap map, int jmax, std::vector<cplx> f)
    : map_(std::move(map)), jmax_(jmax), f_(std::move(f)) {
    levels_.resize(static_cast<std::size_t>(jmax_));
    for (int j = 1; j <= jmax_; ++j) {
        auto& pairs = levels_[static_cast<std::size_t>(j - 1)];
        const std::uint64_t parents = std::uint64_t{1} << (j - 1);
        pairs.reserve(parents);
        for (std::uint64_t m = 0; m < parents; ++m) {
            SiblingPair pr;
            pr.left = {j, 2 * m};
            pr.right = {j, 2 * m + 1};
            pr.left_t0 = map_.inverse(pr.left.lo());
            pr.left_t1 = map_.inverse(pr.left.hi());
            pr.right_t0 = map_.inverse(pr.right.lo());
            pr.right_t1 = map_.inverse(pr.right.hi());
            pr.left_cells = cells_in(map_, pr.left);
            pr.right_cells = cells_in(map_, pr.right);
            pairs.push_back(std::move(pr));
        }
    }
    const std::uint64_t count = std::uint64_t{1} << jmax_;
    leaves_.reserve(count);
    for (std::uint64_t m = 0; m < count; ++m) leaves_.push_back(cells_in(map_, {jmax_, m}));
}

std::size_t DyadicPairTree::count_covering(double x, double y) const {
    std::size_t hits = 0;
    for (const auto& pairs : levels_)
        for (const auto& pr : pairs)
            if (pr.left.contains(x) && pr.right.contains(y)) ++hits;
    return hits;
}

DyadicPairTree build_pair_tree(const TimeGrid& grid, std::span<const cplx> f, double p, int jmax) {
    if (!(p > 1.0) || !std::isfinite(p)) throw PreconditionError("build_pair_tree: need 1 < p < inf");
    if (jmax < 1) throw PreconditionError("build_pair_tree: need jmax >= 1");
    if ((std::size_t{1} << jmax) > grid.size()) {
        throw ResolutionError("build_pair_tree: jmax = " + std::to_string(jmax) + " exceeds log2 of the " +
                              std::to_string(grid.size()) + "-cell grid");
    }
    CumulativeMap map(grid, f, p);
    return DyadicPairTree(std::move(map), jmax, std::vector<cplx>(f.begin(), f.end()));
}

KernelOperator::KernelOperator(TimeGrid grid, Eigen::MatrixXcd kernel, double p, double q)
    : grid_(std::move(grid)), kernel_(std::move(kernel)), p_(p), q_(q) {
    const auto n = static_cast<Eigen::Index>(grid_.size());
    if (kernel_.rows() != n || kernel_.cols() != n) throw GridMismatchError("KernelOperator: kernel is not N x N");
    if (!(p_ >= 1.0) || !(q_ >= 1.0)) throw PreconditionError("KernelOperator: exponents must be >= 1");
}

KernelOperator::KernelOperator(TimeGrid grid, const std::function<cplx(double, double)>& kernel, double p, double q)
    : grid_(std::move(grid)), p_(p), q_(q) {
    const auto n = static_cast<Eigen::Index>(grid_.size());
    kernel_.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index k = 0; k < n; ++k)
            kernel_(i, k) = kernel(grid_.node(static_cast<std::size_t>(i)), grid_.node(static_cast<std::size_t>(k)));
    if (!(p_ >= 1.0) || !(q_ >= 1.0)) throw PreconditionError("KernelOperator: exponents must be >= 1");
}

std::vector<cplx> KernelOperator::apply(std::span<const cplx> f) const {
    if (f.size() != grid_.size()) throw GridMismatchError("KernelOperator::apply: length mismatch");
    std::vector<cplx> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        cplx acc = 0.0;
        for (std::size_t k = 0; k < f.size(); ++k)
            acc += kernel_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) * grid_.weight(k) * f[k];
        out[i] = acc;
    }
    return out;
}

KernelOperator KernelOperator::time_reversed() const {
    const std::size_t n = grid_.size();
    std::vector<double> nodes(n), weights(n);
    for (std::size_t i = 0; i < n; ++i) {
        nodes[i] = -grid_.node(n - 1 - i);
        weights[i] = grid_.weight(n - 1 - i);
    }
    Eigen::MatrixXcd k = kernel_.reverse();
    return KernelOperator(TimeGrid(std::move(nodes), std::move(weights)), std::move(k), p_, q_);
}

KernelOperator hilbert_kernel(const TimeGrid& grid, double p, double q) {
    return KernelOperator(
        grid, [](double t, double s) { return t == s ? cplx(0.0) : cplx(1.0 / (t - s)); }, p, q);
}

double lp_norm(const TimeGrid& grid, std::span<const cplx> f, double p) {
    if (f.size() != grid.size()) throw GridMismatchError("lp_norm: length mismatch");
    double s = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) s += grid.weight(k) * std::pow(std::abs(f[k]), p);
    return std::pow(s, 1.0 / p);
}

std::vector<cplx> apply_retarded_direct(const KernelOperator& op, std::span<const cplx> f) {
    if (f.size() != op.size()) throw GridMismatchError("apply_retarded_direct: length mismatch");
    std::vector<cplx> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        cplx acc = 0.0;
        for (std::size_t k = 0; k < i; ++k)
            acc += op.kernel()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) * op.grid().weight(k) * f[k];
        out[i] = acc;
    }
    return out;
}

CkAssembly apply_retarded_ck(const KernelOperator& op, std::span<const cplx> f, const DyadicPairTree& tree) {
    check_tree_input(op, f, tree);
    const std::size_t n = f.size();
    const TimeGrid& grid = op.grid();
    const auto& K = op.kernel();
    const std::vector<cplx> direct = apply_retarded_direct(op, f);
    const double direct_norm = weighted_l2(grid, direct);
    const double scale = direct_norm > 0.0 ? direct_norm : 1.0;

    CkAssembly out;
    out.assembled.assign(n, 0.0);
    out.residual.assign(n, 0.0);
    std::vector<cplx> block(n);
    for (int j = 1; j <= tree.jmax(); ++j) {
        std::fill(block.begin(), block.end(), cplx(0.0));
        for (const auto& pr : tree.level(j)) {
            const std::vector<cplx> v = pair_block(op, f, pr);
            for (std::size_t r = 0; r < v.size(); ++r)
                block[pr.right_cells[r].cell] += pr.right_cells[r].fraction * v[r];
        }
        for (std::size_t i = 0; i < n; ++i) out.assembled[i] += block[i];
        out.level_l2.push_back(weighted_l2(grid, block));
        std::vector<cplx> gap(n);
        for (std::size_t i = 0; i < n; ++i) gap[i] = direct[i] - out.assembled[i];
        out.truncation_error.push_back(weighted_l2(grid, gap) / scale);
    }

    std::vector<double> self_overlap(n, 0.0);
    for (const auto& leaf : tree.leaves()) {
        for (const auto& tgt : leaf) {
            const std::size_t i = tgt.cell;
            self_overlap[i] += tgt.fraction * tgt.fraction;
            for (const auto& src : leaf) {
                const std::size_t k = src.cell;
                if (k >= i) continue;
                out.residual[i] += tgt.fraction * src.fraction *
                                   K(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) * grid.weight(k) * f[k];
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        out.residual[i] -= 0.5 * (1.0 - self_overlap[i]) * K(ii, ii) * grid.weight(i) * f[i];
    }

    std::vector<cplx> miss(n);
    for (std::size_t i = 0; i < n; ++i) miss[i] = out.assembled[i] + out.residual[i] - direct[i];
    out.identity_error = weighted_l2(grid, miss) / scale;
    return out;
}

double level_norm(const KernelOperator& op, const DyadicPairTree& tree, int j, double q) {
    if (j < 1 || j > tree.jmax()) throw PreconditionError("level_norm: level outside 1..jmax");
    check_tree_input(op, tree.input(), tree);
    double s = 0.0;
    for (const auto& pr : tree.level(j)) {
        const std::vector<cplx> v = pair_block(op, tree.input(), pr);
        for (std::size_t r = 0; r < v.size(); ++r) {
            const auto& c = pr.right_cells[r];
            s += op.grid().weight(c.cell) * c.fraction * std::pow(std::abs(v[r]), q);
        }
    }
    return std::pow(s, 1.0 / q);
}

NormEstimate operator_norm_pq(const KernelOperator& op, const BoydOptions& opts) {
    const double p = op.p(), q = op.q();
    if (!(p > 1.0) || !std::isfinite(q)) throw PreconditionError("operator_norm_pq: need 1 < p and q < inf");
    const double pd = p / (p - 1.0);
    const auto n = static_cast<Eigen::Index>(op.size());
    Eigen::MatrixXcd A = op.kernel();
    bool nonnegative = true;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index k = 0; k < n; ++k) {
            const cplx v = A(i, k);
            if (v.imag() != 0.0 || v.real() < 0.0) nonnegative = false;
            A(i, k) = v * std::pow(op.grid().weight(static_cast<std::size_t>(i)), 1.0 / q) *
                      std::pow(op.grid().weight(static_cast<std::size_t>(k)), 1.0 - 1.0 / p);
        }
    }
    Eigen::VectorXcd x(n);
    if (nonnegative) {
        x.setOnes();
    } else {
        SeededRng rng(opts.seed);
        for (Eigen::Index i = 0; i < n; ++i) x(i) = rng.complex_normal();
    }
    x /= vec_norm(x, p);
    NormEstimate est;
    double value = vec_norm(A * x, q);
    for (std::size_t it = 1; it <= opts.max_iterations; ++it) {
        Eigen::VectorXcd y = A * x;
        for (Eigen::Index i = 0; i < n; ++i) y(i) = psi(y(i), q);
        Eigen::VectorXcd z = A.adjoint() * y;
        for (Eigen::Index i = 0; i < n; ++i) z(i) = psi(z(i), pd);
        const double zn = vec_norm(z, p);
        if (zn == 0.0) {
            est.value = 0.0;
            est.iterations = it;
            return est;
        }
        x = z / zn;
        const double next = vec_norm(A * x, q);
        const bool done = std::abs(next - value) <= opts.tolerance * std::max(next, 1e-300);
        value = next;
        if (done) {
            est.value = value;
            est.iterations = it;
            return est;
        }
    }
    throw ConvergenceError("operator_norm_pq: no convergence in " + std::to_string(opts.max_iterations) +
                           " iterations");
}

LevelCertificate per_scale_norm_check(const KernelOperator& op, std::span<const cplx> f,
                                      const DyadicPairTree& tree, int j, double operator_norm) {
    const double p = op.p(), q = op.q();
    if (!(p < q)) {
        throw PreconditionError("per_scale_norm_check: certification needs p < q (got p = " + format_double(p) +
                                ", q = " + format_double(q) + ")");
    }
    if (tree.map().p() != p) throw PreconditionError("per_scale_norm_check: tree built for another p");
    check_tree_input(op, f, tree);
    if (std::abs(lp_norm(op.grid(), f, p) - 1.0) > 1e-9) throw PreconditionError("per_scale_norm_check: need ||f||_p = 1");
    if (j < 1 || j > tree.jmax()) throw PreconditionError("per_scale_norm_check: level outside 1..jmax");

    LevelCertificate c;
    c.j = j;
    c.pairs = tree.level(j).size();
    const double target = std::ldexp(1.0, -j);
    double worst = 0.0;
    for (const auto& pr : tree.level(j)) {
        for (const auto* cells : {&pr.left_cells, &pr.right_cells}) {
            double mass = 0.0;
            for (const auto& s : *cells) mass += op.grid().weight(s.cell) * s.fraction * std::pow(std::abs(f[s.cell]), p);
            worst = std::max(worst, std::abs(mass - target));
        }
    }
    c.cell_mass_error = worst;
    c.level_norm = level_norm(op, tree, j, q);
    c.certified_bound = operator_norm * std::pow(2.0, -j * (1.0 / p - 1.0 / q));
    return c;
}

std::vector<LevelCertificate> certify_levels(const KernelOperator& op, std::span<const cplx> f, int jmax,
                                             const BoydOptions& opts) {
    const double norm = lp_norm(op.grid(), f, op.p());
    if (!(norm > 0.0)) throw PreconditionError("certify_levels: f vanishes identically");
    std::vector<cplx> g(f.begin(), f.end());
    for (auto& v : g) v /= norm;
    const DyadicPairTree tree = build_pair_tree(op.grid(), g, op.p(), jmax);
    const double t_norm = operator_norm_pq(op, opts).value;
    std::vector<LevelCertificate> rows;
    for (int j = 1; j <= jmax; ++j) rows.push_back(per_scale_norm_check(op, g, tree, j, t_norm));
    return rows;
}

void write_ck_levels_csv(std::ostream& out, std::span<const LevelCertificate> rows) {
    CsvWriter csv(out, {"j", "pairs", "level_norm", "certified_bound"});
    for (const auto& r : rows) {
        csv.cell(r.j).cell(r.pairs).cell(r.level_norm).cell(r.certified_bound);
        csv.end_row();
    }
}

Exponent dual_exponent(Exponent p) {
    const Rational d = Rational(1) - p.reciprocal();
    if (d.num == 0) return Exponent::infinity();
    return Exponent::ratio(d.den, d.num);
}

namespace {

std::size_t angles_for(const RetardedForcing& forcing) {
    int nmax = 0;
    for (const auto& c : forcing.components) nmax = std::max(nmax, std::abs(c.mode));
    return static_cast<std::size_t>(std::max(16, 4 * (2 * nmax + 2)));
}

double retarded_level(const RetardedForcing& forcing, Exponent qt, Exponent rt, const RetardedLadder& ladder,
                      std::size_t level) {
    const auto grid = make_radial_grid(ladder.kind, ladder.rmax, ladder.radial_points[level]);
    const std::size_t ns = ladder.forcing_points[level];
    const double ds = (forcing.s_hi - forcing.s_lo) / static_cast<double>(ns);
    std::vector<double> s(ns);
    for (std::size_t k = 0; k < ns; ++k) s[k] = forcing.s_lo + (static_cast<double>(k) + 0.5) * ds;

    // forcing samples, mode by mode
    std::vector<std::vector<RadialProfile>> samples(forcing.components.size());
    bool any = false;
    for (std::size_t c = 0; c < forcing.components.size(); ++c) {
        const auto& comp = forcing.components[c];
        for (std::size_t k = 0; k < ns; ++k) {
            const double sk = s[k];
            samples[c].emplace_back(comp.mode, grid, [&](double r) { return comp.profile(sk, r); });
            for (auto v : samples[c].back().values) any = any || v != cplx(0.0);
        }
    }
    if (!any) throw PreconditionError("retarded_strichartz_pipeline: forcing vanishes identically");

    // input norm ||F||_{L^{qt'}_t L^{rt'}_x}
    const Exponent qd = dual_exponent(qt), rd = dual_exponent(rt);
    MixedNormSpec in_spec{qd, SpatialNorm::lebesgue, rd};
    const AngularGrid angles(angles_for(forcing));
    double in_norm = 0.0;
    for (std::size_t k = 0; k < ns; ++k) {
        std::vector<RadialProfile> slice;
        for (std::size_t c = 0; c < samples.size(); ++c) slice.push_back(samples[c][k]);
        const double v = spatial_norm(mode_recompose(slice, angles), in_spec);
        if (qd.is_infinite()) in_norm = std::max(in_norm, v);
        else in_norm += ds * std::pow(v, qd.value());
    }
    if (!qd.is_infinite()) in_norm = std::pow(in_norm, 1.0 / qd.value());

    // output times: forcing midpoints, then a geometric tail after s_hi
    const TimeGrid tail = TimeGrid::positive_geometric(ladder.hole, ladder.horizon, ladder.tail_points[level]);
    std::vector<double> t(s), tw(ns, ds);
    for (std::size_t m = 0; m < tail.size(); ++m) {
        t.push_back(forcing.s_hi + tail.node(m));
        tw.push_back(tail.weight(m));
    }

    double out = 0.0;
    for (std::size_t m = 0; m < t.size(); ++m) {
        double sup = 0.0;
        std::vector<std::vector<cplx>> u(samples.size(), std::vector<cplx>(grid->size()));
        for (std::size_t c = 0; c < samples.size(); ++c) {
            for (std::size_t k = 0; k < ns && s[k] < t[m]; ++k) {
                const RadialProfile step = propagate_mode(samples[c][k], t[m] - s[k]);
                for (std::size_t i = 0; i < grid->size(); ++i) u[c][i] += ds * step.values[i];
            }
            // the half of the current cell that lies before t
            if (m < ns)
                for (std::size_t i = 0; i < grid->size(); ++i) u[c][i] += 0.5 * ds * samples[c][m].values[i];
        }
        for (std::size_t i = 0; i < grid->size(); ++i) {
            double ring = 0.0;
            for (const auto& uc : u) ring += std::norm(uc[i]);
            sup = std::max(sup, ring);
        }
        out += tw[m] * sup;
    }
    return std::sqrt(out) / in_norm;
}

}  // namespace

QuotientReport retarded_strichartz_pipeline(const RetardedForcing& forcing, Exponent qt, Exponent rt,
                                            const RetardedLadder& ladder) {
    if (!is_admissible(qt, rt)) {
        throw PreconditionError("retarded_strichartz_pipeline: (" + qt.str() + ", " + rt.str() +
                                ") is not admissible; see endpoint_gate and divergence_scan for this case");
    }
    if (forcing.components.empty()) throw PreconditionError("retarded_strichartz_pipeline: forcing has no components");
    if (!(forcing.s_hi > forcing.s_lo)) throw PreconditionError("retarded_strichartz_pipeline: empty forcing interval");
    const std::size_t levels = ladder.radial_points.size();
    if (levels < 3 || ladder.forcing_points.size() != levels || ladder.tail_points.size() != levels) {
        throw PreconditionError("retarded_strichartz_pipeline: need at least 3 ladder levels with matching counts");
    }
    QuotientReport report;
    std::ostringstream in;
    for (const auto& c : forcing.components) in << "mode " << c.mode << ";";
    in << " forcing on [" << format_double(forcing.s_lo) << ", " << format_double(forcing.s_hi) << "]; input norm L^"
       << dual_exponent(qt).str() << "_t L^" << dual_exponent(rt).str() << "_x";
    report.input = in.str();
    for (std::size_t level = 0; level < levels; ++level) {
        const double v = retarded_level(forcing, qt, rt, ladder, level);
        report.refinement_history.emplace_back(ladder.radial_points[level], v);
    }
    report.value = report.refinement_history.back().second;
    std::ostringstream g;
    g << "radial " << ladder.radial_points.back() << " rmax " << format_double(ladder.rmax) << "; forcing cells "
      << ladder.forcing_points.back() << "; tail " << ladder.tail_points.back() << " on ["
      << format_double(ladder.hole) << ", " << format_double(ladder.horizon) << "]";
    report.grid = g.str();
    return report;
}

}  // namespace strichartz
