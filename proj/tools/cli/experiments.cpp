#include "experiments.hpp"

#include "strichartz/bessel.hpp"
#include "strichartz/christ_kiselev.hpp"
#include "strichartz/counterexamples.hpp"
#include "strichartz/csv.hpp"
#include "strichartz/errors.hpp"
#include "strichartz/multiplier_lab.hpp"
#include "strichartz/norms.hpp"
#include "strichartz/propagator.hpp"
#include "strichartz/quadrature.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <thread>

namespace lab {

using namespace strichartz;
using json = nlohmann::ordered_json;

namespace {

constexpr double pi = std::numbers::pi;

FieldSpec integer(const char* name, const char* fallback) { return {name, FieldType::integer, fallback}; }
FieldSpec real(const char* name, const char* fallback) { return {name, FieldType::real, fallback}; }
FieldSpec seed(const char* name, const char* fallback) { return {name, FieldType::seed, fallback}; }
FieldSpec integers(const char* name, const char* fallback) { return {name, FieldType::integers, fallback}; }
FieldSpec reals(const char* name, const char* fallback) { return {name, FieldType::reals, fallback}; }
FieldSpec text(const char* name, const char* fallback) { return {name, FieldType::text, fallback}; }

std::vector<int> int_list(const Section& s, const std::string& key) {
    const auto raw = s.integers(key);
    require_nonempty(s, key, raw.size());
    return {raw.begin(), raw.end()};
}

std::vector<std::size_t> size_list(const Section& s, const std::string& key) {
    const auto raw = s.integers(key);
    require_nonempty(s, key, raw.size());
    std::vector<std::size_t> out;
    for (auto v : raw) {
        if (v <= 0) throw ConfigError("[" + s.name() + "] " + key, "sizes must be positive");
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

std::size_t positive(const Section& s, const std::string& key) {
    const long long v = s.integer(key);
    if (v <= 0) throw ConfigError("[" + s.name() + "] " + key, "must be positive");
    return static_cast<std::size_t>(v);
}

// (1 + 4 pi i t)^{-1-n} z^n exp(-pi |x|^2 / (1 + 4 pi i t)), the evolution of z^n e^{-pi|x|^2}
cplx gaussian_evolved(int n, double t, double x1, double x2) {
    const cplx d(1.0, 4.0 * pi * t);
    return std::pow(d, -1 - n) * std::pow(cplx(x1, x2), n) * std::exp(-pi * (x1 * x1 + x2 * x2) / d);
}

cplx gaussian_periodic(double t, double x1, double x2, double period) {
    cplx s{};
    for (int a = -3; a <= 3; ++a)
        for (int b = -3; b <= 3; ++b) s += gaussian_evolved(0, t, x1 + a * period, x2 + b * period);
    return s;
}

std::vector<ModeComponent> radial_gaussian() {
    return {{0, [](double r) { return cplx(std::exp(-pi * r * r)); }}};
}

Outcome propagate_validate(const Section& s) {
    const std::size_t points = positive(s, "points");
    const double length = s.real("length");
    const auto times = s.reals("times");
    require_nonempty(s, "times", times.size());
    const auto modes = int_list(s, "modes");
    const auto cart = size_list(s, "threeway_cartesian");
    const auto rad = size_list(s, "threeway_radial");
    if (cart.size() != rad.size() || cart.size() < 2) {
        throw ConfigError("[propagate-validate] threeway_cartesian, threeway_radial",
                          "need two or more levels of equal length");
    }

    std::ostringstream out;
    CsvWriter csv(out, {"check", "mode", "t", "resolution", "value"});
    auto row = [&](const char* check, int mode, double t, std::size_t res, double value) {
        csv.cell(check).cell(mode).cell(t).cell(res).cell(value);
        csv.end_row();
    };

    const CartesianField f(points, length, [](double a, double b) { return gaussian_evolved(0, 0.0, a, b); });
    double mult = 0.0, kern = 0.0, defect = 0.0;
    for (double t : times) {
        const auto u = propagate_cartesian(f, t);
        const CartesianField want(points, length, [&](double a, double b) { return gaussian_periodic(t, a, b, length); });
        const double e = relative_l2_distance(u, want);
        const double d = std::abs(u.l2_norm() / f.l2_norm() - 1.0);
        row("multiplier_error", 0, t, points, e);
        row("multiplier_norm_defect", 0, t, points, d);
        mult = std::max(mult, e);
        defect = std::max(defect, d);
    }
    // the free flow spreads mass past the window, so norms are taken on a window twice as wide
    const CartesianField wide(2 * points, 2.0 * length, [](double a, double b) { return gaussian_evolved(0, 0.0, a, b); });
    for (double t : times) {
        const auto u = propagate_kernel(f, t);
        const CartesianField want(points, length, [&](double a, double b) { return gaussian_evolved(0, t, a, b); });
        const double e = relative_l2_distance(u, want);
        const double d = std::abs(propagate_kernel(wide, t, default_kernel_threshold(f)).l2_norm() / wide.l2_norm() - 1.0);
        row("kernel_error", 0, t, points, e);
        row("kernel_norm_defect", 0, t, points, d);
        kern = std::max(kern, e);
        defect = std::max(defect, d);
    }

    const auto mode_grid = make_radial_grid(RadialGridKind::graded, s.real("mode_rmax"), positive(s, "mode_radial"));
    const auto mode_times = s.reals("mode_times");
    require_nonempty(s, "mode_times", mode_times.size());
    for (int n : modes) {
        const RadialProfile g(n, mode_grid, [n](double r) { return cplx(std::pow(r, n) * std::exp(-pi * r * r)); });
        for (double t : mode_times) {
            const double d = std::abs(l2_norm(propagate_mode(g, t)) / l2_norm(g) - 1.0);
            row("mode_norm_defect", n, t, mode_grid->size(), d);
            defect = std::max(defect, d);
        }
    }

    const double tw = s.real("threeway_t");
    double coarse = 0.0, fine = 0.0;
    bool decreasing = true;
    for (int n : modes) {
        double previous = HUGE_VAL;
        for (std::size_t level = 0; level < cart.size(); ++level) {
            ThreeWaySetup setup;
            setup.cartesian_points = cart[level];
            setup.radial_points = rad[level];
            const double w = three_way_gaussian(n, tw, setup).worst();
            row("three_way", n, tw, cart[level], w);
            if (!(w < previous)) decreasing = false;
            previous = w;
            if (level == 0) coarse = std::max(coarse, w);
            if (level + 1 == cart.size()) fine = std::max(fine, w);
        }
    }

    const auto pgrid = make_radial_grid(RadialGridKind::graded, 3.0, 40);
    const AngularGrid angles(24);
    SeededRng rng(s.seed("parseval_seed"));
    std::vector<RadialProfile> stack;
    for (int n = -angles.max_mode(); n <= angles.max_mode(); ++n) {
        std::vector<cplx> v(pgrid->size());
        for (auto& x : v) x = rng.complex_normal();
        stack.emplace_back(n, pgrid, std::move(v));
    }
    const PolarField field = mode_recompose(stack, angles);
    double modal = 0.0;
    for (const auto& p : mode_decompose(field, angles.max_mode())) modal += std::pow(l2_norm(p), 2);
    const double direct = std::pow(l2_norm(field), 2);
    const double parseval = std::abs(2.0 * pi * modal - direct) / direct;
    row("parseval_defect", angles.max_mode(), 0.0, angles.count(), parseval);

    QuotientLadder ladder;
    ladder.radial_points = size_list(s, "quotient_radial");
    ladder.time_points_per_side = size_list(s, "quotient_time");
    ladder.hole = s.real("hole");
    ladder.horizon = s.real("horizon");
    const QuotientReport q = strichartz_quotient(radial_gaussian(), MixedNormSpec{}, ladder);
    for (const auto& [res, value] : q.refinement_history) row("endpoint_quotient", 0, 0.0, res, value);
    const double closed = gaussian_endpoint_quotient(1.0, ladder.hole, ladder.horizon);
    row("endpoint_quotient_closed_form", 0, 0.0, 0, closed);

    Outcome o;
    o.csv.push_back({"propagate_validate.csv", out.str()});
    o.seeds["parseval_seed"] = s.seed("parseval_seed");
    o.summary["multiplier_error_max"] = mult;
    o.summary["kernel_error_max"] = kern;
    o.summary["norm_defect_max"] = defect;
    o.summary["three_way_coarse"] = coarse;
    o.summary["three_way_fine"] = fine;
    o.summary["three_way_decreasing"] = decreasing;
    o.summary["parseval_defect"] = parseval;
    o.summary["quotient_value"] = q.value;
    o.summary["quotient_spread"] = q.refinement_spread();
    o.summary["quotient_closed_form"] = closed;
    return o;
}

Outcome mode_scan(const Section& s) {
    const auto modes = int_list(s, "modes");
    OperatorNormSetup setup;
    setup.map.band = s.real("band");
    setup.map.rmax = s.real("rmax");
    setup.map.radial_points = positive(s, "radial_points");
    setup.map.horizon = s.real("horizon");
    setup.map.time_step = s.real("time_step");
    setup.map.oversampling = s.real("oversampling");
    setup.base_seed = s.seed("base_seed");
    setup.tolerance = s.real("tolerance");
    for (int n : modes)
        if (n < 0) throw ConfigError("[mode-scan] modes", "modes must be nonnegative");

    struct Row {
        std::size_t time_points = 0;
        std::uint64_t seed = 0;
        QuotientReport report;
    };
    std::vector<Row> rows(modes.size());
    const MixedNormSpec spec;
    auto work = [&](std::size_t i) {
        const BandLimitedModeMap map(modes[i], setup.map);
        PowerIterationOptions opts;
        opts.tolerance = setup.tolerance;
        opts.seed = mix_seed(setup.base_seed, (static_cast<std::uint64_t>(modes[i]) << 20) + setup.map.radial_points);
        rows[i] = {map.times().size(), opts.seed, estimate_operator_norm(map, spec, opts)};
    };
    // rows land in their scan slot, so the thread count never changes the output
    std::size_t threads = static_cast<std::size_t>(std::max<long long>(0, s.integer("threads")));
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, modes.size());
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = next++; i < modes.size(); i = next++) work(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    std::vector<std::size_t> order(modes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return modes[a] < modes[b]; });

    std::ostringstream out;
    CsvWriter csv(out, {"n", "radial_points", "time_points", "estimate", "iterations", "residual"});
    Outcome o;
    std::vector<double> x, y;
    double lo = HUGE_VAL, hi = 0.0;
    for (auto i : order) {
        const auto& r = rows[i];
        csv.cell(modes[i]).cell(setup.map.radial_points).cell(r.time_points).cell(r.report.value)
            .cell(r.report.iterations).cell(r.report.residual);
        csv.end_row();
        o.seeds["n=" + std::to_string(modes[i])] = r.seed;
        x.push_back(std::log(1.0 + modes[i]));
        y.push_back(std::log(r.report.value));
        lo = std::min(lo, r.report.value);
        hi = std::max(hi, r.report.value);
    }
    o.csv.push_back({"mode_scan.csv", out.str()});
    o.summary["slope"] = x.size() >= 2 ? fit_line(x, y).first : 0.0;
    o.summary["slope_abscissa"] = "ln(1 + n)";
    o.summary["max_min_ratio"] = hi / lo;
    return o;
}

PieceSelector parse_piece(const Section& s) {
    const std::string& p = s.text("piece");
    if (p == "full") return PieceSelector::full;
    if (p == "m0") return PieceSelector::m0;
    if (p == "m1") return PieceSelector::m1;
    if (p == "mj") return PieceSelector::mj;
    throw ConfigError("[" + s.name() + "] piece", "expected full, m0, m1 or mj, got '" + p + "'");
}

Outcome maximal_scan(const Section& s) {
    const auto modes = int_list(s, "modes");
    const PieceSelector piece = parse_piece(s);
    const int j = static_cast<int>(s.integer("scale_j"));
    const LineSignal g = random_signal(positive(s, "signal_points"), s.real("spacing"), s.seed("seed"));

    std::ostringstream out;
    CsvWriter csv(out, {"n", "j", "points_per_octave", "ratio"});
    Outcome o;
    json finest = json::object();
    double drift = 0.0;
    for (int n : modes) {
        const auto grid = LambdaGrid::covering(piece, n, j, g, positive(s, "per_octave"), positive(s, "levels"));
        const MaximalResult m = maximal_T(piece, n, j, g, grid);
        for (const auto& [ppo, ratio] : m.refinement_history) {
            csv.cell(n).cell(j).cell(ppo).cell(ratio);
            csv.end_row();
        }
        const auto& h = m.refinement_history;
        if (h.size() >= 2) drift = std::max(drift, (h.back().second - h[h.size() - 2].second) / h.back().second);
        finest["n=" + std::to_string(n)] = m.ratio;
    }
    o.csv.push_back({"maximal_scan.csv", out.str()});
    o.seeds["seed"] = s.seed("seed");
    o.summary["piece"] = s.text("piece");
    o.summary["ratio"] = finest;
    o.summary["last_refinement_change"] = drift;
    return o;
}

Outcome piece_decay(const Section& s) {
    require_ordered(s, "j_lo", "j_hi");
    DecaySetup setup;
    setup.signal_points = positive(s, "signal_points");
    setup.spacing = s.real("spacing");
    setup.per_octave = positive(s, "per_octave");
    setup.levels = positive(s, "levels");
    setup.base_seed = s.seed("base_seed");
    const DecayScan scan = piece_decay_scan(static_cast<int>(s.integer("n")), static_cast<int>(s.integer("j_lo")),
                                            static_cast<int>(s.integer("j_hi")), positive(s, "trials"), setup);

    std::vector<DecayRow> rows = scan.rows;
    std::stable_sort(rows.begin(), rows.end(), [](const DecayRow& a, const DecayRow& b) {
        return a.j != b.j ? a.j < b.j : a.seed < b.seed;
    });
    std::ostringstream out;
    CsvWriter csv(out, {"n", "j", "trial_seed", "ratio"});
    for (const auto& r : rows) {
        csv.cell(r.n).cell(r.j).cell(std::to_string(r.seed)).cell(r.ratio);
        csv.end_row();
    }
    Outcome o;
    o.csv.push_back({"decay_scan.csv", out.str()});
    o.seeds["base_seed"] = setup.base_seed;
    json best = json::object();
    for (const auto& [j, v] : scan.max_ratio) best["j=" + std::to_string(j)] = v;
    o.summary["max_ratio"] = best;
    o.summary["slope"] = scan.slope;
    o.summary["intercept"] = scan.intercept;
    return o;
}

Outcome ttstar_scan(const Section& s) {
    const int n = static_cast<int>(s.integer("n"));
    auto scales = int_list(s, "scales");
    std::sort(scales.begin(), scales.end());
    std::ostringstream out;
    CsvWriter csv(out, {"j", "a", "b", "x_minus_xprime", "lhs", "phi", "ratio"});
    Outcome o;
    json worst = json::object();
    for (int j : scales) {
        const auto samples = default_ttstar_samples(j);
        const TtstarScan scan = ttstar_domination_scan(n, j, samples);
        for (const auto& r : scan.rows) {
            csv.cell(r.j).cell(r.a).cell(r.b).cell(r.separation).cell(r.lhs).cell(r.phi).cell(r.ratio);
            csv.end_row();
        }
        worst["j=" + std::to_string(j)] = scan.max_ratio;
    }
    o.csv.push_back({"ttstar_scan.csv", out.str()});
    o.summary["max_ratio"] = worst;
    return o;
}

Outcome ck_certify(const Section& s) {
    const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, positive(s, "points"));
    const double width = s.real("kernel_width");
    const double p = s.real("p"), q = s.real("q");
    const KernelOperator op(grid, [width](double t, double u) { return cplx(std::exp(-width * (t - u) * (t - u))); }, p, q);
    std::vector<cplx> f(grid.size());
    for (std::size_t k = 0; k < f.size(); ++k) {
        const double t = grid.node(k);
        f[k] = cplx(1.0 + 0.5 * std::sin(2.0 * pi * t), 0.3 * std::cos(5.0 * t));
    }
    BoydOptions opts;
    opts.tolerance = s.real("boyd_tolerance");
    opts.seed = s.seed("seed");
    const int jmax = static_cast<int>(s.integer("jmax"));
    const auto rows = certify_levels(op, f, jmax, opts);

    std::ostringstream levels;
    write_ck_levels_csv(levels, rows);
    double worst = 0.0, mass = 0.0;
    for (const auto& r : rows) {
        worst = std::max(worst, r.level_norm / r.certified_bound);
        mass = std::max(mass, r.cell_mass_error);
    }
    const auto ck = apply_retarded_ck(op, f, build_pair_tree(grid, f, p, jmax));

    const TimeGrid hgrid = TimeGrid::uniform(0.0, 1.0, positive(s, "hilbert_points"));
    const KernelOperator hilbert = hilbert_kernel(hgrid);
    const std::vector<cplx> chi(hgrid.size(), 1.0);
    const int hj = static_cast<int>(s.integer("hilbert_jmax"));
    const auto tree = build_pair_tree(hgrid, chi, 2.0, hj);
    std::ostringstream hcsv;
    CsvWriter h(hcsv, {"j", "level_norm"});
    double min_ratio = HUGE_VAL, previous = 0.0;
    for (int j = 1; j <= hj; ++j) {
        const double v = level_norm(hilbert, tree, j, 2.0);
        h.cell(j).cell(v);
        h.end_row();
        if (j > 1) min_ratio = std::min(min_ratio, v / previous);
        previous = v;
    }

    Outcome o;
    o.csv.push_back({"ck_levels.csv", levels.str()});
    o.csv.push_back({"ck_hilbert.csv", hcsv.str()});
    o.seeds["boyd_seed"] = opts.seed;
    o.summary["operator_norm"] = rows.empty() ? 0.0 : rows.front().certified_bound * std::pow(2.0, 1.0 / p - 1.0 / q);
    o.summary["max_level_over_bound"] = worst;
    o.summary["cell_mass_error"] = mass;
    o.summary["covering_identity_error"] = ck.identity_error;
    o.summary["hilbert_min_level_ratio"] = min_ratio;
    return o;
}

// (a, b) stands for the exponent a / b, (1, 0) for infinity; reciprocal b / a.
struct Frac {
    long long a, b;
};

// 1/x + 1/y == 1/2, cross-multiplied
bool sums_to_half(Frac x, Frac y) { return 2 * (x.b * y.a + y.b * x.a) == x.a * y.a; }

Outcome counterexample(const Section& s) {
    const auto eps = s.reals("epsilons");
    require_nonempty(s, "epsilons", eps.size());
    const DivergenceScan scan = divergence_scan(eps, s.real("window_lo"), s.real("window_hi"));
    std::ostringstream div;
    write_divergence_csv(div, scan);
    double margin = HUGE_VAL;
    for (const auto& r : scan.rows) margin = std::min(margin, r.rho - r.lower_bound);

    const long long top = s.integer("gate_max");
    if (top < 1) throw ConfigError("[counterexample] gate_max", "empty range");
    std::vector<Frac> exps;
    for (long long a = 1; a <= top; ++a)
        for (long long b = 1; b <= a; ++b)
            if (std::gcd(a, b) == 1) exps.push_back({a, b});
    exps.push_back({1, 0});
    auto as_exponent = [](Frac x) { return x.b == 0 ? Exponent::infinity() : Exponent::ratio(x.a, x.b); };

    std::ostringstream gate;
    CsvWriter csv(gate, {"qt", "rt", "admissible", "scaling_consistent", "outcome"});
    std::size_t mismatches = 0;
    const Exponent q2 = Exponent::finite(2), rinf = Exponent::infinity();
    for (Frac x : exps) {
        for (Frac y : exps) {
            const Exponent qt = as_exponent(x), rt = as_exponent(y);
            const bool half = sums_to_half(x, y);
            const bool at_least_two = 2 * x.b <= x.a && 2 * y.b <= y.a;
            const bool forbidden = x.a == 2 && x.b == 1 && y.b == 0;
            const bool want_admissible = half && at_least_two && !forbidden;
            const bool admissible = is_admissible(qt, rt);
            const bool consistent = scaling_consistent(q2, rinf, qt, rt);
            const GateRecord rec = endpoint_gate(qt, rt);
            const GateOutcome want_outcome =
                !half ? GateOutcome::scaling_inconsistent
                      : (want_admissible ? GateOutcome::admissible : GateOutcome::double_endpoint);
            if (admissible != want_admissible || consistent != half || rec.outcome != want_outcome) ++mismatches;
            csv.cell(qt.str()).cell(rt.str()).cell(admissible ? 1 : 0).cell(consistent ? 1 : 0).cell(to_string(rec.outcome));
            csv.end_row();
        }
    }

    Outcome o;
    o.csv.push_back({"divergence.csv", div.str()});
    o.csv.push_back({"gate_table.csv", gate.str()});
    o.summary["slope"] = scan.slope;
    o.summary["intercept"] = scan.intercept;
    o.summary["monotone"] = scan.monotone;
    o.summary["min_margin_over_bound"] = margin;
    o.summary["gate_pairs"] = exps.size() * exps.size();
    o.summary["gate_mismatches"] = mismatches;
    return o;
}

Outcome bessel_check(const Section& s) {
    std::ostringstream out;
    CsvWriter csv(out, {"n", "j", "constant_name", "value"});
    auto row = [&](int n, int j, const char* name, double v) {
        csv.cell(n).cell(j).cell(name).cell(v);
        csv.end_row();
    };

    const int jmax = static_cast<int>(s.integer("partition_jmax"));
    const double step = s.real("partition_step");
    if (!(step > 0.0)) throw ConfigError("[bessel-check] partition_step", "must be positive");
    double residual = 0.0;
    for (int n : int_list(s, "partition_modes")) {
        const auto part = build_partition(n, jmax);
        const BesselTable table(n, 0.0, part.valid_limit());
        double worst = 0.0;
        for (double r = 0.0; r < part.valid_limit(); r += step) {
            cplx sum{};
            for (const auto& p : part.pieces) sum += p(r, table);
            worst = std::max(worst, std::abs(sum - table(r)));
        }
        row(n, jmax, "partition_residual", worst);
        residual = std::max(residual, worst);
    }

    const double xmax = s.real("relation_xmax");
    const std::size_t samples = positive(s, "relation_samples");
    double relation = 0.0;
    for (int n : int_list(s, "relation_modes")) {
        if (n < 0) throw ConfigError("[bessel-check] relation_modes", "modes must be nonnegative");
        const cplx in = std::pow(cplx(0.0, 1.0), n);
        double worst = 0.0;
        for (std::size_t k = 0; k <= samples; ++k) {
            const double x = xmax * static_cast<double>(k) / static_cast<double>(samples);
            worst = std::max(worst, std::abs(bessel_eval(n, x) - in * std::cyl_bessel_j(static_cast<double>(n), x)));
        }
        row(n, 0, "relation_error", worst);
        relation = std::max(relation, worst);
    }

    double lo = HUGE_VAL, hi = 0.0;
    for (int n : int_list(s, "m1_modes")) {
        const auto r = m1_envelope_check(n);
        row(n, 0, "m1_integral", r.integral);
        row(n, 0, "m1_value_constant", r.value_constant);
        row(n, 0, "m1_derivative_constant", r.derivative_constant);
        lo = std::min(lo, r.integral);
        hi = std::max(hi, r.integral);
    }
    for (int n : int_list(s, "m0_modes")) row(n, 0, "m0_sup_times_n2", m0_decay_check(n, 0, 2).constant);

    Outcome o;
    o.csv.push_back({"bessel_check.csv", out.str()});
    o.summary["partition_residual_max"] = residual;
    o.summary["relation_error_max"] = relation;
    o.summary["m1_integral_max_min_ratio"] = hi / lo;
    return o;
}

}  // namespace

const std::vector<Experiment>& experiments() {
    static const std::vector<Experiment> list{
        {"propagate-validate", "Gaussian oracles, three-way agreement, unitarity, Parseval, endpoint quotient",
         propagate_validate},
        {"mode-scan", "endpoint operator-norm estimates across modes", mode_scan},
        {"maximal-scan", "maximal operator sup_lambda |T_lambda G| across modes", maximal_scan},
        {"piece-decay", "decay of the dyadic pieces in j", piece_decay},
        {"ttstar-scan", "TT* kernel against the envelope Phi", ttstar_scan},
        {"ck-certify", "Christ-Kiselev per-level certification", ck_certify},
        {"counterexample", "double-endpoint divergence and the scaling gate", counterexample},
        {"bessel-check", "partition of unity, i^n relation, m0/m1 constants", bessel_check},
    };
    return list;
}

Schema full_schema() {
    Schema schema;
    schema["output"] = {text("dir", "lab_out")};
    schema["propagate-validate"] = {
        integer("points", "256"),
        real("length", "16"),
        reals("times", "-0.5,-0.25,0.1,0.25,0.5"),
        integers("modes", "0,1,4,9"),
        real("mode_rmax", "12"),
        integer("mode_radial", "300"),
        reals("mode_times", "-0.25,0.1,0.25"),
        real("threeway_t", "0.25"),
        integers("threeway_cartesian", "128,256"),
        integers("threeway_radial", "128,256"),
        seed("parseval_seed", "7"),
        integers("quotient_radial", "64,128,256"),
        integers("quotient_time", "32,64,128"),
        real("hole", "0.001"),
        real("horizon", "100"),
    };
    schema["mode-scan"] = {
        integers("modes", "0,1,2,4,8,16,32,64"),
        real("band", "1"),
        real("rmax", "128"),
        integer("radial_points", "256"),
        real("horizon", "128"),
        real("time_step", "0.5"),
        real("oversampling", "1.2"),
        seed("base_seed", "20240601"),
        real("tolerance", "1e-6"),
        integer("threads", "0"),
    };
    schema["maximal-scan"] = {
        text("piece", "full"),
        integers("modes", "0,1,4,16,64"),
        integer("scale_j", "0"),
        integer("signal_points", "1024"),
        real("spacing", "0.015625"),
        integer("per_octave", "16"),
        integer("levels", "3"),
        seed("seed", "99"),
    };
    schema["piece-decay"] = {
        integer("n", "2"),
        integer("j_lo", "6"),
        integer("j_hi", "12"),
        integer("trials", "8"),
        integer("signal_points", "1024"),
        real("spacing", "0.015625"),
        integer("per_octave", "16"),
        integer("levels", "2"),
        seed("base_seed", "20240601"),
    };
    schema["ttstar-scan"] = {
        integer("n", "2"),
        integers("scales", "6,8"),
    };
    schema["ck-certify"] = {
        integer("points", "256"),
        integer("jmax", "7"),
        real("p", "2"),
        real("q", "4"),
        real("kernel_width", "8"),
        real("boyd_tolerance", "1e-12"),
        seed("seed", "20240601"),
        integer("hilbert_points", "2048"),
        integer("hilbert_jmax", "7"),
    };
    schema["counterexample"] = {
        reals("epsilons", "1e-2,1e-3,1e-4,1e-5,1e-6"),
        real("window_lo", "0"),
        real("window_hi", "100"),
        integer("gate_max", "8"),
    };
    schema["bessel-check"] = {
        integers("partition_modes", "0,1,16,64"),
        integer("partition_jmax", "12"),
        real("partition_step", "0.173"),
        integers("relation_modes", "0,1,2,5,16,64"),
        real("relation_xmax", "100"),
        integer("relation_samples", "2000"),
        integers("m1_modes", "16,32,64,128,256"),
        integers("m0_modes", "8,16,32,64,128"),
    };
    return schema;
}

}  // namespace lab
