#include "strichartz/errors.hpp"
#include "strichartz/norms.hpp"
#include "strichartz/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace strichartz;

namespace {

constexpr double pi = std::numbers::pi;

Exponent ex(const char* s) { return Exponent::parse(s); }

MixedNormSpec l2_spec() {
    MixedNormSpec spec;
    spec.spatial = SpatialNorm::lebesgue;
    spec.spatial_exponent = Exponent::finite(2);
    return spec;
}

Eigen::VectorXcd random_vector(SeededRng& rng, Eigen::Index n) {
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.complex_normal();
    return v;
}

}  // namespace

TEST_CASE("exponent parsing and printing") {
    CHECK(ex("4") == Exponent::finite(4));
    CHECK(ex("4/3") == Exponent::ratio(4, 3));
    CHECK(ex("8/2") == Exponent::finite(4));
    CHECK(ex("inf").is_infinite());
    CHECK(ex("4/3").str() == "4/3");
    CHECK(ex("inf").str() == "inf");
    CHECK(ex("4/3").value() == doctest::Approx(4.0 / 3.0));
    CHECK_THROWS_AS(ex("1/2"), PreconditionError);
    CHECK_THROWS_AS(ex("0"), PreconditionError);
    CHECK_THROWS_AS(ex("4x"), PreconditionError);
    CHECK_THROWS_AS(ex(""), PreconditionError);
}

TEST_CASE("admissible pairs") {
    CHECK(is_admissible(ex("4"), ex("4"), 2));
    CHECK_FALSE(is_admissible(ex("2"), ex("inf"), 2));
    CHECK(is_admissible(ex("inf"), ex("2"), 2));
    CHECK(is_admissible(ex("8/3"), ex("8"), 2));
    CHECK_FALSE(is_admissible(ex("4"), ex("2"), 2));
    CHECK_FALSE(is_admissible(ex("3/2"), ex("6"), 2));
    CHECK(is_admissible(ex("2"), ex("6"), 3));
    CHECK(is_admissible(ex("2"), ex("inf"), 1) == false);
    CHECK(is_admissible(ex("4"), ex("inf"), 1));
}

TEST_CASE("scaling consistency") {
    CHECK(scaling_consistent(ex("2"), ex("inf"), ex("2"), ex("inf")));
    CHECK(scaling_consistent(ex("2"), ex("inf"), ex("4"), ex("4")));
    CHECK_FALSE(scaling_consistent(ex("2"), ex("inf"), ex("2"), ex("2")));
    CHECK(scaling_consistent(ex("4"), ex("4"), ex("4"), ex("4")));
    CHECK(scaling_consistent(ex("inf"), ex("2"), ex("inf"), ex("2")));
}

TEST_CASE("mixed norm examples") {
    const auto grid = make_radial_grid(RadialGridKind::graded, 2.0, 96);
    const AngularGrid angles(16);
    const TimeGrid times = TimeGrid::uniform(0.0, 1.0, 40);

    SUBCASE("separable") {
        auto b = [](double r, double th) { return cplx(std::exp(-r * r) * (1.0 + 0.3 * std::cos(th)), 0.0); };
        auto a = [](double t) { return 1.0 + t * t; };
        std::vector<PolarField> slices;
        for (std::size_t k = 0; k < times.size(); ++k) {
            const double at = a(times.node(k));
            slices.emplace_back(grid, angles, [&](double r, double th) { return at * b(r, th); });
        }
        const SpacetimeTrace trace(times, slices);
        const PolarField b_field(grid, angles, b);
        for (const char* q : {"2", "3", "inf"}) {
            for (SpatialNorm kind : {SpatialNorm::lebesgue, SpatialNorm::angular_sup, SpatialNorm::angular_l1}) {
                MixedNormSpec spec;
                spec.time_exponent = ex(q);
                spec.spatial = kind;
                spec.spatial_exponent = ex("4");
                double aq = 0.0;
                if (spec.time_exponent.is_infinite()) {
                    for (std::size_t k = 0; k < times.size(); ++k) aq = std::max(aq, a(times.node(k)));
                } else {
                    const double p = spec.time_exponent.value();
                    for (std::size_t k = 0; k < times.size(); ++k) aq += times.weight(k) * std::pow(a(times.node(k)), p);
                    aq = std::pow(aq, 1.0 / p);
                }
                const double expected = aq * spatial_norm(b_field, spec);
                CHECK(mixed_norm(trace, spec) == doctest::Approx(expected).epsilon(1e-10));
            }
        }
    }

    SUBCASE("single mode") {
        auto g = [](double r) { return cplx(r * std::exp(-r * r), 0.5 * r * r); };
        const PolarField f(grid, angles, [&](double r, double th) { return g(r) * std::polar(1.0, 3.0 * th); });
        double sup = 0.0;
        for (double r : grid->nodes()) sup = std::max(sup, std::abs(g(r)));
        MixedNormSpec spec;
        CHECK(spatial_norm(f, spec) == doctest::Approx(sup).epsilon(1e-12));
    }

    SUBCASE("indicator of the disc on [0, 1]") {
        std::vector<PolarField> slices;
        for (std::size_t k = 0; k < times.size(); ++k) {
            slices.emplace_back(grid, angles, [](double r, double) { return cplx(r <= 1.0 ? 1.0 : 0.0, 0.0); });
        }
        MixedNormSpec spec;
        CHECK(mixed_norm(SpacetimeTrace(times, slices), spec) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("norm axioms on random pairs") {
    const auto grid = make_radial_grid(RadialGridKind::uniform, 3.0, 40);
    const AngularGrid angles(12);
    const TimeGrid times = TimeGrid::symmetric_geometric(0.01, 10.0, 8);
    SeededRng rng(7);
    auto random_trace = [&] {
        std::vector<PolarField> slices;
        for (std::size_t k = 0; k < times.size(); ++k) {
            std::vector<cplx> v(grid->size() * angles.count());
            for (auto& x : v) x = rng.complex_normal();
            slices.emplace_back(grid, angles, std::move(v));
        }
        return SpacetimeTrace(times, std::move(slices));
    };
    for (int trial = 0; trial < 5; ++trial) {
        const SpacetimeTrace a = random_trace();
        const SpacetimeTrace b = random_trace();
        std::vector<PolarField> sum, scaled;
        const cplx lambda(-1.7, 0.4);
        for (std::size_t k = 0; k < times.size(); ++k) {
            std::vector<cplx> s(a.slices[k].values().begin(), a.slices[k].values().end());
            std::vector<cplx> m = s;
            for (std::size_t i = 0; i < s.size(); ++i) {
                s[i] += b.slices[k].values()[i];
                m[i] *= lambda;
            }
            sum.emplace_back(grid, angles, std::move(s));
            scaled.emplace_back(grid, angles, std::move(m));
        }
        for (SpatialNorm kind : {SpatialNorm::lebesgue, SpatialNorm::angular_sup, SpatialNorm::angular_l1}) {
            for (const char* q : {"1", "2", "4/3", "inf"}) {
                MixedNormSpec spec;
                spec.time_exponent = ex(q);
                spec.spatial = kind;
                spec.spatial_exponent = ex(q);
                const double na = mixed_norm(a, spec), nb = mixed_norm(b, spec);
                CHECK(mixed_norm(SpacetimeTrace(times, scaled), spec) ==
                      doctest::Approx(std::abs(lambda) * na).epsilon(1e-10));
                CHECK(mixed_norm(SpacetimeTrace(times, sum), spec) <= (na + nb) * (1.0 + 1e-10));
            }
        }
    }
}

TEST_CASE("Gaussian endpoint quotient") {
    auto gaussian = [](double lambda) {
        return std::vector<ModeComponent>{{0, [lambda](double r) { return cplx(std::exp(-pi * lambda * lambda * r * r), 0.0); }}};
    };
    const MixedNormSpec spec;
    QuotientLadder ladder;
    ladder.horizon = 100.0;
    const QuotientReport base = strichartz_quotient(gaussian(1.0), spec, ladder);
    REQUIRE(base.refinement_history.size() == 3);
    CHECK(base.refinement_spread() < 0.05);
    CHECK(base.value == doctest::Approx(gaussian_endpoint_quotient(1.0, ladder.hole, ladder.horizon)).epsilon(0.02));

    // f(lambda x) with the time window rescaled by lambda^-2 has the same quotient.
    for (double lambda : {0.5, 2.0}) {
        QuotientLadder scaled = ladder;
        scaled.hole /= lambda * lambda;
        scaled.horizon /= lambda * lambda;
        const QuotientReport r = strichartz_quotient(gaussian(lambda), spec, scaled);
        CHECK(std::abs(r.value / base.value - 1.0) < 0.05);
    }
}

TEST_CASE("zero input is rejected") {
    const std::vector<ModeComponent> zero{{0, [](double) { return cplx(0.0, 0.0); }}};
    CHECK_THROWS_AS(strichartz_quotient(zero, MixedNormSpec{}), PreconditionError);
}

TEST_CASE("power iteration matches the dense singular value") {
    const auto grid = make_radial_grid(RadialGridKind::graded, 8.0, 64);
    const TimeGrid times = TimeGrid::symmetric_geometric(0.01, 10.0, 32);
    const ModeEvolution ev(2, grid, times);
    PowerIterationOptions opts;
    opts.tolerance = 1e-12;
    const QuotientReport r = estimate_operator_norm(ev, l2_spec(), opts);

    const Eigen::Index n = static_cast<Eigen::Index>(grid->size());
    Eigen::MatrixXcd stacked(n * static_cast<Eigen::Index>(times.size()), n);
    for (std::size_t k = 0; k < times.size(); ++k) {
        Eigen::MatrixXcd block = std::sqrt(times.weight(k)) * ev.matrix(k);
        for (Eigen::Index i = 0; i < n; ++i) block.row(i) *= std::sqrt(grid->weight(static_cast<std::size_t>(i)));
        for (Eigen::Index j = 0; j < n; ++j) block.col(j) /= std::sqrt(grid->weight(static_cast<std::size_t>(j)));
        stacked.middleRows(static_cast<Eigen::Index>(k) * n, n) = block;
    }
    const double sigma = Eigen::JacobiSVD<Eigen::MatrixXcd>(stacked).singularValues()(0);
    CHECK(std::abs(r.value - sigma) / sigma < 1e-6);
}

TEST_CASE("band-limited map against the dense singular value") {
    BandLimitedSetup s;
    s.rmax = 16.0;
    s.radial_points = 32;
    s.horizon = 8.0;
    const BandLimitedModeMap map(1, s);
    PowerIterationOptions opts;
    opts.tolerance = 1e-12;
    const QuotientReport r = estimate_operator_norm(map, l2_spec(), opts);

    const auto nk = static_cast<Eigen::Index>(map.input_size());
    const auto nr = static_cast<Eigen::Index>(map.radii().size());
    const auto nt = static_cast<Eigen::Index>(map.times().size());
    const double dr = s.rmax / static_cast<double>(s.radial_points);
    Eigen::MatrixXcd stacked(nr * nt, nk);
    for (Eigen::Index q = 0; q < nk; ++q) {
        const Eigen::MatrixXcd y = map.apply(Eigen::VectorXcd::Unit(nk, q));
        for (Eigen::Index m = 0; m < nt; ++m) {
            for (Eigen::Index i = 0; i < nr; ++i) {
                const double w = 2.0 * pi * map.radii()[static_cast<std::size_t>(i)] * dr;
                stacked(m * nr + i, q) = std::sqrt(map.times().weight(static_cast<std::size_t>(m)) * w) * y(i, m);
            }
        }
    }
    const double sigma = Eigen::JacobiSVD<Eigen::MatrixXcd>(stacked).singularValues()(0);
    CHECK(std::abs(r.value - sigma) / sigma < 1e-6);
    // Unitarity bounds the L^2 quotient by the square root of the time measure.
    CHECK(r.value <= std::sqrt(2.0 * s.horizon) * (1.0 + 1e-6));
}

TEST_CASE("discrete adjoints satisfy the duality identity") {
    SeededRng rng(11);
    SUBCASE("mode evolution") {
        const auto grid = make_radial_grid(RadialGridKind::graded, 6.0, 48);
        const ModeEvolution ev(3, grid, TimeGrid::symmetric_geometric(0.01, 5.0, 4));
        auto inner = [&](const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
            cplx s = 0.0;
            for (Eigen::Index i = 0; i < a.size(); ++i) s += grid->weight(static_cast<std::size_t>(i)) * std::conj(a(i)) * b(i);
            return s;
        };
        for (std::size_t k = 0; k < ev.times().size(); ++k) {
            const Eigen::VectorXcd f = random_vector(rng, 48), g = random_vector(rng, 48);
            const cplx lhs = inner(ev.apply(k, f), g), rhs = inner(f, ev.adjoint(k, g));
            CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(lhs) + 1e-13);
        }
    }
    SUBCASE("band-limited map") {
        BandLimitedSetup s;
        s.rmax = 16.0;
        s.radial_points = 32;
        s.horizon = 4.0;
        const BandLimitedModeMap map(5, s);
        const auto nk = static_cast<Eigen::Index>(map.input_size());
        for (int trial = 0; trial < 4; ++trial) {
            const Eigen::VectorXcd f = random_vector(rng, nk);
            Eigen::MatrixXcd g(static_cast<Eigen::Index>(map.radii().size()), static_cast<Eigen::Index>(map.times().size()));
            for (Eigen::Index j = 0; j < g.cols(); ++j) g.col(j) = random_vector(rng, g.rows());
            const cplx lhs = (map.apply(f).array().conjugate() * g.array()).sum();
            const cplx rhs = f.dot(map.adjoint(g));
            CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(lhs));
            const Eigen::Index i = trial, m = 3 * trial;
            Eigen::MatrixXcd one = Eigen::MatrixXcd::Zero(g.rows(), g.cols());
            one(i, m) = cplx(0.3, -1.1);
            CHECK((map.adjoint(one) - map.adjoint_column(i, m, one(i, m))).norm() < 1e-13);
        }
    }
}

TEST_CASE("sup ascent is deterministic and seed-tagged") {
    OperatorNormSetup setup;
    setup.map.rmax = 24.0;
    setup.map.radial_points = 48;
    setup.map.horizon = 12.0;
    const MixedNormSpec spec;
    const QuotientReport a = estimate_operator_norm(4, spec, setup);
    const QuotientReport b = estimate_operator_norm(4, spec, setup);
    CHECK(a.value == b.value);
    CHECK(a.iterations == b.iterations);
    CHECK(a.value > 0.0);
    CHECK(a.input.find("seed") != std::string::npos);
    REQUIRE(a.refinement_history.size() == 1);

    MixedNormSpec bad;
    bad.time_exponent = ex("4");
    CHECK_THROWS_AS(estimate_operator_norm(4, bad, setup), PreconditionError);
    PowerIterationOptions capped;
    capped.max_iterations = 1;
    capped.tolerance = 1e-15;
    CHECK_THROWS_AS(estimate_operator_norm(BandLimitedModeMap(4, setup.map), spec, capped), ConvergenceError);
}
