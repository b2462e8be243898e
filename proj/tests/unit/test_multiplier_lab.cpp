#include "strichartz/errors.hpp"
#include "strichartz/multiplier_lab.hpp"
#include "strichartz/quadrature.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace strichartz;

namespace {

constexpr double pi = std::numbers::pi;

double distance(const LineSignal& a, const LineSignal& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += std::norm(a.values()[k] - b.values()[k]);
    return std::sqrt(a.spacing() * s);
}

LineSignal smooth_signal(std::size_t n, double h) {
    return LineSignal(n, h, [](double x) {
        return cplx(std::exp(-4.0 * x * x) * std::cos(3.0 * x), 0.3 * std::exp(-2.0 * x * x));
    });
}

}  // namespace

TEST_CASE("line signal basics") {
    const LineSignal g = random_signal(256, 0.125, 3);
    CHECK(g.coordinate(128) == 0.0);
    CHECK(g.length() == doctest::Approx(32.0));
    CHECK(g.central_mass_fraction() == 1.0);
    CHECK(g.l2_norm() > 0.0);
    CHECK_THROWS_AS(LineSignal(0.0, std::vector<cplx>(4)), PreconditionError);
}

TEST_CASE("T_lambda: identity limit, equivariance, contraction, composition") {
    const LineSignal g = random_signal(512, 1.0 / 32.0, 17);

    SUBCASE("n = 0 near lambda = 0 is the identity") {
        const LineSignal t = apply_T({PieceSelector::full, 0, 0, 1e-6}, g);
        CHECK(distance(t, g) / g.l2_norm() < 1e-6);
    }
    SUBCASE("translation equivariance") {
        const MultiplierOperator op{PieceSelector::full, 3, 0, 5.0};
        const std::size_t shift = 37;
        std::vector<cplx> moved(g.size());
        for (std::size_t k = 0; k < g.size(); ++k) moved[(k + shift) % g.size()] = g.values()[k];
        const LineSignal a = apply_T(op, LineSignal(g.spacing(), moved));
        const LineSignal b = apply_T(op, g);
        double worst = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) {
            worst = std::max(worst, std::abs(a.values()[(k + shift) % g.size()] - b.values()[k]));
        }
        CHECK(worst < 1e-12);
    }
    SUBCASE("contraction") {
        for (int n : {0, 1, 5, 12}) {
            for (double lambda : {0.01, 0.3, 1.0, 7.0, 40.0}) {
                CHECK(apply_T({PieceSelector::full, n, 0, lambda}, g).l2_norm() <= g.l2_norm() * (1.0 + 1e-12));
            }
        }
    }
    SUBCASE("composition squares the symbol") {
        const MultiplierOperator op{PieceSelector::mj, 2, 5, 4.0};
        const PieceSymbol symbol(PieceSelector::mj, 2, 5);
        const LineSignal twice = apply_T(op, apply_T(op, g));
        const LineSignal squared = apply_symbol(g, [&](double xi) {
            const cplx m = symbol(op.lambda * std::sqrt(std::abs(xi)));
            return m * m;
        });
        CHECK(distance(twice, squared) / g.l2_norm() < 1e-12);
    }
}

TEST_CASE("maximal operator") {
    const LineSignal g = random_signal(1024, 1.0 / 64.0, 99);

    SUBCASE("a constant has no frequency where a dyadic piece lives") {
        const LineSignal c(256, 0.1, [](double) { return cplx(1.0, 0.0); });
        const MaximalResult m = maximal_T(PieceSelector::mj, 1, 6, c, LambdaGrid::covering(PieceSelector::mj, 1, 6, c));
        double peak = 0.0;
        for (auto v : m.sup.values()) peak = std::max(peak, std::abs(v));
        CHECK(peak < 1e-14);
    }
    SUBCASE("refinement never decreases the ratio and settles") {
        const MaximalResult m =
            maximal_T(PieceSelector::full, 8, 0, g, LambdaGrid::covering(PieceSelector::full, 8, 0, g));
        REQUIRE(m.refinement_history.size() == 3);
        for (std::size_t i = 1; i < m.refinement_history.size(); ++i) {
            CHECK(m.refinement_history[i].first == 2 * m.refinement_history[i - 1].first);
            CHECK(m.refinement_history[i].second >= m.refinement_history[i - 1].second);
        }
        const double a = m.refinement_history[1].second, b = m.refinement_history[2].second;
        CHECK((b - a) / b < 0.02);
        CHECK(m.ratio == b);
    }
    SUBCASE("coarse lambda grids are refused") {
        LambdaGrid grid = LambdaGrid::covering(PieceSelector::full, 0, 0, g);
        grid.per_octave = 8;
        CHECK_THROWS_AS(maximal_T(PieceSelector::full, 0, 0, g, grid), PreconditionError);
    }
    SUBCASE("the full operator stays bounded across modes") {
        std::vector<double> ratios;
        for (int n : {0, 2, 8, 16}) {
            ratios.push_back(maximal_T(PieceSelector::full, n, 0, g, LambdaGrid::covering(PieceSelector::full, n, 0, g, 16, 2)).ratio);
        }
        for (double r : ratios) CHECK(r <= 1.05 * ratios.front());
    }
}

TEST_CASE("the low piece is negligible beyond every power of n") {
    const LineSignal g = random_signal(1024, 1.0 / 64.0, 5);
    std::vector<double> logs;
    for (int n : {8, 16, 32, 64, 128}) {
        const MaximalResult m =
            maximal_T(PieceSelector::m0, n, 0, g, LambdaGrid::covering(PieceSelector::m0, n, 0, g, 16, 1));
        logs.push_back(std::log2(m.ratio));
    }
    // local exponent log2(ratio(2n) / ratio(n)) keeps falling
    for (std::size_t i = 1; i < logs.size(); ++i) {
        const double exponent = logs[i] - logs[i - 1];
        CHECK(exponent < -4.0);
        if (i > 1) CHECK(exponent < logs[i - 1] - logs[i - 2]);
    }
}

TEST_CASE("dyadic piece decay") {
    const DecayScan two = piece_decay_scan(2, 6, 12, 8);
    CHECK(two.slope <= -0.25 + 0.1);
    const DecayScan four = piece_decay_scan(4, 6, 12, 8);
    CHECK(std::abs(two.slope - four.slope) < 0.1);

    // one fixed member lies under the maximum over the trials
    for (const auto& [j, best] : two.max_ratio) {
        const auto row = std::find_if(two.rows.begin(), two.rows.end(), [j = j](const DecayRow& r) { return r.j == j; });
        REQUIRE(row != two.rows.end());
        CHECK(row->ratio <= best);
    }
    CHECK_THROWS_AS(piece_decay_scan(2, 6, 8, 4), PreconditionError);
    CHECK_THROWS_AS(piece_decay_scan(16, 6, 12, 4), PreconditionError);
}

TEST_CASE("kernel of a dyadic piece") {
    const int n = 2, j = 6;
    const double lambda = 32.0, h = 1.0 / 64.0;
    const std::size_t size = 4096;
    const LineSignal g = smooth_signal(size, h);
    const LineSignal tg = apply_T({PieceSelector::mj, n, j, lambda}, g);

    // direct convolution at central points; K is needed for |x - y| < 8
    const long reach = 8 * 64;
    std::vector<double> offsets;
    for (long m = -reach; m <= reach; ++m) offsets.push_back(static_cast<double>(m) * h);
    const std::vector<cplx> k = kernel_K(n, j, lambda, offsets);
    double worst = 0.0, scale = 0.0;
    const long mid = static_cast<long>(size / 2);
    for (long i = mid - 256; i <= mid + 256; i += 8) {
        cplx s = 0.0;
        for (long y = i - reach; y <= i + reach; ++y) s += h * k[static_cast<std::size_t>(i - y + reach)] * g.values()[static_cast<std::size_t>(y)];
        worst = std::max(worst, std::abs(s - tg.values()[static_cast<std::size_t>(i)]));
        scale = std::max(scale, std::abs(tg.values()[static_cast<std::size_t>(i)]));
    }
    CHECK(worst / scale < 1e-6);

    // even, real up to the factor i^n, and mean zero
    double asym = 0.0, imag = 0.0, peak = 0.0, mass = 0.0;
    cplx total = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) {
        asym = std::max(asym, std::abs(k[i] - std::conj(k[k.size() - 1 - i]) * std::pow(cplx(0, 1), 2 * n)));
        imag = std::max(imag, std::abs((k[i] * std::pow(cplx(0, -1), n)).imag()));
        peak = std::max(peak, std::abs(k[i]));
        total += h * k[i];
        mass += h * std::abs(k[i]);
    }
    CHECK(asym < 1e-12 * peak);
    CHECK(imag < 1e-12 * peak);
    CHECK(std::abs(total) < 1e-5 * mass);

    const std::vector<double> coarse{0.0, 0.5};
    CHECK_THROWS_AS(kernel_K(n, j, lambda, coarse), ResolutionError);
}

TEST_CASE("envelope Phi") {
    for (int j : {6, 8}) {
        for (double a : {std::ldexp(1.0, j - 3), std::ldexp(1.0, j), std::ldexp(1.0, j + 3)}) {
            const EnvelopePhi phi{j, a};
            double prev = phi(0.0), numeric = 0.0;
            const auto rule = composite_gauss_rule(geometric_breaks(1e-12, 1e6, 1.05));
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) numeric += rule.weights[i] * phi(rule.nodes[i]);
            for (double r = 1e-6; r < 1e3; r *= 1.1) {
                CHECK(phi(r) <= prev);
                CHECK(phi(r) >= 0.0);
                prev = phi(r);
            }
            CHECK(phi.l1_norm() == doctest::Approx(2.0 * numeric).epsilon(1e-4));
        }
    }
    // for a >= 2^j the norm is the constant 20/9, so sup_a ||Phi||_1 does not shrink with j
    for (const auto& row : phi_l1_scan(6, 10, 0, 3)) CHECK(row.l1 == doctest::Approx(20.0 / 9.0));
    // the norm depends on a / 2^j only, so along a = 2^{j-3} the scaled value grows like 2^{j/2}
    const auto small = phi_l1_scan(6, 10, -3, -3);
    for (std::size_t i = 1; i < small.size(); ++i) {
        CHECK(small[i].l1 == doctest::Approx(small[0].l1));
        CHECK(small[i].scaled == doctest::Approx(std::sqrt(2.0) * small[i - 1].scaled));
    }
}

TEST_CASE("TT* domination scan") {
    const int n = 2, j = 6;
    const double a = 64.0;
    CHECK(ttstar_lhs(n, j, a, 100.0 * a, 0.3) == 0.0);

    // a = b at zero separation is ||K_a||^2 = int |m_j(a |xi|^{1/2})|^2 d xi
    const PieceSymbol symbol(PieceSelector::mj, n, j);
    const double lo = std::pow(symbol.support_lo() / a, 2), hi = std::pow(symbol.support_hi() / a, 2);
    const double direct =
        2.0 * integrate_panels([&](double xi) { return std::norm(symbol(a * std::sqrt(xi))); }, uniform_breaks(lo, hi, 64));
    CHECK(ttstar_lhs(n, j, a, a, 0.0) == doctest::Approx(direct).epsilon(1e-10));

    const auto samples = default_ttstar_samples(j);
    const TtstarScan scan = ttstar_domination_scan(n, j, samples);
    REQUIRE(scan.rows.size() == samples.size());
    for (const auto& row : scan.rows) {
        CHECK(row.ratio == doctest::Approx(row.lhs / row.phi));
        if (row.b == 100.0 * row.a) CHECK(row.lhs == 0.0);
    }
    CHECK(scan.max_ratio > 0.0);
}

TEST_CASE("Sobolev step in log lambda") {
    std::vector<double> ratios;
    for (int n : {4, 16, 64, 256}) {
        const auto family = log_bump_family(n);
        const SobolevCheck c = lambda_sobolev_check(n, family);
        CHECK_FALSE(c.any_infinite);
        ratios.push_back(c.ratio);
    }
    const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
    CHECK(*hi / *lo < 1.01);

    const std::vector<SobolevTestFunction> flat{
        {"one", [](double) { return cplx(1.0, 0.0); }, [](double) { return cplx(0.0, 0.0); }, -30.0, 30.0}};
    CHECK(lambda_sobolev_check(8, flat).any_infinite);
    const std::vector<SobolevTestFunction> zero{
        {"zero", [](double) { return cplx(0.0, 0.0); }, [](double) { return cplx(0.0, 0.0); }, -1.0, 1.0}};
    const SobolevCheck z = lambda_sobolev_check(8, zero);
    CHECK(z.members[0].lhs == 0.0);
    CHECK(z.members[0].rhs == 0.0);
    CHECK(z.ratio == 0.0);
}

TEST_CASE("polar reduction to the multiplier form") {
    const auto grid = make_radial_grid(RadialGridKind::graded, 8.0, 256);
    const std::vector<double> quarter{0.25}, half_back{-0.5};
    const ReductionReport zero = reduction_check(0, [](double r) { return cplx(std::exp(-pi * r * r), 0.0); }, grid, quarter, 4.0);
    CHECK(zero.max_discrepancy < 1e-6);
    const ReductionReport four =
        reduction_check(4, [](double r) { return cplx(std::pow(r, 4) * std::exp(-pi * r * r), 0.0); }, grid, half_back, 4.0);
    CHECK(four.max_discrepancy < 1e-6);
    const ReductionReport none = reduction_check(1, [](double) { return cplx(0.0, 0.0); }, grid, quarter, 4.0);
    for (const auto& row : none.rows) {
        CHECK(row.lhs == 0.0);
        CHECK(row.rhs == 0.0);
    }
    CHECK(none.max_discrepancy == 0.0);
}

TEST_CASE("adversarial lambda(x) stays under the maximal bound") {
    const LineSignal g = random_signal(1024, 1.0 / 64.0, 41);
    const int n = 2, j = 8;
    const LambdaGrid grid = LambdaGrid::covering(PieceSelector::mj, n, j, g, 16, 1);
    for (int block : {0, 3, 6}) {
        const AdversarialResult greedy = adversarial_lambda(n, j, g, grid, block, true);
        CHECK(greedy.ratio <= greedy.maximal_ratio * (1.0 + 1e-12));
        for (std::uint64_t seed : {1u, 2u, 3u}) {
            const AdversarialResult random = adversarial_lambda(n, j, g, grid, block, false, seed);
            CHECK(random.ratio <= random.maximal_ratio * (1.0 + 1e-12));
            CHECK(random.ratio <= greedy.ratio * (1.0 + 1e-12));
        }
    }
    // pointwise application with a step lambda agrees with the block sweep
    std::vector<double> lambda(g.size());
    const auto nodes = grid.nodes();
    for (std::size_t k = 0; k < g.size(); ++k) lambda[k] = nodes[(k / 64) % nodes.size()];
    const LineSignal direct = apply_T_pointwise(PieceSelector::mj, n, j, g, lambda);
    for (std::size_t k = 0; k < g.size(); k += 97) {
        const LineSignal one = apply_T({PieceSelector::mj, n, j, lambda[k]}, g);
        CHECK(std::abs(direct.values()[k] - one.values()[k]) < 1e-14);
    }
}
