#include "doctest.h"

#include "strichartz/discretization.hpp"
#include "strichartz/errors.hpp"
#include "strichartz/quadrature.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

using namespace strichartz;

namespace {

double weight_sum(const RadialGrid& g) {
    double s = 0.0;
    for (double w : g.weights()) s += w;
    return s;
}

}  // namespace

TEST_CASE("radial grid weights integrate R dR") {
    CHECK(weight_sum(*make_radial_grid(RadialGridKind::uniform, 1.0, 64)) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(weight_sum(*make_radial_grid(RadialGridKind::uniform, 2.0, 64)) == doctest::Approx(2.0).epsilon(1e-12));

    const auto graded = make_radial_grid(RadialGridKind::graded, 8.0, 512);
    double s = 0.0;
    for (std::size_t i = 0; i < graded->size(); ++i) s += graded->weight(i) * std::exp(-graded->node(i) * graded->node(i));
    CHECK(std::abs(s - 0.5) < 1e-8);

    CHECK_THROWS_AS(make_radial_grid(RadialGridKind::uniform, 1.0, 4), PreconditionError);
    CHECK_THROWS_AS(make_radial_grid(RadialGridKind::uniform, -1.0, 64), PreconditionError);
}

TEST_CASE("graded grid converges at fourth order") {
    auto err = [](std::size_t n) {
        const auto g = make_radial_grid(RadialGridKind::graded, 6.0, n);
        double s = 0.0;
        for (std::size_t i = 0; i < g->size(); ++i) s += g->weight(i) * std::exp(-g->node(i) * g->node(i));
        return std::abs(s - 0.5 * (1.0 - std::exp(-36.0)));
    };
    const double rate = std::log2(err(40) / err(80));
    CHECK(rate > 3.5);
}

TEST_CASE("time grids") {
    const auto tg = TimeGrid::symmetric_geometric(1e-2, 10.0, 16);
    CHECK(tg.size() == 32);
    for (std::size_t i = 0; i < tg.size(); ++i) CHECK(tg.node(i) != 0.0);
    CHECK_THROWS_AS(TimeGrid({0.0, 1.0}, {1.0, 1.0}), PreconditionError);
    CHECK_THROWS_AS(TimeGrid({1.0, 0.5}, {1.0, 1.0}), PreconditionError);
    const auto u = TimeGrid::uniform(0.0, 1.0, 10);
    CHECK(std::accumulate(u.weights().begin(), u.weights().end(), 0.0) == doctest::Approx(1.0));
}

TEST_CASE("mode decomposition of single harmonics") {
    const auto grid = make_radial_grid(RadialGridKind::uniform, 4.0, 32);
    const AngularGrid ang(16);
    auto g = [](double r) { return std::exp(-r * r); };

    const PolarField f1(grid, ang, [&](double r, double th) { return std::polar(1.0, th) * g(r); });
    auto modes = mode_decompose(f1, 7);
    for (const auto& p : modes) {
        for (std::size_t i = 0; i < grid->size(); ++i) {
            const cplx want = p.mode == 1 ? cplx(g(grid->node(i))) : cplx{};
            CHECK(std::abs(p.values[i] - want) < 1e-14);
        }
    }

    const PolarField fc(grid, ang, [&](double r, double th) { return std::cos(th) * g(r); });
    modes = mode_decompose(fc, 7);
    for (const auto& p : modes) {
        const double scale = std::abs(p.mode) == 1 ? 0.5 : 0.0;
        for (std::size_t i = 0; i < grid->size(); ++i) CHECK(std::abs(p.values[i] - scale * g(grid->node(i))) < 1e-14);
    }
    CHECK_THROWS_AS(mode_decompose(fc, 8), PreconditionError);
}

TEST_CASE("Parseval and round trip") {
    const auto grid = make_radial_grid(RadialGridKind::graded, 3.0, 40);
    const AngularGrid ang(24);
    SeededRng rng(7);
    std::vector<cplx> v(grid->size() * ang.count());
    for (auto& x : v) x = rng.complex_normal();
    const PolarField f(grid, ang, v);
    const auto modes = mode_decompose(f, 11);
    double sum = 0.0;
    for (const auto& p : modes) sum += std::pow(l2_norm(p), 2);
    // the Nyquist mode n = 12 is not in the stack; recover it separately
    const PolarField back = mode_recompose(modes, ang);
    double nyq = 0.0;
    for (std::size_t i = 0; i < grid->size(); ++i) {
        cplx c{};
        for (std::size_t k = 0; k < ang.count(); ++k) c += f.at(i, k) * std::polar(1.0, -12.0 * ang.angle(k));
        nyq += grid->weight(i) * std::norm(c / 24.0);
    }
    const double direct = std::pow(l2_norm(f), 2);
    CHECK(std::abs(2 * M_PI * (sum + nyq) - direct) / direct < 1e-10);

    std::vector<RadialProfile> stack;
    for (int n = -5; n <= 5; ++n) {
        std::vector<cplx> vals(grid->size());
        for (auto& x : vals) x = rng.complex_normal();
        stack.emplace_back(n, grid, vals);
    }
    const auto again = mode_decompose(mode_recompose(stack, ang), 5);
    double worst = 0.0;
    for (std::size_t m = 0; m < stack.size(); ++m)
        for (std::size_t i = 0; i < grid->size(); ++i) worst = std::max(worst, std::abs(again[m].values[i] - stack[m].values[i]));
    CHECK(worst < 1e-12);
}

TEST_CASE("recompose examples and errors") {
    const auto grid = make_radial_grid(RadialGridKind::uniform, 1.0, 8);
    const AngularGrid ang(8);
    std::vector<RadialProfile> one{RadialProfile(0, grid, [](double) { return cplx(1.0); })};
    const auto f = mode_recompose(one, ang);
    for (auto v : f.values()) CHECK(std::abs(v - cplx(1.0)) < 1e-15);

    auto g = [](double r) { return cplx(r); };
    std::vector<RadialProfile> pm{RadialProfile(-1, grid, g), RadialProfile(1, grid, g)};
    const auto c = mode_recompose(pm, ang);
    for (std::size_t i = 0; i < grid->size(); ++i)
        for (std::size_t k = 0; k < ang.count(); ++k)
            CHECK(std::abs(c.at(i, k) - 2.0 * std::cos(ang.angle(k)) * grid->node(i)) < 1e-14);

    const auto other = make_radial_grid(RadialGridKind::uniform, 2.0, 8);
    std::vector<RadialProfile> mixed{RadialProfile(0, grid, g), RadialProfile(1, other, g)};
    CHECK_THROWS_AS(mode_recompose(mixed, ang), GridMismatchError);
}

TEST_CASE("field csv round trip") {
    const auto grid = make_radial_grid(RadialGridKind::uniform, 1.0, 8);
    const AngularGrid ang(4);
    const PolarField f(grid, ang, [](double r, double th) { return cplx(r * 0.1, std::sin(th) / 3.0); });
    std::stringstream ss;
    write_field_csv(ss, f);
    const auto back = read_field_csv(ss, grid, ang);
    for (std::size_t i = 0; i < f.values().size(); ++i) CHECK(back.values()[i] == f.values()[i]);

    std::stringstream bad("r_index,theta_index,re,im\n0,0,1.0\n");
    CHECK_THROWS_AS(read_field_csv(bad, grid, ang), PreconditionError);
}
