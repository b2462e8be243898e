#include "doctest.h"

#include "oracles.hpp"
#include "strichartz/bessel.hpp"
#include "strichartz/errors.hpp"

#include <cmath>

using namespace strichartz;

TEST_CASE("bessel_eval trivial values") {
    CHECK(std::abs(bessel_eval(0, 0.0) - cplx(1.0)) < 1e-15);
    CHECK(std::abs(bessel_eval(3, 0.0)) < 1e-15);
    CHECK(std::abs(std::abs(bessel_eval(1, 1.0)) - 0.44005058574493355) < 1e-14);
}

TEST_CASE("bessel_eval matches i^n J_n") {
    double worst = 0.0;
    for (int n : {0, 1, 2, 3, 5, 8, 13, 21, 32, 47, 64}) {
        for (double x = 0.05; x <= 100.0; x += 0.731) {
            const cplx want = oracle::paper_bessel(n, x);
            const double err = std::abs(bessel_eval(n, x) - want);
            worst = std::max(worst, err / std::max(std::abs(want), 1e-3));
        }
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("negative mode and modulus bound") {
    for (double x : {0.3, 7.0, 55.5}) {
        CHECK(std::abs(bessel_eval(-4, x) - bessel_eval(4, x)) < 1e-15);
        CHECK(std::abs(bessel_eval(6, x)) <= 1.0 + 1e-14);
    }
}

TEST_CASE("large arguments and modes converge") {
    CHECK(std::abs(bessel_eval(512, 1e4)) < 1.0);
    CHECK(std::abs(bessel_eval(512, 100.0)) < 1e-100);
    const double x = 5000.0;
    const double asym = std::sqrt(2.0 / (M_PI * x));
    CHECK(std::abs(bessel_eval(0, x)) <= asym * 1.01);
}

TEST_CASE("derivatives by differencing") {
    const double h = 1e-4;
    for (int n : {0, 3, 20}) {
        for (double x : {2.0, 19.0, 40.0}) {
            const auto d = bessel_derivatives(n, x, 2);
            const cplx fd1 = (bessel_eval(n, x + h) - bessel_eval(n, x - h)) / (2 * h);
            const cplx fd2 = (bessel_eval(n, x + h) - 2.0 * bessel_eval(n, x) + bessel_eval(n, x - h)) / (h * h);
            CHECK(std::abs(d[1] - fd1) < 1e-8);
            CHECK(std::abs(d[2] - fd2) < 1e-5);
        }
    }
    const auto at0 = bessel_derivatives(1, 0.0, 1);
    CHECK(std::abs(at0[1] - cplx(0.0, 0.5)) < 1e-15);
}

TEST_CASE("table interpolation") {
    const BesselTable table(16, 0.0, 300.0);
    double worst = 0.0, worst_d = 0.0;
    for (double x = 0.01; x < 300.0; x += 0.377) {
        worst = std::max(worst, std::abs(table(x) - bessel_eval(16, x)));
        worst_d = std::max(worst_d, std::abs(table.derivative(x) - bessel_derivatives(16, x, 1)[1]));
    }
    CHECK(worst < 1e-9);
    CHECK(worst_d < 1e-7);
    CHECK(std::abs(table(400.0) - bessel_eval(16, 400.0)) < 1e-15);
}

TEST_CASE("smooth step") {
    CHECK(smooth_step(-1.0) == 0.0);
    CHECK(smooth_step(2.0) == 1.0);
    CHECK(smooth_step(0.5) == doctest::Approx(0.5));
    const double h = 1e-6;
    for (double x : {0.1, 0.4, 0.8})
        CHECK(smooth_step_derivative(x) == doctest::Approx((smooth_step(x + h) - smooth_step(x - h)) / (2 * h)).epsilon(1e-6));
}

TEST_CASE("partition of unity") {
    for (int n : {0, 1, 16, 64}) {
        const auto part = build_partition(n, 12);
        const BesselTable table(n, 0.0, part.valid_limit());
        double worst = 0.0;
        for (double r = 0.0; r < part.valid_limit(); r += 0.173) {
            cplx s{};
            for (const auto& p : part.pieces) s += p(r, table);
            worst = std::max(worst, std::abs(s - table(r)));
        }
        CHECK(worst < 1e-12);
        double direct = 0.0;
        for (double r = 0.5; r < part.valid_limit(); r += 97.3)
            direct = std::max(direct, std::abs(part.sum(r) - bessel_eval(n, r)));
        CHECK(direct < 1e-9);
        CHECK_THROWS_AS(part.sum(2.0 * part.valid_limit()), PreconditionError);
    }
    const auto p0 = build_partition(0, 10);
    for (const auto& p : p0.pieces) CHECK(p.kind() != PieceKind::m0);
    CHECK_THROWS_AS(build_partition(64, 5), PreconditionError);
}

TEST_CASE("support bookkeeping") {
    const auto part = build_partition(16, 16);
    const MultiplierPiece& m0 = part.pieces.front();
    REQUIRE(m0.kind() == PieceKind::m0);
    CHECK(std::abs(m0(2.0) - bessel_eval(16, 2.0)) < 1e-12);
    for (std::size_t i = 1; i < part.pieces.size(); ++i) CHECK(part.pieces[i](2.0) == cplx{});
    for (const auto& p : part.pieces) {
        const bool live = p(4096.0) != cplx{};
        if (p.kind() == PieceKind::mj && p.scale_j() >= 11 && p.scale_j() <= 13) continue;
        CHECK_FALSE(live);
    }
    int live_count = 0;
    for (const auto& p : part.pieces) live_count += p(4096.0) != cplx{};
    CHECK(live_count >= 1);
}

TEST_CASE("m0 decays faster than n^-2") {
    double cmax = 0.0, cmin = 1e300;
    for (int n : {8, 16, 32, 64, 128}) {
        const auto r = m0_decay_check(n, 0, 2);
        cmax = std::max(cmax, r.constant);
        cmin = std::min(cmin, r.constant);
    }
    CHECK(std::isfinite(cmax));
    CHECK(m0_decay_check(8, 0, 2).sup_derivative <= 1.0);
    const double ratio = m0_decay_check(32, 0, 2).sup_derivative / m0_decay_check(64, 0, 2).sup_derivative;
    CHECK(ratio >= 3.0);
    CHECK(std::isfinite(m0_decay_check(16, 3, 2).constant));
    CHECK_THROWS_AS(m0_decay_check(16, 4, 2), PreconditionError);
    CHECK_THROWS_AS(m0_decay_check(2, 0, 2), PreconditionError);
}

TEST_CASE("m1 envelope constants are uniform") {
    double imax = 0.0, imin = 1e300, dmax = 0.0, dmin = 1e300;
    for (int n : {16, 32, 64, 128, 256}) {
        const auto r = m1_envelope_check(n);
        imax = std::max(imax, r.integral);
        imin = std::min(imin, r.integral);
        dmax = std::max(dmax, r.derivative_constant);
        dmin = std::min(dmin, r.derivative_constant);
        CHECK(std::isfinite(r.value_constant));
    }
    CHECK(imax / imin < 4.0);
    const double d16 = m1_envelope_check(16).derivative_constant;
    const double d256 = m1_envelope_check(256).derivative_constant;
    CHECK(d16 / d256 < 4.0);
    CHECK(d256 / d16 < 4.0);
    const MultiplierPiece m1(PieceKind::m1, 64, 0);
    CHECK(m1(1000.0) == cplx{});
}

TEST_CASE("amplitude extraction") {
    double sup_lo = 1e300, sup_hi = 0.0;
    for (int n : {2, 8, 32}) {
        for (int j = lowest_dyadic_scale(n) + 4; j <= 12; j += 2) {
            const MultiplierPiece p(PieceKind::mj, n, j);
            const auto a = extract_amplitudes(p, 48);
            CHECK(a.fit_residual < 1e-2);
            sup_lo = std::min(sup_lo, a.sup_psi);
            sup_hi = std::max(sup_hi, a.sup_psi);
            CHECK(a.sup_psi_derivative < 4.0);
            for (double s = 0.6; s < 1.9; s += 0.1) {
                const double bound = 2.0 * std::pow(2.0, -j / 2.0) * a.sup_psi;
                CHECK(std::abs(p(s * std::ldexp(1.0, j))) <= bound * 1.01);
            }
        }
    }
    CHECK(sup_hi / sup_lo < 1.1);
    CHECK_THROWS_AS(extract_amplitudes(MultiplierPiece(PieceKind::m1, 8, 0)), PreconditionError);
}
