#include "strichartz/counterexamples.hpp"
#include "strichartz/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace strichartz;

namespace {

constexpr double pi = std::numbers::pi;

const std::vector<double> decades{1e-2, 1e-3, 1e-4, 1e-5, 1e-6};

}  // namespace

TEST_CASE("reduced operator on an indicator matches its antiderivative") {
    const double eps = 1e-3;
    const OneSidedHilbertOp op(eps, -1.0, 10.0);
    const std::vector<double> t{-0.5, 0.0005, 0.01, 0.3, 0.999, 1.0005, 1.5, 4.0, 9.0};
    const auto v = delta_forcing_reduce(op, unit_indicator(), t);
    CHECK(v[0] == cplx(0.0));
    CHECK(v[1] == cplx(0.0));
    for (std::size_t i = 2; i <= 5; ++i) CHECK(v[i].real() == doctest::Approx(std::log(eps / t[i])).epsilon(1e-13));
    for (std::size_t i = 6; i < t.size(); ++i) {
        CHECK(v[i].real() == doctest::Approx(std::log(1.0 - 1.0 / t[i])).epsilon(1e-13));
        CHECK(std::abs(v[i]) * t[i] == doctest::Approx(1.0).epsilon(0.5));
    }

    StepSignal zero = unit_indicator();
    zero.values[0] = 0.0;
    for (auto x : delta_forcing_reduce(op, zero, t)) CHECK(x == cplx(0.0));
}

TEST_CASE("constant of the trace at the origin") {
    const cplx c = delta_trace_constant();
    const double tau = 0.37;
    // c * (1 / (0 - tau)) is the kernel 1 / (4 pi i tau)
    CHECK(std::abs(c * (-1.0 / tau) - 1.0 / (cplx(0.0, 4.0 * pi) * tau)) < 1e-15);
}

TEST_CASE("rho(eps) diverges like ln(1/eps)") {
    const auto scan = divergence_scan(decades, 0.0, 100.0);
    REQUIRE(scan.rows.size() == 5);
    for (const auto& r : scan.rows) {
        MESSAGE("eps " << r.epsilon << " rho " << r.rho << " bound " << r.lower_bound);
        CHECK(r.rho >= r.lower_bound);
    }
    CHECK(scan.monotone);
    CHECK(std::abs(scan.slope - 1.0) <= 0.2);

    std::ostringstream csv;
    write_divergence_csv(csv, scan);
    CHECK(csv.str().rfind("epsilon,rho,analytic_lower_bound\n", 0) == 0);
}

TEST_CASE("rho on (eps, 1) agrees with the closed form") {
    // window [0, 1]: only t in (eps, 1) contributes, int ln^2(t/eps) = bound^2 - 2 eps
    for (double eps : {1e-2, 1e-4}) {
        const OneSidedHilbertOp op(eps, 0.0, 1.0);
        const double L = std::log(1.0 / eps);
        const double exact = std::sqrt((L - 1.0) * (L - 1.0) + 1.0 - 2.0 * eps);
        CHECK(reduced_l2_norm(op, unit_indicator()) == doctest::Approx(exact).epsilon(1e-10));
    }
}

TEST_CASE("rho is homogeneous of degree zero in g") {
    StepSignal twice = unit_indicator();
    twice.values[0] = 2.0;
    const auto a = divergence_scan(decades, -1.0, 20.0);
    const auto b = divergence_scan(decades, -1.0, 20.0, twice);
    for (std::size_t i = 0; i < a.rows.size(); ++i) CHECK(b.rows[i].rho == doctest::Approx(a.rows[i].rho).epsilon(1e-13));
}

TEST_CASE("a smoothed indicator still diverges") {
    const StepSignal g = smoothed_indicator(0.05, 1.0 / 64.0, 0.25);
    const auto scan = divergence_scan(decades, -0.25, 20.0, g);
    CHECK(scan.monotone);
    MESSAGE("smoothed slope " << scan.slope);
    CHECK(scan.slope > 0.8);
}

TEST_CASE("divergence scan preconditions") {
    const std::vector<double> short_span{1e-2, 1e-3, 1e-4, 1e-5};
    const std::vector<double> rising{1e-6, 1e-2};
    CHECK_THROWS_AS(divergence_scan(short_span, 0.0, 10.0), PreconditionError);
    CHECK_THROWS_AS(divergence_scan(rising, 0.0, 10.0), PreconditionError);
    CHECK_THROWS_AS(divergence_scan(decades, 0.0, 1.5), PreconditionError);
    CHECK_THROWS_AS(divergence_scan(decades, 0.5, 10.0), PreconditionError);
    CHECK_THROWS_AS(OneSidedHilbertOp(0.0, 0.0, 1.0), PreconditionError);
}

TEST_CASE("endpoint gate") {
    const auto e = [](const char* s) { return Exponent::parse(s); };
    CHECK(endpoint_gate(e("2"), e("2")).outcome == GateOutcome::scaling_inconsistent);
    CHECK(endpoint_gate(e("4"), e("4")).outcome == GateOutcome::admissible);
    CHECK(endpoint_gate(e("inf"), e("2")).outcome == GateOutcome::admissible);
    const auto endpoint = endpoint_gate(e("2"), e("inf"));
    CHECK(endpoint.outcome == GateOutcome::double_endpoint);
    CHECK(endpoint.arithmetic.find("got 1/2") != std::string::npos);
    CHECK(endpoint_gate(e("4"), e("2")).outcome == GateOutcome::scaling_inconsistent);
    CHECK(to_string(GateOutcome::double_endpoint) == "double-endpoint");
}

TEST_CASE("narrow bump forcing approaches the delta reduction") {
    const OneSidedHilbertOp op(0.02, 0.0, 2.0);
    const std::vector<double> times{0.3, 0.7, 1.3};
    const std::vector<double> widths{0.2, 0.1, 0.05};
    const auto rows = narrow_bump_check(op, unit_indicator(), times, widths);
    for (const auto& r : rows) MESSAGE("width " << r.width << " error " << r.max_relative_error);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].max_relative_error < rows[i - 1].max_relative_error);
    CHECK(rows.back().max_relative_error < 0.05);

    // bump evolved in closed form: [e^{i tau Delta} phi](0) = 1 / (pi (w^2 + 4 i tau))
    const double w = 0.1, t = 0.7;
    cplx exact = 0.0;
    const int n = 200000;
    for (int k = 0; k < n; ++k) {
        const double s = (k + 0.5) / n * (t - 0.02);
        exact += 1.0 / (pi * cplx(w * w, 4.0 * (t - s))) * ((t - 0.02) / n);
    }
    const cplx ref = delta_trace_constant() * delta_forcing_reduce(op, unit_indicator(), std::vector<double>{t})[0];
    const double closed_form_error = std::abs(exact - ref) / std::abs(ref);
    const std::vector<double> one_time{t}, one_width{w};
    const double numeric_error = narrow_bump_check(op, unit_indicator(), one_time, one_width)[0].max_relative_error;
    CHECK(std::abs(numeric_error - closed_form_error) < 1e-4);
}

TEST_CASE("bump check refuses times below the kernel resolution limit") {
    const OneSidedHilbertOp op(1e-4, 0.0, 2.0);
    const std::vector<double> times{0.5};
    const std::vector<double> widths{0.1};
    CHECK_THROWS_AS(narrow_bump_check(op, unit_indicator(), times, widths), ResolutionError);
}
