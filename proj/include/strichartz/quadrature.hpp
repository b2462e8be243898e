#pragma once

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace strichartz {

// Composite Gauss-Legendre rule (20 nodes per panel) over consecutive
// breakpoints. Works for real- and complex-valued integrands.
template <typename F>
auto integrate_panels(F&& f, std::span<const double> breaks) {
    using Rule = boost::math::quadrature::gauss<double, 20>;
    using R = decltype(f(0.0));
    R total{};
    const auto& x = Rule::abscissa();
    const auto& w = Rule::weights();
    for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
        const double a = breaks[p];
        const double b = breaks[p + 1];
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (a + b);
        R panel{};
        for (std::size_t k = 0; k < x.size(); ++k) {
            if (x[k] == 0.0) {
                panel += w[k] * f(mid);
            } else {
                panel += w[k] * (f(mid - half * x[k]) + f(mid + half * x[k]));
            }
        }
        total += half * panel;
    }
    return total;
}

// Nodes and weights of the same composite rule, for callers that want to
// sample the integrand themselves.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

QuadratureRule composite_gauss_rule(std::span<const double> breaks);

std::vector<double> uniform_breaks(double a, double b, std::size_t panels);

// Breakpoints a, a*q, a*q^2, ..., b with ratio at most `ratio`.
std::vector<double> geometric_breaks(double a, double b, double ratio);

// Fixed-seed generator with portable conversions: std::mt19937_64's output
// sequence is fixed by the standard, the distributions in <random> are not.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double normal();
    std::complex<double> complex_normal();
    std::uint64_t bits() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

// Mix two integers into a seed; used to derive per-(mode, resolution) seeds
// from one recorded base seed.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt);

}  // namespace strichartz
