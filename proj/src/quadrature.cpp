#include "strichartz/quadrature.hpp"

#include <numbers>

namespace strichartz {

QuadratureRule composite_gauss_rule(std::span<const double> breaks) {
    using Rule = boost::math::quadrature::gauss<double, 20>;
    const auto& x = Rule::abscissa();
    const auto& w = Rule::weights();
    QuadratureRule rule;
    for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
        const double half = 0.5 * (breaks[p + 1] - breaks[p]);
        const double mid = 0.5 * (breaks[p + 1] + breaks[p]);
        // ascending order within the panel
        for (std::size_t k = x.size(); k-- > 0;) {
            if (x[k] == 0.0) continue;
            rule.nodes.push_back(mid - half * x[k]);
            rule.weights.push_back(half * w[k]);
        }
        if (x[0] == 0.0) {
            rule.nodes.push_back(mid);
            rule.weights.push_back(half * w[0]);
        }
        for (std::size_t k = 0; k < x.size(); ++k) {
            if (x[k] == 0.0) continue;
            rule.nodes.push_back(mid + half * x[k]);
            rule.weights.push_back(half * w[k]);
        }
    }
    return rule;
}

std::vector<double> uniform_breaks(double a, double b, std::size_t panels) {
    if (panels == 0) throw std::invalid_argument("uniform_breaks: need at least one panel");
    std::vector<double> out(panels + 1);
    for (std::size_t i = 0; i <= panels; ++i) {
        out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(panels);
    }
    out.back() = b;
    return out;
}

std::vector<double> geometric_breaks(double a, double b, double ratio) {
    if (!(a > 0.0) || !(b > a) || !(ratio > 1.0)) {
        throw std::invalid_argument("geometric_breaks: need 0 < a < b and ratio > 1");
    }
    const auto count =
        static_cast<std::size_t>(std::ceil(std::log(b / a) / std::log(ratio)));
    std::vector<double> out(count + 1);
    for (std::size_t i = 0; i <= count; ++i) {
        out[i] = a * std::pow(b / a, static_cast<double>(i) / static_cast<double>(count));
    }
    out.back() = b;
    return out;
}

double SeededRng::normal() {
    // Box-Muller; u1 in (0,1] to keep the log finite.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::complex<double> SeededRng::complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt) {
    // splitmix64 finalizer
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace strichartz
