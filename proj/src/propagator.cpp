#include "strichartz/propagator.hpp"

#include "strichartz/errors.hpp"
#include "strichartz/fft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace strichartz {

namespace {

constexpr double pi = std::numbers::pi;
constexpr cplx I{0.0, 1.0};

void check_field(std::size_t n, double length, std::size_t values) {
    if (n < 2) throw PreconditionError("CartesianField: need at least 2 points per side");
    if (!(length > 0.0)) throw PreconditionError("CartesianField: length must be positive");
    if (values != n * n) throw PreconditionError("CartesianField: value count must be N^2");
}

}  // namespace

CartesianField::CartesianField(std::size_t n, double length, std::vector<cplx> values)
    : n_(n), length_(length), values_(std::move(values)) {
    check_field(n_, length_, values_.size());
}

CartesianField::CartesianField(std::size_t n, double length,
                               const std::function<cplx(double, double)>& fn)
    : n_(n), length_(length), values_(n * n) {
    check_field(n_, length_, values_.size());
    for (std::size_t a = 0; a < n_; ++a)
        for (std::size_t b = 0; b < n_; ++b) values_[a * n_ + b] = fn(coordinate(a), coordinate(b));
}

double CartesianField::l2_norm() const {
    double s = 0.0;
    for (auto v : values_) s += std::norm(v);
    return std::sqrt(s) * spacing();
}

double CartesianField::outer_mass_fraction() const {
    double total = 0.0, outer = 0.0;
    const double q = 0.25 * length_;
    for (std::size_t a = 0; a < n_; ++a) {
        for (std::size_t b = 0; b < n_; ++b) {
            const double m = std::norm(at(a, b));
            total += m;
            const double x1 = coordinate(a), x2 = coordinate(b);
            if (x1 < -q || x1 >= q || x2 < -q || x2 >= q) outer += m;
        }
    }
    return total > 0.0 ? outer / total : 0.0;
}

double relative_l2_distance(const CartesianField& a, const CartesianField& b) {
    if (a.size() != b.size() || a.length() != b.length()) {
        throw GridMismatchError("relative_l2_distance: fields live on different grids");
    }
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i) {
        num += std::norm(a.values()[i] - b.values()[i]);
        den += std::norm(b.values()[i]);
    }
    return std::sqrt(num / den);
}

CartesianField propagate_cartesian(const CartesianField& f, double t) {
    const std::size_t n = f.size();
    std::vector<cplx> data(f.values().begin(), f.values().end());
    if (t == 0.0) return CartesianField(n, f.length(), std::move(data));
    const Fft2d fft(n, n);
    fft.forward(data);
    const double h = f.spacing();
    std::vector<double> xi2(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double xi = dft_frequency(k, n, h);
        xi2[k] = xi * xi;
    }
    const double scale = 1.0 / static_cast<double>(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            data[a * n + b] *= scale * std::polar(1.0, -4.0 * pi * pi * t * (xi2[a] + xi2[b]));
    fft.backward(data);
    return CartesianField(n, f.length(), std::move(data));
}

double default_kernel_threshold(const CartesianField& f) {
    const double reach = f.length() / std::numbers::sqrt2 + f.length() / (2.0 * std::numbers::sqrt2);
    return f.spacing() * reach / (4.0 * pi);
}

namespace {

void check_kernel_time(const CartesianField& f, double t, double min_abs_t) {
    const double limit = min_abs_t > 0.0 ? min_abs_t : default_kernel_threshold(f);
    if (!(std::abs(t) >= limit)) {
        throw ResolutionError("propagate_kernel: |t| = " + std::to_string(std::abs(t)) +
                              " is below the kernel threshold " + std::to_string(limit) +
                              " for spacing " + std::to_string(f.spacing()));
    }
}

// g(y) = f(y) e^{i|y|^2/4t} as an N x N matrix.
Eigen::MatrixXcd chirped(const CartesianField& f, double t) {
    const std::size_t n = f.size();
    Eigen::MatrixXcd g(n, n);
    for (std::size_t a = 0; a < n; ++a) {
        const double ya = f.coordinate(a);
        for (std::size_t b = 0; b < n; ++b) {
            const double yb = f.coordinate(b);
            g(a, b) = f.at(a, b) * std::polar(1.0, (ya * ya + yb * yb) / (4.0 * t));
        }
    }
    return g;
}

}  // namespace

CartesianField propagate_kernel(const CartesianField& f, double t, double min_abs_t) {
    check_kernel_time(f, t, min_abs_t);
    const std::size_t n = f.size();
    const double h = f.spacing();
    const Eigen::MatrixXcd g = chirped(f, t);
    Eigen::MatrixXcd e(n, n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) e(a, b) = std::polar(1.0, -f.coordinate(a) * f.coordinate(b) / (2.0 * t));
    const Eigen::MatrixXcd s = e * g * e.transpose();
    const cplx c = h * h / (4.0 * pi * I * t);
    std::vector<cplx> out(n * n);
    for (std::size_t a = 0; a < n; ++a) {
        const double xa = f.coordinate(a);
        for (std::size_t b = 0; b < n; ++b) {
            const double xb = f.coordinate(b);
            out[a * n + b] = c * std::polar(1.0, (xa * xa + xb * xb) / (4.0 * t)) * s(a, b);
        }
    }
    return CartesianField(n, f.length(), std::move(out));
}

std::vector<cplx> propagate_kernel_at(const CartesianField& f, double t,
                                      std::span<const std::array<double, 2>> points,
                                      double min_abs_t) {
    check_kernel_time(f, t, min_abs_t);
    const std::size_t n = f.size();
    const double h = f.spacing();
    const Eigen::MatrixXcd g = chirped(f, t);
    const cplx c = h * h / (4.0 * pi * I * t);
    std::vector<cplx> out;
    out.reserve(points.size());
    Eigen::RowVectorXcd v1(n);
    Eigen::VectorXcd v2(n);
    for (const auto& p : points) {
        for (std::size_t a = 0; a < n; ++a) {
            v1(a) = std::polar(1.0, -p[0] * f.coordinate(a) / (2.0 * t));
            v2(a) = std::polar(1.0, -p[1] * f.coordinate(a) / (2.0 * t));
        }
        const cplx s = (v1 * g * v2)(0, 0);
        out.push_back(c * std::polar(1.0, (p[0] * p[0] + p[1] * p[1]) / (4.0 * t)) * s);
    }
    return out;
}

TrigInterpolant::TrigInterpolant(const CartesianField& f)
    : n_(f.size()), origin_(f.coordinate(0)), freq_(f.size()), coef_(f.size(), f.size()) {
    std::vector<cplx> data(f.values().begin(), f.values().end());
    const Fft2d fft(n_, n_);
    fft.forward(data);
    const double scale = 1.0 / static_cast<double>(n_ * n_);
    for (std::size_t a = 0; a < n_; ++a) {
        freq_[a] = dft_frequency(a, n_, f.spacing());
        for (std::size_t b = 0; b < n_; ++b) coef_(a, b) = scale * data[a * n_ + b];
    }
}

cplx TrigInterpolant::operator()(double x1, double x2) const {
    Eigen::RowVectorXcd e1(n_);
    Eigen::VectorXcd e2(n_);
    for (std::size_t k = 0; k < n_; ++k) {
        e1(k) = std::polar(1.0, 2.0 * pi * freq_[k] * (x1 - origin_));
        e2(k) = std::polar(1.0, 2.0 * pi * freq_[k] * (x2 - origin_));
    }
    return (e1 * coef_ * e2)(0, 0);
}

std::vector<std::array<double, 2>> polar_points(const RadialGrid& grid, const AngularGrid& angles) {
    std::vector<std::array<double, 2>> pts;
    pts.reserve(grid.size() * angles.count());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t k = 0; k < angles.count(); ++k) {
            const double th = angles.angle(k);
            pts.push_back({grid.node(i) * std::cos(th), grid.node(i) * std::sin(th)});
        }
    }
    return pts;
}

PolarField sample_on_polar(const CartesianField& f, RadialGridPtr grid, const AngularGrid& angles) {
    const TrigInterpolant interp(f);
    const auto pts = polar_points(*grid, angles);
    std::vector<cplx> values;
    values.reserve(pts.size());
    for (const auto& p : pts) values.push_back(interp(p[0], p[1]));
    return PolarField(std::move(grid), angles, std::move(values));
}

double kernel_resolution_time(const RadialGrid& grid, std::size_t support_end, double points_per_period) {
    const double period_step = 2.0 * pi / points_per_period;
    double worst = 0.0;
    for (std::size_t j = 0; j < std::min(support_end, grid.size()); ++j)
        worst = std::max(worst, grid.spacing(j) * (grid.rmax() + grid.node(j)));
    return worst / (2.0 * period_step);
}

namespace {

std::size_t support_end(const RadialProfile& f, double tol) {
    double peak = 0.0;
    for (auto v : f.values) peak = std::max(peak, std::abs(v));
    std::size_t end = 0;
    for (std::size_t j = 0; j < f.values.size(); ++j)
        if (std::abs(f.values[j]) > tol * peak) end = j + 1;
    return end;
}

double max_spacing(const RadialGrid& grid, std::size_t end) {
    double h = 0.0;
    for (std::size_t j = 0; j < std::min(end, grid.size()); ++j) h = std::max(h, grid.spacing(j));
    return h;
}

// u(r_i) = sum_j P(i, j) f(R_j), kernel form.
Eigen::MatrixXcd kernel_matrix(int n, const RadialGrid& grid, double t, std::size_t cols) {
    const std::size_t rows = grid.size();
    const double reach = grid.rmax() * grid.node(cols - 1) / (2.0 * std::abs(t));
    const BesselTable table(n, 0.0, std::max(reach, 1.0) + 1.0);
    const cplx pre = 1.0 / (2.0 * I * t);
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(grid.size()));
    for (std::size_t j = 0; j < cols; ++j) {
        const double rj = grid.node(j);
        const cplx col = grid.weight(j) * std::polar(1.0, rj * rj / (4.0 * t));
        for (std::size_t i = 0; i < rows; ++i) {
            const double r = grid.node(i);
            cplx b = table(r * rj / (2.0 * std::abs(t)));
            if (t > 0.0) b = std::conj(b);
            p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = pre * std::polar(1.0, r * r / (4.0 * t)) * b * col;
        }
    }
    return p;
}

struct HankelFactors {
    Eigen::MatrixXcd forward;   // (k, j): conj(B_n(k R_j)) w_j
    Eigen::MatrixXcd backward;  // (i, k): B_n(k r_i) kappa_k
    std::vector<double> k;
};

HankelFactors hankel_factors(int n, const RadialGrid& grid, std::size_t cols, double max_abs_t,
                             double points_per_period) {
    const double period_step = 2.0 * pi / points_per_period;
    const double kmax = period_step / max_spacing(grid, cols);
    const double phase_rate = grid.rmax() + 2.0 * max_abs_t * kmax;
    const auto count = static_cast<std::size_t>(
        std::max(64.0, std::ceil(2.0 * kmax * phase_rate / period_step)));
    const auto kgrid = make_radial_grid(RadialGridKind::graded, kmax, count);
    const BesselTable table(n, 0.0, kmax * grid.rmax() + 1.0);
    HankelFactors h;
    const auto nk = static_cast<Eigen::Index>(count);
    const auto nr = static_cast<Eigen::Index>(grid.size());
    h.forward = Eigen::MatrixXcd::Zero(nk, nr);
    h.backward.resize(nr, nk);
    h.k.assign(kgrid->nodes().begin(), kgrid->nodes().end());
    for (Eigen::Index q = 0; q < nk; ++q) {
        const double k = kgrid->node(static_cast<std::size_t>(q));
        for (std::size_t j = 0; j < cols; ++j)
            h.forward(q, static_cast<Eigen::Index>(j)) = std::conj(table(k * grid.node(j))) * grid.weight(j);
        for (Eigen::Index i = 0; i < nr; ++i)
            h.backward(i, q) = table(k * grid.node(static_cast<std::size_t>(i))) * kgrid->weight(static_cast<std::size_t>(q));
    }
    return h;
}

Eigen::MatrixXcd hankel_matrix(const HankelFactors& h, double t) {
    Eigen::MatrixXcd scaled = h.forward;
    for (Eigen::Index q = 0; q < scaled.rows(); ++q)
        scaled.row(q) *= std::polar(1.0, -t * h.k[static_cast<std::size_t>(q)] * h.k[static_cast<std::size_t>(q)]);
    return h.backward * scaled;
}

Eigen::Map<const Eigen::VectorXcd> as_vector(const std::vector<cplx>& v) {
    return Eigen::Map<const Eigen::VectorXcd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

RadialProfile propagate_mode(const RadialProfile& f, double t, const ModePropagationOptions& opts) {
    if (t == 0.0) throw PreconditionError("propagate_mode: t must be nonzero");
    const RadialGrid& grid = *f.grid;
    const std::size_t end = support_end(f, opts.support_tolerance);
    if (end == 0) return RadialProfile(f.mode, f.grid, std::vector<cplx>(grid.size()));
    const double t_res = kernel_resolution_time(grid, end, opts.points_per_period);
    ModeRoute route = opts.route;
    if (route == ModeRoute::automatic) route = std::abs(t) >= t_res ? ModeRoute::kernel : ModeRoute::hankel;
    if (route == ModeRoute::kernel && std::abs(t) < t_res) {
        throw ResolutionError("propagate_mode: kernel route needs |t| >= " + std::to_string(t_res) +
                              " on this grid (got " + std::to_string(std::abs(t)) + ")");
    }
    Eigen::VectorXcd u;
    if (route == ModeRoute::kernel) {
        u = kernel_matrix(f.mode, grid, t, end) * as_vector(f.values);
    } else {
        const HankelFactors h = hankel_factors(f.mode, grid, end, std::abs(t), opts.points_per_period);
        Eigen::VectorXcd spectrum = h.forward * as_vector(f.values);
        for (Eigen::Index q = 0; q < spectrum.size(); ++q) {
            const double k = h.k[static_cast<std::size_t>(q)];
            spectrum(q) *= std::polar(1.0, -t * k * k);
        }
        u = h.backward * spectrum;
    }
    return RadialProfile(f.mode, f.grid, std::vector<cplx>(u.data(), u.data() + u.size()));
}

ModeEvolution::ModeEvolution(int mode, RadialGridPtr grid, const TimeGrid& times,
                             const ModePropagationOptions& opts)
    : mode_(mode), grid_(std::move(grid)), times_(times) {
    const std::size_t cols = grid_->size();
    resolution_time_ = kernel_resolution_time(*grid_, cols, opts.points_per_period);
    double hankel_reach = 0.0;
    for (std::size_t k = 0; k < times_.size(); ++k) {
        const double at = std::abs(times_.node(k));
        const bool use_kernel = opts.route == ModeRoute::kernel ||
                                (opts.route == ModeRoute::automatic && at >= resolution_time_);
        if (opts.route == ModeRoute::kernel && at < resolution_time_) {
            throw ResolutionError("ModeEvolution: time " + std::to_string(times_.node(k)) +
                                  " is below the kernel resolution limit " + std::to_string(resolution_time_));
        }
        if (!use_kernel) {
            ++hankel_count_;
            hankel_reach = std::max(hankel_reach, at);
        }
    }
    HankelFactors factors;
    if (hankel_count_ > 0) factors = hankel_factors(mode_, *grid_, cols, hankel_reach, opts.points_per_period);
    mats_.reserve(times_.size());
    for (std::size_t k = 0; k < times_.size(); ++k) {
        const double t = times_.node(k);
        const bool use_kernel = opts.route == ModeRoute::kernel ||
                                (opts.route == ModeRoute::automatic && std::abs(t) >= resolution_time_);
        mats_.push_back(use_kernel ? kernel_matrix(mode_, *grid_, t, cols) : hankel_matrix(factors, t));
    }
}

Eigen::VectorXcd ModeEvolution::apply(std::size_t k, const Eigen::VectorXcd& f) const { return mats_[k] * f; }

Eigen::VectorXcd ModeEvolution::adjoint(std::size_t k, const Eigen::VectorXcd& g) const {
    const auto w = Eigen::Map<const Eigen::VectorXd>(grid_->weights().data(),
                                                     static_cast<Eigen::Index>(grid_->size()));
    const Eigen::VectorXcd wg = w.cast<cplx>().cwiseProduct(g);
    Eigen::VectorXcd out = mats_[k].adjoint() * wg;
    return out.cwiseQuotient(w.cast<cplx>());
}

}  // namespace strichartz

namespace strichartz {

double ThreeWayReport::worst() const {
    return std::max({cartesian_vs_kernel, cartesian_vs_mode, kernel_vs_mode});
}

ThreeWayReport three_way_gaussian(int n, double t, const ThreeWaySetup& setup) {
    const AngularGrid angles(setup.angles);
    if (std::abs(n) > angles.max_mode()) {
        throw PreconditionError("three_way_gaussian: " + std::to_string(setup.angles) +
                                " angles cannot carry mode " + std::to_string(n));
    }
    const auto grid = make_radial_grid(RadialGridKind::graded, setup.radial_max, setup.radial_points);
    const int an = std::abs(n);
    auto zn = [&](double x1, double x2) {
        const cplx z = n >= 0 ? cplx(x1, x2) : cplx(x1, -x2);
        return std::pow(z, an) * std::exp(-pi * (x1 * x1 + x2 * x2));
    };
    const CartesianField f(setup.cartesian_points, setup.length, zn);
    const CartesianField u_cart = propagate_cartesian(f, t);

    const RadialProfile fn(n, grid, [&](double r) { return cplx(std::pow(r, an) * std::exp(-pi * r * r)); });
    const RadialProfile un = propagate_mode(fn, t);

    std::size_t rows = 0;
    while (rows < grid->size() && grid->node(rows) <= setup.compare_rmax) ++rows;
    std::vector<std::array<double, 2>> pts;
    std::vector<cplx> mode_vals;
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t k = 0; k < angles.count(); ++k) {
            const double th = angles.angle(k);
            pts.push_back({grid->node(i) * std::cos(th), grid->node(i) * std::sin(th)});
            mode_vals.push_back(un.values[i] * std::polar(1.0, n * th));
        }
    }
    const TrigInterpolant interp(u_cart);
    std::vector<cplx> cart_vals;
    cart_vals.reserve(pts.size());
    for (const auto& p : pts) cart_vals.push_back(interp(p[0], p[1]));
    const std::vector<cplx> kern_vals = propagate_kernel_at(f, t, pts);

    auto dist = [&](const std::vector<cplx>& a, const std::vector<cplx>& b) {
        double num = 0.0, den = 0.0;
        for (std::size_t q = 0; q < a.size(); ++q) {
            const double w = grid->weight(q / angles.count());
            num += w * std::norm(a[q] - b[q]);
            den += w * std::norm(b[q]);
        }
        return std::sqrt(num / den);
    };
    return {n, t, setup.cartesian_points, setup.radial_points, dist(cart_vals, kern_vals),
            dist(cart_vals, mode_vals), dist(kern_vals, mode_vals)};
}

}  // namespace strichartz
