#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

namespace strichartz {

using cplx = std::complex<double>;

enum class RadialGridKind {
    uniform,  // R_i = i h, trapezoid in R
    graded,   // R_i = rmax (i/N)^2, trapezoid in the square-root variable
};

/// Quadrature grid for integrals of the form \f$\int_0^{r_{max}} g(R)\, R\, dR\f$.
///
/// Nodes are strictly positive and strictly increasing; the weights already
/// contain the Jacobian factor R. The graded variant clusters nodes near the
/// origin, which removes the O(h^2) endpoint error the plain trapezoid rule
/// makes on R g(R) when g is smooth and even.
class RadialGrid {
public:
    RadialGrid(std::vector<double> nodes, std::vector<double> weights, double rmax);

    std::span<const double> nodes() const { return nodes_; }
    std::span<const double> weights() const { return weights_; }
    double node(std::size_t i) const { return nodes_[i]; }
    double weight(std::size_t i) const { return weights_[i]; }
    double rmax() const { return rmax_; }
    std::size_t size() const { return nodes_.size(); }

    // Largest gap adjacent to node i (the gap to the origin counts for i = 0).
    double spacing(std::size_t i) const;

    bool same_as(const RadialGrid& other) const;

private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
    double rmax_;
};

using RadialGridPtr = std::shared_ptr<const RadialGrid>;

RadialGridPtr make_radial_grid(RadialGridKind kind, double rmax, std::size_t count);

// M equispaced angles theta_k = 2 pi k / M.
class AngularGrid {
public:
    explicit AngularGrid(std::size_t count);

    std::size_t count() const { return count_; }
    double angle(std::size_t k) const;
    // Largest |n| whose decomposition is alias-free: M >= 2|n| + 2.
    int max_mode() const { return static_cast<int>((count_ - 2) / 2); }

private:
    std::size_t count_;
};

// Quadrature nodes for integrals in t. Zero is never a node: the free
// propagator kernel is singular there.
class TimeGrid {
public:
    TimeGrid(std::vector<double> nodes, std::vector<double> weights);

    // count midpoint cells of [t0, t1].
    static TimeGrid uniform(double t0, double t1, std::size_t count);
    // [-T, -hole] U [hole, T], geometric nodes, trapezoid in log|t|.
    static TimeGrid symmetric_geometric(double hole, double horizon, std::size_t per_side);
    // [-T, -hole] U [hole, T], midpoint cells of equal length.
    static TimeGrid symmetric_uniform(double hole, double horizon, std::size_t per_side);
    // [hole, T] only.
    static TimeGrid positive_geometric(double hole, double horizon, std::size_t count);

    std::span<const double> nodes() const { return nodes_; }
    std::span<const double> weights() const { return weights_; }
    double node(std::size_t i) const { return nodes_[i]; }
    double weight(std::size_t i) const { return weights_[i]; }
    std::size_t size() const { return nodes_.size(); }

private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

/// One spherical-harmonic mode: f(R e^{i phi}) = f_n(R) e^{i n phi}.
struct RadialProfile {
    RadialProfile(int mode, RadialGridPtr grid, std::vector<cplx> values);
    RadialProfile(int mode, RadialGridPtr grid, const std::function<cplx(double)>& fn);

    int mode;
    RadialGridPtr grid;
    std::vector<cplx> values;
};

// ||f_n||_{L^2(R dR)}.
double l2_norm(const RadialProfile& profile);

/// Samples of f(r e^{i theta}) on RadialGrid x AngularGrid, row-major in r.
class PolarField {
public:
    PolarField(RadialGridPtr grid, AngularGrid angles, std::vector<cplx> values);
    PolarField(RadialGridPtr grid, AngularGrid angles,
               const std::function<cplx(double r, double theta)>& fn);

    const RadialGridPtr& grid() const { return grid_; }
    const AngularGrid& angles() const { return angles_; }
    std::size_t radial_size() const { return grid_->size(); }
    std::size_t angular_size() const { return angles_.count(); }

    cplx at(std::size_t i, std::size_t k) const { return values_[i * angles_.count() + k]; }
    std::span<const cplx> row(std::size_t i) const;
    std::span<const cplx> values() const { return values_; }

private:
    RadialGridPtr grid_;
    AngularGrid angles_;
    std::vector<cplx> values_;
};

// ||f||_{L^2(dx)} by direct 2-D quadrature: sum_i w_i (2 pi / M) sum_k |f|^2.
double l2_norm(const PolarField& field);

// f_n(r_i) = (1/M) sum_k f(r_i, theta_k) e^{-i n theta_k}, n = -nmax..nmax.
// Throws PreconditionError when M < 2 nmax + 2 (aliasing).
std::vector<RadialProfile> mode_decompose(const PolarField& field, int nmax);

// f(r, theta_k) = sum_n f_n(r) e^{i n theta_k}. Profiles must share one grid
// and carry distinct modes with |n| <= angles.max_mode().
PolarField mode_recompose(std::span<const RadialProfile> profiles, const AngularGrid& angles);

// Columnar text layout: header "r_index,theta_index,re,im", one row per node,
// r_index major. Numbers use the shortest round-trip representation.
void write_field_csv(std::ostream& out, const PolarField& field);
PolarField read_field_csv(std::istream& in, RadialGridPtr grid, const AngularGrid& angles);

// Header "index,node,weight".
void write_grid_csv(std::ostream& out, const RadialGrid& grid);

}  // namespace strichartz
