#pragma once

#include "strichartz/discretization.hpp"
#include "strichartz/norms.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace strichartz {

/// F(t) = int_{s<t} |f|^p ds / ||f||_p^p for f constant on the cells
/// [t_k - w_k/2, t_k + w_k/2] of a time grid. Linear inside each cell, so a
/// cell with mass maps onto the F-interval [F_k, F_{k+1}] and a cell without
/// mass collapses to the point F_k.
class CumulativeMap {
public:
    CumulativeMap(const TimeGrid& grid, std::span<const cplx> f, double p);

    double p() const { return p_; }
    std::size_t cells() const { return lo_.size(); }
    double total_mass() const { return total_; }

    // F_k, the value at the left edge of cell k; edge(cells()) == 1.
    double edge(std::size_t k) const { return edge_[k]; }
    double cell_lo(std::size_t k) const { return lo_[k]; }
    double cell_hi(std::size_t k) const { return hi_[k]; }

    double operator()(double t) const;
    // Smallest t with F(t) >= y, so a flat run goes to its left endpoint.
    double inverse(double y) const;

    // Share of cell k that F sends into [a, b), or [a, b] when closed_right.
    // A massless cell counts as the point F_k.
    double cell_fraction(std::size_t k, double a, double b, bool closed_right) const;

private:
    double p_;
    double total_;
    std::vector<double> lo_, hi_;
    std::vector<double> edge_;
};

struct DyadicInterval {
    int level = 0;
    std::uint64_t index = 0;

    double lo() const;
    double hi() const;
    // The last interval of a level is closed on the right so that 1 is covered.
    bool contains(double y) const;
};

struct CellShare {
    std::size_t cell;
    double fraction;
};

/// Left and right children of one dyadic parent, with the time preimages
/// [F^{-1}(lo), F^{-1}(hi)] and the grid cells that F sends into each child.
struct SiblingPair {
    DyadicInterval left, right;
    double left_t0, left_t1;
    double right_t0, right_t1;
    std::vector<CellShare> left_cells;
    std::vector<CellShare> right_cells;
};

class DyadicPairTree {
public:
    DyadicPairTree(CumulativeMap map, int jmax, std::vector<cplx> f);

    int jmax() const { return jmax_; }
    const CumulativeMap& map() const { return map_; }
    std::span<const cplx> input() const { return f_; }
    // level j = 1..jmax holds 2^{j-1} pairs
    std::span<const SiblingPair> level(int j) const { return levels_[static_cast<std::size_t>(j - 1)]; }
    // Leaves at level jmax with their cells.
    std::span<const std::vector<CellShare>> leaves() const { return leaves_; }

    // Number of pairs with x in the left child and y in the right child,
    // by exhaustive search over every level.
    std::size_t count_covering(double x, double y) const;

private:
    CumulativeMap map_;
    int jmax_;
    std::vector<cplx> f_;
    std::vector<std::vector<SiblingPair>> levels_;
    std::vector<std::vector<CellShare>> leaves_;
};

// Throws PreconditionError for f = 0, p <= 1, jmax < 1 or jmax > log2(cells).
DyadicPairTree build_pair_tree(const TimeGrid& grid, std::span<const cplx> f, double p, int jmax);

/// K(t_i, s_k) on one time grid; (T f)_i = sum_k K(t_i, s_k) w_k f_k. The
/// exponents are the claimed L^p -> L^q bound.
class KernelOperator {
public:
    KernelOperator(TimeGrid grid, Eigen::MatrixXcd kernel, double p, double q);
    KernelOperator(TimeGrid grid, const std::function<cplx(double t, double s)>& kernel, double p, double q);

    const TimeGrid& grid() const { return grid_; }
    const Eigen::MatrixXcd& kernel() const { return kernel_; }
    double p() const { return p_; }
    double q() const { return q_; }
    std::size_t size() const { return grid_.size(); }

    std::vector<cplx> apply(std::span<const cplx> f) const;
    // The same operator in the time variable -t.
    KernelOperator time_reversed() const;

private:
    TimeGrid grid_;
    Eigen::MatrixXcd kernel_;
    double p_, q_;
};

// K(t, s) = 1 / (t - s), zero on the diagonal.
KernelOperator hilbert_kernel(const TimeGrid& grid, double p = 2.0, double q = 2.0);

// ||f||_p on the grid cells.
double lp_norm(const TimeGrid& grid, std::span<const cplx> f, double p);

// sum_{k<i} K_ik w_k f_k
std::vector<cplx> apply_retarded_direct(const KernelOperator& op, std::span<const cplx> f);

struct CkAssembly {
    std::vector<cplx> assembled;  // sum over every pair of the tree
    // the part of the retarded operator inside leaf cells, computed from the
    // leaves alone; assembled + residual reproduces the direct sum
    std::vector<cplx> residual;
    std::vector<double> level_l2;             // ||level-j block sum||_2, j = 1..jmax
    std::vector<double> truncation_error;     // ||direct - levels 1..j||_2 / ||direct||_2
    double identity_error = 0.0;              // ||assembled + residual - direct||_2 / ||direct||_2
};

// Throws PreconditionError when the tree was built from a different f or grid.
CkAssembly apply_retarded_ck(const KernelOperator& op, std::span<const cplx> f, const DyadicPairTree& tree);

// L^q norm of the level-j block sum sum_{pairs} chi_{F^{-1}(J)} T(chi_{F^{-1}(I)} f).
double level_norm(const KernelOperator& op, const DyadicPairTree& tree, int j, double q);

struct NormEstimate {
    double value = 0.0;
    std::size_t iterations = 0;
};

struct BoydOptions {
    double tolerance = 1e-12;
    std::size_t max_iterations = 5000;
    std::uint64_t seed = 20240601;
};

/// ||T||_{L^p -> L^q} by Boyd's nonlinear power iteration on
/// W^{1/q} K W^{1 - 1/p}. Starts from the constant vector for a nonnegative
/// real kernel and from a seeded random vector otherwise. The value is a
/// local maximum, a lower bound in general.
NormEstimate operator_norm_pq(const KernelOperator& op, const BoydOptions& opts = {});

struct LevelCertificate {
    int j;
    std::size_t pairs;
    double cell_mass_error;  // max over cells I of | ||chi f||_p^p - 2^{-j} |
    double level_norm;
    double certified_bound;  // ||T|| 2^{-j(1/p - 1/q)}
    bool within(double tolerance = 0.05) const { return level_norm <= certified_bound * (1.0 + tolerance); }
};

// Requires p < q and ||f||_p = 1.
LevelCertificate per_scale_norm_check(const KernelOperator& op, std::span<const cplx> f,
                                      const DyadicPairTree& tree, int j, double operator_norm);

// Normalizes f in L^p, builds the tree, estimates ||T|| and checks levels 1..jmax.
std::vector<LevelCertificate> certify_levels(const KernelOperator& op, std::span<const cplx> f, int jmax,
                                             const BoydOptions& opts = {});

// Header "j,pairs,level_norm,certified_bound".
void write_ck_levels_csv(std::ostream& out, std::span<const LevelCertificate> rows);

/// F(s, x) = sum_n a_n(s, r) e^{in theta}, supported in s_lo <= s <= s_hi.
struct ForcingComponent {
    int mode;
    std::function<cplx(double s, double r)> profile;
};

struct RetardedForcing {
    std::vector<ForcingComponent> components;
    double s_lo = 0.0;
    double s_hi = 1.0;
};

struct RetardedLadder {
    RadialGridKind kind = RadialGridKind::graded;
    double rmax = 8.0;
    std::vector<std::size_t> radial_points{48, 64, 96};
    std::vector<std::size_t> forcing_points{8, 12, 16};
    std::vector<std::size_t> tail_points{24, 32, 48};
    double hole = 1e-3;      // first output time after s_hi
    double horizon = 1e3;    // last output time after s_hi
};

/// ||int_{s<t} e^{i(t-s)Delta} F(s) ds||_{L^2_t L^inf_r L^2_theta} divided by
/// ||F||_{L^{qt'}_t L^{rt'}_x}. Forcing times are midpoint cells of
/// [s_lo, s_hi]. Output times are those midpoints, where the current cell
/// counts with half its weight, followed by a geometric tail
/// s_hi + [hole, horizon]. One value per ladder level, the finest reported.
QuotientReport retarded_strichartz_pipeline(const RetardedForcing& forcing, Exponent qt, Exponent rt,
                                            const RetardedLadder& ladder = {});

// p' with 1/p + 1/p' = 1.
Exponent dual_exponent(Exponent p);

}  // namespace strichartz
