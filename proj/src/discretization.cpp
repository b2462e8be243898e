#include "strichartz/discretization.hpp"

#include "strichartz/csv.hpp"
#include "strichartz/errors.hpp"
#include "strichartz/fft.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <string>

namespace strichartz {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

}  // namespace

RadialGrid::RadialGrid(std::vector<double> nodes, std::vector<double> weights, double rmax)
    : nodes_(std::move(nodes)), weights_(std::move(weights)), rmax_(rmax) {
    if (nodes_.empty() || nodes_.size() != weights_.size()) {
        throw PreconditionError("RadialGrid: nodes and weights must be non-empty and aligned");
    }
    if (!(rmax_ > 0.0)) throw PreconditionError("RadialGrid: rmax must be positive");
    if (!(nodes_.front() > 0.0)) throw PreconditionError("RadialGrid: nodes must be positive");
    for (std::size_t i = 1; i < nodes_.size(); ++i) {
        if (!(nodes_[i] > nodes_[i - 1])) {
            throw PreconditionError("RadialGrid: nodes must be strictly increasing");
        }
    }
    if (nodes_.back() > rmax_ * (1.0 + 1e-14)) {
        throw PreconditionError("RadialGrid: last node exceeds rmax");
    }
    for (double w : weights_) {
        if (!(w > 0.0)) throw PreconditionError("RadialGrid: weights must be positive");
    }
}

double RadialGrid::spacing(std::size_t i) const {
    const double left = nodes_[i] - (i == 0 ? 0.0 : nodes_[i - 1]);
    const double right = (i + 1 < nodes_.size()) ? nodes_[i + 1] - nodes_[i] : left;
    return std::max(left, right);
}

bool RadialGrid::same_as(const RadialGrid& other) const {
    return this == &other || (rmax_ == other.rmax_ && nodes_ == other.nodes_ &&
                              weights_ == other.weights_);
}

RadialGridPtr make_radial_grid(RadialGridKind kind, double rmax, std::size_t count) {
    if (!(rmax > 0.0)) throw PreconditionError("make_radial_grid: rmax must be positive");
    if (count < 8) throw PreconditionError("make_radial_grid: count must be at least 8");
    std::vector<double> nodes(count);
    std::vector<double> weights(count);
    const double n = static_cast<double>(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double end_factor = (i + 1 == count) ? 0.5 : 1.0;
        const double s = static_cast<double>(i + 1) / n;
        if (kind == RadialGridKind::uniform) {
            nodes[i] = rmax * s;
            weights[i] = end_factor * (rmax / n) * nodes[i];
        } else {
            // R = rmax s^2, R dR = 2 rmax^2 s^3 ds
            nodes[i] = rmax * s * s;
            weights[i] = end_factor * 2.0 * rmax * rmax * s * s * s / n;
        }
    }
    nodes.back() = rmax;
    return std::make_shared<const RadialGrid>(std::move(nodes), std::move(weights), rmax);
}

AngularGrid::AngularGrid(std::size_t count) : count_(count) {
    if (count < 2) throw PreconditionError("AngularGrid: need at least 2 angles");
}

double AngularGrid::angle(std::size_t k) const {
    return two_pi * static_cast<double>(k) / static_cast<double>(count_);
}

TimeGrid::TimeGrid(std::vector<double> nodes, std::vector<double> weights)
    : nodes_(std::move(nodes)), weights_(std::move(weights)) {
    if (nodes_.empty() || nodes_.size() != weights_.size()) {
        throw PreconditionError("TimeGrid: nodes and weights must be non-empty and aligned");
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i] == 0.0) throw PreconditionError("TimeGrid: t = 0 may not be a node");
        if (!(weights_[i] > 0.0)) throw PreconditionError("TimeGrid: weights must be positive");
        if (i > 0 && !(nodes_[i] > nodes_[i - 1])) {
            throw PreconditionError("TimeGrid: nodes must be strictly increasing");
        }
    }
}

TimeGrid TimeGrid::uniform(double t0, double t1, std::size_t count) {
    if (!(t1 > t0) || count == 0) throw PreconditionError("TimeGrid::uniform: empty interval");
    const double dt = (t1 - t0) / static_cast<double>(count);
    std::vector<double> nodes(count);
    for (std::size_t i = 0; i < count; ++i) nodes[i] = t0 + (static_cast<double>(i) + 0.5) * dt;
    return TimeGrid(std::move(nodes), std::vector<double>(count, dt));
}

TimeGrid TimeGrid::positive_geometric(double hole, double horizon, std::size_t count) {
    if (!(hole > 0.0) || !(horizon > hole) || count < 2) {
        throw PreconditionError("TimeGrid: need 0 < hole < horizon and at least 2 nodes");
    }
    const double step = std::log(horizon / hole) / static_cast<double>(count - 1);
    std::vector<double> nodes(count);
    std::vector<double> weights(count);
    for (std::size_t k = 0; k < count; ++k) {
        nodes[k] = hole * std::exp(step * static_cast<double>(k));
        const double end_factor = (k == 0 || k + 1 == count) ? 0.5 : 1.0;
        weights[k] = end_factor * step * nodes[k];
    }
    nodes.back() = horizon;
    weights.back() = 0.5 * step * horizon;
    return TimeGrid(std::move(nodes), std::move(weights));
}

namespace {

TimeGrid mirrored(const TimeGrid& half) {
    const std::size_t per_side = half.size();
    std::vector<double> nodes;
    std::vector<double> weights;
    nodes.reserve(2 * per_side);
    weights.reserve(2 * per_side);
    for (std::size_t k = per_side; k-- > 0;) {
        nodes.push_back(-half.node(k));
        weights.push_back(half.weight(k));
    }
    for (std::size_t k = 0; k < per_side; ++k) {
        nodes.push_back(half.node(k));
        weights.push_back(half.weight(k));
    }
    return TimeGrid(std::move(nodes), std::move(weights));
}

}  // namespace

TimeGrid TimeGrid::symmetric_geometric(double hole, double horizon, std::size_t per_side) {
    return mirrored(positive_geometric(hole, horizon, per_side));
}

TimeGrid TimeGrid::symmetric_uniform(double hole, double horizon, std::size_t per_side) {
    if (!(hole >= 0.0)) throw PreconditionError("TimeGrid: hole must be nonnegative");
    return mirrored(uniform(hole, horizon, per_side));
}

RadialProfile::RadialProfile(int mode_, RadialGridPtr grid_, std::vector<cplx> values_)
    : mode(mode_), grid(std::move(grid_)), values(std::move(values_)) {
    if (!grid) throw PreconditionError("RadialProfile: null grid");
    if (values.size() != grid->size()) {
        throw GridMismatchError("RadialProfile: values length differs from grid length");
    }
}

RadialProfile::RadialProfile(int mode_, RadialGridPtr grid_, const std::function<cplx(double)>& fn)
    : mode(mode_), grid(std::move(grid_)) {
    if (!grid) throw PreconditionError("RadialProfile: null grid");
    values.resize(grid->size());
    for (std::size_t i = 0; i < grid->size(); ++i) values[i] = fn(grid->node(i));
}

double l2_norm(const RadialProfile& profile) {
    double sum = 0.0;
    for (std::size_t i = 0; i < profile.values.size(); ++i) {
        sum += profile.grid->weight(i) * std::norm(profile.values[i]);
    }
    return std::sqrt(sum);
}

PolarField::PolarField(RadialGridPtr grid, AngularGrid angles, std::vector<cplx> values)
    : grid_(std::move(grid)), angles_(angles), values_(std::move(values)) {
    if (!grid_) throw PreconditionError("PolarField: null grid");
    if (values_.size() != grid_->size() * angles_.count()) {
        throw GridMismatchError("PolarField: values do not match radial x angular shape");
    }
}

PolarField::PolarField(RadialGridPtr grid, AngularGrid angles,
                       const std::function<cplx(double, double)>& fn)
    : grid_(std::move(grid)), angles_(angles) {
    if (!grid_) throw PreconditionError("PolarField: null grid");
    values_.resize(grid_->size() * angles_.count());
    for (std::size_t i = 0; i < grid_->size(); ++i) {
        for (std::size_t k = 0; k < angles_.count(); ++k) {
            values_[i * angles_.count() + k] = fn(grid_->node(i), angles_.angle(k));
        }
    }
}

std::span<const cplx> PolarField::row(std::size_t i) const {
    return std::span<const cplx>(values_).subspan(i * angles_.count(), angles_.count());
}

double l2_norm(const PolarField& field) {
    const std::size_t m = field.angular_size();
    double sum = 0.0;
    for (std::size_t i = 0; i < field.radial_size(); ++i) {
        double ring = 0.0;
        for (auto v : field.row(i)) ring += std::norm(v);
        sum += field.grid()->weight(i) * ring * (two_pi / static_cast<double>(m));
    }
    return std::sqrt(sum);
}

std::vector<RadialProfile> mode_decompose(const PolarField& field, int nmax) {
    const std::size_t m = field.angular_size();
    if (nmax < 0) throw PreconditionError("mode_decompose: nmax must be nonnegative");
    if (static_cast<std::size_t>(2 * nmax + 2) > m) {
        throw PreconditionError("mode_decompose: " + std::to_string(m) +
                                " angles alias modes up to " + std::to_string(nmax) +
                                " (need at least " + std::to_string(2 * nmax + 2) + ")");
    }
    const std::size_t nr = field.radial_size();
    const std::size_t modes = static_cast<std::size_t>(2 * nmax + 1);
    std::vector<std::vector<cplx>> columns(modes, std::vector<cplx>(nr));
    Fft1d fft(m);
    std::vector<cplx> ring(m);
    const double inv_m = 1.0 / static_cast<double>(m);
    for (std::size_t i = 0; i < nr; ++i) {
        const auto row = field.row(i);
        std::copy(row.begin(), row.end(), ring.begin());
        fft.forward(ring);
        for (int n = -nmax; n <= nmax; ++n) {
            const auto bin = static_cast<std::size_t>((n % static_cast<int>(m) + static_cast<int>(m)) %
                                                      static_cast<int>(m));
            columns[static_cast<std::size_t>(n + nmax)][i] = ring[bin] * inv_m;
        }
    }
    std::vector<RadialProfile> out;
    out.reserve(modes);
    for (int n = -nmax; n <= nmax; ++n) {
        out.emplace_back(n, field.grid(), std::move(columns[static_cast<std::size_t>(n + nmax)]));
    }
    return out;
}

PolarField mode_recompose(std::span<const RadialProfile> profiles, const AngularGrid& angles) {
    if (profiles.empty()) throw PreconditionError("mode_recompose: no profiles");
    const auto& grid = profiles.front().grid;
    const std::size_t m = angles.count();
    std::vector<int> seen;
    for (const auto& p : profiles) {
        if (!p.grid->same_as(*grid)) throw GridMismatchError("mode_recompose: profiles use different grids");
        if (std::abs(p.mode) > angles.max_mode()) {
            throw PreconditionError("mode_recompose: mode " + std::to_string(p.mode) +
                                    " aliases on " + std::to_string(m) + " angles");
        }
        if (std::find(seen.begin(), seen.end(), p.mode) != seen.end()) {
            throw PreconditionError("mode_recompose: duplicate mode " + std::to_string(p.mode));
        }
        seen.push_back(p.mode);
    }
    const std::size_t nr = grid->size();
    std::vector<cplx> values(nr * m);
    Fft1d fft(m);
    std::vector<cplx> ring(m);
    for (std::size_t i = 0; i < nr; ++i) {
        std::fill(ring.begin(), ring.end(), cplx{});
        for (const auto& p : profiles) {
            const auto bin = static_cast<std::size_t>((p.mode % static_cast<int>(m) + static_cast<int>(m)) %
                                                      static_cast<int>(m));
            ring[bin] = p.values[i];
        }
        fft.backward(ring);
        std::copy(ring.begin(), ring.end(), values.begin() + static_cast<std::ptrdiff_t>(i * m));
    }
    return PolarField(grid, angles, std::move(values));
}

void write_field_csv(std::ostream& out, const PolarField& field) {
    CsvWriter csv(out, {"r_index", "theta_index", "re", "im"});
    for (std::size_t i = 0; i < field.radial_size(); ++i) {
        for (std::size_t k = 0; k < field.angular_size(); ++k) {
            const cplx v = field.at(i, k);
            csv.cell(i).cell(k).cell(v.real()).cell(v.imag());
            csv.end_row();
        }
    }
}

PolarField read_field_csv(std::istream& in, RadialGridPtr grid, const AngularGrid& angles) {
    std::string line;
    if (!std::getline(in, line) || split_csv_line(line) !=
                                       std::vector<std::string>{"r_index", "theta_index", "re", "im"}) {
        throw PreconditionError("read_field_csv: missing or wrong header");
    }
    const std::size_t m = angles.count();
    std::vector<cplx> values(grid->size() * m);
    std::vector<bool> filled(values.size(), false);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != 4) {
            throw PreconditionError("read_field_csv: line " + std::to_string(line_no) +
                                    ": expected 4 columns");
        }
        try {
            const auto i = std::stoul(cells[0]);
            const auto k = std::stoul(cells[1]);
            if (i >= grid->size() || k >= m) throw std::out_of_range("index");
            values[i * m + k] = {std::stod(cells[2]), std::stod(cells[3])};
            filled[i * m + k] = true;
        } catch (const std::exception&) {
            throw PreconditionError("read_field_csv: line " + std::to_string(line_no) +
                                    ": malformed or out-of-range entry");
        }
    }
    if (std::find(filled.begin(), filled.end(), false) != filled.end()) {
        throw PreconditionError("read_field_csv: not every grid node is present");
    }
    return PolarField(std::move(grid), angles, std::move(values));
}

void write_grid_csv(std::ostream& out, const RadialGrid& grid) {
    CsvWriter csv(out, {"index", "node", "weight"});
    for (std::size_t i = 0; i < grid.size(); ++i) {
        csv.cell(i).cell(grid.node(i)).cell(grid.weight(i));
        csv.end_row();
    }
}

}  // namespace strichartz
