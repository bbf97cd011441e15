#include "vhj/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace vhj {

namespace {
// Closure membership with a relative slack so lattice points that should sit
// exactly on the boundary are kept despite rounding.
constexpr double kGeomTol = 1e-9;
}  // namespace

Grid::Grid(Domain domain, double resolution) : domain_(std::move(domain)), resolution_(resolution) {
    if (!(resolution >= 8.0))
        throw GeometryError("resolution must be at least 8 nodes per unit length");
    dim_ = domain_.dimension();
    dx_ = 1.0 / resolution;

    Point lo, hi;
    domain_.bounding_box(lo, hi);
    const double tol = kGeomTol * std::max(1.0, domain_.diameter());

    nx_ = static_cast<int>(std::round((hi[0] - lo[0]) / dx_)) + 1;
    ny_ = dim_ == 2 ? static_cast<int>(std::round((hi[1] - lo[1]) / dx_)) + 1 : 1;
    origin_ = lo;

    const size_t lattice_size = static_cast<size_t>(nx_) * ny_;
    lattice_to_node_.assign(lattice_size, -1);

    // Pass 1: collect nodes (lattice points in the closure of U).
    for (int iy = 0; iy < ny_; ++iy) {
        for (int ix = 0; ix < nx_; ++ix) {
            Point x{origin_[0] + ix * dx_, dim_ == 2 ? origin_[1] + iy * dx_ : 0.0};
            if (!domain_.contains(x, tol)) continue;
            lattice_to_node_[static_cast<size_t>(iy) * nx_ + ix] =
                static_cast<int>(positions_.size());
            positions_.push_back(x);
            lattice_ix_.push_back(ix);
            lattice_iy_.push_back(iy);
        }
    }
    if (positions_.empty()) throw GeometryError("domain too small for the requested resolution");

    // Pass 2: neighbors and classification.
    const int n = node_count();
    neighbors_.assign(4 * n, -1);
    diagonals_.assign(4 * n, -1);
    classes_.assign(n, NodeClass::Interior);

    for (int i = 0; i < n; ++i) {
        const int ix = lattice_ix_[i], iy = lattice_iy_[i];
        neighbors_[4 * i + 0] = node_at(ix - 1, iy);
        neighbors_[4 * i + 1] = node_at(ix + 1, iy);
        if (dim_ == 2) {
            neighbors_[4 * i + 2] = node_at(ix, iy - 1);
            neighbors_[4 * i + 3] = node_at(ix, iy + 1);
            diagonals_[4 * i + 0] = node_at(ix + 1, iy + 1);
            diagonals_[4 * i + 1] = node_at(ix - 1, iy - 1);
            diagonals_[4 * i + 2] = node_at(ix + 1, iy - 1);
            diagonals_[4 * i + 3] = node_at(ix - 1, iy + 1);
        }

        if (domain_.in_target(positions_[i])) {
            classes_[i] = NodeClass::Target;
            continue;
        }
        bool full_stencil = true;
        for (int axis = 0; axis < dim_; ++axis)
            for (int side = 0; side < 2; ++side)
                if (neighbors_[4 * i + 2 * axis + side] < 0) full_stencil = false;
        // Nodes closer than dx/2 to the boundary join the boundary layer so
        // interior unknowns keep a resolvable depth.
        if (!full_stencil || domain_.boundary_distance(positions_[i]) < 0.5 * dx_)
            classes_[i] = NodeClass::Boundary;
    }

    if (domain_.kind() == DomainKind::Annulus) {
        bool any_target = false;
        for (int i = 0; i < n && !any_target; ++i) any_target = is_target(i);
        if (!any_target)
            throw GeometryError("annulus grid has no target nodes at this resolution");
    }

    for (int i = 0; i < n; ++i) {
        switch (classes_[i]) {
            case NodeClass::Interior: ++interior_count_; break;
            case NodeClass::Boundary: ++boundary_count_; break;
            case NodeClass::Target: ++target_count_; break;
        }
    }
}

int Grid::node_near(const Point& x) const {
    int ix = static_cast<int>(std::round((x[0] - origin_[0]) / dx_));
    int iy = dim_ == 2 ? static_cast<int>(std::round((x[1] - origin_[1]) / dx_)) : 0;
    return node_at(ix, iy);
}

double Grid::eps0() const { return std::min(0.5, domain_.inradius() / 4.0); }

double GridFunction::sup_norm() const {
    double s = 0.0;
    for (double v : values_) s = std::max(s, std::abs(v));
    return s;
}

double GridFunction::max() const {
    double s = -std::numeric_limits<double>::infinity();
    for (double v : values_) s = std::max(s, v);
    return s;
}

double GridFunction::min() const {
    double s = std::numeric_limits<double>::infinity();
    for (double v : values_) s = std::min(s, v);
    return s;
}

void GridFunction::check_finite(const char* context) const {
    for (int i = 0; i < size(); ++i) {
        if (!std::isfinite(values_[i])) {
            const Point& x = grid_->position(i);
            throw InstabilityError(std::string(context) + ": non-finite value at node " +
                                   std::to_string(i) + " (x=" + std::to_string(x[0]) +
                                   (grid_->dimension() == 2 ? "," + std::to_string(x[1]) : "") +
                                   ")");
        }
    }
}

GridPtr build_grid(const Domain& domain, double resolution) {
    return std::make_shared<Grid>(domain, resolution);
}

GridFunction distance_to_boundary(const GridPtr& grid) {
    GridFunction d(grid);
    for (int i = 0; i < grid->node_count(); ++i)
        d[i] = std::max(0.0, grid->domain().boundary_distance(grid->position(i)));
    return d;
}

double zeta_of_distance(double d, double m) {
    if (!(m > 1.0 && m <= 2.0))
        throw Error("barrier exponent requires 1 < m <= 2 (use the Holder machinery for m > 2)");
    double dc = std::min(d, 1.0);
    if (m == 2.0) return 1.0 - std::log(dc);
    return std::pow(dc, (m - 2.0) / (m - 1.0));
}

GridFunction barrier_zeta(const GridPtr& grid, double m) {
    if (!(m > 1.0 && m <= 2.0))
        throw Error("barrier_zeta requires 1 < m <= 2 (use the Holder machinery for m > 2)");
    GridFunction d = distance_to_boundary(grid);
    // Floor strictly below half a cell: at exactly dx/2 the m = 2 barrier
    // takes an arithmetic progression on (dx/2, dx, 2dx) and its centered
    // second difference degenerates.
    const double floor = 0.4 * grid->dx();
    GridFunction z(grid);
    for (int i = 0; i < grid->node_count(); ++i)
        z[i] = zeta_of_distance(std::max(d[i], floor), m);
    return z;
}

}  // namespace vhj
