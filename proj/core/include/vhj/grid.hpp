#pragma once

#include <memory>
#include <vector>

#include "vhj/geometry.hpp"

namespace vhj {

// Node classes:
//  Interior  -- all axis neighbors are grid nodes and the node is at least
//               dx/2 away from the domain boundary; these are the unknowns.
//  Boundary  -- inside the closure of U but adjacent to (or on) its boundary;
//               one-sided stencils only.
//  Target    -- inside the closed target ball (annulus domains); pinned.
enum class NodeClass : unsigned char { Interior = 0, Boundary = 1, Target = 2 };

// Uniform node-centered lattice over a Domain. Immutable after construction
// and safe to share between threads. Nodes are stored compactly; lattice
// points outside the closure of the domain are not nodes.
class Grid {
  public:
    Grid(Domain domain, double resolution);

    const Domain& domain() const { return domain_; }
    int dimension() const { return dim_; }
    double dx() const { return dx_; }
    double resolution() const { return resolution_; }

    int node_count() const { return static_cast<int>(positions_.size()); }
    const Point& position(int node) const { return positions_[node]; }
    NodeClass node_class(int node) const { return classes_[node]; }
    bool is_interior(int node) const { return classes_[node] == NodeClass::Interior; }
    bool is_target(int node) const { return classes_[node] == NodeClass::Target; }
    bool is_boundary(int node) const { return classes_[node] == NodeClass::Boundary; }

    // Axis neighbor (side 0 = minus, 1 = plus); -1 when the lattice point is
    // not a node.
    int neighbor(int node, int axis, int side) const {
        return neighbors_[4 * node + 2 * axis + side];
    }
    // Diagonal neighbor for 2D cross-derivative stencils; quadrant in
    // {(+,+),(-,-),(+,-),(-,+)} indexed 0..3. -1 when absent.
    int diagonal(int node, int quadrant) const { return diagonals_[4 * node + quadrant]; }

    // Lattice coordinates of a node (iy = 0 in 1D).
    int lattice_ix(int node) const { return lattice_ix_[node]; }
    int lattice_iy(int node) const { return lattice_iy_[node]; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }

    // Node at given lattice coordinates, -1 if absent.
    int node_at(int ix, int iy) const {
        if (ix < 0 || ix >= nx_ || iy < 0 || iy >= ny_) return -1;
        return lattice_to_node_[static_cast<size_t>(iy) * nx_ + ix];
    }
    // Nearest node to a point, -1 if the rounded lattice point is not a node.
    int node_near(const Point& x) const;

    int interior_count() const { return interior_count_; }
    int boundary_count() const { return boundary_count_; }
    int target_count() const { return target_count_; }

    // Plateau depth for the boundary barrier: min(0.5, inradius/4).
    double eps0() const;

  private:
    Domain domain_;
    double resolution_ = 0.0;
    double dx_ = 0.0;
    int dim_ = 1;
    int nx_ = 0, ny_ = 1;
    Point origin_{0.0, 0.0};
    std::vector<Point> positions_;
    std::vector<NodeClass> classes_;
    std::vector<int> neighbors_;
    std::vector<int> diagonals_;
    std::vector<int> lattice_ix_, lattice_iy_;
    std::vector<int> lattice_to_node_;
    int interior_count_ = 0, boundary_count_ = 0, target_count_ = 0;
};

using GridPtr = std::shared_ptr<const Grid>;

// Real values on the nodes of a grid. Values are finite by contract: the
// library never stores NaN/Inf (boundary blow-up shows up as growth against
// the barrier, never as a stored infinity).
class GridFunction {
  public:
    GridFunction() = default;
    explicit GridFunction(GridPtr grid, double fill = 0.0)
        : grid_(std::move(grid)), values_(grid_->node_count(), fill) {}

    const Grid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    int size() const { return static_cast<int>(values_.size()); }

    double& operator[](int node) { return values_[node]; }
    double operator[](int node) const { return values_[node]; }
    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    double sup_norm() const;
    double max() const;
    double min() const;

    // Verifies the finite-values invariant; throws InstabilityError naming
    // the first offending node.
    void check_finite(const char* context = "grid function") const;

  private:
    GridPtr grid_;
    std::vector<double> values_;
};

// build_grid: uniform lattice with `resolution` nodes per unit length on each
// axis. Requires resolution >= 8.
GridPtr build_grid(const Domain& domain, double resolution);

// Exact Euclidean distance to the boundary of U, computed analytically per
// shape. Zero exactly on boundary nodes that sit on the lattice.
GridFunction distance_to_boundary(const GridPtr& grid);

// Boundary barrier built from the distance function:
//   1 < m < 2 :  zeta = d^((m-2)/(m-1)), clipped to 1 where d >= 1
//   m = 2     :  zeta = 1 - log(d), clipped to 1 where d >= 1
// Distances below 0.4 dx are floored there so nodal values stay finite; the
// floored value still grows without bound under refinement.
GridFunction barrier_zeta(const GridPtr& grid, double m);

// Scalar version of the barrier profile (no flooring).
double zeta_of_distance(double d, double m);

}  // namespace vhj
