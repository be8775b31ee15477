#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace semilab {

using Index = Eigen::Index;

enum class ShapeTag { box, ball, slab, masked };

std::string to_string(ShapeTag tag);

/// Closed axis-aligned box removed from a masked domain.
struct ExcludedBox {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
};

/// Continuum description the lattice was cut from. Which members are
/// meaningful depends on the shape tag.
struct ShapeParams {
  std::vector<double> extents;       // box, slab, masked
  double radius = 0.0;               // ball
  std::vector<ExcludedBox> excluded; // masked
};

/// Neighbor of an interior node in one of the 2N stencil directions.
///
/// Interior links point at another interior node. Boundary links point at a
/// boundary point located `fraction * spacing` away along the link direction;
/// for box, slab and masked domains the fraction is always 1 and the boundary
/// point is the lattice neighbor itself, for balls it is the exact crossing of
/// the lattice edge with the sphere.
struct Link {
  bool boundary = false;
  Index target = -1;
  double fraction = 1.0;
};

/// Uniform lattice discretization of a bounded open set.
///
/// Immutable after construction. Interior nodes are stored in lexicographic
/// lattice order (first coordinate major); boundary points are stored in
/// lexicographic order of their coordinates.
class GridDomain {
 public:
  int dimension() const { return dim_; }
  double spacing() const { return spacing_; }
  ShapeTag shape() const { return tag_; }
  const ShapeParams& params() const { return params_; }

  Index interior_count() const { return interior_lattice_.cols(); }
  Index boundary_count() const { return boundary_points_.cols(); }

  /// dimension x interior_count, lattice indices of interior nodes.
  const Eigen::MatrixXi& interior_lattice() const { return interior_lattice_; }
  /// dimension x interior_count, coordinates of interior nodes.
  const Eigen::MatrixXd& interior_points() const { return interior_points_; }
  /// dimension x boundary_count, coordinates of boundary points.
  const Eigen::MatrixXd& boundary_points() const { return boundary_points_; }

  Eigen::VectorXd interior_point(Index i) const { return interior_points_.col(i); }
  Eigen::VectorXd boundary_point(Index b) const { return boundary_points_.col(b); }

  /// The 2N links of interior node i, ordered (axis 0 -, axis 0 +, axis 1 -, ...).
  std::span<const Link> links(Index i) const;

  /// Interior id of the lattice point, if it is an interior node.
  std::optional<Index> find_interior(const Eigen::VectorXi& lattice) const;

  /// Interior node closest to x, if one lies within max_distance of x.
  std::optional<Index> nearest_interior(const Eigen::VectorXd& x, double max_distance) const;

  /// Upper bound of the continuum diameter.
  double diameter() const;

 private:
  friend class DomainBuilder;

  int dim_ = 0;
  double spacing_ = 0.0;
  ShapeTag tag_ = ShapeTag::box;
  ShapeParams params_;
  Eigen::MatrixXi interior_lattice_;
  Eigen::MatrixXd interior_points_;
  Eigen::MatrixXd boundary_points_;
  std::vector<Link> links_;
  // Dense cell map over the lattice bounding box, -1 for non-interior cells.
  Eigen::VectorXi cell_lo_;
  Eigen::VectorXi cell_size_;
  std::vector<std::int32_t> cell_to_interior_;
};

/// Open box (0,e_1) x ... x (0,e_N). The spacing must divide every extent.
GridDomain build_box_domain(const std::vector<double>& extents, double spacing);

/// Same lattice as build_box_domain, tagged as a slab (used for half-space
/// constructions anchored on the face x_1 = 0).
GridDomain build_slab_domain(const std::vector<double>& extents, double spacing);

/// Open ball of the given radius centred at the origin.
GridDomain build_ball_domain(double radius, int dimension, double spacing);

/// Box with closed sub-boxes removed. Boundary points are lattice nodes
/// (staircase boundary).
GridDomain build_masked_domain(const std::vector<double>& extents, double spacing,
                               const std::vector<ExcludedBox>& excluded);

/// Euclidean distance from an interior node to the continuum boundary.
/// Exact for box, slab and ball; nearest boundary point for masked shapes.
double boundary_distance(const GridDomain& domain, Index node);

/// Same, addressed by lattice index; throws DomainError if the lattice point
/// is not an interior node.
double boundary_distance(const GridDomain& domain, const Eigen::VectorXi& lattice);

/// Distance from an arbitrary point inside the continuum shape to its
/// boundary (closed form, box/slab/ball only).
double continuum_boundary_distance(const GridDomain& domain, const Eigen::VectorXd& x);

/// Unit inward normal at a point of the continuum boundary (box/slab/ball).
Eigen::VectorXd inward_normal(const GridDomain& domain, const Eigen::VectorXd& boundary_point);

}  // namespace semilab
