#include "semilab/geometry.hpp"

#include "semilab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>

namespace semilab {

std::string to_string(ShapeTag tag) {
  switch (tag) {
    case ShapeTag::box: return "box";
    case ShapeTag::ball: return "ball";
    case ShapeTag::slab: return "slab";
    case ShapeTag::masked: return "masked";
  }
  return "unknown";
}

std::span<const Link> GridDomain::links(Index i) const {
  const auto stride = static_cast<std::size_t>(2 * dim_);
  return {links_.data() + static_cast<std::size_t>(i) * stride, stride};
}

std::optional<Index> GridDomain::find_interior(const Eigen::VectorXi& lattice) const {
  if (lattice.size() != dim_) return std::nullopt;
  std::size_t flat = 0;
  for (int k = 0; k < dim_; ++k) {
    const int off = lattice(k) - cell_lo_(k);
    if (off < 0 || off >= cell_size_(k)) return std::nullopt;
    flat = flat * static_cast<std::size_t>(cell_size_(k)) + static_cast<std::size_t>(off);
  }
  const auto id = cell_to_interior_[flat];
  if (id < 0) return std::nullopt;
  return static_cast<Index>(id);
}

std::optional<Index> GridDomain::nearest_interior(const Eigen::VectorXd& x,
                                                  double max_distance) const {
  if (x.size() != dim_) return std::nullopt;
  Eigen::VectorXi lattice(dim_);
  for (int k = 0; k < dim_; ++k) lattice(k) = static_cast<int>(std::lround(x(k) / spacing_));
  auto id = find_interior(lattice);
  if (!id || (interior_points_.col(*id) - x).norm() > max_distance) return std::nullopt;
  return id;
}

double GridDomain::diameter() const {
  if (tag_ == ShapeTag::ball) return 2.0 * params_.radius;
  double s = 0.0;
  for (double e : params_.extents) s += e * e;
  return std::sqrt(s);
}

/// Shared lattice walker behind every domain builder.
class DomainBuilder {
 public:
  using InsideFn = std::function<bool(const Eigen::VectorXi&, const Eigen::VectorXd&)>;
  using CrossingFn = std::function<double(const Eigen::VectorXd&, int axis, int dir)>;

  static GridDomain build(int dim, double spacing, ShapeTag tag, ShapeParams params,
                          const Eigen::VectorXi& lo, const Eigen::VectorXi& hi,
                          const InsideFn& inside, const CrossingFn& crossing);
};

GridDomain DomainBuilder::build(int dim, double spacing, ShapeTag tag, ShapeParams params,
                                const Eigen::VectorXi& lo, const Eigen::VectorXi& hi,
                                const InsideFn& inside, const CrossingFn& crossing) {
  GridDomain d;
  d.dim_ = dim;
  d.spacing_ = spacing;
  d.tag_ = tag;
  d.params_ = std::move(params);
  d.cell_lo_ = lo;
  d.cell_size_ = (hi - lo).array() + 1;

  std::size_t cells = 1;
  for (int k = 0; k < dim; ++k) cells *= static_cast<std::size_t>(d.cell_size_(k));
  d.cell_to_interior_.assign(cells, -1);

  // Lexicographic sweep, last coordinate fastest.
  std::vector<Eigen::VectorXi> interior;
  Eigen::VectorXi idx = lo;
  for (std::size_t flat = 0; flat < cells; ++flat) {
    const Eigen::VectorXd pos = idx.cast<double>() * spacing;
    if (inside(idx, pos)) {
      d.cell_to_interior_[flat] = static_cast<std::int32_t>(interior.size());
      interior.push_back(idx);
    }
    for (int k = dim - 1; k >= 0; --k) {
      if (++idx(k) <= hi(k)) break;
      idx(k) = lo(k);
    }
  }
  if (interior.empty()) throw DomainError("domain construction: interior is empty (spacing too coarse?)");

  const auto n = static_cast<Index>(interior.size());
  d.interior_lattice_.resize(dim, n);
  d.interior_points_.resize(dim, n);
  for (Index i = 0; i < n; ++i) {
    d.interior_lattice_.col(i) = interior[static_cast<std::size_t>(i)];
    d.interior_points_.col(i) = interior[static_cast<std::size_t>(i)].cast<double>() * spacing;
  }

  // Links and boundary points. Lattice-node boundary points are shared between
  // all interior nodes touching them; off-lattice crossings are unique.
  std::map<std::vector<int>, Index> lattice_boundary;
  std::vector<Eigen::VectorXd> bpoints;
  d.links_.resize(static_cast<std::size_t>(n) * 2 * dim);
  for (Index i = 0; i < n; ++i) {
    const Eigen::VectorXi base = d.interior_lattice_.col(i);
    for (int axis = 0; axis < dim; ++axis) {
      for (int s = 0; s < 2; ++s) {
        const int dir = s == 0 ? -1 : 1;
        Eigen::VectorXi nb = base;
        nb(axis) += dir;
        Link& link = d.links_[static_cast<std::size_t>(i * 2 * dim + 2 * axis + s)];
        if (auto j = d.find_interior(nb)) {
          link = Link{false, *j, 1.0};
          continue;
        }
        const double fraction = crossing(d.interior_points_.col(i), axis, dir);
        if (!(fraction > 0.0 && fraction <= 1.0))
          throw InvariantError("domain construction: boundary crossing fraction out of (0,1]");
        if (fraction == 1.0) {
          std::vector<int> key(nb.data(), nb.data() + dim);
          auto [it, inserted] = lattice_boundary.try_emplace(key, static_cast<Index>(bpoints.size()));
          if (inserted) bpoints.push_back(nb.cast<double>() * spacing);
          link = Link{true, it->second, 1.0};
        } else {
          Eigen::VectorXd p = d.interior_points_.col(i);
          p(axis) += dir * fraction * spacing;
          link = Link{true, static_cast<Index>(bpoints.size()), fraction};
          bpoints.push_back(p);
        }
      }
    }
  }
  if (bpoints.empty()) throw DomainError("domain construction: boundary is empty");

  std::vector<Index> order(bpoints.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    const auto& pa = bpoints[static_cast<std::size_t>(a)];
    const auto& pb = bpoints[static_cast<std::size_t>(b)];
    return std::lexicographical_compare(pa.data(), pa.data() + dim, pb.data(), pb.data() + dim);
  });
  std::vector<Index> rank(bpoints.size());
  d.boundary_points_.resize(dim, static_cast<Index>(bpoints.size()));
  for (std::size_t r = 0; r < order.size(); ++r) {
    rank[static_cast<std::size_t>(order[r])] = static_cast<Index>(r);
    d.boundary_points_.col(static_cast<Index>(r)) = bpoints[static_cast<std::size_t>(order[r])];
  }
  for (auto& link : d.links_)
    if (link.boundary) link.target = rank[static_cast<std::size_t>(link.target)];
  return d;
}

namespace {

int divide_exact(double extent, double spacing) {
  const double q = extent / spacing;
  const double n = std::round(q);
  if (std::abs(q - n) > 1e-9 * std::max(1.0, q))
    throw DomainError("spacing " + std::to_string(spacing) + " does not divide extent " +
                      std::to_string(extent));
  return static_cast<int>(n);
}

void check_extents(const std::vector<double>& extents, double spacing) {
  if (extents.empty()) throw DomainError("box extents must be nonempty");
  if (!(spacing > 0.0) || !std::isfinite(spacing)) throw DomainError("spacing must be positive and finite");
  for (double e : extents)
    if (!(e > 0.0) || !std::isfinite(e)) throw DomainError("box extents must be positive and finite");
}

GridDomain build_rectangular(const std::vector<double>& extents, double spacing, ShapeTag tag) {
  check_extents(extents, spacing);
  const int dim = static_cast<int>(extents.size());
  Eigen::VectorXi n(dim);
  for (int k = 0; k < dim; ++k) n(k) = divide_exact(extents[static_cast<std::size_t>(k)], spacing);
  ShapeParams params;
  params.extents = extents;
  return DomainBuilder::build(
      dim, spacing, tag, std::move(params), Eigen::VectorXi::Zero(dim), n,
      [&](const Eigen::VectorXi& idx, const Eigen::VectorXd&) {
        return (idx.array() >= 1).all() && (idx.array() <= n.array() - 1).all();
      },
      [](const Eigen::VectorXd&, int, int) { return 1.0; });
}

}  // namespace

GridDomain build_box_domain(const std::vector<double>& extents, double spacing) {
  return build_rectangular(extents, spacing, ShapeTag::box);
}

GridDomain build_slab_domain(const std::vector<double>& extents, double spacing) {
  return build_rectangular(extents, spacing, ShapeTag::slab);
}

GridDomain build_ball_domain(double radius, int dimension, double spacing) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw DomainError("ball radius must be positive");
  if (dimension < 1) throw DomainError("dimension must be at least 1");
  if (!(spacing > 0.0) || !(spacing < radius))
    throw DomainError("ball spacing must satisfy 0 < spacing < radius");
  const int m = static_cast<int>(std::ceil(radius / spacing)) + 1;
  const double r2 = radius * radius;
  const double inner = r2 * (1.0 - 1e-12);
  ShapeParams params;
  params.radius = radius;
  return DomainBuilder::build(
      dimension, spacing, ShapeTag::ball, std::move(params), Eigen::VectorXi::Constant(dimension, -m),
      Eigen::VectorXi::Constant(dimension, m),
      [&](const Eigen::VectorXi&, const Eigen::VectorXd& x) { return x.squaredNorm() < inner; },
      [&](const Eigen::VectorXd& x, int axis, int dir) {
        // Smallest s > 0 with |x + dir*s*e_axis| = radius.
        const double xk = dir * x(axis);
        const double s = -xk + std::sqrt(xk * xk + r2 - x.squaredNorm());
        return std::clamp(s / spacing, 1e-10, 1.0);
      });
}

GridDomain build_masked_domain(const std::vector<double>& extents, double spacing,
                               const std::vector<ExcludedBox>& excluded) {
  check_extents(extents, spacing);
  const int dim = static_cast<int>(extents.size());
  for (const auto& b : excluded)
    if (b.lo.size() != dim || b.hi.size() != dim || (b.lo.array() > b.hi.array()).any())
      throw DomainError("excluded box has wrong dimension or lo > hi");
  Eigen::VectorXi n(dim);
  for (int k = 0; k < dim; ++k) n(k) = divide_exact(extents[static_cast<std::size_t>(k)], spacing);
  const double slack = 1e-9 * spacing;
  ShapeParams params;
  params.extents = extents;
  params.excluded = excluded;
  return DomainBuilder::build(
      dim, spacing, ShapeTag::masked, std::move(params), Eigen::VectorXi::Zero(dim), n,
      [&](const Eigen::VectorXi& idx, const Eigen::VectorXd& x) {
        if ((idx.array() < 1).any() || (idx.array() > n.array() - 1).any()) return false;
        for (const auto& b : excluded)
          if ((x.array() >= b.lo.array() - slack).all() && (x.array() <= b.hi.array() + slack).all())
            return false;
        return true;
      },
      [](const Eigen::VectorXd&, int, int) { return 1.0; });
}

double continuum_boundary_distance(const GridDomain& domain, const Eigen::VectorXd& x) {
  switch (domain.shape()) {
    case ShapeTag::ball:
      return domain.params().radius - x.norm();
    case ShapeTag::box:
    case ShapeTag::slab: {
      double best = std::numeric_limits<double>::infinity();
      for (int k = 0; k < domain.dimension(); ++k) {
        const double e = domain.params().extents[static_cast<std::size_t>(k)];
        best = std::min({best, x(k), e - x(k)});
      }
      return best;
    }
    case ShapeTag::masked:
      break;
  }
  throw UnsupportedError("continuum boundary distance is only available for box, slab and ball");
}

double boundary_distance(const GridDomain& domain, Index node) {
  if (node < 0 || node >= domain.interior_count()) throw DomainError("boundary_distance: node is not interior");
  const Eigen::VectorXd x = domain.interior_point(node);
  if (domain.shape() != ShapeTag::masked) return continuum_boundary_distance(domain, x);
  return (domain.boundary_points().colwise() - x).colwise().norm().minCoeff();
}

double boundary_distance(const GridDomain& domain, const Eigen::VectorXi& lattice) {
  auto id = domain.find_interior(lattice);
  if (!id) throw DomainError("boundary_distance: lattice point is not an interior node");
  return boundary_distance(domain, *id);
}

Eigen::VectorXd inward_normal(const GridDomain& domain, const Eigen::VectorXd& z) {
  const int dim = domain.dimension();
  if (z.size() != dim) throw DomainError("inward_normal: dimension mismatch");
  const double tol = 1e-9 * std::max(1.0, domain.diameter());
  switch (domain.shape()) {
    case ShapeTag::ball: {
      if (std::abs(z.norm() - domain.params().radius) > tol)
        throw DomainError("inward_normal: point is not on the sphere");
      return -z / z.norm();
    }
    case ShapeTag::box:
    case ShapeTag::slab: {
      for (int k = 0; k < dim; ++k) {
        const double e = domain.params().extents[static_cast<std::size_t>(k)];
        Eigen::VectorXd nrm = Eigen::VectorXd::Zero(dim);
        if (std::abs(z(k)) <= tol) {
          nrm(k) = 1.0;
        } else if (std::abs(z(k) - e) <= tol) {
          nrm(k) = -1.0;
        } else {
          continue;
        }
        if ((z.array() >= -tol).all() && (z.array() <= Eigen::Map<const Eigen::ArrayXd>(
                                                             domain.params().extents.data(), dim) + tol)
                                             .all())
          return nrm;
      }
      throw DomainError("inward_normal: point is not on the box boundary");
    }
    case ShapeTag::masked:
      break;
  }
  throw UnsupportedError("inward_normal is only available for box, slab and ball");
}

}  // namespace semilab
