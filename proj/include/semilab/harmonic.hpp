#pragma once

#include "semilab/fields.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <memory>

namespace semilab {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Negative discrete Laplacian with Dirichlet elimination.
///
/// For every interior node x, (A u)(x) - (C f)(x) equals -Δ_h u(x) where the
/// boundary values f enter through the coupling matrix C (interior x boundary).
/// On lattice boundaries this is the plain 2N+1 point stencil
/// (2N u(x) - Σ u(y)) / h². For links cut by a curved boundary at fraction θ
/// the missing neighbor is replaced by the linear extrapolation through the
/// boundary crossing, which adds (1/θ - 1)/h² to the diagonal and keeps A
/// symmetric.
struct LaplacianOperator {
  SparseMatrix matrix;
  SparseMatrix coupling;
};

LaplacianOperator assemble_laplacian(const GridDomain& domain);

struct SolverOptions {
  /// Systems with at least this many unknowns use preconditioned CG.
  Index direct_limit = 100000;
  double cg_tolerance = 1e-10;
  /// Relative residual accepted from the direct path before reporting failure.
  double residual_check = 1e-8;
};

/// Owns the assembled operator of one domain together with its cached
/// factorization. Every linear solve in the library goes through here.
///
/// Solves against the cached factorization are safe to run concurrently.
class LaplaceSolver {
 public:
  explicit LaplaceSolver(DomainPtr domain, SolverOptions options = {});
  explicit LaplaceSolver(GridDomain domain, SolverOptions options = {});
  ~LaplaceSolver();
  LaplaceSolver(LaplaceSolver&&) noexcept;
  LaplaceSolver& operator=(LaplaceSolver&&) noexcept;

  const GridDomain& domain() const { return *domain_; }
  const DomainPtr& domain_ptr() const { return domain_; }
  const LaplacianOperator& op() const { return op_; }
  bool uses_direct() const;
  Index size() const { return op_.matrix.rows(); }

  /// A⁻¹ rhs.
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

  /// (A + diag(shift))⁻¹ rhs with a fresh factorization; shift must be >= 0.
  Eigen::VectorXd solve_shifted(const Eigen::VectorXd& shift, const Eigen::VectorXd& rhs) const;

  /// C f: boundary contribution to the right-hand side.
  Eigen::VectorXd boundary_rhs(const BoundaryData& f) const;

 private:
  struct Factorization;
  DomainPtr domain_;
  SolverOptions options_;
  LaplacianOperator op_;
  std::unique_ptr<Factorization> factor_;
};

/// h = H_D f, the discrete harmonic extension of f.
ScalarField harmonic_extension(const LaplaceSolver& solver, const BoundaryData& f);

/// w = G_D g, i.e. A w = 2 g so that Δ_h w = -2 g with zero boundary values.
ScalarField green_apply(const LaplaceSolver& solver, const ScalarField& g);
Eigen::VectorXd green_apply(const LaplaceSolver& solver, const Eigen::VectorXd& g);

/// G_D 1, the discrete expected exit time.
ScalarField green_one(const LaplaceSolver& solver);

/// Discrete harmonic measure of one interior node: weights over boundary points.
struct HarmonicMeasure {
  Index node = -1;
  Eigen::VectorXd weights;
};

HarmonicMeasure harmonic_measure_row(const LaplaceSolver& solver, Index node);

/// v solving (A + 2 diag(q)) v = C f, the discrete form of Δv = 2 q v, v = f.
ScalarField schrodinger_solve(const LaplaceSolver& solver, const ScalarField& q, const BoundaryData& f);

/// sup over nodes with h > 0 of (G_D g)(x) / h(x).
double sup_green_ratio(const LaplaceSolver& solver, const Eigen::VectorXd& g, const Eigen::VectorXd& h);

}  // namespace semilab
