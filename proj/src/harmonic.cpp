#include "semilab/harmonic.hpp"

#include "semilab/errors.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include <limits>
#include <mutex>
#include <vector>

namespace semilab {

LaplacianOperator assemble_laplacian(const GridDomain& domain) {
  const Index n = domain.interior_count();
  const double inv_h2 = 1.0 / (domain.spacing() * domain.spacing());
  std::vector<Eigen::Triplet<double>> a;
  std::vector<Eigen::Triplet<double>> c;
  a.reserve(static_cast<std::size_t>(n) * (2 * domain.dimension() + 1));
  for (Index i = 0; i < n; ++i) {
    double diag = 0.0;
    for (const Link& link : domain.links(i)) {
      if (link.boundary) {
        const double w = inv_h2 / link.fraction;
        diag += w;
        c.emplace_back(i, link.target, w);
      } else {
        diag += inv_h2;
        a.emplace_back(i, link.target, -inv_h2);
      }
    }
    a.emplace_back(i, i, diag);
  }
  LaplacianOperator op;
  op.matrix.resize(n, n);
  op.matrix.setFromTriplets(a.begin(), a.end());
  op.coupling.resize(n, domain.boundary_count());
  op.coupling.setFromTriplets(c.begin(), c.end());
  return op;
}

namespace {

using DirectSolver = Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>>;
using IterativeSolver =
    Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper, Eigen::IncompleteCholesky<double>>;

double relative_residual(const SparseMatrix& m, const Eigen::VectorXd& x, const Eigen::VectorXd& rhs) {
  const double scale = rhs.norm();
  if (scale == 0.0) return x.norm();
  return (m * x - rhs).norm() / scale;
}

Eigen::VectorXd direct_solve(const DirectSolver& s, const SparseMatrix& m, const Eigen::VectorXd& rhs,
                             double check) {
  Eigen::VectorXd x = s.solve(rhs);
  if (!x.allFinite()) throw SolverError("direct solve produced non-finite values");
  const double r = relative_residual(m, x, rhs);
  if (r > check) throw SolverError("direct solve residual " + std::to_string(r) + " above tolerance");
  return x;
}

Eigen::VectorXd iterative_solve(IterativeSolver& s, const Eigen::VectorXd& rhs) {
  Eigen::VectorXd x = s.solve(rhs);
  if (s.info() != Eigen::Success)
    throw SolverError("conjugate gradient failed to reach tolerance; relative residual " +
                      std::to_string(s.error()));
  return x;
}

}  // namespace

struct LaplaceSolver::Factorization {
  DirectSolver direct;
  IterativeSolver iterative;
  bool use_direct = true;
  std::mutex iterative_mutex;
};

LaplaceSolver::LaplaceSolver(GridDomain domain, SolverOptions options)
    : LaplaceSolver(std::make_shared<const GridDomain>(std::move(domain)), options) {}

LaplaceSolver::LaplaceSolver(DomainPtr domain, SolverOptions options)
    : domain_(std::move(domain)), options_(options), factor_(std::make_unique<Factorization>()) {
  if (!domain_) throw DomainError("LaplaceSolver: null domain");
  op_ = assemble_laplacian(*domain_);
  factor_->use_direct = op_.matrix.rows() < options_.direct_limit;
  if (factor_->use_direct) {
    factor_->direct.compute(op_.matrix);
    if (factor_->direct.info() != Eigen::Success) throw SolverError("sparse LDLT factorization failed");
  } else {
    factor_->iterative.setTolerance(options_.cg_tolerance);
    factor_->iterative.setMaxIterations(std::max<Index>(1000, 4 * op_.matrix.rows()));
    factor_->iterative.compute(op_.matrix);
    if (factor_->iterative.info() != Eigen::Success) throw SolverError("incomplete Cholesky setup failed");
  }
}

LaplaceSolver::~LaplaceSolver() = default;
LaplaceSolver::LaplaceSolver(LaplaceSolver&&) noexcept = default;
LaplaceSolver& LaplaceSolver::operator=(LaplaceSolver&&) noexcept = default;

bool LaplaceSolver::uses_direct() const { return factor_->use_direct; }

Eigen::VectorXd LaplaceSolver::solve(const Eigen::VectorXd& rhs) const {
  if (rhs.size() != size()) throw DomainError("solve: right-hand side has wrong size");
  if (factor_->use_direct) return direct_solve(factor_->direct, op_.matrix, rhs, options_.residual_check);
  std::lock_guard lock(factor_->iterative_mutex);
  return iterative_solve(factor_->iterative, rhs);
}

Eigen::VectorXd LaplaceSolver::solve_shifted(const Eigen::VectorXd& shift, const Eigen::VectorXd& rhs) const {
  if (shift.size() != size() || rhs.size() != size()) throw DomainError("solve_shifted: size mismatch");
  if (!shift.allFinite() || (shift.array() < 0.0).any())
    throw DomainError("solve_shifted: shift must be finite and nonnegative");
  SparseMatrix m = op_.matrix;
  m.diagonal() += shift;
  if (factor_->use_direct) {
    DirectSolver s(m);
    if (s.info() != Eigen::Success) throw SolverError("sparse LDLT factorization of shifted operator failed");
    return direct_solve(s, m, rhs, options_.residual_check);
  }
  IterativeSolver s;
  s.setTolerance(options_.cg_tolerance);
  s.setMaxIterations(std::max<Index>(1000, 4 * m.rows()));
  s.compute(m);
  return iterative_solve(s, rhs);
}

Eigen::VectorXd LaplaceSolver::boundary_rhs(const BoundaryData& f) const {
  if (f.values.size() != domain_->boundary_count()) throw DomainError("boundary data belongs to another domain");
  return op_.coupling * f.values;
}

ScalarField harmonic_extension(const LaplaceSolver& solver, const BoundaryData& f) {
  return {solver.domain_ptr(), solver.solve(solver.boundary_rhs(f))};
}

Eigen::VectorXd green_apply(const LaplaceSolver& solver, const Eigen::VectorXd& g) {
  if (!g.allFinite()) throw DomainError("green_apply: non-finite source");
  return solver.solve(2.0 * g);
}

ScalarField green_apply(const LaplaceSolver& solver, const ScalarField& g) {
  return {solver.domain_ptr(), green_apply(solver, g.values)};
}

ScalarField green_one(const LaplaceSolver& solver) {
  return {solver.domain_ptr(), green_apply(solver, Eigen::VectorXd::Ones(solver.size()).eval())};
}

HarmonicMeasure harmonic_measure_row(const LaplaceSolver& solver, Index node) {
  if (node < 0 || node >= solver.size()) throw DomainError("harmonic_measure_row: node is not interior");
  // h(x) = e_xᵀ A⁻¹ C f, and A is symmetric, so the row is Cᵀ A⁻¹ e_x.
  Eigen::VectorXd unit = Eigen::VectorXd::Zero(solver.size());
  unit(node) = 1.0;
  const Eigen::VectorXd y = solver.solve(unit);
  return {node, solver.op().coupling.transpose() * y};
}

ScalarField schrodinger_solve(const LaplaceSolver& solver, const ScalarField& q, const BoundaryData& f) {
  if (q.values.size() != solver.size()) throw DomainError("schrodinger_solve: potential has wrong size");
  if ((q.values.array() < 0.0).any()) throw DomainError("schrodinger_solve: potential must be nonnegative");
  return {solver.domain_ptr(), solver.solve_shifted(2.0 * q.values, solver.boundary_rhs(f))};
}

double sup_green_ratio(const LaplaceSolver& solver, const Eigen::VectorXd& g, const Eigen::VectorXd& h) {
  const Eigen::VectorXd w = green_apply(solver, g);
  double best = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < w.size(); ++i)
    if (h(i) > 0.0) best = std::max(best, w(i) / h(i));
  if (!std::isfinite(best)) throw DomainError("sup_green_ratio: harmonic part vanishes identically");
  return best;
}

}  // namespace semilab
