#pragma once

#include "semilab/geometry.hpp"

#include <Eigen/Core>

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>

namespace semilab {

using DomainPtr = std::shared_ptr<const GridDomain>;

/// Real values on the interior nodes of a domain.
struct ScalarField {
  DomainPtr domain;
  Eigen::VectorXd values;

  ScalarField() = default;
  ScalarField(DomainPtr d, Eigen::VectorXd v);

  static ScalarField constant(DomainPtr d, double value);
  static ScalarField sample(DomainPtr d, const std::function<double(const Eigen::VectorXd&)>& fn);

  Index size() const { return values.size(); }
  double operator[](Index i) const { return values(i); }
};

/// Nonnegative values on the boundary points of a domain.
struct BoundaryData {
  DomainPtr domain;
  Eigen::VectorXd values;

  BoundaryData() = default;
  /// Throws DomainError on size mismatch, negative or non-finite values.
  BoundaryData(DomainPtr d, Eigen::VectorXd v);

  static BoundaryData constant(DomainPtr d, double value);
  static BoundaryData sample(DomainPtr d, const std::function<double(const Eigen::VectorXd&)>& fn);

  bool trivial() const { return values.size() == 0 || values.maxCoeff() == 0.0; }
};

/// One row per interior node: coordinates x0..x{N-1}, then the value.
void write_field_csv(std::ostream& os, const ScalarField& field, const std::string& value_name);

/// One row per boundary point, same column layout.
void write_boundary_csv(std::ostream& os, const BoundaryData& data, const std::string& value_name);

/// Format used for every floating value written to disk.
std::string format_double(double v);

}  // namespace semilab
