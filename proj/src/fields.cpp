#include "semilab/fields.hpp"

#include "semilab/errors.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace semilab {

ScalarField::ScalarField(DomainPtr d, Eigen::VectorXd v) : domain(std::move(d)), values(std::move(v)) {
  if (!domain) throw DomainError("ScalarField: null domain");
  if (values.size() != domain->interior_count())
    throw DomainError("ScalarField: value count does not match interior node count");
  if (!values.allFinite()) throw DomainError("ScalarField: non-finite value");
}

ScalarField ScalarField::constant(DomainPtr d, double value) {
  const auto n = d->interior_count();
  return {std::move(d), Eigen::VectorXd::Constant(n, value)};
}

ScalarField ScalarField::sample(DomainPtr d, const std::function<double(const Eigen::VectorXd&)>& fn) {
  Eigen::VectorXd v(d->interior_count());
  for (Index i = 0; i < v.size(); ++i) v(i) = fn(d->interior_point(i));
  return {std::move(d), std::move(v)};
}

BoundaryData::BoundaryData(DomainPtr d, Eigen::VectorXd v) : domain(std::move(d)), values(std::move(v)) {
  if (!domain) throw DomainError("BoundaryData: null domain");
  if (values.size() != domain->boundary_count())
    throw DomainError("BoundaryData: value count does not match boundary point count");
  if (!values.allFinite()) throw DomainError("BoundaryData: non-finite value");
  if (values.size() > 0 && values.minCoeff() < 0.0) throw DomainError("BoundaryData: negative value");
}

BoundaryData BoundaryData::constant(DomainPtr d, double value) {
  const auto m = d->boundary_count();
  return {std::move(d), Eigen::VectorXd::Constant(m, value)};
}

BoundaryData BoundaryData::sample(DomainPtr d, const std::function<double(const Eigen::VectorXd&)>& fn) {
  Eigen::VectorXd v(d->boundary_count());
  for (Index b = 0; b < v.size(); ++b) v(b) = fn(d->boundary_point(b));
  return {std::move(d), std::move(v)};
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void write_points_csv(std::ostream& os, const Eigen::MatrixXd& points, const Eigen::VectorXd& values,
                      const std::string& value_name) {
  for (Index k = 0; k < points.rows(); ++k) os << 'x' << k << ',';
  os << value_name << '\n';
  for (Index i = 0; i < points.cols(); ++i) {
    for (Index k = 0; k < points.rows(); ++k) os << format_double(points(k, i)) << ',';
    os << format_double(values(i)) << '\n';
  }
}

}  // namespace

void write_field_csv(std::ostream& os, const ScalarField& field, const std::string& value_name) {
  write_points_csv(os, field.domain->interior_points(), field.values, value_name);
}

void write_boundary_csv(std::ostream& os, const BoundaryData& data, const std::string& value_name) {
  write_points_csv(os, data.domain->boundary_points(), data.values, value_name);
}

}  // namespace semilab
