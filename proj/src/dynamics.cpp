#include "saddleflow/dynamics.hpp"

#include <algorithm>

#include "saddleflow/error.hpp"

namespace saddleflow {

Vec RateVector::stacked() const {
  Vec v(dx.size() + dy.size() + dz.size());
  v << dx, dy, dz;
  return v;
}

double RateVector::norm() const {
  return std::sqrt(dx.squaredNorm() + dy.squaredNorm() + dz.squaredNorm());
}

RateVector RateVector::unstack(const Vec& v, int n, int p, int m) {
  return {v.segment(0, n), v.segment(n, p), v.segment(n + p, m)};
}

double DisturbanceSample::norm() const {
  return std::sqrt(ux.squaredNorm() + uz.squaredNorm());
}

double project_rate(double a, double b) {
  if (b < 0.0) throw Error(ErrorKind::domain, "projection base must be nonnegative");
  return b > 0.0 ? a : std::max(0.0, a);
}

Vec project_rate(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::dimension_mismatch, "project_rate: size mismatch");
  }
  Vec out(a.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out(i) = project_rate(a(i), b(i));
  return out;
}

RateVector psp_field(const ConstrainedProgram& prog, const SaddleState& s) {
  check_dims(prog, s);
  for (Eigen::Index j = 0; j < s.y.size(); ++j) {
    if (s.y(j) < 0.0) {
      throw Error(ErrorKind::domain,
                  "state outside domain: y_" + std::to_string(j + 1) + " < 0");
    }
  }
  const auto g = grad_blocks(prog, s);
  return {-g.gx, project_rate(g.gy, s.y), g.gz};
}

RateVector sp_field(const ConstrainedProgram& prog, const SaddleState& s) {
  if (prog.p() > 0) {
    throw Error(ErrorKind::misuse,
                "sp_field requires p = 0; use psp_field for programs with inequalities");
  }
  check_dims(prog, s);
  const auto g = grad_blocks(prog, s);
  return {-g.gx, Vec(0), g.gz};
}

RateVector disturbed_field(const ConstrainedProgram& prog, const SaddleState& s,
                           const DisturbanceSample& u) {
  auto r = sp_field(prog, s);
  if (u.ux.size() != r.dx.size() || u.uz.size() != r.dz.size()) {
    throw Error(ErrorKind::dimension_mismatch, "disturbance sample does not match (n, m)");
  }
  r.dx += u.ux;
  r.dz += u.uz;
  return r;
}

RateVector evaluate_field(FieldKind kind, const ConstrainedProgram& prog, const SaddleState& s) {
  return kind == FieldKind::projected ? psp_field(prog, s) : sp_field(prog, s);
}

}  // namespace saddleflow
