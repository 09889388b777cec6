#pragma once

#include "saddleflow/problem.hpp"

namespace saddleflow {

/// Which vector field drives a simulation: the projected saddle-point
/// dynamics (any p) or the smooth saddle-point dynamics (p = 0 only).
enum class FieldKind { projected, unprojected };

struct RateVector {
  Vec dx;
  Vec dy;
  Vec dz;

  Vec stacked() const;
  double norm() const;
  static RateVector unstack(const Vec& v, int n, int p, int m);
};

/// Additive disturbance sample (u_x, u_z) entering the x and z channels.
struct DisturbanceSample {
  Vec ux;
  Vec uz;

  double norm() const;
};

/// [a]_b^+ : a if b > 0, max(0, a) if b == 0. Throws Error(domain) for b < 0.
double project_rate(double a, double b);
Vec project_rate(const Vec& a, const Vec& b);

/// dx = -grad_x F, dy = [grad_y F]_y^+, dz = grad_z F.
/// Throws Error(domain) if some y_j < 0.
RateVector psp_field(const ConstrainedProgram& prog, const SaddleState& s);

/// dx = -grad f - A^T z, dz = A x - b. Throws Error(misuse) when p > 0.
RateVector sp_field(const ConstrainedProgram& prog, const SaddleState& s);

/// sp_field plus the disturbance sample.
RateVector disturbed_field(const ConstrainedProgram& prog, const SaddleState& s,
                           const DisturbanceSample& u);

RateVector evaluate_field(FieldKind kind, const ConstrainedProgram& prog, const SaddleState& s);

}  // namespace saddleflow
