#pragma once

#include <cstdint>
#include <vector>

#include "json.hpp"
#include "saddleflow/problem.hpp"

namespace saddleflow {

/// Exact or sampled description of the set of saddle points.
///   singleton: {point}
///   affine:    {x_star} x (z0 + span(kernel_basis)), kernel_basis orthonormal in ker(A^T)
///   numeric:   finite sample of saddle points, valid to `tol`
struct SaddleSet {
  enum class Repr { singleton, affine, numeric };

  Repr repr = Repr::singleton;
  SaddleState point;  // singleton point, or (x_star, -, z0) for affine
  Mat kernel_basis;   // m x k, affine only
  std::vector<SaddleState> samples;
  double tol = 1e-8;

  const Vec& x_star() const { return point.x; }
  const Vec& z0() const { return point.z; }

  /// Finite set of saddle points used wherever a property must hold for every
  /// saddle point: the point itself, plus z0 +- b_i for each kernel direction.
  std::vector<SaddleState> anchors() const;
};

const char* to_string(SaddleSet::Repr r);

struct SaddleCheck {
  bool ok = false;
  double grad_x = 0.0;          // ||grad_x F||
  double grad_z = 0.0;          // ||grad_z F||
  double dual_feasibility = 0;  // max(0, max_j (grad_y F)_j)
  double complementarity = 0;   // |y^T grad_y F|
  double y_negativity = 0;      // max(0, -min_j y_j)

  Vec residuals() const;
};

SaddleCheck check_saddle(const ConstrainedProgram& prog, const SaddleState& s, double tol = 1e-8);

/// Newton on the KKT system (p = 0) or damped semismooth Newton on
/// min(y, -g(x)) = 0 (p > 0). Throws ConvergenceError with the final residual.
SaddleSet solve_saddle(const ConstrainedProgram& prog, double tol = 1e-10, int max_iter = 200);

struct SaddleProjection {
  SaddleState point;
  double distance = 0.0;
  bool approximate = false;  // nearest sample of a numeric set
};

SaddleProjection project_to_saddle_set(const SaddleState& s, const SaddleSet& sdl);

/// Integral over [0, 1] of blockdiag(-F_xx, [[F_yy, F_yz], [F_zy, F_zz]]) along
/// the segment from `anchor` to `s`, by Gauss-Legendre quadrature. Nodes that
/// land on a non-smooth locus are nudged along the segment; `shifted_nodes`
/// receives the number of such nudges.
Mat hbar(const ConstrainedProgram& prog, const SaddleState& s, const SaddleState& anchor,
         int quad_n = 16, int* shifted_nodes = nullptr);

/// True iff ||hbar(s, a) (s - a)|| <= tol max(1, ||s - a||) for every anchor a.
bool omega_limit_test(const ConstrainedProgram& prog, const SaddleState& s, const SaddleSet& sdl,
                      int quad_n = 16, double tol = 1e-6);

struct Theorem43Report {
  bool holds_i = false;   // averaged F_xx positive definite at every sample
  bool holds_ii = false;  // averaged (y, z) block negative definite at every sample
  int samples = 0;
  int skipped = 0;        // samples at non-smooth loci

  bool neither() const { return !holds_i && !holds_ii; }
};

Theorem43Report check_theorem43(const ConstrainedProgram& prog, const SaddleState& anchor,
                                double radius, int sample_k = 200, std::uint64_t seed = 1,
                                int quad_n = 16);

nlohmann::json to_json(const SaddleSet& sdl);
SaddleSet saddle_set_from_json(const nlohmann::json& j);

}  // namespace saddleflow
