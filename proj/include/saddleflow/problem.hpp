#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "saddleflow/linalg.hpp"

namespace saddleflow {

/// f(x) = 1/2 x^T Q x + c^T x + d.
struct QuadraticObjective {
  Mat Q;
  Vec c;
  double d = 0.0;
};

/// Registry-backed objective. `Q` and `c` are optional parameters consumed by
/// builtins that carry a quadratic part (e.g. "logcosh").
struct BuiltinObjective {
  std::string name;
  Mat Q;
  Vec c;
};

using ObjectiveSpec = std::variant<QuadraticObjective, BuiltinObjective>;

/// g_j(x) = 1/2 x^T P x + a^T x + offset. `P` empty means affine.
struct InequalitySpec {
  Vec a;
  double offset = 0.0;
  Mat P;

  bool affine() const { return P.size() == 0; }
};

/// Declared Hessian bounds m I <= grad^2 f <= M I and Lipschitz constant L of
/// x -> grad^2 f(x).
struct Curvature {
  double m_lb = 0.0;
  double M_ub = 0.0;
  double L_hess = 0.0;
};

/// Lagrangian data F(x, y, z) = f(x) + y^T g(x) + z^T (A x - b).
struct ConstrainedProgram {
  std::string name;
  int n = 0;
  ObjectiveSpec objective;
  std::vector<InequalitySpec> ineq;
  Mat A;  // m x n
  Vec b;  // m
  std::optional<Curvature> curvature;

  int p() const { return static_cast<int>(ineq.size()); }
  int m() const { return static_cast<int>(b.size()); }

  /// Throws Error(dimension_mismatch | config) on inconsistent data.
  void validate() const;

  /// Returns the curvature constants or throws a hypothesis error naming the
  /// operation that required them.
  const Curvature& require_curvature(const char* who) const;
};

struct SaddleState {
  Vec x;
  Vec y;
  Vec z;

  SaddleState() = default;
  SaddleState(Vec x_, Vec y_, Vec z_)
      : x(std::move(x_)), y(std::move(y_)), z(std::move(z_)) {}

  static SaddleState zeros(const ConstrainedProgram& prog);

  Eigen::Index size() const { return x.size() + y.size() + z.size(); }
  Vec stacked() const;
  static SaddleState unstack(const Vec& v, int n, int p, int m);
  double norm() const { return std::sqrt(x.squaredNorm() + y.squaredNorm() + z.squaredNorm()); }

  bool operator==(const SaddleState& o) const {
    return x == o.x && y == o.y && z == o.z;
  }
};

/// Throws a dimension_mismatch error naming the offending block.
void check_dims(const ConstrainedProgram& prog, const SaddleState& s);

double objective_value(const ConstrainedProgram& prog, const Vec& x);
Vec objective_gradient(const ConstrainedProgram& prog, const Vec& x);
/// Throws Error(non_smooth) at flagged non-smooth loci of builtin objectives.
Mat objective_hessian(const ConstrainedProgram& prog, const Vec& x);
/// True when the objective Hessian is defined at x.
bool objective_smooth_at(const ConstrainedProgram& prog, const Vec& x);

Vec constraint_values(const ConstrainedProgram& prog, const Vec& x);
/// p x n Jacobian Dg(x).
Mat constraint_jacobian(const ConstrainedProgram& prog, const Vec& x);

double lagrangian_value(const ConstrainedProgram& prog, const SaddleState& s);

struct GradBlocks {
  Vec gx;  // grad f + Dg^T y + A^T z
  Vec gy;  // g(x)
  Vec gz;  // A x - b
};

GradBlocks grad_blocks(const ConstrainedProgram& prog, const SaddleState& s);

struct BlockHessian {
  Mat Fxx;  // n x n
  Mat Fxy;  // n x p  (Dg^T)
  Mat Fxz;  // n x m  (A^T)
  Mat Fyy;  // p x p
  Mat Fyz;  // p x m
  Mat Fzy;  // m x p
  Mat Fzz;  // m x m

  /// The (y, z) block [[Fyy, Fyz], [Fzy, Fzz]].
  Mat dual_block() const;
};

BlockHessian hessian_blocks(const ConstrainedProgram& prog, const SaddleState& s);

// Builtin programs used throughout the examples and tests.
namespace builtin {

/// Piecewise quartic/linear objective on R^2 with g(x) = -x1 - 1 and
/// constraint x1 - x2 = 0; unique saddle point at the origin.
ConstrainedProgram example44();
/// f = x1^2 + (x2 - 2)^2 with rank-one A = [[1, -1], [-1, 1]], b = 0; the
/// saddle set is a line.
ConstrainedProgram iss_example();
/// f = |x|^2 on R^3 with x1 + x2 + x3 = 1.
ConstrainedProgram selftrig_example();

std::vector<std::string> program_names();
/// Throws Error(config) on unknown names.
ConstrainedProgram program(const std::string& name);

std::vector<std::string> objective_names();

}  // namespace builtin

}  // namespace saddleflow
