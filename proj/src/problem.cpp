#include "saddleflow/problem.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "saddleflow/error.hpp"

namespace saddleflow {

namespace {

// Locus of the example44 objective where the quartic and linear pieces meet.
constexpr double kExample44Radius = 0.5;
constexpr double kNonSmoothBand = 1e-12;

struct BuiltinModel {
  int fixed_dim;  // 0 = any dimension
  std::function<double(const BuiltinObjective&, const Vec&)> value;
  std::function<Vec(const BuiltinObjective&, const Vec&)> gradient;
  std::function<Mat(const BuiltinObjective&, const Vec&)> hessian;
  std::function<bool(const Vec&)> smooth_at;
};

double log_cosh(double t) {
  const double a = std::abs(t);
  return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

double quad_part(const BuiltinObjective& o, const Vec& x) {
  double v = 0.0;
  if (o.Q.size() != 0) v += 0.5 * x.dot(o.Q * x);
  if (o.c.size() != 0) v += o.c.dot(x);
  return v;
}

Vec quad_grad(const BuiltinObjective& o, const Vec& x) {
  Vec g = Vec::Zero(x.size());
  if (o.Q.size() != 0) g += o.Q * x;
  if (o.c.size() != 0) g += o.c;
  return g;
}

const std::map<std::string, BuiltinModel>& registry() {
  static const std::map<std::string, BuiltinModel> reg = {
      {"example44",
       {2,
        [](const BuiltinObjective&, const Vec& x) {
          const double r = x.norm();
          if (r <= kExample44Radius) return std::pow(r, 4);
          return 1.0 / 16.0 + 0.5 * (r - kExample44Radius);
        },
        [](const BuiltinObjective&, const Vec& x) -> Vec {
          const double r = x.norm();
          if (r <= kExample44Radius) return 4.0 * r * r * x;
          return x / (2.0 * r);
        },
        [](const BuiltinObjective&, const Vec& x) -> Mat {
          const double r = x.norm();
          const Mat eye = Mat::Identity(x.size(), x.size());
          if (r < kExample44Radius) {
            return 4.0 * r * r * eye + 8.0 * x * x.transpose();
          }
          return (eye - x * x.transpose() / (r * r)) / (2.0 * r);
        },
        [](const Vec& x) {
          return std::abs(x.norm() - kExample44Radius) > kNonSmoothBand;
        }}},
      {"logcosh",
       {0,
        [](const BuiltinObjective& o, const Vec& x) {
          double v = quad_part(o, x);
          for (Eigen::Index i = 0; i < x.size(); ++i) v += log_cosh(x(i));
          return v;
        },
        [](const BuiltinObjective& o, const Vec& x) -> Vec {
          return quad_grad(o, x) + x.array().tanh().matrix();
        },
        [](const BuiltinObjective& o, const Vec& x) -> Mat {
          Mat h = Mat::Zero(x.size(), x.size());
          if (o.Q.size() != 0) h += o.Q;
          const Vec t = x.array().tanh().matrix();
          h.diagonal() += (1.0 - t.array().square()).matrix();
          return h;
        },
        [](const Vec&) { return true; }}},
  };
  return reg;
}

const BuiltinModel& lookup(const std::string& name) {
  const auto& reg = registry();
  auto it = reg.find(name);
  if (it == reg.end()) {
    throw Error(ErrorKind::config, "unknown builtin objective '" + name + "'");
  }
  return it->second;
}

void require_size(Eigen::Index got, Eigen::Index want, const std::string& block) {
  if (got != want) {
    throw Error(ErrorKind::dimension_mismatch,
                "dimension mismatch in block " + block + ": expected " +
                    std::to_string(want) + ", got " + std::to_string(got));
  }
}

}  // namespace

void ConstrainedProgram::validate() const {
  if (n <= 0) throw Error(ErrorKind::config, "program dimension n must be positive");
  std::visit(
      [&](const auto& obj) {
        using T = std::decay_t<decltype(obj)>;
        if constexpr (std::is_same_v<T, QuadraticObjective>) {
          require_size(obj.Q.rows(), n, "Q rows");
          require_size(obj.Q.cols(), n, "Q cols");
          require_size(obj.c.size(), n, "c");
          const double scale = std::max(1.0, obj.Q.cwiseAbs().maxCoeff());
          if ((obj.Q - obj.Q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
            throw Error(ErrorKind::config, "Q must be symmetric");
          }
        } else {
          const auto& model = lookup(obj.name);
          if (model.fixed_dim != 0) require_size(n, model.fixed_dim, "n (builtin " + obj.name + ")");
          if (obj.Q.size() != 0) {
            require_size(obj.Q.rows(), n, "Q rows");
            require_size(obj.Q.cols(), n, "Q cols");
          }
          if (obj.c.size() != 0) require_size(obj.c.size(), n, "c");
        }
      },
      objective);
  for (std::size_t j = 0; j < ineq.size(); ++j) {
    require_size(ineq[j].a.size(), n, "g_rows[" + std::to_string(j) + "]");
    if (!ineq[j].affine()) {
      require_size(ineq[j].P.rows(), n, "g_quad[" + std::to_string(j) + "] rows");
      require_size(ineq[j].P.cols(), n, "g_quad[" + std::to_string(j) + "] cols");
    }
  }
  require_size(A.rows(), b.size(), "A rows");
  if (A.rows() > 0) require_size(A.cols(), n, "A cols");
  if (curvature) {
    if (!(curvature->m_lb > 0.0)) throw Error(ErrorKind::config, "m_lb must be > 0");
    if (curvature->M_ub < curvature->m_lb) {
      throw Error(ErrorKind::config, "M_ub must be >= m_lb");
    }
    if (curvature->L_hess < 0.0) throw Error(ErrorKind::config, "L_hess must be >= 0");
  }
}

const Curvature& ConstrainedProgram::require_curvature(const char* who) const {
  if (!curvature) {
    throw Error(ErrorKind::hypothesis,
                std::string(who) + " requires declared curvature constants (m_lb, M_ub, L_hess)");
  }
  return *curvature;
}

SaddleState SaddleState::zeros(const ConstrainedProgram& prog) {
  return {Vec::Zero(prog.n), Vec::Zero(prog.p()), Vec::Zero(prog.m())};
}

Vec SaddleState::stacked() const {
  Vec v(size());
  v << x, y, z;
  return v;
}

SaddleState SaddleState::unstack(const Vec& v, int n, int p, int m) {
  require_size(v.size(), n + p + m, "stacked state");
  return {v.segment(0, n), v.segment(n, p), v.segment(n + p, m)};
}

void check_dims(const ConstrainedProgram& prog, const SaddleState& s) {
  require_size(s.x.size(), prog.n, "x");
  require_size(s.y.size(), prog.p(), "y");
  require_size(s.z.size(), prog.m(), "z");
}

double objective_value(const ConstrainedProgram& prog, const Vec& x) {
  return std::visit(
      [&](const auto& obj) -> double {
        using T = std::decay_t<decltype(obj)>;
        if constexpr (std::is_same_v<T, QuadraticObjective>) {
          return 0.5 * x.dot(obj.Q * x) + obj.c.dot(x) + obj.d;
        } else {
          return lookup(obj.name).value(obj, x);
        }
      },
      prog.objective);
}

Vec objective_gradient(const ConstrainedProgram& prog, const Vec& x) {
  return std::visit(
      [&](const auto& obj) -> Vec {
        using T = std::decay_t<decltype(obj)>;
        if constexpr (std::is_same_v<T, QuadraticObjective>) {
          return obj.Q * x + obj.c;
        } else {
          return lookup(obj.name).gradient(obj, x);
        }
      },
      prog.objective);
}

bool objective_smooth_at(const ConstrainedProgram& prog, const Vec& x) {
  if (const auto* b = std::get_if<BuiltinObjective>(&prog.objective)) {
    return lookup(b->name).smooth_at(x);
  }
  return true;
}

Mat objective_hessian(const ConstrainedProgram& prog, const Vec& x) {
  return std::visit(
      [&](const auto& obj) -> Mat {
        using T = std::decay_t<decltype(obj)>;
        if constexpr (std::is_same_v<T, QuadraticObjective>) {
          return obj.Q;
        } else {
          const auto& model = lookup(obj.name);
          if (!model.smooth_at(x)) {
            throw Error(ErrorKind::non_smooth,
                        "non-smooth locus: Hessian of builtin '" + obj.name +
                            "' is undefined at this x");
          }
          return model.hessian(obj, x);
        }
      },
      prog.objective);
}

Vec constraint_values(const ConstrainedProgram& prog, const Vec& x) {
  Vec g(prog.p());
  for (int j = 0; j < prog.p(); ++j) {
    const auto& c = prog.ineq[j];
    double v = c.a.dot(x) + c.offset;
    if (!c.affine()) v += 0.5 * x.dot(c.P * x);
    g(j) = v;
  }
  return g;
}

Mat constraint_jacobian(const ConstrainedProgram& prog, const Vec& x) {
  Mat J(prog.p(), prog.n);
  for (int j = 0; j < prog.p(); ++j) {
    const auto& c = prog.ineq[j];
    Vec row = c.a;
    if (!c.affine()) row += c.P * x;
    J.row(j) = row.transpose();
  }
  return J;
}

double lagrangian_value(const ConstrainedProgram& prog, const SaddleState& s) {
  check_dims(prog, s);
  double v = objective_value(prog, s.x);
  if (prog.p() > 0) v += s.y.dot(constraint_values(prog, s.x));
  if (prog.m() > 0) v += s.z.dot(prog.A * s.x - prog.b);
  return v;
}

GradBlocks grad_blocks(const ConstrainedProgram& prog, const SaddleState& s) {
  check_dims(prog, s);
  GradBlocks g;
  g.gx = objective_gradient(prog, s.x);
  if (prog.p() > 0) {
    g.gx += constraint_jacobian(prog, s.x).transpose() * s.y;
    g.gy = constraint_values(prog, s.x);
  } else {
    g.gy = Vec(0);
  }
  if (prog.m() > 0) {
    g.gx += prog.A.transpose() * s.z;
    g.gz = prog.A * s.x - prog.b;
  } else {
    g.gz = Vec(0);
  }
  return g;
}

Mat BlockHessian::dual_block() const {
  const auto p = Fyy.rows();
  const auto m = Fzz.rows();
  Mat d(p + m, p + m);
  d.topLeftCorner(p, p) = Fyy;
  d.topRightCorner(p, m) = Fyz;
  d.bottomLeftCorner(m, p) = Fzy;
  d.bottomRightCorner(m, m) = Fzz;
  return d;
}

BlockHessian hessian_blocks(const ConstrainedProgram& prog, const SaddleState& s) {
  check_dims(prog, s);
  const int n = prog.n;
  const int p = prog.p();
  const int m = prog.m();
  BlockHessian h;
  h.Fxx = objective_hessian(prog, s.x);
  for (int j = 0; j < p; ++j) {
    if (!prog.ineq[j].affine()) h.Fxx += s.y(j) * prog.ineq[j].P;
  }
  h.Fxy = p > 0 ? Mat(constraint_jacobian(prog, s.x).transpose()) : Mat(n, 0);
  h.Fxz = m > 0 ? Mat(prog.A.transpose()) : Mat(n, 0);
  // F is affine in (y, z), so the whole dual block vanishes.
  h.Fyy = Mat::Zero(p, p);
  h.Fyz = Mat::Zero(p, m);
  h.Fzy = Mat::Zero(m, p);
  h.Fzz = Mat::Zero(m, m);
  return h;
}

namespace builtin {

ConstrainedProgram example44() {
  ConstrainedProgram prog;
  prog.name = "example44";
  prog.n = 2;
  prog.objective = BuiltinObjective{"example44", Mat(), Vec()};
  InequalitySpec g;
  g.a = Vec(2);
  g.a << -1.0, 0.0;
  g.offset = -1.0;
  prog.ineq.push_back(g);
  prog.A = Mat(1, 2);
  prog.A << 1.0, -1.0;
  prog.b = Vec::Zero(1);
  return prog;
}

ConstrainedProgram iss_example() {
  ConstrainedProgram prog;
  prog.name = "iss_example";
  prog.n = 2;
  QuadraticObjective f;
  f.Q = 2.0 * Mat::Identity(2, 2);
  f.c = Vec(2);
  f.c << 0.0, -4.0;
  f.d = 4.0;
  prog.objective = f;
  prog.A = Mat(2, 2);
  prog.A << 1.0, -1.0, -1.0, 1.0;
  prog.b = Vec::Zero(2);
  prog.curvature = Curvature{2.0, 2.0, 0.0};
  return prog;
}

ConstrainedProgram selftrig_example() {
  ConstrainedProgram prog;
  prog.name = "selftrig_example";
  prog.n = 3;
  QuadraticObjective f;
  f.Q = 2.0 * Mat::Identity(3, 3);
  f.c = Vec::Zero(3);
  f.d = 0.0;
  prog.objective = f;
  prog.A = Mat::Ones(1, 3);
  prog.b = Vec::Ones(1);
  prog.curvature = Curvature{2.0, 2.0, 0.0};
  return prog;
}

std::vector<std::string> program_names() {
  return {"example44", "iss_example", "selftrig_example"};
}

ConstrainedProgram program(const std::string& name) {
  if (name == "example44") return example44();
  if (name == "iss_example") return iss_example();
  if (name == "selftrig_example") return selftrig_example();
  throw Error(ErrorKind::config, "unknown builtin program '" + name + "'");
}

std::vector<std::string> objective_names() {
  std::vector<std::string> names;
  for (const auto& [k, v] : registry()) names.push_back(k);
  return names;
}

}  // namespace builtin

}  // namespace saddleflow
