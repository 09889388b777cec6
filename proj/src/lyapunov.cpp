#include "saddleflow/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "saddleflow/error.hpp"

namespace saddleflow {

LyapConstants constants(const ConstrainedProgram& prog, double beta1) {
  const Curvature& cv = prog.require_curvature("Lyapunov constants");
  if (!(cv.m_lb > 0.0)) {
    throw Error(ErrorKind::hypothesis, "Lyapunov constants require m_lb > 0 (strong convexity)");
  }
  if (!(beta1 > 0.0)) throw Error(ErrorKind::config, "beta1 must be positive");
  LyapConstants c;
  c.beta1 = beta1;
  c.m = cv.m_lb;
  c.M = cv.M_ub;
  c.L = cv.L_hess;
  c.norm_A = op_norm(prog.A);
  const double m = c.m, M = c.M, a = c.norm_A;
  c.beta2 = 4.0 * beta1 * std::pow(M, 4) / (m * m);
  c.lambda_s = prog.m() > 0 ? smallest_nonzero_eigenvalue(prog.A * prog.A.transpose())
                            : std::numeric_limits<double>::infinity();
  c.lambda_m = std::min(0.5 * beta1 * m, beta1 * m * m * m);
  c.lambda_m_tilde = c.lambda_m * std::min(1.0, c.lambda_s);
  c.xi2 = std::max(M, a);
  c.alpha1 = 0.5 * c.beta2;
  c.alpha2 = 1.5 * beta1 * (M * M + a * a) + 0.5 * c.beta2;
  c.c_x = beta1 * M * M + beta1 * M * a + c.beta2 + beta1 * a * a;
  c.c_z = beta1 * M * a + beta1 * a * a + c.beta2;
  return c;
}

nlohmann::json to_json(const LyapConstants& c) {
  nlohmann::json j;
  j["beta1"] = c.beta1;
  j["beta2"] = c.beta2;
  j["m"] = c.m;
  j["M"] = c.M;
  j["L"] = c.L;
  j["norm_A"] = c.norm_A;
  if (std::isfinite(c.lambda_s)) {
    j["lambda_s"] = c.lambda_s;
  } else {
    j["lambda_s"] = nullptr;
  }
  j["lambda_m"] = c.lambda_m;
  j["lambda_m_tilde"] = c.lambda_m_tilde;
  j["xi2"] = c.xi2;
  j["alpha1"] = c.alpha1;
  j["alpha2"] = c.alpha2;
  j["c_x"] = c.c_x;
  j["c_z"] = c.c_z;
  return j;
}

const char* to_string(LyapKind k) {
  switch (k) {
    case LyapKind::v1:
      return "V1";
    case LyapKind::v2:
      return "V2";
    case LyapKind::v3:
      return "V3";
    case LyapKind::v3_anchored:
      return "V3_anchored";
    case LyapKind::v4:
      return "V4";
  }
  return "?";
}

LyapKind lyap_kind_from_string(const std::string& s) {
  for (auto k : {LyapKind::v1, LyapKind::v2, LyapKind::v3, LyapKind::v3_anchored, LyapKind::v4}) {
    if (s == to_string(k)) return k;
  }
  throw Error(ErrorKind::config, "unknown Lyapunov function '" + s + "'");
}

namespace {

void require_sdl(const ConstrainedProgram& prog, const SaddleSet& sdl) {
  const bool empty = sdl.repr == SaddleSet::Repr::numeric ? sdl.samples.empty()
                                                          : sdl.point.x.size() != prog.n;
  if (empty) {
    throw Error(ErrorKind::misuse, "saddle set not available; run solve_saddle first");
  }
}

void require_no_ineq(const ConstrainedProgram& prog, const char* who) {
  if (prog.p() > 0) {
    throw Error(ErrorKind::misuse, std::string(who) + " is defined only for programs with p = 0");
  }
}

void require_anchor(const ConstrainedProgram& prog, const SaddleState& anchor) {
  check_dims(prog, anchor);
  const double scale = std::max(1.0, anchor.norm());
  if (!check_saddle(prog, anchor, 1e-7 * scale).ok) {
    throw Error(ErrorKind::hypothesis, "anchor is not a saddle point");
  }
}

double half_sq(const Vec& v) { return 0.5 * v.squaredNorm(); }

double v3_core(const ConstrainedProgram& prog, const SaddleState& s, const SaddleState& ref,
               double beta1) {
  const LyapConstants c = constants(prog, beta1);
  const auto g = grad_blocks(prog, s);
  const double xsp = g.gx.squaredNorm() + g.gz.squaredNorm();
  const double d2 = (s.x - ref.x).squaredNorm() + (s.z - ref.z).squaredNorm();
  return 0.5 * beta1 * xsp + 0.5 * c.beta2 * d2;
}

Vec v3_gradient(const ConstrainedProgram& prog, const SaddleState& s, const SaddleState& ref,
                double beta1) {
  const LyapConstants c = constants(prog, beta1);
  const auto g = grad_blocks(prog, s);
  const Mat H = objective_hessian(prog, s.x);
  Vec out(s.size());
  out.head(prog.n) = beta1 * (H * g.gx + prog.A.transpose() * g.gz) + c.beta2 * (s.x - ref.x);
  out.tail(prog.m()) = beta1 * (prog.A * g.gx) + c.beta2 * (s.z - ref.z);
  return out;
}

bool on_partition_boundary(const ConstrainedProgram& prog, const SaddleState& s, double tol) {
  if (prog.p() == 0) return false;
  const Vec g = constraint_values(prog, s.x);
  const double band = std::max(1e-7, 10.0 * tol);
  for (int j = 0; j < prog.p(); ++j) {
    if (s.y(j) <= tol && std::abs(g(j)) <= band) return true;
    if (s.y(j) > tol && s.y(j) <= band && g(j) < -tol) return true;
  }
  return false;
}

}  // namespace

double v1(const SaddleState& s, const SaddleState& anchor) {
  return half_sq(s.stacked() - anchor.stacked());
}

double v2_partition(const ConstrainedProgram& prog, const SaddleState& s, const ActiveSet& I,
                    const SaddleSet& sdl) {
  require_sdl(prog, sdl);
  check_dims(prog, s);
  for (int j : I.indices) {
    if (j < 0 || j >= prog.p()) {
      throw Error(ErrorKind::misuse, "index set is not a subset of {1..p}");
    }
  }
  const auto g = grad_blocks(prog, s);
  double acc = g.gx.squaredNorm() + g.gz.squaredNorm();
  for (int j = 0; j < prog.p(); ++j) {
    if (!I.contains(j)) acc += g.gy(j) * g.gy(j);
  }
  const double d = project_to_saddle_set(s, sdl).distance;
  return 0.5 * acc + 0.5 * d * d;
}

double v2(const ConstrainedProgram& prog, const SaddleState& s, const SaddleSet& sdl,
          double tol_active) {
  require_sdl(prog, sdl);
  return v2_partition(prog, s, active_set(prog, s, tol_active), sdl);
}

double v3(const ConstrainedProgram& prog, const SaddleState& s, const SaddleSet& sdl, double beta1) {
  require_no_ineq(prog, "V3");
  require_sdl(prog, sdl);
  check_dims(prog, s);
  return v3_core(prog, s, project_to_saddle_set(s, sdl).point, beta1);
}

double v3_anchored(const ConstrainedProgram& prog, const SaddleState& s, const SaddleState& anchor,
                   double beta1) {
  require_no_ineq(prog, "V3_anchored");
  require_anchor(prog, anchor);
  check_dims(prog, s);
  return v3_core(prog, s, anchor, beta1);
}

double v4(const ConstrainedProgram& prog, const SaddleState& s, const SaddleSet& sdl, double eps) {
  require_no_ineq(prog, "V4");
  require_sdl(prog, sdl);
  if (eps < 0.0) throw Error(ErrorKind::config, "eps must be nonnegative");
  const auto pr = project_to_saddle_set(s, sdl);
  const Vec dx = s.x - pr.point.x, dz = s.z - pr.point.z;
  return 0.5 * pr.distance * pr.distance + eps * dx.dot(prog.A.transpose() * dz);
}

double lyapunov_value(const LyapSelector& sel, const ConstrainedProgram& prog,
                      const SaddleSet& sdl, const SaddleState& s) {
  switch (sel.kind) {
    case LyapKind::v1:
      return v1(s, sel.anchor);
    case LyapKind::v2:
      return v2(prog, s, sdl, sel.tol_active);
    case LyapKind::v3:
      return v3(prog, s, sdl, sel.beta1);
    case LyapKind::v3_anchored:
      return v3_anchored(prog, s, sel.anchor, sel.beta1);
    case LyapKind::v4:
      return v4(prog, s, sdl, sel.eps);
  }
  return 0.0;
}

Vec lyapunov_gradient(const LyapSelector& sel, const ConstrainedProgram& prog,
                      const SaddleSet& sdl, const SaddleState& s) {
  check_dims(prog, s);
  switch (sel.kind) {
    case LyapKind::v1:
      return s.stacked() - sel.anchor.stacked();
    case LyapKind::v2: {
      require_sdl(prog, sdl);
      const ActiveSet J = active_set(prog, s, sel.tol_active);
      const auto g = grad_blocks(prog, s);
      const auto H = hessian_blocks(prog, s);
      const int n = prog.n, p = prog.p();
      Vec gy_free = g.gy;
      for (int j : J.indices) gy_free(j) = 0.0;
      Vec out(s.size());
      out.head(n) = H.Fxx * g.gx + prog.A.transpose() * g.gz + H.Fxy * gy_free;
      out.segment(n, p) = H.Fxy.transpose() * g.gx;
      out.tail(prog.m()) = prog.A * g.gx;
      out += s.stacked() - project_to_saddle_set(s, sdl).point.stacked();
      return out;
    }
    case LyapKind::v3:
      require_no_ineq(prog, "V3");
      require_sdl(prog, sdl);
      return v3_gradient(prog, s, project_to_saddle_set(s, sdl).point, sel.beta1);
    case LyapKind::v3_anchored:
      require_no_ineq(prog, "V3_anchored");
      require_anchor(prog, sel.anchor);
      return v3_gradient(prog, s, sel.anchor, sel.beta1);
    case LyapKind::v4: {
      require_no_ineq(prog, "V4");
      require_sdl(prog, sdl);
      const auto pr = project_to_saddle_set(s, sdl);
      const Vec dx = s.x - pr.point.x, dz = s.z - pr.point.z;
      Vec out(s.size());
      out.head(prog.n) = dx + sel.eps * (prog.A.transpose() * dz);
      out.tail(prog.m()) = dz + sel.eps * (prog.A * dx);
      return out;
    }
  }
  return Vec();
}

double lie_derivative(const LyapSelector& sel, FieldKind field, const ConstrainedProgram& prog,
                      const SaddleSet& sdl, const SaddleState& s, LieMode mode) {
  if (sel.kind == LyapKind::v2 && on_partition_boundary(prog, s, sel.tol_active)) {
    throw Error(ErrorKind::non_smooth,
                "state lies on a partition boundary of V2; evaluate v2_partition instead");
  }
  const Vec X = evaluate_field(field, prog, s).stacked();
  if (mode == LieMode::analytic) return lyapunov_gradient(sel, prog, sdl, s).dot(X);

  const double xn = X.norm();
  if (xn == 0.0) return 0.0;
  const double h = 1e-5 * std::max(1.0, s.norm()) / xn;
  const Vec v = s.stacked();
  const int n = prog.n, p = prog.p(), m = prog.m();
  const SaddleState sp = SaddleState::unstack(v + h * X, n, p, m);
  const SaddleState sm = SaddleState::unstack(v - h * X, n, p, m);
  if (sel.kind == LyapKind::v2) {
    const ActiveSet J = active_set(prog, s, sel.tol_active);
    return (v2_partition(prog, sp, J, sdl) - v2_partition(prog, sm, J, sdl)) / (2.0 * h);
  }
  return (lyapunov_value(sel, prog, sdl, sp) - lyapunov_value(sel, prog, sdl, sm)) / (2.0 * h);
}

double v3_lie_derivative_disturbed(const ConstrainedProgram& prog, const SaddleSet& sdl,
                                   const SaddleState& s, const DisturbanceSample& u, double beta1) {
  LyapSelector sel;
  sel.kind = LyapKind::v3;
  sel.beta1 = beta1;
  const Vec grad = lyapunov_gradient(sel, prog, sdl, s);
  return grad.dot(disturbed_field(prog, s, u).stacked());
}

EpsProbe probe_eps_max(const ConstrainedProgram& prog, const SaddleSet& sdl,
                       const std::vector<SaddleState>& trial_states, std::vector<double> eps_grid,
                       double off_set_tol) {
  if (eps_grid.empty()) throw Error(ErrorKind::config, "eps grid is empty");
  require_no_ineq(prog, "V4 probe");
  std::sort(eps_grid.begin(), eps_grid.end());
  EpsProbe out;
  out.grid = eps_grid;
  for (double eps : eps_grid) {
    LyapSelector sel;
    sel.kind = LyapKind::v4;
    sel.eps = eps;
    double worst = -std::numeric_limits<double>::infinity();
    bool ok = true;
    for (const auto& s : trial_states) {
      if (project_to_saddle_set(s, sdl).distance <= off_set_tol) continue;
      const double ld = lie_derivative(sel, FieldKind::unprojected, prog, sdl, s);
      worst = std::max(worst, ld);
      if (!(ld < 0.0)) ok = false;
    }
    out.passed.push_back(ok);
    out.worst.push_back(worst);
    if (ok) out.eps_max = eps;
  }
  return out;
}

double xi_from_xi1(const LyapConstants& c, double xi1) {
  const double a2 = c.norm_A * c.norm_A;
  return std::sqrt(3.0) * std::sqrt(c.beta1 * c.beta1 * (xi1 * xi1 + a2 * a2 + a2 * c.xi2 * c.xi2) +
                                    c.beta2 * c.beta2);
}

double xi(const ConstrainedProgram& prog, const SaddleState& s, const LyapConstants& c) {
  require_no_ineq(prog, "xi");
  const double xi1 = c.M * c.xi2 + c.L * grad_blocks(prog, s).gx.norm();
  return xi_from_xi1(c, xi1);
}

LemmaA1 lemma_a1_matrix(const Mat& B1, const Mat& B2, double beta1, double m, double M) {
  if (!(m > 0.0) || M < m) throw Error(ErrorKind::config, "need 0 < m <= M");
  if (!(beta1 > 0.0)) throw Error(ErrorKind::config, "beta1 must be positive");
  const Eigen::Index n = B1.rows();
  if (B1.cols() != n || B2.rows() != n || B2.cols() != n) {
    throw Error(ErrorKind::dimension_mismatch, "B1 and B2 must be square of equal size");
  }
  const double slack = 1e-10 * std::max(1.0, M);
  for (const Mat* B : {&B1, &B2}) {
    if ((*B - B->transpose()).cwiseAbs().maxCoeff() > slack) {
      throw Error(ErrorKind::hypothesis, "precondition violated: B must be symmetric");
    }
    const Mat sym = 0.5 * (*B + B->transpose());
    if (min_eigenvalue(sym) < m - slack || max_eigenvalue(sym) > M + slack) {
      throw Error(ErrorKind::hypothesis, "precondition violated: spectrum of B outside [m, M]");
    }
  }
  const double beta2 = 4.0 * beta1 * std::pow(M, 4) / (m * m);
  LemmaA1 out;
  out.W.resize(2 * n, 2 * n);
  out.W.topLeftCorner(n, n) = beta1 * B1 * B2 * B1 + beta2 * B1;
  out.W.topRightCorner(n, n) = beta1 * B1 * B2;
  out.W.bottomLeftCorner(n, n) = beta1 * B2 * B1;
  out.W.bottomRightCorner(n, n) = beta1 * B2;
  out.lambda_m = std::min(0.5 * beta1 * m, beta1 * m * m * m);
  return out;
}

LipschitzCheck grad_v3_lipschitz_check(const ConstrainedProgram& prog, const SaddleSet& sdl,
                                       const SaddleState& s1, const SaddleState& s2,
                                       const LyapConstants& c) {
  LyapSelector sel;
  sel.kind = LyapKind::v3;
  sel.beta1 = c.beta1;
  LipschitzCheck out;
  out.lhs = (lyapunov_gradient(sel, prog, sdl, s2) - lyapunov_gradient(sel, prog, sdl, s1)).norm();
  out.rhs = xi(prog, s1, c) * (s2.stacked() - s1.stacked()).norm();
  return out;
}

double iss_gain(const LyapConstants& c, double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw Error(ErrorKind::config, "theta must lie in (0, 1)");
  return (c.c_x + c.c_z) / (theta * c.lambda_m_tilde);
}

double anchored_deviation_bound(const LyapConstants& c, double v0, double u_sup, double theta) {
  const double r = iss_gain(c, theta) * u_sup;
  return std::sqrt(std::max(v0, c.alpha2 * r * r) / c.alpha1);
}

}  // namespace saddleflow
