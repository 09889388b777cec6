#include "saddleflow/saddle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "saddleflow/error.hpp"
#include "saddleflow/program_io.hpp"

namespace saddleflow {

const char* to_string(SaddleSet::Repr r) {
  switch (r) {
    case SaddleSet::Repr::singleton:
      return "singleton";
    case SaddleSet::Repr::affine:
      return "affine";
    case SaddleSet::Repr::numeric:
      return "numeric";
  }
  return "?";
}

std::vector<SaddleState> SaddleSet::anchors() const {
  switch (repr) {
    case Repr::singleton:
      return {point};
    case Repr::affine: {
      std::vector<SaddleState> out{point};
      for (Eigen::Index i = 0; i < kernel_basis.cols(); ++i) {
        for (double sgn : {1.0, -1.0}) {
          SaddleState a = point;
          a.z += sgn * kernel_basis.col(i);
          out.push_back(std::move(a));
        }
      }
      return out;
    }
    case Repr::numeric:
      return samples;
  }
  return {};
}

Vec SaddleCheck::residuals() const {
  Vec r(5);
  r << grad_x, grad_z, dual_feasibility, complementarity, y_negativity;
  return r;
}

SaddleCheck check_saddle(const ConstrainedProgram& prog, const SaddleState& s, double tol) {
  check_dims(prog, s);
  const auto g = grad_blocks(prog, s);
  SaddleCheck c;
  c.grad_x = g.gx.norm();
  c.grad_z = g.gz.norm();
  if (prog.p() > 0) {
    c.dual_feasibility = std::max(0.0, g.gy.maxCoeff());
    c.complementarity = std::abs(s.y.dot(g.gy));
    c.y_negativity = std::max(0.0, -s.y.minCoeff());
  }
  c.ok = c.residuals().maxCoeff() <= tol;
  return c;
}

namespace {

// Equality-only KKT system: grad f(x) + A^T z = 0, A x = b.
SaddleSet solve_equality(const ConstrainedProgram& prog, double tol, int max_iter) {
  const int n = prog.n, m = prog.m();
  Vec x = Vec::Zero(n), z = Vec::Zero(m);
  auto residual = [&](const Vec& xx, const Vec& zz) {
    Vec r(n + m);
    r.head(n) = objective_gradient(prog, xx) + prog.A.transpose() * zz;
    r.tail(m) = prog.A * xx - prog.b;
    return r;
  };
  Vec r = residual(x, z);
  double step_norm = std::numeric_limits<double>::infinity();
  int it = 0;
  for (; it < max_iter; ++it) {
    if (r.norm() <= tol && (step_norm <= tol || it > 0)) break;
    Mat K = Mat::Zero(n + m, n + m);
    K.topLeftCorner(n, n) = objective_hessian(prog, x);
    K.topRightCorner(n, m) = prog.A.transpose();
    K.bottomLeftCorner(m, n) = prog.A;
    const Vec d = -K.completeOrthogonalDecomposition().solve(r);
    double t = 1.0;
    Vec xn, zn, rn;
    for (int ls = 0; ls < 40; ++ls, t *= 0.5) {
      xn = x + t * d.head(n);
      zn = z + t * d.tail(m);
      rn = residual(xn, zn);
      if (rn.norm() <= (1.0 - 1e-4 * t) * r.norm() || rn.norm() <= tol) break;
    }
    step_norm = t * d.norm();
    x = xn;
    z = zn;
    r = rn;
    if (r.norm() <= tol && step_norm <= tol) break;
  }
  if (r.norm() > tol) {
    throw ConvergenceError("KKT Newton did not converge in " + std::to_string(max_iter) +
                               " iterations (residual " + format_double(r.norm()) + ")",
                           r.norm());
  }
  SaddleSet sdl;
  sdl.tol = std::max(tol, 1e-12) * 100.0;
  const Vec gf = objective_gradient(prog, x);
  const Vec z0 = m > 0 ? Vec(-pinv(prog.A.transpose()) * gf) : Vec(0);
  sdl.point = SaddleState(x, Vec(0), z0);
  sdl.kernel_basis = m > 0 ? left_kernel_basis(prog.A) : Mat(0, 0);
  sdl.repr = sdl.kernel_basis.cols() > 0 ? SaddleSet::Repr::affine : SaddleSet::Repr::singleton;
  return sdl;
}

// Semismooth Newton on Phi(x, y, z) = (grad_x F, A x - b, min(y, -g(x))).
SaddleSet solve_inequality(const ConstrainedProgram& prog, double tol, int max_iter) {
  const int n = prog.n, p = prog.p(), m = prog.m();
  SaddleState s = SaddleState::zeros(prog);
  auto phi = [&](const SaddleState& st) {
    const auto g = grad_blocks(prog, st);
    Vec r(n + m + p);
    r.head(n) = g.gx;
    r.segment(n, m) = g.gz;
    r.tail(p) = st.y.cwiseMin(-g.gy);
    return r;
  };
  Vec r = phi(s);
  double step_norm = std::numeric_limits<double>::infinity();
  for (int it = 0; it < max_iter; ++it) {
    if (r.norm() <= tol && (step_norm <= tol || it == 0)) break;
    const auto H = hessian_blocks(prog, s);
    const Vec gy = constraint_values(prog, s.x);
    const Mat Dg = constraint_jacobian(prog, s.x);
    // Unknown ordering (x, y, z); equation ordering (grad_x F, A x - b, min).
    Mat Jm = Mat::Zero(n + m + p, n + p + m);
    Jm.block(0, 0, n, n) = H.Fxx;
    Jm.block(0, n, n, p) = H.Fxy;
    Jm.block(0, n + p, n, m) = H.Fxz;
    Jm.block(n, 0, m, n) = prog.A;
    for (int j = 0; j < p; ++j) {
      if (s.y(j) <= -gy(j)) {
        Jm(n + m + j, n + j) = 1.0;
      } else {
        Jm.block(n + m + j, 0, 1, n) = -Dg.row(j);
      }
    }
    const Vec d = -Jm.completeOrthogonalDecomposition().solve(r);
    const Vec v = s.stacked();
    double t = 1.0;
    SaddleState sn;
    Vec rn;
    for (int ls = 0; ls < 40; ++ls, t *= 0.5) {
      sn = SaddleState::unstack(v + t * d, n, p, m);
      rn = phi(sn);
      if (rn.norm() <= (1.0 - 1e-4 * t) * r.norm() || rn.norm() <= tol) break;
    }
    step_norm = t * d.norm();
    s = sn;
    r = rn;
  }
  s.y = s.y.cwiseMax(0.0);
  const Vec g_end = constraint_values(prog, s.x);
  for (int j = 0; j < p; ++j) {
    if (g_end(j) < -std::sqrt(tol) && s.y(j) <= tol) s.y(j) = 0.0;
  }
  r = phi(s);
  if (r.norm() > tol) {
    throw ConvergenceError("semismooth Newton did not converge in " + std::to_string(max_iter) +
                               " iterations (residual " + format_double(r.norm()) + ")",
                           r.norm());
  }
  SaddleSet sdl;
  sdl.tol = std::max(tol, 1e-12) * 100.0;
  sdl.point = s;
  // Multipliers are unique when the active constraint gradients and the rows
  // of A are linearly independent.
  const Vec g = constraint_values(prog, s.x);
  const Mat Dg = constraint_jacobian(prog, s.x);
  std::vector<int> active;
  for (int j = 0; j < p; ++j) {
    if (g(j) >= -std::sqrt(tol)) active.push_back(j);
  }
  Mat C(static_cast<Eigen::Index>(active.size()) + m, n);
  for (std::size_t i = 0; i < active.size(); ++i) C.row(static_cast<Eigen::Index>(i)) = Dg.row(active[i]);
  if (m > 0) C.bottomRows(m) = prog.A;
  if (C.rows() == 0 || numeric_rank(C) == C.rows()) {
    sdl.repr = SaddleSet::Repr::singleton;
  } else {
    sdl.repr = SaddleSet::Repr::numeric;
    sdl.samples = {s};
  }
  return sdl;
}

}  // namespace

SaddleSet solve_saddle(const ConstrainedProgram& prog, double tol, int max_iter) {
  prog.validate();
  return prog.p() == 0 ? solve_equality(prog, tol, max_iter)
                       : solve_inequality(prog, tol, max_iter);
}

SaddleProjection project_to_saddle_set(const SaddleState& s, const SaddleSet& sdl) {
  SaddleProjection out;
  switch (sdl.repr) {
    case SaddleSet::Repr::singleton:
      out.point = sdl.point;
      break;
    case SaddleSet::Repr::affine: {
      const Mat& B = sdl.kernel_basis;
      out.point = SaddleState(sdl.x_star(), s.y.size() ? Vec(Vec::Zero(s.y.size())) : Vec(0),
                              sdl.z0() + B * (B.transpose() * (s.z - sdl.z0())));
      break;
    }
    case SaddleSet::Repr::numeric: {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& c : sdl.samples) {
        const double d = (s.stacked() - c.stacked()).norm();
        if (d < best) {
          best = d;
          out.point = c;
        }
      }
      out.approximate = true;
      break;
    }
  }
  if (out.point.size() != s.size()) {
    throw Error(ErrorKind::dimension_mismatch, "state does not match saddle set dimensions");
  }
  out.distance = (s.stacked() - out.point.stacked()).norm();
  return out;
}

Mat hbar(const ConstrainedProgram& prog, const SaddleState& s, const SaddleState& anchor,
         int quad_n, int* shifted_nodes) {
  check_dims(prog, s);
  check_dims(prog, anchor);
  if (quad_n < 1) throw Error(ErrorKind::config, "quad_n must be >= 1");
  const int n = prog.n, p = prog.p(), m = prog.m();
  const Vec a = anchor.stacked();
  const Vec d = s.stacked() - a;
  const auto rule = gauss_legendre(quad_n);
  Mat out = Mat::Zero(n + p + m, n + p + m);
  int shifts = 0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    double tau = rule.nodes[k];
    SaddleState pt = SaddleState::unstack(a + tau * d, n, p, m);
    for (int tries = 0; !objective_smooth_at(prog, pt.x) && tries < 8; ++tries) {
      tau = std::clamp(tau + 1e-7 * (tries % 2 == 0 ? 1.0 : -2.0), 0.0, 1.0);
      pt = SaddleState::unstack(a + tau * d, n, p, m);
      ++shifts;
    }
    const auto H = hessian_blocks(prog, pt);
    out.topLeftCorner(n, n) -= rule.weights[k] * H.Fxx;
    out.bottomRightCorner(p + m, p + m) += rule.weights[k] * H.dual_block();
  }
  if (shifted_nodes) *shifted_nodes = shifts;
  return out;
}

bool omega_limit_test(const ConstrainedProgram& prog, const SaddleState& s, const SaddleSet& sdl,
                      int quad_n, double tol) {
  for (const auto& a : sdl.anchors()) {
    const Vec d = s.stacked() - a.stacked();
    const Mat H = hbar(prog, s, a, quad_n);
    if ((H * d).norm() > tol * std::max(1.0, d.norm())) return false;
  }
  return true;
}

Theorem43Report check_theorem43(const ConstrainedProgram& prog, const SaddleState& anchor,
                                double radius, int sample_k, std::uint64_t seed, int quad_n) {
  if (!(radius > 0.0)) throw Error(ErrorKind::config, "radius must be positive");
  check_dims(prog, anchor);
  const int n = prog.n, p = prog.p(), m = prog.m();
  const Eigen::Index dim = n + p + m;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif;

  Theorem43Report rep;
  bool all_i = true, all_ii = p + m > 0;
  const Vec a = anchor.stacked();
  int attempts = 0;
  while (rep.samples + rep.skipped < sample_k && attempts < 1000 * sample_k) {
    ++attempts;
    Vec dir(dim);
    for (Eigen::Index i = 0; i < dim; ++i) dir(i) = normal(rng);
    if (dir.norm() == 0.0) continue;
    const double r = radius * std::pow(unif(rng), 1.0 / static_cast<double>(dim));
    const Vec v = a + r * dir.normalized();
    SaddleState s = SaddleState::unstack(v, n, p, m);
    if (p > 0 && s.y.minCoeff() < 0.0) continue;
    if (!objective_smooth_at(prog, s.x)) {
      ++rep.skipped;
      continue;
    }
    const Mat H = hbar(prog, s, anchor, quad_n);
    const Mat Hxx = -H.topLeftCorner(n, n);
    if (!(min_eigenvalue(Hxx) > 0.0)) all_i = false;
    if (p + m > 0 && !(max_eigenvalue(H.bottomRightCorner(p + m, p + m)) < 0.0)) all_ii = false;
    ++rep.samples;
  }
  rep.holds_i = rep.samples > 0 && all_i;
  rep.holds_ii = rep.samples > 0 && all_ii;
  return rep;
}

namespace {

std::vector<double> to_std(const Vec& v) { return {v.data(), v.data() + v.size()}; }

Vec from_std(const nlohmann::json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

nlohmann::json state_json(const SaddleState& s) {
  return {{"x", to_std(s.x)}, {"y", to_std(s.y)}, {"z", to_std(s.z)}};
}

SaddleState state_from_json(const nlohmann::json& j) {
  return SaddleState(from_std(j.at("x")), from_std(j.at("y")), from_std(j.at("z")));
}

}  // namespace

nlohmann::json to_json(const SaddleSet& sdl) {
  nlohmann::json j;
  j["repr"] = to_string(sdl.repr);
  j["x_star"] = to_std(sdl.point.x);
  j["y_star"] = to_std(sdl.point.y);
  j["z0"] = to_std(sdl.point.z);
  nlohmann::json cols = nlohmann::json::array();
  for (Eigen::Index i = 0; i < sdl.kernel_basis.cols(); ++i) {
    cols.push_back(to_std(sdl.kernel_basis.col(i)));
  }
  j["kernel_basis"] = cols;
  if (sdl.repr == SaddleSet::Repr::numeric) {
    nlohmann::json smp = nlohmann::json::array();
    for (const auto& s : sdl.samples) smp.push_back(state_json(s));
    j["samples"] = smp;
  }
  j["tol"] = sdl.tol;
  return j;
}

SaddleSet saddle_set_from_json(const nlohmann::json& j) {
  SaddleSet sdl;
  const auto repr = j.at("repr").get<std::string>();
  if (repr == "singleton") {
    sdl.repr = SaddleSet::Repr::singleton;
  } else if (repr == "affine") {
    sdl.repr = SaddleSet::Repr::affine;
  } else if (repr == "numeric") {
    sdl.repr = SaddleSet::Repr::numeric;
  } else {
    throw Error(ErrorKind::parse, "unknown saddle set repr '" + repr + "'");
  }
  sdl.point = SaddleState(from_std(j.at("x_star")), from_std(j.value("y_star", nlohmann::json::array())),
                          from_std(j.at("z0")));
  const auto& cols = j.at("kernel_basis");
  sdl.kernel_basis = Mat(sdl.point.z.size(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < cols.size(); ++i) {
    sdl.kernel_basis.col(static_cast<Eigen::Index>(i)) = from_std(cols[i]);
  }
  if (j.contains("samples")) {
    for (const auto& s : j["samples"]) sdl.samples.push_back(state_from_json(s));
  }
  sdl.tol = j.at("tol").get<double>();
  return sdl;
}

}  // namespace saddleflow
