#include "saddleflow/selftrig.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "saddleflow/error.hpp"
#include "saddleflow/program_io.hpp"

namespace saddleflow {

const char* to_string(TriggerRule r) {
  return r == TriggerRule::exact ? "exact" : "constant-free";
}

TriggerRule trigger_rule_from_string(const std::string& s) {
  if (s == "exact") return TriggerRule::exact;
  if (s == "constant-free" || s == "constant_free") return TriggerRule::constant_free;
  throw Error(ErrorKind::config, "unknown triggering rule '" + s + "' (exact|constant-free)");
}

namespace {

void require_sp(const ConstrainedProgram& prog) {
  if (prog.p() > 0) {
    throw Error(ErrorKind::misuse, "self-triggered steps are defined only for p = 0");
  }
}

SaddleState advance(const ConstrainedProgram& prog, const SaddleState& s, const Vec& X, double dt) {
  return SaddleState::unstack(s.stacked() + dt * X, prog.n, 0, prog.m());
}

/// Field zero up to rounding: the state is a saddle point.
bool at_rest(const SaddleState& s, const Vec& X) {
  return X.norm() <= 1e-13 * std::max(1.0, s.norm());
}

}  // namespace

TriggerStep step_exact(const ConstrainedProgram& prog, const SaddleState& s,
                       const LyapConstants& c, const SaddleSet& sdl) {
  require_sp(prog);
  const Vec X = sp_field(prog, s).stacked();
  TriggerStep out;
  const double x2 = X.squaredNorm();
  if (at_rest(s, X)) {
    out.terminal = true;
    out.next = s;
    return out;
  }
  LyapSelector sel;
  sel.kind = LyapKind::v3;
  sel.beta1 = c.beta1;
  const double lie = lyapunov_gradient(sel, prog, sdl, s).dot(X);
  out.dt = -lie / (xi(prog, s, c) * x2);
  if (!(out.dt > 0.0)) {
    throw Error(ErrorKind::hypothesis,
                "V3 is not decreasing along the field (Lie derivative " + format_double(lie) + ")");
  }
  out.next = advance(prog, s, X, out.dt);
  return out;
}

TriggerStep step_constant_free(const ConstrainedProgram& prog, const SaddleState& s,
                               const LyapConstants& c) {
  require_sp(prog);
  const Vec X = sp_field(prog, s).stacked();
  TriggerStep out;
  if (at_rest(s, X)) {
    out.terminal = true;
    out.next = s;
    return out;
  }
  out.dt = c.lambda_m_tilde / (3.0 * (c.M * c.M + c.norm_A * c.norm_A) * xi(prog, s, c));
  out.next = advance(prog, s, X, out.dt);
  return out;
}

double dwell_bound(const ConstrainedProgram& prog, const SaddleState& s0, const LyapConstants& c,
                   const SaddleSet& sdl) {
  require_sp(prog);
  const double v0 = v3(prog, s0, sdl, c.beta1);
  const double G = (c.M + c.norm_A) * std::sqrt(v0 / c.alpha1);
  const double T1 = c.M * c.xi2 + c.L * G;
  const double T2 = xi_from_xi1(c, T1);
  return c.lambda_m_tilde / (3.0 * (c.M * c.M + c.norm_A * c.norm_A) * T2);
}

std::optional<int> TriggerRun::steps_to(double tol) const {
  for (std::size_t k = 0; k < distance.size(); ++k) {
    if (distance[k] <= tol) return static_cast<int>(k);
  }
  return std::nullopt;
}

TriggerRun run_selftrig(const ConstrainedProgram& prog, const SaddleState& s0, TriggerRule rule,
                        double beta1, int K, double stop_tol) {
  require_sp(prog);
  check_dims(prog, s0);
  const LyapConstants c = constants(prog, beta1);
  const SaddleSet sdl = solve_saddle(prog);
  if (sdl.repr != SaddleSet::Repr::singleton) {
    throw Error(ErrorKind::hypothesis,
                "self-triggered run requires a unique saddle point (A with full row rank)");
  }
  TriggerRun run;
  run.rule = rule;
  run.dwell_bound_certified = dwell_bound(prog, s0, c, sdl);
  SaddleState s = s0;
  double t = 0.0;
  double v = v3(prog, s, sdl, beta1);
  const double v_start = v;
  auto record = [&](const SaddleState& st, double vv) {
    run.times.push_back(t);
    run.states.push_back(st);
    run.v3_trace.push_back(vv);
    run.distance.push_back(project_to_saddle_set(st, sdl).distance);
  };
  record(s, v);
  for (int k = 0; k < K; ++k) {
    if (run.distance.back() < stop_tol) break;
    const TriggerStep st = rule == TriggerRule::exact ? step_exact(prog, s, c, sdl)
                                                      : step_constant_free(prog, s, c);
    if (st.terminal) break;
    const double vn = v3(prog, st.next, sdl, beta1);
    if (!(vn < v) || vn > v_start) {
      throw Error(ErrorKind::hypothesis,
                  "V3 did not decrease at step " + std::to_string(k) + " (" + format_double(v) +
                      " -> " + format_double(vn) + "); constants violate the hypotheses");
    }
    t += st.dt;
    run.dts.push_back(st.dt);
    s = st.next;
    v = vn;
    record(s, v);
  }
  run.steps = static_cast<int>(run.dts.size());
  run.converged = run.distance.back() < stop_tol;
  run.dwell_min_observed = run.dts.empty()
                               ? std::numeric_limits<double>::infinity()
                               : *std::min_element(run.dts.begin(), run.dts.end());
  return run;
}

std::optional<int> euler_iterations_to(const ConstrainedProgram& prog, const SaddleState& s0,
                                       const SaddleSet& sdl, bool decaying, double dt, double tol,
                                       int K) {
  require_sp(prog);
  SaddleState s = s0;
  for (int k = 0; k <= K; ++k) {
    const double d = project_to_saddle_set(s, sdl).distance;
    if (d <= tol) return k;
    if (!std::isfinite(d)) return std::nullopt;
    const double h = decaying ? 1.0 / static_cast<double>(k + 1) : dt;
    s = advance(prog, s, sp_field(prog, s).stacked(), h);
  }
  return std::nullopt;
}

void write_trigger_csv(std::ostream& os, const TriggerRun& run) {
  if (run.states.empty()) return;
  const auto& s0 = run.states.front();
  os << "k,t_k,dt_k";
  for (Eigen::Index i = 0; i < s0.x.size(); ++i) os << ",x_" << i + 1;
  for (Eigen::Index i = 0; i < s0.z.size(); ++i) os << ",z_" << i + 1;
  os << ",V3\n";
  for (std::size_t k = 0; k < run.states.size(); ++k) {
    const auto& s = run.states[k];
    os << k << ',' << format_double(run.times[k]) << ','
       << (k < run.dts.size() ? format_double(run.dts[k]) : std::string(""));
    for (Eigen::Index i = 0; i < s.x.size(); ++i) os << ',' << format_double(s.x(i));
    for (Eigen::Index i = 0; i < s.z.size(); ++i) os << ',' << format_double(s.z(i));
    os << ',' << format_double(run.v3_trace[k]) << '\n';
  }
}

nlohmann::json trigger_summary(const TriggerRun& run) {
  nlohmann::json j;
  j["rule"] = to_string(run.rule);
  if (std::isfinite(run.dwell_min_observed)) {
    j["dwell_min_observed"] = run.dwell_min_observed;
  } else {
    j["dwell_min_observed"] = nullptr;
  }
  j["dwell_bound_certified"] = run.dwell_bound_certified;
  j["steps"] = run.steps;
  j["converged"] = run.converged;
  j["final_distance"] = run.distance.empty() ? 0.0 : run.distance.back();
  j["final_time"] = run.times.empty() ? 0.0 : run.times.back();
  return j;
}

}  // namespace saddleflow
