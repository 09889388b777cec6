#include "saddleflow/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "json.hpp"

#include "saddleflow/error.hpp"
#include "saddleflow/program_io.hpp"

namespace saddleflow {

bool ActiveSet::contains(int j) const {
  return std::find(indices.begin(), indices.end(), j) != indices.end();
}

ActiveSet active_set(const ConstrainedProgram& prog, const SaddleState& s, double tol) {
  if (tol < 0.0) throw Error(ErrorKind::config, "tol_active must be nonnegative");
  ActiveSet J;
  if (prog.p() == 0) return J;
  const Vec g = constraint_values(prog, s.x);
  for (int j = 0; j < prog.p(); ++j) {
    if (s.y(j) <= tol && g(j) < -tol) J.indices.push_back(j);
  }
  return J;
}

const std::vector<double>& Trajectory::trace(const std::string& name) const {
  for (std::size_t i = 0; i < trace_names.size(); ++i) {
    if (trace_names[i] == name) return traces[i];
  }
  throw Error(ErrorKind::misuse, "trajectory has no trace named '" + name + "'");
}

namespace {

void clamp_y(SaddleState& s) { s.y = s.y.cwiseMax(0.0); }

Vec rate(const ConstrainedProgram& prog, FieldKind field, const DisturbanceSignal& u,
         SaddleState s, double t) {
  clamp_y(s);
  if (!u.is_zero()) return disturbed_field(prog, s, u(t)).stacked();
  return evaluate_field(field, prog, s).stacked();
}

}  // namespace

SaddleState rk4_step(const ConstrainedProgram& prog, FieldKind field,
                     const DisturbanceSignal& u, const SaddleState& s, double t, double h) {
  const int n = prog.n, p = prog.p(), m = prog.m();
  const Vec v = s.stacked();
  const Vec k1 = rate(prog, field, u, s, t);
  const Vec k2 = rate(prog, field, u, SaddleState::unstack(v + 0.5 * h * k1, n, p, m), t + 0.5 * h);
  const Vec k3 = rate(prog, field, u, SaddleState::unstack(v + 0.5 * h * k2, n, p, m), t + 0.5 * h);
  const Vec k4 = rate(prog, field, u, SaddleState::unstack(v + h * k3, n, p, m), t + h);
  SaddleState out = SaddleState::unstack(v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4), n, p, m);
  clamp_y(out);
  return out;
}

Trajectory simulate(const ConstrainedProgram& prog, const SaddleState& s0,
                    const SimulationOptions& opts) {
  if (!(opts.dt > 0.0)) throw Error(ErrorKind::config, "dt must be positive");
  if (!(opts.horizon >= opts.dt)) throw Error(ErrorKind::config, "horizon must be at least dt");
  if (opts.record_every < 1) throw Error(ErrorKind::config, "record_every must be >= 1");
  check_dims(prog, s0);
  if (s0.y.size() > 0 && s0.y.minCoeff() < 0.0) {
    throw Error(ErrorKind::domain, "initial state has negative y");
  }
  if (opts.field == FieldKind::unprojected && prog.p() > 0) {
    throw Error(ErrorKind::misuse, "unprojected field requires p = 0");
  }

  const auto nsteps = static_cast<long>(std::ceil(opts.horizon / opts.dt - 1e-9));
  const bool log_u = opts.log_disturbance && !opts.disturbance.is_zero();

  Trajectory traj;
  for (const auto& r : opts.traces) traj.trace_names.push_back(r.name);
  if (log_u) traj.trace_names.push_back("u_norm");
  traj.traces.resize(traj.trace_names.size());

  std::vector<double> times;
  std::vector<SaddleState> states;
  auto record = [&](double t, const SaddleState& s) {
    times.push_back(t);
    states.push_back(s);
  };

  SaddleState s = s0;
  ActiveSet J = active_set(prog, s, opts.tol_active);
  bool switched_prev = false;
  double t = 0.0;
  record(t, s);
  for (long k = 1; k <= nsteps; ++k) {
    const double t_next = std::min(static_cast<double>(k) * opts.dt, opts.horizon);
    SaddleState next = rk4_step(prog, opts.field, opts.disturbance, s, t, t_next - t);
    const Vec v = next.stacked();
    if (!v.allFinite() || v.norm() > opts.blowup) {
      throw IntegrationError("state blew up (non-finite or norm > " +
                                 format_double(opts.blowup) + ") after t = " + format_double(t),
                             t);
    }
    s = std::move(next);
    t = t_next;
    ActiveSet Jn = active_set(prog, s, opts.tol_active);
    const bool switched = Jn != J;
    if (switched) {
      traj.events.push_back({t, J, Jn});
      if (switched_prev) ++traj.chatter_steps;
      J = std::move(Jn);
    }
    switched_prev = switched;
    if (k % opts.record_every == 0 || k == nsteps) record(t, s);
  }
  traj.steps = static_cast<int>(nsteps);

  for (std::size_t i = 0; i < opts.traces.size(); ++i) {
    auto& tr = traj.traces[i];
    tr.reserve(states.size());
    for (const auto& st : states) tr.push_back(opts.traces[i].eval(st));
  }
  if (log_u) {
    auto& tr = traj.traces.back();
    for (double ti : times) tr.push_back(opts.disturbance(ti).norm());
  }
  traj.times = std::move(times);
  traj.states = std::move(states);
  return traj;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  if (traj.states.empty()) return;
  const auto& s0 = traj.states.front();
  os << "t";
  for (Eigen::Index i = 0; i < s0.x.size(); ++i) os << ",x_" << i + 1;
  for (Eigen::Index i = 0; i < s0.y.size(); ++i) os << ",y_" << i + 1;
  for (Eigen::Index i = 0; i < s0.z.size(); ++i) os << ",z_" << i + 1;
  for (const auto& name : traj.trace_names) os << ',' << name;
  os << '\n';
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const auto& s = traj.states[k];
    os << format_double(traj.times[k]);
    for (Eigen::Index i = 0; i < s.x.size(); ++i) os << ',' << format_double(s.x(i));
    for (Eigen::Index i = 0; i < s.y.size(); ++i) os << ',' << format_double(s.y(i));
    for (Eigen::Index i = 0; i < s.z.size(); ++i) os << ',' << format_double(s.z(i));
    for (const auto& tr : traj.traces) os << ',' << format_double(tr[k]);
    os << '\n';
  }
}

void write_events_jsonl(std::ostream& os, const Trajectory& traj) {
  auto one_based = [](const ActiveSet& J) {
    std::vector<int> v;
    for (int j : J.indices) v.push_back(j + 1);
    return v;
  };
  for (const auto& e : traj.events) {
    nlohmann::json j;
    j["t"] = e.t;
    j["old"] = one_based(e.old_set);
    j["new"] = one_based(e.new_set);
    os << j.dump() << '\n';
  }
}

}  // namespace saddleflow
