#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "saddleflow/disturbance.hpp"
#include "saddleflow/dynamics.hpp"

namespace saddleflow {

/// Indices (0-based) of inequality constraints with y_j = 0 and a strictly
/// negative ascent direction.
struct ActiveSet {
  std::vector<int> indices;

  bool contains(int j) const;
  bool operator==(const ActiveSet& o) const { return indices == o.indices; }
  bool operator!=(const ActiveSet& o) const { return !(*this == o); }
};

/// j is active iff y_j <= tol and g_j(x) < -tol.
ActiveSet active_set(const ConstrainedProgram& prog, const SaddleState& s, double tol = 1e-9);

struct TraceRequest {
  std::string name;
  std::function<double(const SaddleState&)> eval;
};

struct ActiveSetEvent {
  double t = 0.0;
  ActiveSet old_set;
  ActiveSet new_set;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<SaddleState> states;
  std::vector<std::string> trace_names;
  std::vector<std::vector<double>> traces;  // parallel to trace_names, each |times| long
  std::vector<ActiveSetEvent> events;
  /// Number of steps whose active set changed both at that step and at the
  /// previous one (more than one switch per dt).
  int chatter_steps = 0;
  int steps = 0;

  const std::vector<double>& trace(const std::string& name) const;
  const SaddleState& final_state() const { return states.back(); }
};

struct SimulationOptions {
  FieldKind field = FieldKind::projected;
  double horizon = 10.0;
  double dt = 1e-3;
  DisturbanceSignal disturbance;
  std::vector<TraceRequest> traces;
  double tol_active = 1e-9;
  /// Store every k-th step (the final step is always stored).
  int record_every = 1;
  double blowup = 1e12;
  /// Append a "u_norm" trace with ||(u_x, u_z)(t)|| when a disturbance is set.
  bool log_disturbance = true;
};

/// Fixed-step RK4 with y clamped at every stage and after every step.
/// Throws Error(config) for dt <= 0 or horizon < dt, Error(domain) when s0 has
/// negative y, and IntegrationError on blow-up.
Trajectory simulate(const ConstrainedProgram& prog, const SaddleState& s0,
                    const SimulationOptions& opts);

/// One RK4 step of the selected field (with disturbance if non-zero).
SaddleState rk4_step(const ConstrainedProgram& prog, FieldKind field,
                     const DisturbanceSignal& u, const SaddleState& s, double t, double h);

void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
void write_events_jsonl(std::ostream& os, const Trajectory& traj);

}  // namespace saddleflow
