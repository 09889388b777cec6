#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "saddleflow/lyapunov.hpp"

namespace saddleflow {

enum class TriggerRule { exact, constant_free };

const char* to_string(TriggerRule r);
TriggerRule trigger_rule_from_string(const std::string& s);

struct TriggerStep {
  double dt = 0.0;
  SaddleState next;
  bool terminal = false;  // current state is already a saddle point
};

/// dt = -L_X V3(s) / (xi(s) ||X(s)||^2), next = s + dt X(s).
TriggerStep step_exact(const ConstrainedProgram& prog, const SaddleState& s,
                       const LyapConstants& c, const SaddleSet& sdl);

/// dt = lambda_m_tilde / (3 (M^2 + ||A||^2) xi(s)), next = s + dt X(s).
TriggerStep step_constant_free(const ConstrainedProgram& prog, const SaddleState& s,
                               const LyapConstants& c);

/// Certified lower bound on every step length of a run started at s0.
double dwell_bound(const ConstrainedProgram& prog, const SaddleState& s0, const LyapConstants& c,
                   const SaddleSet& sdl);

struct TriggerRun {
  TriggerRule rule = TriggerRule::exact;
  std::vector<double> times;
  std::vector<SaddleState> states;
  std::vector<double> v3_trace;
  std::vector<double> distance;
  std::vector<double> dts;  // dts[k] = times[k+1] - times[k]
  double dwell_min_observed = 0.0;
  double dwell_bound_certified = 0.0;
  int steps = 0;
  bool converged = false;

  /// First k with distance[k] <= tol.
  std::optional<int> steps_to(double tol) const;
};

/// Iterates the chosen rule until the distance to the saddle point drops below
/// stop_tol or K steps. Requires p = 0 and a unique saddle point. Throws
/// Error(hypothesis) if V3 fails to decrease strictly.
TriggerRun run_selftrig(const ConstrainedProgram& prog, const SaddleState& s0, TriggerRule rule,
                        double beta1, int K = 100000, double stop_tol = 1e-4);

/// Explicit Euler on the unprojected field: fixed step, or dt_k = 1/k when
/// `decaying`. Returns the number of iterations to reach distance <= tol.
std::optional<int> euler_iterations_to(const ConstrainedProgram& prog, const SaddleState& s0,
                                       const SaddleSet& sdl, bool decaying, double dt, double tol,
                                       int K = 1000000);

void write_trigger_csv(std::ostream& os, const TriggerRun& run);
nlohmann::json trigger_summary(const TriggerRun& run);

}  // namespace saddleflow
