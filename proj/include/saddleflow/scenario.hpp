#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "saddleflow/disturbance.hpp"
#include "saddleflow/selftrig.hpp"

namespace saddleflow {

enum class ScenarioMode { simulate, selftrig, iss, certify, compare };

const char* to_string(ScenarioMode m);
ScenarioMode scenario_mode_from_string(const std::string& s);

struct Scenario {
  std::string name = "scenario";
  std::string program = "builtin:example44";  // "builtin:<id>" or a file path
  std::filesystem::path base_dir;              // relative program paths resolve here
  ScenarioMode mode = ScenarioMode::simulate;
  std::optional<SaddleState> s0;
  double horizon = 10.0;
  double dt = 1e-3;
  double beta1 = 0.1;
  double theta = 0.5;
  DisturbanceSpec disturbance;
  std::filesystem::path out = "out";
  std::uint64_t seed = 1;
  TriggerRule rule = TriggerRule::exact;
  int record_every = 1;
  int max_steps = 100000;
  double stop_tol = 1e-4;  // selftrig stopping distance
  double conv_tol = 1e-3;  // "converged" verdict for simulate and compare
};

Scenario parse_scenario(std::istream& in, const std::string& source = "<scenario>");
Scenario load_scenario(const std::filesystem::path& path);
void write_scenario(std::ostream& out, const Scenario& sc);

std::vector<std::string> builtin_scenario_names();
/// Throws Error(config) for unknown names.
Scenario builtin_scenario(const std::string& name);

/// Builtin id or scenario file path.
Scenario resolve_scenario(const std::string& ref);

ConstrainedProgram scenario_program(const Scenario& sc);

/// Replaces the disturbance with the default signal of the given kind:
/// "zero", "exp_decay" (amplitude 1, rate 0.5), "const_plus_sin" (offset 0.5,
/// amplitude 0.2, freq 2) or "structured" (const_plus_sin routed through A).
void set_default_disturbance(Scenario& sc, const std::string& kind, const ConstrainedProgram& prog);

struct ScenarioResult {
  int exit_code = 0;
  nlohmann::json summary;
  std::vector<std::filesystem::path> artifacts;
};

/// Runs the scenario and writes its artifacts under sc.out. Library errors
/// propagate; use exit_code_for to map them.
ScenarioResult run_scenario(const Scenario& sc);

/// Hypothesis checks, constants and property-suite pass counts.
nlohmann::json certify_report(const ConstrainedProgram& prog, std::uint64_t seed = 1,
                              int trials = 1000, double beta1 = 0.1);

/// 2 hypothesis violation, 3 parse/config error, 4 numerical failure.
int exit_code_for(const std::exception& e);

}  // namespace saddleflow
