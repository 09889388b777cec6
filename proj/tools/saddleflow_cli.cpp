#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "saddleflow/error.hpp"
#include "saddleflow/program_io.hpp"
#include "saddleflow/scenario.hpp"

using namespace saddleflow;

namespace {

ConstrainedProgram resolve_program(const std::string& ref) {
  const auto names = builtin::program_names();
  if (std::find(names.begin(), names.end(), ref) != names.end()) return builtin::program(ref);
  const std::string tag = "builtin:";
  if (ref.rfind(tag, 0) == 0) return builtin::program(ref.substr(tag.size()));
  return load_program(ref);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"saddleflow: saddle-point dynamics, Lyapunov certificates and self-triggered runs"};
  app.require_subcommand(1);

  std::string run_ref;
  std::optional<std::string> mode, disturbance, out, rule;
  std::optional<double> dt, horizon, beta1;
  std::optional<std::uint64_t> seed;
  auto* run = app.add_subcommand("run", "run a builtin scenario or a scenario file");
  run->add_option("scenario", run_ref, "example44 | iss_example | selftrig_example | <file>")
      ->required();
  run->add_option("--mode", mode, "simulate | selftrig | iss | certify | compare");
  run->add_option("--dt", dt, "integration step");
  run->add_option("--horizon", horizon, "simulation horizon T");
  run->add_option("--beta1", beta1, "weight of the field-norm term in V3");
  run->add_option("--disturbance", disturbance, "zero | exp_decay | const_plus_sin | structured");
  run->add_option("--out", out, "output directory");
  run->add_option("--seed", seed, "random seed");
  run->add_option("--rule", rule, "exact | constant-free");

  std::string cert_ref;
  std::optional<std::string> cert_out;
  std::uint64_t cert_seed = 1;
  int cert_trials = 1000;
  double cert_beta1 = 0.1;
  auto* cert = app.add_subcommand("certify", "hypothesis checks and property-suite report");
  cert->add_option("program", cert_ref, "builtin program name or program file")->required();
  cert->add_option("--out", cert_out, "write the JSON report to this file");
  cert->add_option("--seed", cert_seed, "random seed");
  cert->add_option("--trials", cert_trials, "draws per property suite");
  cert->add_option("--beta1", cert_beta1, "beta1 for the Lyapunov constants");

  std::string prog_ref;
  std::optional<std::string> prog_out;
  auto* prog_cmd = app.add_subcommand("program", "export a program definition file");
  prog_cmd->add_option("program", prog_ref, "builtin program name or program file")->required();
  prog_cmd->add_option("--out", prog_out, "output file (default stdout)");

  auto* list = app.add_subcommand("list", "list builtin programs and scenarios");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      Scenario sc = resolve_scenario(run_ref);
      if (mode) sc.mode = scenario_mode_from_string(*mode);
      if (dt) sc.dt = *dt;
      if (horizon) sc.horizon = *horizon;
      if (beta1) sc.beta1 = *beta1;
      if (out) sc.out = *out;
      if (seed) sc.seed = *seed;
      if (rule) sc.rule = trigger_rule_from_string(*rule);
      if (disturbance) set_default_disturbance(sc, *disturbance, scenario_program(sc));
      const auto res = run_scenario(sc);
      std::cout << res.summary.dump(2) << '\n';
      for (const auto& a : res.artifacts) std::cerr << "wrote " << a.string() << '\n';
      return res.exit_code;
    }
    if (*cert) {
      const auto report = certify_report(resolve_program(cert_ref), cert_seed, cert_trials, cert_beta1);
      if (cert_out) {
        std::ofstream f(*cert_out);
        if (!f) throw Error(ErrorKind::config, "cannot write " + *cert_out);
        f << report.dump(2) << '\n';
      }
      std::cout << report.dump(2) << '\n';
      return report["all_suites_passed"].get<bool>() ? 0 : 2;
    }
    if (*prog_cmd) {
      const auto prog = resolve_program(prog_ref);
      if (prog_out) {
        std::ofstream f(*prog_out);
        if (!f) throw Error(ErrorKind::config, "cannot write " + *prog_out);
        write_program(f, prog);
      } else {
        write_program(std::cout, prog);
      }
      return 0;
    }
    if (*list) {
      std::cout << "programs:";
      for (const auto& n : builtin::program_names()) std::cout << ' ' << n;
      std::cout << "\nscenarios:";
      for (const auto& n : builtin_scenario_names()) std::cout << ' ' << n;
      std::cout << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return 0;
}
