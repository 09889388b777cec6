#include "saddleflow/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "saddleflow/error.hpp"
#include "saddleflow/integrate.hpp"
#include "saddleflow/program_io.hpp"
#include "saddleflow/suites.hpp"

namespace saddleflow {

const char* to_string(ScenarioMode m) {
  switch (m) {
    case ScenarioMode::simulate:
      return "simulate";
    case ScenarioMode::selftrig:
      return "selftrig";
    case ScenarioMode::iss:
      return "iss";
    case ScenarioMode::certify:
      return "certify";
    case ScenarioMode::compare:
      return "compare";
  }
  return "?";
}

ScenarioMode scenario_mode_from_string(const std::string& s) {
  for (auto m : {ScenarioMode::simulate, ScenarioMode::selftrig, ScenarioMode::iss,
                 ScenarioMode::certify, ScenarioMode::compare}) {
    if (s == to_string(m)) return m;
  }
  throw Error(ErrorKind::config,
              "unknown mode '" + s + "' (simulate|selftrig|iss|certify|compare)");
}

namespace {

const char* kKeys[] = {"name",
                       "program",
                       "mode",
                       "x0",
                       "y0",
                       "z0",
                       "horizon",
                       "dt",
                       "beta1",
                       "theta",
                       "disturbance.kind",
                       "disturbance.amplitude",
                       "disturbance.offset",
                       "disturbance.rate",
                       "disturbance.freq",
                       "disturbance.structured",
                       "out",
                       "seed",
                       "rule",
                       "record_every",
                       "max_steps",
                       "stop_tol",
                       "conv_tol"};

Vec vec(std::initializer_list<double> v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double d : v) out(i++) = d;
  return out;
}

void write_vec(std::ostream& os, const std::string& key, const Vec& v) {
  os << key;
  for (Eigen::Index i = 0; i < v.size(); ++i) os << ' ' << format_double(v(i));
  os << '\n';
}

void ensure_dir(const std::filesystem::path& p) {
  std::error_code ec;
  std::filesystem::create_directories(p, ec);
  if (ec) throw Error(ErrorKind::config, "cannot create output directory " + p.string());
}

std::filesystem::path write_text(const std::filesystem::path& path,
                                 const std::function<void(std::ostream&)>& body) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::config, "cannot write " + path.string());
  body(f);
  return path;
}

std::filesystem::path write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  return write_text(path, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

SaddleState initial_state(const Scenario& sc, const ConstrainedProgram& prog) {
  if (!sc.s0) return SaddleState::zeros(prog);
  SaddleState s = *sc.s0;
  if (s.y.size() == 0 && prog.p() > 0) s.y = Vec::Zero(prog.p());
  if (s.z.size() == 0 && prog.m() > 0) s.z = Vec::Zero(prog.m());
  check_dims(prog, s);
  return s;
}

double max_increase(const std::vector<double>& v) {
  double worst = 0.0;
  for (std::size_t k = 1; k < v.size(); ++k) worst = std::max(worst, v[k] - v[k - 1]);
  return worst;
}

double max_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

std::vector<double> to_std(const Vec& v) { return {v.data(), v.data() + v.size()}; }

// Analytic bound on sup_t ||(u_x, u_z)(t)||.
double signal_sup_bound(const DisturbanceSignal& sig, const ConstrainedProgram& prog) {
  const double base = sig.base_sup_bound();
  return sig.spec().structured ? std::max(1.0, op_norm(prog.A)) * base : base;
}

std::string prefix(const Scenario& sc) { return sc.name + "_"; }

ScenarioResult run_simulate(const Scenario& sc, const ConstrainedProgram& prog) {
  const SaddleSet sdl = solve_saddle(prog);
  const SaddleState anchor = sdl.anchors().front();
  const SaddleState s0 = initial_state(sc, prog);

  SimulationOptions opts;
  opts.horizon = sc.horizon;
  opts.dt = sc.dt;
  opts.record_every = sc.record_every;
  opts.field = prog.p() > 0 ? FieldKind::projected : FieldKind::unprojected;
  opts.disturbance = make_disturbance(sc.disturbance, prog);
  opts.traces.push_back({"V1", [&](const SaddleState& s) { return v1(s, anchor); }});
  opts.traces.push_back({"V2", [&](const SaddleState& s) { return v2(prog, s, sdl); }});
  const bool has_v3 = prog.p() == 0 && prog.curvature && prog.curvature->m_lb > 0.0;
  if (has_v3) {
    opts.traces.push_back({"V3", [&](const SaddleState& s) { return v3(prog, s, sdl, sc.beta1); }});
  }
  opts.traces.push_back(
      {"distance", [&](const SaddleState& s) { return project_to_saddle_set(s, sdl).distance; }});
  opts.traces.push_back({"field_norm", [&](const SaddleState& s) {
                           return evaluate_field(opts.field, prog, s).norm();
                         }});
  const Trajectory traj = simulate(prog, s0, opts);

  ScenarioResult res;
  ensure_dir(sc.out);
  res.artifacts.push_back(write_text(sc.out / (prefix(sc) + "trajectory.csv"),
                                     [&](std::ostream& os) { write_trajectory_csv(os, traj); }));
  res.artifacts.push_back(write_text(sc.out / (prefix(sc) + "events.jsonl"),
                                     [&](std::ostream& os) { write_events_jsonl(os, traj); }));
  res.artifacts.push_back(write_json(sc.out / (prefix(sc) + "saddle.json"), to_json(sdl)));
  if (has_v3) {
    res.artifacts.push_back(
        write_json(sc.out / (prefix(sc) + "constants.json"), to_json(constants(prog, sc.beta1))));
  }

  const double v1_inc = max_increase(traj.trace("V1"));
  const double final_dist = traj.trace("distance").back();
  nlohmann::json j;
  j["mode"] = "simulate";
  j["horizon"] = sc.horizon;
  j["dt"] = sc.dt;
  j["steps"] = traj.steps;
  j["final_norm"] = traj.final_state().norm();
  j["final_distance"] = final_dist;
  j["converged"] = final_dist <= sc.conv_tol;
  j["conv_tol"] = sc.conv_tol;
  j["v1_max_increase"] = v1_inc;
  j["v1_monotone"] = v1_inc <= 1e-8;
  j["events"] = traj.events.size();
  j["chatter_steps"] = traj.chatter_steps;
  j["saddle_set"] = to_json(sdl);
  res.summary = j;
  res.exit_code = (j["converged"].get<bool>() || j["v1_monotone"].get<bool>()) ? 0 : 4;
  return res;
}

ScenarioResult run_iss(const Scenario& sc, const ConstrainedProgram& prog) {
  if (prog.p() > 0) {
    throw Error(ErrorKind::hypothesis, "iss mode requires a program without inequalities");
  }
  const LyapConstants c = constants(prog, sc.beta1);
  const SaddleSet sdl = solve_saddle(prog);
  const SaddleState s0 = initial_state(sc, prog);
  const DisturbanceSignal sig = make_disturbance(sc.disturbance, prog);
  const Mat& B = sdl.kernel_basis;

  SimulationOptions opts;
  opts.field = FieldKind::unprojected;
  opts.horizon = sc.horizon;
  opts.dt = sc.dt;
  opts.record_every = sc.record_every;
  opts.disturbance = sig;
  opts.traces.push_back(
      {"distance", [&](const SaddleState& s) { return project_to_saddle_set(s, sdl).distance; }});
  opts.traces.push_back({"V3", [&](const SaddleState& s) { return v3(prog, s, sdl, sc.beta1); }});
  opts.traces.push_back({"state_norm", [](const SaddleState& s) { return s.norm(); }});
  opts.traces.push_back({"kernel_norm", [&](const SaddleState& s) {
                           return B.cols() ? (B.transpose() * (s.z - sdl.z0())).norm() : 0.0;
                         }});
  const Trajectory traj = simulate(prog, s0, opts);

  ScenarioResult res;
  ensure_dir(sc.out);
  res.artifacts.push_back(write_text(sc.out / (prefix(sc) + "trajectory.csv"),
                                     [&](std::ostream& os) { write_trajectory_csv(os, traj); }));
  res.artifacts.push_back(write_text(sc.out / (prefix(sc) + "events.jsonl"),
                                     [&](std::ostream& os) { write_events_jsonl(os, traj); }));
  res.artifacts.push_back(write_json(sc.out / (prefix(sc) + "constants.json"), to_json(c)));
  res.artifacts.push_back(write_json(sc.out / (prefix(sc) + "saddle.json"), to_json(sdl)));

  const double gain = iss_gain(c, sc.theta);
  const double u_sup = signal_sup_bound(sig, prog);
  const auto& dist = traj.trace("distance");
  const auto& kern = traj.trace("kernel_norm");
  nlohmann::json j;
  j["mode"] = "iss";
  j["disturbance"] = to_string(sc.disturbance.kind);
  j["structured"] = sc.disturbance.structured;
  j["horizon"] = sc.horizon;
  j["dt"] = sc.dt;
  j["theta"] = sc.theta;
  j["iss_gain"] = gain;
  j["u_sup_bound"] = u_sup;
  j["u_sup_sampled"] = sig.is_zero() ? 0.0 : max_of(traj.trace("u_norm"));
  j["gain_times_u"] = gain * u_sup;
  j["initial_distance"] = dist.front();
  j["sup_distance"] = max_of(dist);
  j["final_distance"] = dist.back();
  j["kernel_initial"] = kern.front();
  j["kernel_final"] = kern.back();
  j["max_state_norm"] = max_of(traj.trace("state_norm"));
  j["final_state_norm"] = traj.trace("state_norm").back();
  if (sc.disturbance.structured) {
    const SaddleState ref = project_to_saddle_set(s0, sdl).point;
    const double v0 = v3_anchored(prog, s0, ref, sc.beta1);
    const double bound = ref.norm() + anchored_deviation_bound(c, v0, u_sup, sc.theta);
    j["anchor"] = {{"x", to_std(ref.x)}, {"z", to_std(ref.z)}};
    j["norm_bound"] = bound;
    j["norm_bounded"] = j["max_state_norm"].get<double>() <= bound;
  }
  j["constants"] = to_json(c);
  res.summary = j;
  res.exit_code = 0;
  return res;
}

ScenarioResult run_trigger(const Scenario& sc, const ConstrainedProgram& prog) {
  const SaddleState s0 = initial_state(sc, prog);
  const TriggerRun run = run_selftrig(prog, s0, sc.rule, sc.beta1, sc.max_steps, sc.stop_tol);
  const LyapConstants c = constants(prog, sc.beta1);
  ScenarioResult res;
  ensure_dir(sc.out);
  res.artifacts.push_back(write_text(sc.out / (prefix(sc) + "trigger.csv"),
                                     [&](std::ostream& os) { write_trigger_csv(os, run); }));
  res.artifacts.push_back(write_json(sc.out / (prefix(sc) + "constants.json"), to_json(c)));
  nlohmann::json j = trigger_summary(run);
  j["mode"] = "selftrig";
  j["stop_tol"] = sc.stop_tol;
  const auto k3 = run.steps_to(1e-3);
  j["steps_to_1e-3"] = k3 ? nlohmann::json(*k3) : nlohmann::json(nullptr);
  j["constants"] = to_json(c);
  res.summary = j;
  res.exit_code = run.converged ? 0 : 4;
  return res;
}

ScenarioResult run_compare(const Scenario& sc, const ConstrainedProgram& prog) {
  const SaddleState s0 = initial_state(sc, prog);
  const SaddleSet sdl = solve_saddle(prog);
  const double tol = sc.conv_tol;
  const TriggerRun run =
      run_selftrig(prog, s0, sc.rule, sc.beta1, sc.max_steps, std::min(tol, sc.stop_tol));
  const auto k_trig = run.steps_to(tol);
  const auto k_fixed = euler_iterations_to(prog, s0, sdl, false, 0.1, tol, sc.max_steps);
  const auto k_decay = euler_iterations_to(prog, s0, sdl, true, 0.0, tol, sc.max_steps);
  auto js = [](const std::optional<int>& k) {
    return k ? nlohmann::json(*k) : nlohmann::json(nullptr);
  };
  nlohmann::json j;
  j["mode"] = "compare";
  j["tolerance"] = tol;
  j["selftriggered"] = js(k_trig);
  j["euler_fixed_0.1"] = js(k_fixed);
  j["euler_decaying_1/k"] = js(k_decay);
  const bool faster = k_trig && (!k_fixed || *k_trig < *k_fixed) && (!k_decay || *k_trig < *k_decay);
  j["selftriggered_fastest"] = faster;
  ScenarioResult res;
  ensure_dir(sc.out);
  res.artifacts.push_back(write_text(sc.out / (prefix(sc) + "trigger.csv"),
                                     [&](std::ostream& os) { write_trigger_csv(os, run); }));
  res.summary = j;
  res.exit_code = faster ? 0 : 4;
  return res;
}

ScenarioResult run_certify(const Scenario& sc, const ConstrainedProgram& prog) {
  ScenarioResult res;
  res.summary = certify_report(prog, sc.seed, 1000, sc.beta1);
  res.summary["mode"] = "certify";
  res.exit_code = res.summary["all_suites_passed"].get<bool>() ? 0 : 2;
  return res;
}

}  // namespace

Scenario parse_scenario(std::istream& in, const std::string& source) {
  const auto doc = KvDocument::parse(in, source, [](const std::string&) { return false; });
  for (const auto& e : doc.entries()) {
    if (std::find_if(std::begin(kKeys), std::end(kKeys),
                     [&](const char* k) { return e.key == k; }) == std::end(kKeys)) {
      doc.fail(e, "unknown key '" + e.key + "'");
    }
  }
  Scenario sc;
  auto wrap = [&](const char* key, auto&& fn) {
    if (!doc.has(key)) return;
    try {
      fn();
    } catch (const ParseError&) {
      throw;
    } catch (const Error& err) {
      doc.fail(doc.require(key), err.what());
    }
  };
  if (doc.has("name")) sc.name = doc.string("name");
  sc.program = doc.string("program");
  wrap("mode", [&] { sc.mode = scenario_mode_from_string(doc.string("mode")); });
  if (doc.has("x0") || doc.has("y0") || doc.has("z0")) {
    SaddleState s;
    s.x = doc.has("x0") ? doc.vector("x0") : Vec(0);
    s.y = doc.has("y0") ? doc.vector("y0") : Vec(0);
    s.z = doc.has("z0") ? doc.vector("z0") : Vec(0);
    sc.s0 = s;
  }
  if (doc.has("horizon")) sc.horizon = doc.number("horizon");
  if (doc.has("dt")) sc.dt = doc.number("dt");
  if (doc.has("beta1")) sc.beta1 = doc.number("beta1");
  if (doc.has("theta")) sc.theta = doc.number("theta");
  wrap("disturbance.kind",
       [&] { sc.disturbance.kind = disturbance_kind_from_string(doc.string("disturbance.kind")); });
  if (doc.has("disturbance.amplitude")) sc.disturbance.amplitude = doc.vector("disturbance.amplitude");
  if (doc.has("disturbance.offset")) sc.disturbance.offset = doc.vector("disturbance.offset");
  if (doc.has("disturbance.rate")) sc.disturbance.rate = doc.number("disturbance.rate");
  if (doc.has("disturbance.freq")) sc.disturbance.freq = doc.number("disturbance.freq");
  if (doc.has("disturbance.structured")) {
    sc.disturbance.structured = doc.boolean("disturbance.structured");
  }
  if (doc.has("out")) sc.out = doc.string("out");
  if (doc.has("seed")) {
    const int seed = doc.integer("seed");
    if (seed < 0) doc.fail(doc.require("seed"), "seed must be nonnegative");
    sc.seed = static_cast<std::uint64_t>(seed);
  }
  wrap("rule", [&] { sc.rule = trigger_rule_from_string(doc.string("rule")); });
  if (doc.has("record_every")) sc.record_every = doc.integer("record_every");
  if (doc.has("max_steps")) sc.max_steps = doc.integer("max_steps");
  if (doc.has("stop_tol")) sc.stop_tol = doc.number("stop_tol");
  if (doc.has("conv_tol")) sc.conv_tol = doc.number("conv_tol");
  if (sc.mode != ScenarioMode::certify && !sc.s0) {
    throw ParseError(source, 0, "mode '" + std::string(to_string(sc.mode)) +
                                    "' requires an initial state (x0, and y0/z0 as needed)");
  }
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::config, "cannot open scenario file " + path.string());
  Scenario sc = parse_scenario(f, path.string());
  sc.base_dir = path.parent_path();
  return sc;
}

void write_scenario(std::ostream& os, const Scenario& sc) {
  os << "name " << sc.name << '\n';
  os << "program " << sc.program << '\n';
  os << "mode " << to_string(sc.mode) << '\n';
  if (sc.s0) {
    write_vec(os, "x0", sc.s0->x);
    if (sc.s0->y.size()) write_vec(os, "y0", sc.s0->y);
    if (sc.s0->z.size()) write_vec(os, "z0", sc.s0->z);
  }
  os << "horizon " << format_double(sc.horizon) << '\n';
  os << "dt " << format_double(sc.dt) << '\n';
  os << "beta1 " << format_double(sc.beta1) << '\n';
  os << "theta " << format_double(sc.theta) << '\n';
  os << "disturbance.kind " << to_string(sc.disturbance.kind) << '\n';
  if (sc.disturbance.amplitude.size()) write_vec(os, "disturbance.amplitude", sc.disturbance.amplitude);
  if (sc.disturbance.offset.size()) write_vec(os, "disturbance.offset", sc.disturbance.offset);
  os << "disturbance.rate " << format_double(sc.disturbance.rate) << '\n';
  os << "disturbance.freq " << format_double(sc.disturbance.freq) << '\n';
  os << "disturbance.structured " << (sc.disturbance.structured ? "true" : "false") << '\n';
  os << "out " << sc.out.string() << '\n';
  os << "seed " << sc.seed << '\n';
  os << "rule " << to_string(sc.rule) << '\n';
  os << "record_every " << sc.record_every << '\n';
  os << "max_steps " << sc.max_steps << '\n';
  os << "stop_tol " << format_double(sc.stop_tol) << '\n';
  os << "conv_tol " << format_double(sc.conv_tol) << '\n';
}

std::vector<std::string> builtin_scenario_names() {
  return {"example44", "iss_example", "selftrig_example"};
}

Scenario builtin_scenario(const std::string& name) {
  Scenario sc;
  sc.name = name;
  sc.program = "builtin:" + name;
  if (name == "example44") {
    sc.mode = ScenarioMode::simulate;
    sc.s0 = SaddleState(vec({1.7256, 0.1793}), vec({2.4696}), vec({0.3532}));
    sc.horizon = 200.0;
    sc.dt = 1e-3;
    sc.record_every = 100;
  } else if (name == "iss_example") {
    sc.mode = ScenarioMode::iss;
    sc.s0 = SaddleState(vec({-0.3254, -2.4925}), Vec(0), vec({-0.6435, -2.4234}));
    sc.horizon = 50.0;
    sc.dt = 1e-3;
    sc.record_every = 10;
    set_default_disturbance(sc, "exp_decay", builtin::program(name));
  } else if (name == "selftrig_example") {
    sc.mode = ScenarioMode::selftrig;
    sc.s0 = SaddleState(vec({0.6210, 3.9201, -4.0817}), Vec(0), vec({2.0675}));
    sc.beta1 = 0.1;
    sc.rule = TriggerRule::exact;
    sc.stop_tol = 1e-4;
  } else {
    throw Error(ErrorKind::config, "unknown builtin scenario '" + name + "'");
  }
  return sc;
}

Scenario resolve_scenario(const std::string& ref) {
  const auto names = builtin_scenario_names();
  if (std::find(names.begin(), names.end(), ref) != names.end()) return builtin_scenario(ref);
  return load_scenario(ref);
}

ConstrainedProgram scenario_program(const Scenario& sc) {
  const std::string tag = "builtin:";
  if (sc.program.rfind(tag, 0) == 0) return builtin::program(sc.program.substr(tag.size()));
  std::filesystem::path p = sc.program;
  if (p.is_relative() && !sc.base_dir.empty()) p = sc.base_dir / p;
  return load_program(p);
}

void set_default_disturbance(Scenario& sc, const std::string& kind, const ConstrainedProgram& prog) {
  DisturbanceSpec d;
  const Eigen::Index len = prog.n + prog.m();
  if (kind == "zero") {
    d.kind = DisturbanceKind::zero;
  } else if (kind == "exp_decay") {
    d.kind = DisturbanceKind::exp_decay;
    d.amplitude = Vec::Ones(len);
    d.rate = 0.5;
  } else if (kind == "const_plus_sin" || kind == "structured") {
    d.structured = kind == "structured";
    const Eigen::Index l = d.structured ? 2 * prog.n : len;
    d.kind = DisturbanceKind::const_plus_sin;
    d.offset = Vec::Constant(l, 0.5);
    d.amplitude = Vec::Constant(l, 0.2);
    d.freq = 2.0;
  } else {
    throw Error(ErrorKind::config,
                "unknown disturbance '" + kind + "' (zero|exp_decay|const_plus_sin|structured)");
  }
  sc.disturbance = d;
}

ScenarioResult run_scenario(const Scenario& sc) {
  const ConstrainedProgram prog = scenario_program(sc);
  ScenarioResult res;
  switch (sc.mode) {
    case ScenarioMode::simulate:
      res = run_simulate(sc, prog);
      break;
    case ScenarioMode::iss:
      res = run_iss(sc, prog);
      break;
    case ScenarioMode::selftrig:
      res = run_trigger(sc, prog);
      break;
    case ScenarioMode::compare:
      res = run_compare(sc, prog);
      break;
    case ScenarioMode::certify:
      res = run_certify(sc, prog);
      break;
  }
  res.summary["name"] = sc.name;
  res.summary["program"] = sc.program;
  res.summary["seed"] = sc.seed;
  res.summary["exit_code"] = res.exit_code;
  ensure_dir(sc.out);
  res.artifacts.push_back(write_json(sc.out / (prefix(sc) + "summary.json"), res.summary));
  return res;
}

nlohmann::json certify_report(const ConstrainedProgram& prog, std::uint64_t seed, int trials,
                              double beta1) {
  nlohmann::json j;
  j["program"] = prog.name;
  bool all = true;
  const SaddleSet sdl = solve_saddle(prog);
  j["saddle_set"] = to_json(sdl);
  const SaddleState anchor = sdl.anchors().front();
  const double radius = 0.4;
  const auto t43 = check_theorem43(prog, anchor, radius, 200, seed);
  j["theorem43"] = {{"radius", radius},          {"holds_i", t43.holds_i},
                    {"holds_ii", t43.holds_ii},  {"neither", t43.neither()},
                    {"samples", t43.samples},    {"skipped", t43.skipped}};
  const bool strongly_convex = prog.curvature && prog.curvature->m_lb > 0.0;
  if (prog.m() > 0) {
    const double ls = smallest_nonzero_eigenvalue(prog.A * prog.A.transpose());
    j["lambda_s"] = std::isfinite(ls) ? nlohmann::json(ls) : nlohmann::json(nullptr);
  }
  auto suite_json = [](const SuiteResult& r) {
    return nlohmann::json{{"trials", r.trials}, {"passed", r.passed}, {"worst_margin", r.worst_margin}};
  };
  const auto a1 = lemma_a1_suite(trials, seed);
  j["lemma_a1"] = suite_json(a1);
  all = all && a1.all_passed();
  if (strongly_convex) {
    const LyapConstants c = constants(prog, beta1);
    j["constants"] = to_json(c);
    if (prog.p() == 0) {
      const auto a3 = prop_a3_suite(prog, sdl, c, trials, seed + 1);
      j["prop_a3"] = suite_json(a3);
      all = all && a3.all_passed();
    }
  } else {
    j["constants"] = nullptr;
    j["constants_note"] = "no strong-convexity constants declared";
  }
  if (prog.p() == 0 && prog.m() > 0) {
    const auto a2 = lemma_a2_suite(prog, sdl, trials, seed + 2);
    j["lemma_a2"] = suite_json(a2);
    all = all && a2.all_passed();
  }
  j["all_suites_passed"] = all;
  return j;
}

int exit_code_for(const std::exception& e) {
  const auto* err = dynamic_cast<const Error*>(&e);
  if (!err) return 4;
  switch (err->kind()) {
    case ErrorKind::hypothesis:
    case ErrorKind::misuse:
    case ErrorKind::domain:
    case ErrorKind::non_smooth:
      return 2;
    case ErrorKind::parse:
    case ErrorKind::config:
    case ErrorKind::dimension_mismatch:
      return 3;
    case ErrorKind::convergence:
    case ErrorKind::integration:
      return 4;
  }
  return 4;
}

}  // namespace saddleflow
