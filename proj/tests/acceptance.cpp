// Acceptance suite: one line per criterion. `acceptance` runs all of them,
// `acceptance N` runs criterion N only.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>

#include "fd_suite.hpp"
#include "saddleflow/integrate.hpp"
#include "saddleflow/lyapunov.hpp"
#include "saddleflow/saddle.hpp"
#include "saddleflow/scenario.hpp"
#include "saddleflow/selftrig.hpp"
#include "saddleflow/suites.hpp"

using namespace saddleflow;
namespace fs = std::filesystem;

namespace {

Vec vec(std::initializer_list<double> v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

fs::path out_dir(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("saddleflow_acceptance_" + tag);
  fs::create_directories(p);
  return p;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Verdict criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  const ConstrainedProgram prog = builtin::example44();
  const SaddleState s0(vec({1.7256, 0.1793}), vec({2.4696}), vec({0.3532}));
  const SaddleState origin = SaddleState::zeros(prog);
  SimulationOptions opt;
  opt.horizon = 200.0;
  opt.dt = 1e-3;
  opt.traces = {{"norm", [](const SaddleState& s) { return s.norm(); }},
                {"V1", [&](const SaddleState& s) { return v1(s, origin); }}};
  const Trajectory tr = simulate(prog, s0, opt);
  const auto& nrm = tr.trace("norm");
  const auto& v = tr.trace("V1");
  double min_norm = nrm.front(), worst_inc = 0.0;
  for (std::size_t k = 0; k < nrm.size(); ++k) {
    min_norm = std::min(min_norm, nrm[k]);
    if (k > 0) worst_inc = std::max(worst_inc, v[k] - v[k - 1]);
  }
  const double secs = seconds_since(t0);
  Verdict r;
  r.pass = min_norm <= 1e-3 && worst_inc <= 1e-8 && secs <= 10.0;
  r.detail = fmt("min ||s(t)|| over [0,200] = %.6g (need <= 1e-3), max V1 step increase = %.3g, %.2f s",
                 min_norm, worst_inc, secs);
  return r;
}

Verdict criterion2() {
  const auto t0 = std::chrono::steady_clock::now();
  const ConstrainedProgram prog = builtin::iss_example();
  auto run = [&](const std::string& kind) {
    Scenario sc = builtin_scenario("iss_example");
    sc.name = "iss_" + kind;
    sc.out = out_dir("c2");
    set_default_disturbance(sc, kind, prog);
    return run_scenario(sc).summary;
  };
  const auto a = run("exp_decay");
  const auto b = run("const_plus_sin");
  const auto c = run("structured");
  const double secs = seconds_since(t0);
  const bool pa = a["final_distance"].get<double>() <= 1e-3;
  const bool pb = b["sup_distance"].get<double>() <= b["gain_times_u"].get<double>() &&
                  b["kernel_final"].get<double>() >= 10.0 * b["kernel_initial"].get<double>();
  const bool pc = c["norm_bounded"].get<bool>();
  Verdict r;
  r.pass = pa && pb && pc && secs <= 30.0;
  std::ostringstream os;
  os << fmt("(a) final distance %.3g; ", a["final_distance"].get<double>())
     << fmt("(b) sup distance %.4g <= %.4g, kernel part %.4g -> %.4g; ",
            b["sup_distance"].get<double>(), b["gain_times_u"].get<double>(),
            b["kernel_initial"].get<double>(), b["kernel_final"].get<double>())
     << fmt("(c) max norm %.4g <= %.4g; ", c["max_state_norm"].get<double>(),
            c["norm_bound"].get<double>())
     << fmt("%.2f s", secs);
  r.detail = os.str();
  return r;
}

Verdict criterion3() {
  const auto t0 = std::chrono::steady_clock::now();
  const ConstrainedProgram prog = builtin::selftrig_example();
  const SaddleState s0(vec({0.6210, 3.9201, -4.0817}), Vec(0), vec({2.0675}));
  const LyapConstants c = constants(prog, 0.1);
  const TriggerRun run = run_selftrig(prog, s0, TriggerRule::exact, 0.1);
  const Vec target = (Vec(4) << 1.0 / 3, 1.0 / 3, 1.0 / 3, -2.0 / 3).finished();
  const double dist = (run.states.back().stacked() - target).norm();
  bool decreasing = true;
  for (std::size_t k = 1; k < run.v3_trace.size(); ++k) {
    decreasing = decreasing && run.v3_trace[k] < run.v3_trace[k - 1];
  }
  const double secs = seconds_since(t0);
  Verdict r;
  r.pass = std::abs(c.beta2 - 1.6) <= 1e-12 && dist <= 1e-4 && decreasing &&
           run.dwell_bound_certified > 0.0 && run.dwell_min_observed >= run.dwell_bound_certified &&
           secs <= 10.0;
  r.detail = fmt("%.0f steps, final distance %.3g, min dwell %.6g >= bound %.6g", run.steps, dist,
                 run.dwell_min_observed, run.dwell_bound_certified) +
             (decreasing ? ", V3 strictly decreasing" : ", V3 NOT strictly decreasing") +
             fmt(", %.2f s", secs);
  return r;
}

Verdict criterion4() {
  const ConstrainedProgram prog = builtin::selftrig_example();
  const SaddleState s0(vec({0.6210, 3.9201, -4.0817}), Vec(0), vec({2.0675}));
  const SaddleSet sdl = solve_saddle(prog);
  const TriggerRun run = run_selftrig(prog, s0, TriggerRule::exact, 0.1, 100000, 1e-3);
  const auto k_trig = run.steps_to(1e-3);
  const auto k_fixed = euler_iterations_to(prog, s0, sdl, false, 0.1, 1e-3);
  const auto k_decay = euler_iterations_to(prog, s0, sdl, true, 0.0, 1e-3);
  Verdict r;
  r.pass = k_trig && (!k_fixed || *k_trig < *k_fixed) && (!k_decay || *k_trig < *k_decay);
  auto show = [](const std::optional<int>& k) { return k ? std::to_string(*k) : std::string("never"); };
  r.detail = "iterations to 1e-3: self-triggered " + show(k_trig) + ", Euler dt=0.1 " +
             show(k_fixed) + ", Euler dt=1/k " + show(k_decay);
  return r;
}

Verdict criterion5() {
  oracle::Gen gen(5);
  const double pairs[3][2] = {{0.5, 2.0}, {1.0, 1.0}, {2.0, 10.0}};
  auto draw = [&](int n, double lo, double hi) {
    const Mat U = gen.orthogonal(n);
    Vec d(n);
    for (int i = 0; i < n; ++i) d(i) = gen.uniform(lo, hi);
    d(0) = lo;
    if (n > 1) d(n - 1) = hi;
    const Mat B = U * d.asDiagonal() * U.transpose();
    return Mat(0.5 * (B + B.transpose()));
  };
  int passed = 0;
  double worst = 1e300;
  for (int t = 0; t < 1000; ++t) {
    const double m = pairs[t % 3][0], M = pairs[t % 3][1];
    const int n = gen.integer(1, 6);
    const double b1 = std::pow(10.0, gen.uniform(-2.0, 1.0));
    const Mat B1 = draw(n, m, M), B2 = draw(n, m, M);
    const double b2 = 4.0 * b1 * std::pow(M, 4) / (m * m);
    Mat W(2 * n, 2 * n);
    W << b1 * B1 * B2 * B1 + b2 * B1, b1 * B1 * B2, b1 * B2 * B1, b1 * B2;
    const double lam = std::min(b1 * m / 2.0, b1 * m * m * m);
    const double eig = Eigen::SelfAdjointEigenSolver<Mat>(0.5 * (W + W.transpose())).eigenvalues()(0);
    const LemmaA1 lib = lemma_a1_matrix(B1, B2, b1, m, M);
    const bool agree = (lib.W - W).norm() <= 1e-12 * std::max(1.0, W.norm()) &&
                       std::abs(lib.lambda_m - lam) <= 1e-15 * lam;
    worst = std::min(worst, (eig - lam) / lam);
    if (agree && eig > lam - 1e-10) ++passed;
  }
  Verdict r;
  r.pass = passed == 1000;
  r.detail = fmt("%.0f/1000 draws with min eig(W) > lambda_m, worst relative margin %.4g", passed, worst);
  return r;
}

Verdict criterion6() {
  oracle::Gen gen(6);
  std::vector<ConstrainedProgram> progs = {builtin::iss_example()};
  for (int i = 0; i < 10; ++i) {
    const int n = gen.integer(2, 6);
    progs.push_back(gen.qp(n, gen.integer(1, n - 1)));
  }
  int trials = 0, passed = 0;
  double worst = 1e300;
  for (const auto& prog : progs) {
    const SaddleSet sdl = solve_saddle(prog);
    const LyapConstants c = constants(prog, 0.1);
    for (int t = 0; t < 1000; ++t) {
      const SaddleState s1 = gen.state(prog.n, 0, prog.m(), 3.0);
      const double h = std::pow(10.0, gen.uniform(-6.0, 1.0));
      const SaddleState dir = gen.state(prog.n, 0, prog.m(), 1.0);
      const SaddleState s2 =
          SaddleState::unstack(s1.stacked() + h * dir.stacked(), prog.n, 0, prog.m());
      const auto chk = grad_v3_lipschitz_check(prog, sdl, s1, s2, c);
      ++trials;
      worst = std::min(worst, chk.rhs - chk.lhs);
      if (chk.lhs <= chk.rhs) ++passed;
    }
  }
  Verdict r;
  r.pass = passed == trials;
  r.detail = fmt("%.0f/%.0f pairs (ISS example + 10 random QPs), worst margin %.4g", passed, trials, worst);
  return r;
}

Verdict criterion7() {
  const ConstrainedProgram prog = builtin::iss_example();
  const SaddleSet sdl = solve_saddle(prog);
  const Vec ev = Eigen::SelfAdjointEigenSolver<Mat>(prog.A * prog.A.transpose()).eigenvalues();
  double ls = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > 1e-10) {
      ls = ev(i);
      break;
    }
  }
  oracle::Gen gen(7);
  int passed = 0;
  double worst_orth = 0.0, worst_margin = 1e300;
  for (int t = 0; t < 500; ++t) {
    const SaddleState s = gen.state(prog.n, 0, prog.m(), 3.0);
    const auto pr = project_to_saddle_set(s, sdl);
    const Vec w = s.z - pr.point.z;
    const Mat K = sdl.kernel_basis;
    const double orth = (K.transpose() * w).norm();
    const double lhs = (prog.A.transpose() * w).squaredNorm();
    const double rhs = 4.0 * w.squaredNorm();
    worst_orth = std::max(worst_orth, orth);
    worst_margin = std::min(worst_margin, lhs - rhs);
    if (orth <= 1e-12 && lhs >= rhs * (1.0 - 1e-12)) ++passed;
  }
  Verdict r;
  r.pass = std::abs(ls - 4.0) <= 1e-12 && passed == 500;
  r.detail = fmt("lambda_s = %.12g, %.0f/500 states, max kernel component %.3g, worst margin %.3g", ls,
                 passed, worst_orth, worst_margin);
  return r;
}

Verdict criterion8() {
  oracle::Gen gen(8);
  int passed = 0;
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const int n = gen.integer(1, 8);
    const int m = gen.integer(0, std::min(n, 4));
    const ConstrainedProgram prog = gen.qp(n, m);
    const SaddleSet sdl = solve_saddle(prog);
    SimulationOptions opt;
    opt.horizon = 400.0;
    opt.dt = 0.02;
    opt.record_every = 1 << 30;
    const Trajectory tr = simulate(prog, gen.state(n, 0, m), opt);
    const double err = (tr.final_state().stacked() - sdl.point.stacked()).norm();
    worst = std::max(worst, err);
    if (err <= 1e-5 && check_saddle(prog, sdl.point).ok) ++passed;
  }
  Verdict r;
  r.pass = passed == 50;
  r.detail = fmt("%.0f/50 QPs, worst |simulate(400) - solve_saddle| = %.3g", passed, worst);
  return r;
}

Verdict criterion9() {
  oracle::Gen gen(9);
  int passed = 0;
  double worst_g = 0.0, worst_h = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto [prog, s] = oracle::fd_draw(gen, i);
    const auto e = oracle::fd_errors(prog, s);
    worst_g = std::max(worst_g, e.grad);
    worst_h = std::max(worst_h, e.hess);
    if (e.grad <= 1e-6 && e.hess <= 1e-5) ++passed;
  }
  Verdict r;
  r.pass = passed == 100;
  r.detail = fmt("%.0f/100 draws, worst gradient error %.3g, worst Hessian error %.3g", passed,
                 worst_g, worst_h);
  return r;
}

Verdict criterion10() {
  const ConstrainedProgram prog = builtin::iss_example();
  const SaddleSet sdl = solve_saddle(prog);
  const LyapConstants c = constants(prog, 0.1);
  const double theta = 0.5;
  const double gain = iss_gain(c, theta);
  oracle::Gen gen(10);
  int sandwich = 0, decrease = 0;
  for (int t = 0; t < 1000; ++t) {
    const SaddleState s = gen.state(prog.n, 0, prog.m(), 3.0);
    const double d = project_to_saddle_set(s, sdl).distance;
    const double v = v3(prog, s, sdl, c.beta1);
    if (c.alpha1 * d * d <= v * (1 + 1e-12) && v <= c.alpha2 * d * d * (1 + 1e-12)) ++sandwich;
    Vec u = gen.vec(prog.n + prog.m());
    u *= gen.uniform(0.0, 1.0) * (d / gain) / u.norm();
    const DisturbanceSample us{u.head(prog.n), u.tail(prog.m())};
    const double lie = v3_lie_derivative_disturbed(prog, sdl, s, us, c.beta1);
    if (lie <= -(1.0 - theta) * c.lambda_m_tilde * d * d) ++decrease;
  }
  Verdict r;
  r.pass = sandwich == 1000 && decrease == 1000;
  r.detail = fmt("sandwich %.0f/1000, ISS decrease %.0f/1000 (alpha1 %.4g, alpha2 %.4g)", sandwich,
                 decrease, c.alpha1, c.alpha2);
  return r;
}

const std::function<Verdict()> kCriteria[] = {criterion1, criterion2, criterion3, criterion4,
                                               criterion5, criterion6, criterion7, criterion8,
                                               criterion9, criterion10};

}  // namespace

int main(int argc, char** argv) {
  int first = 1, last = 10;
  if (argc > 1) {
    first = last = std::atoi(argv[1]);
    if (first < 1 || first > 10) {
      std::fprintf(stderr, "usage: acceptance [1-10]\n");
      return 2;
    }
  }
  int failures = 0;
  for (int i = first; i <= last; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = kCriteria[i - 1]();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("error: ") + e.what();
    }
    std::printf("[%s] criterion %d: %s (%.2f s)\n", v.pass ? "PASS" : "FAIL", i, v.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
    if (!v.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
