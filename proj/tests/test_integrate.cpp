#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "saddleflow/error.hpp"
#include "saddleflow/integrate.hpp"
#include "saddleflow/lyapunov.hpp"
#include "saddleflow/saddle.hpp"

using namespace saddleflow;

namespace {

Vec v(std::initializer_list<double> xs) {
  Vec out(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) out(i++) = x;
  return out;
}

const SaddleState kE44Start(v({1.7256, 0.1793}), v({2.4696}), v({0.3532}));

}  // namespace

TEST_CASE("active set") {
  const auto e44 = builtin::example44();
  CHECK(active_set(e44, SaddleState(v({0.2, 0}), v({0.3}), v({0}))).indices.empty());
  CHECK(active_set(e44, SaddleState(v({0.2, 0}), v({0.0}), v({0}))).indices == std::vector<int>{0});
  // g(x) = 0 exactly: strict inequality excludes the index.
  CHECK(active_set(e44, SaddleState(v({-1.0, 0}), v({0.0}), v({0}))).indices.empty());
}

TEST_CASE("saddle initial state gives a constant trajectory") {
  const auto st = builtin::selftrig_example();
  const auto sdl = solve_saddle(st);
  SimulationOptions o;
  o.field = FieldKind::unprojected;
  o.horizon = 1.0;
  o.dt = 0.01;
  const auto traj = simulate(st, sdl.point, o);
  CHECK((traj.final_state().stacked() - sdl.point.stacked()).norm() < 1e-14);
}

TEST_CASE("time grid, y invariance and events on example44") {
  const auto e44 = builtin::example44();
  SimulationOptions o;
  o.horizon = 20.0;
  o.dt = 1e-3;
  o.record_every = 10;
  o.traces.push_back({"V1", [](const SaddleState& s) { return 0.5 * s.stacked().squaredNorm(); }});
  const auto traj = simulate(e44, kE44Start, o);
  CHECK(traj.times.front() == 0.0);
  CHECK(traj.times.back() == 20.0);
  for (std::size_t k = 1; k < traj.times.size(); ++k) CHECK(traj.times[k] > traj.times[k - 1]);
  for (const auto& s : traj.states) CHECK(s.y.minCoeff() >= 0.0);
  CHECK(traj.trace("V1").size() == traj.times.size());
  // y hits zero and stays there: at least one event into J = {1}.
  REQUIRE_FALSE(traj.events.empty());
  CHECK(traj.events.front().new_set.indices == std::vector<int>{0});
  const auto& V1 = traj.trace("V1");
  for (std::size_t k = 1; k < V1.size(); ++k) CHECK(V1[k] - V1[k - 1] <= 1e-8);
}

TEST_CASE("example44 converges below 1e-3 eventually (algebraic rate)") {
  // Near the origin f is quartic, so decay is algebraic; a long horizon with a
  // coarse step is needed.
  const auto e44 = builtin::example44();
  SimulationOptions o;
  o.horizon = 4e5;
  o.dt = 0.25;
  o.record_every = 100000;
  const auto traj = simulate(e44, kE44Start, o);
  CHECK(traj.final_state().norm() < 1e-3);
}

TEST_CASE("RK4 Richardson check: halving dt shrinks the error by about 16") {
  oracle::Gen gen(21);
  const auto p = gen.qp(3, 1);
  const auto s0 = gen.state(3, 0, 1);
  auto final_at = [&](double dt) {
    SimulationOptions o;
    o.field = FieldKind::unprojected;
    o.horizon = 2.0;
    o.dt = dt;
    return simulate(p, s0, o).final_state().stacked();
  };
  const Vec a = final_at(0.04), b = final_at(0.02), c = final_at(0.01);
  const double ratio = (a - b).norm() / (b - c).norm();
  CHECK(ratio > 12.0);
  CHECK(ratio < 20.0);
}

TEST_CASE("V2 decreases between events along a projected trajectory") {
  oracle::Gen gen(8);
  const auto p = gen.qp_with_ineq(3, 2, 1);
  const auto sdl = solve_saddle(p);
  SimulationOptions o;
  o.horizon = 10.0;
  o.dt = 1e-3;
  o.traces.push_back({"V2", [&](const SaddleState& s) { return v2(p, s, sdl); }});
  const auto traj = simulate(p, gen.state(3, 2, 1), o);
  const auto& V2 = traj.trace("V2");
  for (std::size_t k = 1; k < V2.size(); ++k) CHECK(V2[k] <= V2[k - 1] + 1e-8);
}

TEST_CASE("bad options and blow-up") {
  const auto e44 = builtin::example44();
  SimulationOptions o;
  o.dt = 0.0;
  CHECK_THROWS_AS(simulate(e44, kE44Start, o), Error);
  o.dt = 1.0;
  o.horizon = 0.5;
  CHECK_THROWS_AS(simulate(e44, kE44Start, o), Error);

  // Constant disturbance along ker(A^T) drives z off to infinity.
  const auto iss = builtin::iss_example();
  SimulationOptions b;
  b.field = FieldKind::unprojected;
  b.horizon = 100.0;
  b.dt = 0.01;
  b.blowup = 50.0;
  DisturbanceSpec d;
  d.kind = DisturbanceKind::const_plus_sin;
  d.offset = v({0, 0, 1, 1});
  d.amplitude = Vec::Zero(4);
  b.disturbance = make_disturbance(d, iss);
  try {
    simulate(iss, SaddleState(v({1, 1}), Vec(0), v({0, 2})), b);
    FAIL("expected blow-up");
  } catch (const IntegrationError& e) {
    CHECK(e.last_valid_time() > 10.0);
    CHECK(e.last_valid_time() < 100.0);
  }
}

TEST_CASE("CSV and events output") {
  const auto e44 = builtin::example44();
  SimulationOptions o;
  o.horizon = 5.0;
  o.dt = 0.01;
  o.record_every = 100;
  o.traces.push_back({"V1", [](const SaddleState& s) { return 0.5 * s.stacked().squaredNorm(); }});
  const auto traj = simulate(e44, kE44Start, o);
  std::ostringstream csv, ev;
  write_trajectory_csv(csv, traj);
  write_events_jsonl(ev, traj);
  CHECK(csv.str().rfind("t,x_1,x_2,y_1,z_1,V1\n", 0) == 0);
  CHECK(ev.str().find("\"new\":[1]") != std::string::npos);
}
