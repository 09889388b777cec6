#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "saddleflow/error.hpp"
#include "saddleflow/problem.hpp"

using namespace saddleflow;

namespace {

Vec v(std::initializer_list<double> xs) {
  Vec out(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) out(i++) = x;
  return out;
}

}  // namespace

TEST_CASE("lagrangian values at the worked points") {
  const auto st = builtin::selftrig_example();
  CHECK(lagrangian_value(st, SaddleState(Vec::Constant(3, 1.0 / 3.0), Vec(0), v({-2.0 / 3.0}))) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  const auto e44 = builtin::example44();
  CHECK(lagrangian_value(e44, SaddleState::zeros(e44)) == 0.0);
  const auto iss = builtin::iss_example();
  CHECK(lagrangian_value(iss, SaddleState(v({1, 1}), Vec(0), v({0, 2}))) == doctest::Approx(2.0));
}

TEST_CASE("dimension mismatch names the block") {
  const auto iss = builtin::iss_example();
  try {
    lagrangian_value(iss, SaddleState(v({1, 1}), Vec(0), v({0})));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::dimension_mismatch);
    CHECK(std::string(e.what()).find("z") != std::string::npos);
  }
}

TEST_CASE("gradient blocks: ISS example at its saddle point vanish") {
  const auto iss = builtin::iss_example();
  const SaddleState s(v({1, 1}), Vec(0), v({0, 2}));
  const auto g = grad_blocks(iss, s);
  // Finite-difference oracle of F in x.
  const Vec fd = oracle::central_gradient(
      [&](const Vec& x) { return lagrangian_value(iss, SaddleState(x, Vec(0), s.z)); }, s.x);
  CHECK((g.gx - fd).norm() < 1e-8);
  CHECK(g.gx.norm() < 1e-14);
  CHECK(g.gz.norm() < 1e-14);
}

TEST_CASE("example44 gradient agrees across the two branches at radius 1/2") {
  const auto e44 = builtin::example44();
  const Vec x = v({0.3, 0.4});
  CHECK((objective_gradient(e44, x) - x).norm() < 1e-15);
  const Vec inside = x * (1.0 - 1e-9), outside = x * (1.0 + 1e-9);
  CHECK((objective_gradient(e44, inside) - objective_gradient(e44, outside)).norm() < 1e-8);
}

TEST_CASE("Hessian blocks of the quadratic builtins") {
  const auto iss = builtin::iss_example();
  const auto H = hessian_blocks(iss, SaddleState(v({3, -1}), Vec(0), v({0.5, 2})));
  CHECK((H.Fxx - 2.0 * Mat::Identity(2, 2)).norm() == 0.0);
  CHECK((H.Fxz - iss.A.transpose()).norm() == 0.0);
  CHECK(H.dual_block().norm() == 0.0);
  const auto st = builtin::selftrig_example();
  CHECK((hessian_blocks(st, SaddleState::zeros(st)).Fxx - 2.0 * Mat::Identity(3, 3)).norm() == 0.0);
}

TEST_CASE("example44 Hessian errors exactly on the non-smooth locus") {
  const auto e44 = builtin::example44();
  const Vec x = v({0.3, 0.4});
  CHECK_FALSE(objective_smooth_at(e44, x));
  try {
    objective_hessian(e44, x);
    FAIL("expected non-smooth error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::non_smooth);
  }
  CHECK(objective_smooth_at(e44, v({0.1, 0.1})));
  CHECK(objective_smooth_at(e44, v({1.0, 0.0})));
  CHECK_NOTHROW(objective_hessian(e44, v({1.0, 0.0})));
}

TEST_CASE("declared curvature holds at 1000 random points for every builtin with constants") {
  oracle::Gen gen(7);
  for (const auto& name : builtin::program_names()) {
    const auto prog = builtin::program(name);
    if (!prog.curvature) continue;
    for (int k = 0; k < 1000; ++k) {
      const Mat H = objective_hessian(prog, gen.vec(prog.n, 5.0));
      const Eigen::SelfAdjointEigenSolver<Mat> es(H);
      CHECK(es.eigenvalues().minCoeff() >= prog.curvature->m_lb - 1e-12);
      CHECK(es.eigenvalues().maxCoeff() <= prog.curvature->M_ub + 1e-12);
    }
  }
}

TEST_CASE("convex-concave spot check on builtins") {
  oracle::Gen gen(11);
  for (const auto& name : builtin::program_names()) {
    const auto prog = builtin::program(name);
    for (int k = 0; k < 200; ++k) {
      const auto s = gen.state(prog.n, prog.p(), prog.m());
      if (!objective_smooth_at(prog, s.x)) continue;
      const auto H = hessian_blocks(prog, s);
      CHECK(Eigen::SelfAdjointEigenSolver<Mat>(H.Fxx).eigenvalues().minCoeff() >= -1e-12);
      const Mat D = H.dual_block();
      if (D.size()) CHECK(Eigen::SelfAdjointEigenSolver<Mat>(D).eigenvalues().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("program validation") {
  auto p = builtin::iss_example();
  p.b = v({1.0});
  CHECK_THROWS_AS(p.validate(), Error);
  auto q = builtin::iss_example();
  q.curvature->M_ub = 1.0;
  CHECK_THROWS_AS(q.validate(), Error);
  const auto e44 = builtin::example44();
  try {
    e44.require_curvature("test");
    FAIL("expected a hypothesis error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::hypothesis);
  }
}

TEST_CASE("logcosh builtin matches finite differences") {
  ConstrainedProgram p;
  p.name = "lc";
  p.n = 3;
  p.objective = BuiltinObjective{"logcosh", Mat::Identity(3, 3), v({0.5, -1, 0})};
  p.A = Mat(0, 3);
  p.b = Vec(0);
  p.validate();
  const Vec x = v({0.3, -2.0, 1.1});
  const Vec fd = oracle::central_gradient([&](const Vec& y) { return objective_value(p, y); }, x);
  CHECK(oracle::rel_err(objective_gradient(p, x), fd) < 1e-8);
  const Mat fdH = oracle::central_jacobian([&](const Vec& y) { return objective_gradient(p, y); }, x);
  CHECK(oracle::rel_err(objective_hessian(p, x), fdH) < 1e-8);
}
