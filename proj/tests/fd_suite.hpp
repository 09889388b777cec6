// Finite-difference checks of the gradient and Hessian blocks, shared by the
// property tests and the acceptance binary.
#pragma once

#include <algorithm>
#include <utility>

#include "oracles.hpp"

namespace oracle {

struct FdErrors {
  double grad = 0.0;
  double hess = 0.0;
};

inline FdErrors fd_errors(const ConstrainedProgram& prog, const SaddleState& s) {
  using saddleflow::grad_blocks;
  using saddleflow::lagrangian_value;
  const auto g = grad_blocks(prog, s);
  const auto H = saddleflow::hessian_blocks(prog, s);
  FdErrors e;

  auto at_x = [&](const Vec& x) { return SaddleState{x, s.y, s.z}; };
  auto at_y = [&](const Vec& y) { return SaddleState{s.x, y, s.z}; };
  auto at_z = [&](const Vec& z) { return SaddleState{s.x, s.y, z}; };

  e.grad = std::max({
      rel_err(g.gx, central_gradient([&](const Vec& x) { return lagrangian_value(prog, at_x(x)); }, s.x)),
      rel_err(g.gy, central_gradient([&](const Vec& y) { return lagrangian_value(prog, at_y(y)); }, s.y)),
      rel_err(g.gz, central_gradient([&](const Vec& z) { return lagrangian_value(prog, at_z(z)); }, s.z)),
  });

  auto gx = [&](const SaddleState& t) { return grad_blocks(prog, t).gx; };
  auto gy = [&](const SaddleState& t) { return grad_blocks(prog, t).gy; };
  auto gz = [&](const SaddleState& t) { return grad_blocks(prog, t).gz; };
  const double hx = std::max({
      rel_err(H.Fxx, central_jacobian([&](const Vec& x) { return gx(at_x(x)); }, s.x)),
      rel_err(H.Fxy, central_jacobian([&](const Vec& y) { return gx(at_y(y)); }, s.y)),
      rel_err(H.Fxz, central_jacobian([&](const Vec& z) { return gx(at_z(z)); }, s.z)),
  });
  const double hd = std::max({
      rel_err(H.Fyy, central_jacobian([&](const Vec& y) { return gy(at_y(y)); }, s.y)),
      rel_err(H.Fyz, central_jacobian([&](const Vec& z) { return gy(at_z(z)); }, s.z)),
      rel_err(H.Fzy, central_jacobian([&](const Vec& y) { return gz(at_y(y)); }, s.y)),
      rel_err(H.Fzz, central_jacobian([&](const Vec& z) { return gz(at_z(z)); }, s.z)),
  });
  e.hess = std::max(hx, hd);
  return e;
}

/// Draw i of the finite-difference suite: random QPs with inequalities, plus
/// the non-quadratic builtins away from their non-smooth locus.
inline std::pair<ConstrainedProgram, SaddleState> fd_draw(Gen& gen, int i) {
  if (i % 5 == 4) {
    ConstrainedProgram p = saddleflow::builtin::example44();
    SaddleState s = gen.state(p.n, p.p(), p.m(), 1.0);
    while (std::abs(s.x.norm() - 0.5) < 1e-2) s.x = gen.vec(p.n);
    return {p, s};
  }
  const int n = gen.integer(1, 6);
  const int p = gen.integer(0, 3);
  const int m = gen.integer(0, std::min(n, 3));
  ConstrainedProgram prog = gen.qp_with_ineq(n, p, m);
  return {prog, gen.state(n, p, m)};
}

}  // namespace oracle
