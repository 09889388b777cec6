#include "saddleflow/suites.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "saddleflow/error.hpp"

namespace saddleflow {

Mat random_symmetric_in_range(std::mt19937_64& rng, int n, double lo, double hi) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif(lo, hi);
  Mat G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) G(i, j) = normal(rng);
  const Mat Q = Eigen::HouseholderQR<Mat>(G).householderQ();
  Vec d(n);
  for (int i = 0; i < n; ++i) d(i) = unif(rng);
  if (n >= 2) {
    d(0) = lo;
    d(n - 1) = hi;
  }
  Mat B = Q * d.asDiagonal() * Q.transpose();
  return 0.5 * (B + B.transpose());
}

SaddleState random_state(std::mt19937_64& rng, int n, int p, int m, double scale) {
  std::normal_distribution<double> normal(0.0, scale);
  SaddleState s{Vec(n), Vec(p), Vec(m)};
  for (int i = 0; i < n; ++i) s.x(i) = normal(rng);
  for (int i = 0; i < p; ++i) s.y(i) = std::abs(normal(rng));
  for (int i = 0; i < m; ++i) s.z(i) = normal(rng);
  return s;
}

SuiteResult lemma_a1_suite(int trials, std::uint64_t seed) {
  static const double ranges[3][2] = {{0.5, 2.0}, {1.0, 1.0}, {2.0, 10.0}};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> beta(0.01, 2.0);
  SuiteResult r;
  r.worst_margin = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    const double m = ranges[t % 3][0], M = ranges[t % 3][1];
    const int n = 1 + (t / 3) % 6;
    const Mat B1 = random_symmetric_in_range(rng, n, m, M);
    const Mat B2 = random_symmetric_in_range(rng, n, m, M);
    const auto res = lemma_a1_matrix(B1, B2, beta(rng), m, M);
    const double margin = min_eigenvalue(res.W) - res.lambda_m;
    r.worst_margin = std::min(r.worst_margin, margin);
    ++r.trials;
    if (margin > 0.0) ++r.passed;
  }
  return r;
}

SuiteResult lemma_a2_suite(const ConstrainedProgram& prog, const SaddleSet& sdl, int trials,
                           std::uint64_t seed) {
  if (prog.p() > 0 || prog.m() == 0) {
    throw Error(ErrorKind::misuse, "kernel orthogonality suite needs p = 0 and m > 0");
  }
  const double ls = smallest_nonzero_eigenvalue(prog.A * prog.A.transpose());
  std::mt19937_64 rng(seed);
  SuiteResult r;
  r.worst_margin = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    const SaddleState s = random_state(rng, prog.n, 0, prog.m());
    const auto pr = project_to_saddle_set(s, sdl);
    const Vec w = s.z - pr.point.z;
    const double orth = sdl.kernel_basis.cols() > 0 ? (sdl.kernel_basis.transpose() * w).norm() : 0.0;
    const double lhs = (prog.A.transpose() * w).squaredNorm();
    const double rhs = ls * w.squaredNorm();
    const double margin = lhs - rhs * (1.0 - 1e-12);
    r.worst_margin = std::min(r.worst_margin, margin);
    ++r.trials;
    if (orth <= 1e-12 && margin >= 0.0) ++r.passed;
  }
  return r;
}

SuiteResult prop_a3_suite(const ConstrainedProgram& prog, const SaddleSet& sdl,
                          const LyapConstants& c, int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> scale(-6.0, 1.0);
  SuiteResult r;
  r.worst_margin = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    const SaddleState s1 = random_state(rng, prog.n, 0, prog.m());
    SaddleState s2 = random_state(rng, prog.n, 0, prog.m());
    // Mix near and far pairs.
    const double h = std::pow(10.0, scale(rng));
    s2 = SaddleState::unstack(s1.stacked() + h * s2.stacked(), prog.n, 0, prog.m());
    const auto chk = grad_v3_lipschitz_check(prog, sdl, s1, s2, c);
    r.worst_margin = std::min(r.worst_margin, chk.rhs - chk.lhs);
    ++r.trials;
    if (chk.lhs <= chk.rhs) ++r.passed;
  }
  return r;
}

}  // namespace saddleflow
