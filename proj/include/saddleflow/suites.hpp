#pragma once

#include <cstdint>
#include <random>

#include "saddleflow/lyapunov.hpp"

namespace saddleflow {

struct SuiteResult {
  int trials = 0;
  int passed = 0;
  double worst_margin = 0.0;  // smallest (rhs - lhs) seen; negative on failure

  bool all_passed() const { return trials > 0 && passed == trials; }
};

/// Random symmetric matrix Q diag(d) Q^T, d uniform in [lo, hi] with the end
/// points forced into the spectrum when n >= 2.
Mat random_symmetric_in_range(std::mt19937_64& rng, int n, double lo, double hi);

/// Random state with entries N(0, scale^2); y entries are made nonnegative.
SaddleState random_state(std::mt19937_64& rng, int n, int p, int m, double scale = 3.0);

/// min eig(W) > lambda_m for random B1, B2 with spectrum in [m, M], cycling
/// through (m, M) in {(0.5, 2), (1, 1), (2, 10)} and n in 1..6.
SuiteResult lemma_a1_suite(int trials, std::uint64_t seed);

/// Projected random states: z - z* orthogonal to ker(A^T) and
/// ||A^T (z - z*)||^2 >= lambda_s ||z - z*||^2.
SuiteResult lemma_a2_suite(const ConstrainedProgram& prog, const SaddleSet& sdl, int trials,
                           std::uint64_t seed);

/// ||grad V3(s2) - grad V3(s1)|| <= xi(s1) ||s2 - s1|| on random pairs.
SuiteResult prop_a3_suite(const ConstrainedProgram& prog, const SaddleSet& sdl,
                          const LyapConstants& c, int trials, std::uint64_t seed);

}  // namespace saddleflow
