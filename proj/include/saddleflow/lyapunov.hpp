#pragma once

#include <optional>
#include <vector>

#include "json.hpp"
#include "saddleflow/dynamics.hpp"
#include "saddleflow/integrate.hpp"
#include "saddleflow/saddle.hpp"

namespace saddleflow {

struct LyapConstants {
  double beta1 = 0.0;
  double beta2 = 0.0;           // 4 beta1 M^4 / m^2
  double m = 0.0;
  double M = 0.0;
  double L = 0.0;
  double norm_A = 0.0;
  double lambda_s = 0.0;        // smallest nonzero eigenvalue of A A^T (+inf if none)
  double lambda_m = 0.0;        // min(beta1 m / 2, beta1 m^3)
  double lambda_m_tilde = 0.0;  // lambda_m min(1, lambda_s)
  double xi2 = 0.0;             // max(M, ||A||)
  double alpha1 = 0.0;          // beta2 / 2
  double alpha2 = 0.0;          // 3 beta1 (M^2 + ||A||^2) / 2 + beta2 / 2
  double c_x = 0.0;             // beta1 M^2 + beta1 M ||A|| + beta2 + beta1 ||A||^2
  double c_z = 0.0;             // beta1 M ||A|| + beta1 ||A||^2 + beta2
};

/// Throws Error(hypothesis) when curvature constants are missing or m <= 0,
/// Error(config) when beta1 <= 0.
LyapConstants constants(const ConstrainedProgram& prog, double beta1);

nlohmann::json to_json(const LyapConstants& c);

enum class LyapKind { v1, v2, v3, v3_anchored, v4 };

const char* to_string(LyapKind k);
LyapKind lyap_kind_from_string(const std::string& s);

/// Everything a Lyapunov evaluation may need besides the program and state.
struct LyapSelector {
  LyapKind kind = LyapKind::v1;
  SaddleState anchor;  // v1, v3_anchored
  double beta1 = 0.1;  // v3, v3_anchored
  double eps = 0.0;    // v4
  double tol_active = 1e-9;
};

double v1(const SaddleState& s, const SaddleState& anchor);

/// Throws Error(misuse) when `sdl` is empty (solve_saddle has not been run).
double v2(const ConstrainedProgram& prog, const SaddleState& s, const SaddleSet& sdl,
          double tol_active = 1e-9);
/// Throws Error(misuse) for indices outside [0, p).
double v2_partition(const ConstrainedProgram& prog, const SaddleState& s, const ActiveSet& I,
                    const SaddleSet& sdl);

/// Requires p = 0 and declared curvature.
double v3(const ConstrainedProgram& prog, const SaddleState& s, const SaddleSet& sdl, double beta1);
/// Throws Error(hypothesis) when `anchor` is not a saddle point.
double v3_anchored(const ConstrainedProgram& prog, const SaddleState& s, const SaddleState& anchor,
                   double beta1);
double v4(const ConstrainedProgram& prog, const SaddleState& s, const SaddleSet& sdl, double eps);

double lyapunov_value(const LyapSelector& sel, const ConstrainedProgram& prog,
                      const SaddleSet& sdl, const SaddleState& s);

/// Closed-form gradient (stacked over x, y, z). The distance term contributes
/// s - proj(s). For v2 the partition is the active set at s.
Vec lyapunov_gradient(const LyapSelector& sel, const ConstrainedProgram& prog,
                      const SaddleSet& sdl, const SaddleState& s);

enum class LieMode { analytic, numeric };

/// grad V(s)^T X(s). Numeric mode central-differences V along the flow.
/// For v2, throws Error(non_smooth) when s sits on a partition boundary.
double lie_derivative(const LyapSelector& sel, FieldKind field, const ConstrainedProgram& prog,
                      const SaddleSet& sdl, const SaddleState& s, LieMode mode = LieMode::analytic);

/// grad V3(s)^T (X_sp(s) + u).
double v3_lie_derivative_disturbed(const ConstrainedProgram& prog, const SaddleSet& sdl,
                                   const SaddleState& s, const DisturbanceSample& u, double beta1);

struct EpsProbe {
  std::optional<double> eps_max;  // largest passing grid value
  std::vector<double> grid;       // sorted ascending
  std::vector<bool> passed;
  std::vector<double> worst;      // max Lie derivative over the trial states
};

/// Empirical sweep: eps passes when the Lie derivative of V4 along the
/// undisturbed field is negative at every trial state off the saddle set.
/// Throws Error(config) on an empty grid.
EpsProbe probe_eps_max(const ConstrainedProgram& prog, const SaddleSet& sdl,
                       const std::vector<SaddleState>& trial_states, std::vector<double> eps_grid,
                       double off_set_tol = 1e-9);

/// sqrt(3) sqrt(beta1^2 (xi1^2 + ||A||^4 + ||A||^2 xi2^2) + beta2^2).
double xi_from_xi1(const LyapConstants& c, double xi1);
/// xi at s, with xi1 = M xi2 + L ||grad_x F(s)||.
double xi(const ConstrainedProgram& prog, const SaddleState& s, const LyapConstants& c);

struct LemmaA1 {
  Mat W;
  double lambda_m = 0.0;
};

/// W = [[b1 B1 B2 B1 + b2 B1, b1 B1 B2], [b1 B2 B1, b1 B2]] with b2 = 4 b1 M^4 / m^2.
/// Throws Error(hypothesis) when B1 or B2 is not symmetric with spectrum in [m, M].
LemmaA1 lemma_a1_matrix(const Mat& B1, const Mat& B2, double beta1, double m, double M);

struct LipschitzCheck {
  double lhs = 0.0;  // ||grad V3(s2) - grad V3(s1)||
  double rhs = 0.0;  // xi(s1) ||s2 - s1||
};

LipschitzCheck grad_v3_lipschitz_check(const ConstrainedProgram& prog, const SaddleSet& sdl,
                                       const SaddleState& s1, const SaddleState& s2,
                                       const LyapConstants& c);

/// (c_x + c_z) / (theta lambda_m_tilde): beyond this multiple of ||u|| the
/// distance to the saddle set shrinks.
double iss_gain(const LyapConstants& c, double theta = 0.5);

/// Bound on ||s(t) - s_ref|| for all t when V3 along the trajectory equals the
/// point-anchored function at s_ref: sqrt(max(V0, alpha2 (gain u_sup)^2) / alpha1).
double anchored_deviation_bound(const LyapConstants& c, double v0, double u_sup,
                                double theta = 0.5);

}  // namespace saddleflow
