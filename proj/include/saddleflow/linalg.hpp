#pragma once

#include <Eigen/Dense>
#include <vector>

namespace saddleflow {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Relative singular-value cutoff used for ranks, kernels and pseudoinverses.
inline constexpr double kRankCutoff = 1e-10;

/// Induced 2-norm (largest singular value). Zero for empty matrices.
double op_norm(const Mat& a);

/// Number of singular values above `rel_cutoff * sigma_max`.
int numeric_rank(const Mat& a, double rel_cutoff = kRankCutoff);

/// Moore-Penrose pseudoinverse via SVD with relative cutoff.
Mat pinv(const Mat& a, double rel_cutoff = kRankCutoff);

/// Orthonormal basis (columns) of ker(A^T) for an m x n matrix A, i.e. the
/// left null space. Returns an m x k matrix, k = m - rank(A).
Mat left_kernel_basis(const Mat& a, double rel_cutoff = kRankCutoff);

double min_eigenvalue(const Mat& sym);
double max_eigenvalue(const Mat& sym);

/// Smallest eigenvalue of the symmetric PSD matrix `sym` that exceeds
/// `rel_cutoff * lambda_max`. Returns +infinity when no such eigenvalue exists
/// (zero or empty matrix).
double smallest_nonzero_eigenvalue(const Mat& sym,
                                   double rel_cutoff = kRankCutoff);

struct QuadratureRule {
  std::vector<double> nodes;    // in (0, 1)
  std::vector<double> weights;  // sum to 1
};

/// Gauss-Legendre rule with `n` nodes mapped to [0, 1]. Exact for
/// polynomials of degree <= 2n - 1.
QuadratureRule gauss_legendre(int n);

}  // namespace saddleflow
