#pragma once

#include <vector>

#include <Eigen/Dense>

namespace orbitfam {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kDefaultRankRelTol = 1e-9;

struct RankReport {
  int rank = 0;
  std::vector<double> singular_values;  // descending
  double tolerance_used = 0.0;          // absolute cutoff, rel_tol * sigma_max
};

bool all_finite(const Matrix& m);

/// Numerical rank from the SVD. A singular value counts iff it exceeds
/// rel_tol * sigma_max. Throws InvalidInput on empty or non-finite input.
RankReport rank(const Matrix& m, double rel_tol = kDefaultRankRelTol);

/// Orthonormal basis of ker(m), as column vectors. Dimension = cols - rank.
std::vector<Vector> nullspace(const Matrix& m, double rel_tol = kDefaultRankRelTol);

/// Same as nullspace(), packed as the columns of a cols x k matrix.
Matrix nullspace_basis(const Matrix& m, double rel_tol = kDefaultRankRelTol);

struct LeastSquaresResult {
  Matrix solution;
  double residual = 0.0;           // ||A X - B||_F
  double relative_residual = 0.0;  // residual / max(1, ||B||_F)
};

/// Minimum-norm least-squares solution of A X = B.
LeastSquaresResult least_squares(const Matrix& a, const Matrix& b,
                                 double rel_tol = kDefaultRankRelTol);

/// ||a - b||_F / max(1, ||b||_F).
double relative_difference(const Matrix& a, const Matrix& b);

/// Block-diagonal concatenation.
Matrix block_diagonal(const std::vector<Matrix>& blocks);

}  // namespace orbitfam
