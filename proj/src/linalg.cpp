#include "orbitfam/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "orbitfam/errors.hpp"

namespace orbitfam {

namespace {

void require_usable(const Matrix& m, double rel_tol) {
  if (m.rows() == 0 || m.cols() == 0) {
    throw InvalidInput("matrix must be nonempty");
  }
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) {
    throw InvalidInput("rel_tol must lie in (0, 1)");
  }
  if (!all_finite(m)) {
    throw InvalidInput("matrix has non-finite entries");
  }
}

}  // namespace

bool all_finite(const Matrix& m) { return m.allFinite(); }

RankReport rank(const Matrix& m, double rel_tol) {
  require_usable(m, rel_tol);
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector& sv = svd.singularValues();
  RankReport report;
  report.singular_values.assign(sv.data(), sv.data() + sv.size());
  const double sigma_max = sv.size() > 0 ? sv(0) : 0.0;
  report.tolerance_used = rel_tol * sigma_max;
  report.rank = static_cast<int>(std::count_if(
      report.singular_values.begin(), report.singular_values.end(),
      [&](double s) { return s > report.tolerance_used; }));
  return report;
}

Matrix nullspace_basis(const Matrix& m, double rel_tol) {
  require_usable(m, rel_tol);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  const double cutoff = sv.size() > 0 ? rel_tol * sv(0) : 0.0;
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > cutoff) ++r;
  const Eigen::Index k = m.cols() - r;
  return svd.matrixV().rightCols(k);
}

std::vector<Vector> nullspace(const Matrix& m, double rel_tol) {
  const Matrix basis = nullspace_basis(m, rel_tol);
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(basis.cols()));
  for (Eigen::Index j = 0; j < basis.cols(); ++j) out.emplace_back(basis.col(j));
  return out;
}

LeastSquaresResult least_squares(const Matrix& a, const Matrix& b, double rel_tol) {
  require_usable(a, rel_tol);
  if (a.rows() != b.rows()) throw InvalidInput("least_squares: row mismatch");
  if (!all_finite(b)) throw InvalidInput("least_squares: non-finite right-hand side");
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double sigma_max = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  svd.setThreshold(sigma_max > 0.0 ? rel_tol : 1.0);
  LeastSquaresResult out;
  out.solution = svd.solve(b);
  out.residual = (a * out.solution - b).norm();
  out.relative_residual = out.residual / std::max(1.0, b.norm());
  return out;
}

double relative_difference(const Matrix& a, const Matrix& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

Matrix block_diagonal(const std::vector<Matrix>& blocks) {
  Eigen::Index rows = 0, cols = 0;
  for (const auto& b : blocks) {
    rows += b.rows();
    cols += b.cols();
  }
  Matrix out = Matrix::Zero(rows, cols);
  Eigen::Index r = 0, c = 0;
  for (const auto& b : blocks) {
    out.block(r, c, b.rows(), b.cols()) = b;
    r += b.rows();
    c += b.cols();
  }
  return out;
}

}  // namespace orbitfam
