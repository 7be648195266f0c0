#include "orbitfam/equivalence.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>

#include "orbitfam/errors.hpp"

namespace orbitfam {

FunctionSpaceSample make_function_space(std::vector<double> grid,
                                        std::vector<std::function<double(double)>> basis) {
  const auto m = static_cast<Eigen::Index>(grid.size());
  const auto k = static_cast<Eigen::Index>(basis.size());
  if (k == 0) throw InvalidInput("function space needs at least one basis function");
  if (m < 2 * k) {
    std::ostringstream msg;
    msg << "grid of " << m << " points is too small for " << k << " basis functions (need >= " << 2 * k << ")";
    throw GridTooSmall(msg.str());
  }
  FunctionSpaceSample w;
  w.basis_matrix.resize(m, k);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      w.basis_matrix(i, j) = basis[static_cast<std::size_t>(j)](grid[static_cast<std::size_t>(i)]);
    }
  }
  const RankReport r = rank(w.basis_matrix, kDefaultRankRelTol);
  if (r.rank != k) {
    std::ostringstream msg;
    msg << "basis has rank " << r.rank << " < " << k << " on the grid; enlarge the grid";
    throw GridTooSmall(msg.str());
  }
  w.grid = std::move(grid);
  w.basis = std::move(basis);
  return w;
}

std::vector<double> default_grid(const GroupChart& chart, std::size_t m) {
  const auto [lo, hi] = chart.sampling_window();
  std::vector<double> grid;
  grid.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    // Midpoints keep the circle grid inside (-pi, pi).
    const double tau = lo + (hi - lo) * (static_cast<double>(i) + 0.5) / static_cast<double>(m);
    grid.push_back(chart.from_additive(tau));
  }
  return grid;
}

double eta_eval(const PairSpec& pair, const Vector& xi, double g) {
  if (xi.size() != pair.dim()) throw InvalidInput("eta_eval: xi has the wrong dimension");
  return xi.dot(pair.orbit_point(g));
}

FunctionSpaceSample phi_map(const PairSpec& pair, const std::vector<double>& grid) {
  if (!cyclic_check(pair).holds) {
    throw PreconditionViolation("phi_map: v0 is not cyclic, so eta is not injective");
  }
  std::vector<std::function<double(double)>> basis;
  for (int j = 0; j < pair.dim(); ++j) {
    basis.emplace_back([pair, j](double g) { return pair.orbit_point(g)(j); });
  }
  return make_function_space(grid, std::move(basis));
}

namespace {

struct TranslationSolve {
  Matrix action;  // k x k, columns = coordinates of L_a f_j
  double residual = 0.0;
};

TranslationSolve solve_translation(const FunctionSpaceSample& w, const GroupChart& chart, double a) {
  const double a_inv = chart.inverse(a);
  Matrix translated(w.basis_matrix.rows(), w.basis_matrix.cols());
  for (Eigen::Index i = 0; i < translated.rows(); ++i) {
    const double g = chart.compose(a_inv, w.grid[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < translated.cols(); ++j) {
      translated(i, j) = w.basis[static_cast<std::size_t>(j)](g);
    }
  }
  const LeastSquaresResult ls = least_squares(w.basis_matrix, translated);
  return {ls.solution, ls.relative_residual};
}

/// Action of G on W^v: a -> M(a)^{-T}, M(a) the matrix of L_a on W.
class TranslationDual final : public CustomTemplate {
 public:
  TranslationDual(FunctionSpaceSample w, GroupChart chart) : w_(std::move(w)), chart_(chart) {}
  int dim() const override { return w_.size(); }
  Matrix eval(double a) const override {
    const TranslationSolve s = solve_translation(w_, chart_, a);
    if (s.residual > 1e-8) {
      std::ostringstream msg;
      msg << "W is not L_G-invariant on this grid: translate by " << a << " leaves residual " << s.residual;
      throw NotInvariant(msg.str());
    }
    return s.action.inverse().transpose();
  }
  std::string name() const override {
    return "left_translation_dual(dim " + std::to_string(dim()) + ")";
  }

 private:
  FunctionSpaceSample w_;
  GroupChart chart_;
};

}  // namespace

PsiResult psi_map(const FunctionSpaceSample& w, const GroupChart& chart,
                  const std::vector<double>& action_samples) {
  std::vector<Matrix> actions, duals;
  double worst = 0.0;
  for (double a : action_samples) {
    const TranslationSolve s = solve_translation(w, chart, a);
    worst = std::max(worst, s.residual);
    if (s.residual > 1e-8) {
      std::ostringstream msg;
      msg << "W is not L_G-invariant on this grid: translate by " << a << " leaves residual " << s.residual;
      throw NotInvariant(msg.str());
    }
    duals.push_back(s.action.inverse().transpose());
    actions.push_back(s.action);
  }
  // ev_e in dual coordinates: (f_1(e), ..., f_k(e)).
  Vector ev(w.size());
  for (int j = 0; j < w.size(); ++j) ev(j) = w.basis[static_cast<std::size_t>(j)](chart.identity());

  RepSpec rep(std::shared_ptr<const CustomTemplate>(std::make_shared<TranslationDual>(w, chart)), chart);
  PsiResult out{PairSpec::make(std::move(rep), std::move(ev)), std::move(actions), std::move(duals), worst};
  return out;
}

namespace {

double intertwining_residual(const Matrix& psi, const PairSpec& a, const PairSpec& b,
                             const std::vector<double>& samples) {
  double worst = 0.0;
  for (double g : samples) {
    const Matrix lhs = psi * a.rep().eval(g);
    const Matrix rhs = b.rep().eval(g) * psi;
    worst = std::max(worst, relative_difference(lhs, rhs));
  }
  return worst;
}

}  // namespace

EquivalenceSearch find_equivalence(const PairSpec& a, const PairSpec& b, std::size_t n_samples,
                                   std::uint64_t seed) {
  if (!cyclic_check(a, n_samples, seed).holds || !cyclic_check(b, n_samples, seed).holds) {
    throw PreconditionViolation("equivalence is defined on cyclic pairs only");
  }
  if (!(a.chart() == b.chart())) throw PreconditionViolation("pairs live on different charts");

  EquivalenceSearch out;
  const int d = a.dim();
  const int dp = b.dim();
  if (d != dp) {
    out.reason = "dimensions differ, no linear isomorphism exists";
    return out;
  }
  // Unknown psi (dp x d), column-major vec. vec(psi A) = (A^T kron I) vec(psi),
  // vec(B psi) = (I kron B) vec(psi).
  const auto samples = sample_group(a.chart(), n_samples, seed);
  const Eigen::Index nn = static_cast<Eigen::Index>(dp) * d;
  Matrix system(static_cast<Eigen::Index>(samples.size()) * nn, nn);
  const Matrix id_d = Matrix::Identity(d, d);
  const Matrix id_dp = Matrix::Identity(dp, dp);
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const Matrix ra = a.rep().eval(samples[s]);
    const Matrix rb = b.rep().eval(samples[s]);
    Matrix block = Matrix::Zero(nn, nn);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        // (A^T kron I_dp): block (i, j) = A(j, i) * I
        block.block(i * dp, j * dp, dp, dp) += ra(j, i) * id_dp;
      }
      // (I_d kron B): diagonal blocks
      block.block(i * dp, i * dp, dp, dp) -= rb;
    }
    system.middleRows(static_cast<Eigen::Index>(s) * nn, nn) = block;
  }
  const Matrix null = nullspace_basis(system, kDefaultRankRelTol);
  out.solution_space_dim = static_cast<int>(null.cols());
  if (null.cols() == 0) {
    out.reason = "only psi = 0 intertwines the two actions";
    return out;
  }
  // psi v0 = (v0^T kron I) vec(psi) = (v0^T kron I) N y = v0'
  Matrix constraint(dp, nn);
  for (int j = 0; j < d; ++j) constraint.block(0, j * dp, dp, dp) = a.v0()(j) * id_dp;
  const Matrix cn = constraint * null;
  const LeastSquaresResult ls = least_squares(cn, b.v0());
  const Vector vec_psi = null * ls.solution;  // orthonormal N: ||psi||_F = ||y||
  const Matrix psi = Eigen::Map<const Matrix>(vec_psi.data(), dp, d);
  out.constraint_residual = (psi * a.v0() - b.v0()).norm() / std::max(1.0, b.v0().norm());
  if (out.constraint_residual > 1e-8) {
    out.reason = "no intertwiner maps v0 to v0'";
    return out;
  }
  if (rank(psi, kDefaultRankRelTol).rank != d) {
    out.reason = "minimum-norm intertwiner is singular";
    return out;
  }
  const auto fresh = sample_group(a.chart(), n_samples, seed + 0x51ed);
  const double r = intertwining_residual(psi, a, b, fresh);
  if (r > 1e-8) {
    std::ostringstream msg;
    msg << "candidate fails validation on fresh samples (residual " << r << ")";
    out.reason = msg.str();
    return out;
  }
  out.intertwiner = Intertwiner{psi, std::max(r, out.constraint_residual)};
  return out;
}

SameFamilyReport compare_spans(const Matrix& a, const Matrix& b, double tol) {
  SameFamilyReport r;
  r.residual_a_in_b = least_squares(b, a).relative_residual;
  r.residual_b_in_a = least_squares(a, b).relative_residual;
  r.same = r.residual_a_in_b <= tol && r.residual_b_in_a <= tol;
  return r;
}

SameFamilyReport same_family_check(const PairSpec& a, const PairSpec& b, const std::vector<double>& grid) {
  if (!(a.chart() == b.chart())) throw PreconditionViolation("pairs live on different charts");
  const FunctionSpaceSample wa = phi_map(a, grid);
  const FunctionSpaceSample wb = phi_map(b, grid);
  return compare_spans(wa.basis_matrix, wb.basis_matrix, 1e-8);
}

RhFixedReport rh_fixed_check(const FunctionSpaceSample& w, const GroupChart& chart, const SubgroupSpec& h) {
  RhFixedReport report;
  for (double e : h.elements) {
    for (double g : w.grid) {
      const double gh = chart.compose(g, e);
      for (const auto& f : w.basis) {
        const double base = f(g);
        const double r = std::abs(f(gh) - base) / std::max(1.0, std::abs(base));
        report.max_residual = std::max(report.max_residual, r);
      }
    }
  }
  report.fixed = report.max_residual <= 1e-10;
  return report;
}

}  // namespace orbitfam
