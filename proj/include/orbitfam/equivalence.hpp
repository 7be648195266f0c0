#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "orbitfam/diagnostics.hpp"

namespace orbitfam {

/// A finite-dimensional function space W in C(G), known through an evaluable
/// basis and its values on a grid.
struct FunctionSpaceSample {
  std::vector<double> grid;
  Matrix basis_matrix;  // grid.size() x k; column j = f_j on the grid
  std::vector<std::function<double(double)>> basis;

  int size() const { return static_cast<int>(basis.size()); }
};

/// Samples `basis` on `grid`; requires grid.size() >= 2k and full column rank
/// at rel_tol 1e-9, otherwise throws GridTooSmall.
FunctionSpaceSample make_function_space(std::vector<double> grid,
                                        std::vector<std::function<double(double)>> basis);

/// 16 points spread over the chart's sampling window (log-spaced on [e^-2, e^2]
/// for positive_reals).
std::vector<double> default_grid(const GroupChart& chart, std::size_t m = 16);

/// eta(xi)(g) = <xi, rho(g) v0>.
double eta_eval(const PairSpec& pair, const Vector& xi, double g);

/// eta(V^v) sampled on `grid` in the standard dual basis: columns g -> (rho(g) v0)_j.
/// Throws PreconditionViolation if the pair is not cyclic, GridTooSmall if the
/// grid does not resolve rank dim V.
FunctionSpaceSample phi_map(const PairSpec& pair, const std::vector<double>& grid);

struct PsiResult {
  PairSpec pair;                       // (W^v, ev_e) with the dual left-translation action
  std::vector<Matrix> action_matrices;  // L_g on W in the given basis, per action sample
  std::vector<Matrix> dual_matrices;    // inverse transposes: the action on W^v
  double max_residual = 0.0;            // worst relative least-squares residual
};

/// W -> (W^v, ev_e|_W). The matrix of L_a, (L_a f)(g) = f(a^-1 g), is
/// recovered by least squares on the grid; a relative residual above 1e-8
/// means W is not L_G-invariant (NotInvariant).
PsiResult psi_map(const FunctionSpaceSample& w, const GroupChart& chart,
                  const std::vector<double>& action_samples);

struct Intertwiner {
  Matrix psi;              // dim' x dim
  double residual = 0.0;   // worst relative residual on the validation samples
};

struct EquivalenceSearch {
  std::optional<Intertwiner> intertwiner;
  int solution_space_dim = 0;        // dim of {psi : psi rho(g) = rho'(g) psi}
  double constraint_residual = 0.0;  // ||psi v0 - v0'|| for the min-norm candidate
  std::string reason;                // why none was returned, if so
};

/// Solves psi rho(g_i) = rho'(g_i) psi together with psi v0 = v0', taking the
/// minimum-Frobenius-norm solution; accepts it only if invertible and valid on
/// a fresh sample set. Throws PreconditionViolation on non-cyclic input.
EquivalenceSearch find_equivalence(const PairSpec& a, const PairSpec& b,
                                   std::size_t n_samples = kDefaultSamples,
                                   std::uint64_t seed = kDefaultSeed);

struct SameFamilyReport {
  bool same = false;
  double residual_a_in_b = 0.0;
  double residual_b_in_a = 0.0;
};

/// Column spaces of phi_map(a) and phi_map(b) on the grid coincide (mutual
/// relative least-squares residuals <= 1e-8).
SameFamilyReport same_family_check(const PairSpec& a, const PairSpec& b, const std::vector<double>& grid);

/// Mutual projection residuals between two sampled spaces on the same grid.
SameFamilyReport compare_spans(const Matrix& a, const Matrix& b, double tol);

struct RhFixedReport {
  bool fixed = true;
  double max_residual = 0.0;
};

/// f(g h) = f(g) within 1e-10 (relative) for every basis function, grid point and h in H.
RhFixedReport rh_fixed_check(const FunctionSpaceSample& w, const GroupChart& chart, const SubgroupSpec& h);

}  // namespace orbitfam
