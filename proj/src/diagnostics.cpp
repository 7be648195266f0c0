#include "orbitfam/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "orbitfam/errors.hpp"

namespace orbitfam {

PairSpec::PairSpec(RepSpec rep, Vector v0, SubgroupSpec h, CharacterBasis characters)
    : rep_(std::move(rep)), v0_(std::move(v0)), h_(std::move(h)), characters_(characters) {}

PairSpec PairSpec::unchecked(RepSpec rep, Vector v0, SubgroupSpec h, CharacterBasis characters) {
  if (v0.size() != rep.dim()) {
    std::ostringstream msg;
    msg << "v0 has " << v0.size() << " entries but the representation has dimension " << rep.dim();
    throw InvalidInput(msg.str());
  }
  if (!v0.allFinite()) throw InvalidInput("v0 has non-finite entries");
  validate_subgroup(h, rep.chart());
  return PairSpec(std::move(rep), std::move(v0), std::move(h), characters);
}

PairSpec PairSpec::make(RepSpec rep, Vector v0, SubgroupSpec h, CharacterBasis characters, bool allow_zero) {
  PairSpec pair = unchecked(std::move(rep), std::move(v0), std::move(h), characters);
  if (!allow_zero && pair.v0().isZero(0.0)) throw PreconditionViolation("v0 must be nonzero");
  for (double e : pair.subgroup().elements) {
    const Vector moved = pair.rep().eval(e) * pair.v0();
    if ((moved - pair.v0()).norm() > 1e-10 * std::max(1.0, pair.v0().norm())) {
      std::ostringstream msg;
      msg << "v0 is not fixed by the subgroup element " << e << " (v0 not in V^H)";
      throw PreconditionViolation(msg.str());
    }
  }
  return pair;
}

Matrix orbit_matrix(const PairSpec& pair, const std::vector<double>& samples) {
  Matrix m(pair.dim(), static_cast<Eigen::Index>(samples.size()));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    m.col(static_cast<Eigen::Index>(i)) = pair.orbit_point(samples[i]);
  }
  return m;
}

Matrix h_fixed_subspace(const RepSpec& rep, const SubgroupSpec& h, double rel_tol) {
  const int n = rep.dim();
  if (h.is_trivial()) return Matrix::Identity(n, n);
  validate_subgroup(h, rep.chart());
  Matrix stacked(n * static_cast<Eigen::Index>(h.elements.size()), n);
  for (std::size_t i = 0; i < h.elements.size(); ++i) {
    stacked.middleRows(static_cast<Eigen::Index>(i) * n, n) =
        rep.eval(h.elements[i]) - Matrix::Identity(n, n);
  }
  return nullspace_basis(stacked, rel_tol);
}

SpanVerdict cyclic_check(const PairSpec& pair, std::size_t n_samples, std::uint64_t seed, double rel_tol) {
  const auto samples = sample_group(pair.chart(), n_samples, seed);
  SpanVerdict v;
  v.rank = rank(orbit_matrix(pair, samples), rel_tol);
  v.holds = v.rank.rank == pair.dim();
  return v;
}

Matrix dual_fixed_vectors(const RepSpec& rep, std::size_t n_samples, std::uint64_t seed, double rel_tol) {
  const int n = rep.dim();
  const auto samples = sample_group(rep.chart(), n_samples, seed);
  Matrix stacked(n * static_cast<Eigen::Index>(samples.size()), n);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    stacked.middleRows(static_cast<Eigen::Index>(i) * n, n) =
        rep.dual_eval(samples[i]) - Matrix::Identity(n, n);
  }
  return nullspace_basis(stacked, rel_tol);
}

SpanVerdict condition_A(const PairSpec& pair, std::size_t n_samples, std::uint64_t seed, double rel_tol) {
  const auto samples = sample_group(pair.chart(), n_samples, seed);
  Matrix m = orbit_matrix(pair, samples);
  m.colwise() -= pair.v0();
  SpanVerdict v;
  v.rank = rank(m, rel_tol);
  v.holds = v.rank.rank == pair.dim();
  return v;
}

ConditionB condition_B(const PairSpec& pair, std::size_t n_samples, std::uint64_t seed, double rel_tol) {
  ConditionB b;
  const SpanVerdict cyc = cyclic_check(pair, n_samples, seed, rel_tol);
  b.cyclic = cyc.holds;
  b.cyclic_rank = cyc.rank;
  b.dual_fixed_dim = static_cast<int>(dual_fixed_vectors(pair.rep(), n_samples, seed, rel_tol).cols());
  b.no_dual_fixed = b.dual_fixed_dim == 0;
  return b;
}

namespace {

Matrix injectivity_system(const PairSpec& pair, const std::vector<double>& samples) {
  const int n = pair.dim();
  const int k = pair.characters().size();
  Matrix a(static_cast<Eigen::Index>(samples.size()), n + k + 1);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    a.row(row).head(n) = pair.orbit_point(samples[i]).transpose();
    if (k > 0) a.row(row).segment(n, k) = -pair.characters().log_characters(samples[i]).transpose();
    a(row, n + k) = -1.0;
  }
  return a;
}

}  // namespace

InjectivityVerdict injectivity_check(const PairSpec& pair, std::size_t n_samples, std::uint64_t seed,
                                     double rel_tol) {
  constexpr double kXiZero = 1e-7;
  const int n = pair.dim();
  const int k = pair.characters().size();
  const auto unknowns = static_cast<std::size_t>(n + k + 1);
  if (n_samples < unknowns) {
    std::ostringstream msg;
    msg << "injectivity_check needs at least dim + basis_size + 1 = " << unknowns << " samples, got "
        << n_samples;
    throw InsufficientSamples(msg.str());
  }
  const auto samples = sample_group(pair.chart(), n_samples, seed);
  const Matrix system = injectivity_system(pair, samples);

  InjectivityVerdict verdict;
  verdict.samples_used = samples.size();
  verdict.assumption = "log Omega_0(G,H) is spanned by the declared '" + pair.characters().name() +
                       "' basis; the verdict is relative to that basis";
  verdict.rank_details = rank(system, rel_tol);
  const Matrix null = nullspace_basis(system, rel_tol);
  if (null.cols() == 0) {
    verdict.injective = true;
    return verdict;
  }
  // Null vectors are orthonormal, so the largest singular value of their
  // xi-block is the largest xi-norm over unit combinations.
  const Matrix xi_block = null.topRows(n);
  Eigen::JacobiSVD<Matrix> svd(xi_block, Eigen::ComputeFullV);
  verdict.xi_margin = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  if (verdict.xi_margin <= kXiZero) {
    verdict.injective = true;
    return verdict;
  }
  verdict.injective = false;
  Vector combo = null * svd.matrixV().col(0);
  const double xi_norm = combo.head(n).norm();
  combo /= xi_norm;
  // Sign convention: first non-negligible xi component positive.
  for (int i = 0; i < n; ++i) {
    if (std::abs(combo(i)) > 1e-12) {
      if (combo(i) < 0.0) combo = -combo;
      break;
    }
  }
  Witness w;
  w.xi = combo.head(n);
  w.char_coeffs = combo.segment(n, k);
  w.c = combo(n + k);
  verdict.witness = std::move(w);
  return verdict;
}

double witness_residual(const PairSpec& pair, const Witness& w, const std::vector<double>& samples) {
  double worst = 0.0;
  for (double g : samples) {
    const double lhs = w.xi.dot(pair.orbit_point(g));
    double rhs = w.c;
    if (w.char_coeffs.size() > 0) rhs += w.char_coeffs.dot(pair.characters().log_characters(g));
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
  }
  return worst;
}

WellDefinednessReport well_definedness_check(const PairSpec& pair, std::uint64_t seed, std::size_t n_samples) {
  WellDefinednessReport report;
  if (pair.subgroup().is_trivial()) return report;
  const auto samples = sample_group(pair.chart(), n_samples, seed);
  for (double g : samples) {
    const Vector base = pair.orbit_point(g);
    for (double h : pair.subgroup().elements) {
      const Vector moved = pair.orbit_point(pair.chart().compose(g, h));
      const double r = (moved - base).norm() / std::max(1.0, base.norm());
      if (r > report.max_residual) report.max_residual = r;
      if (r > 1e-10 && !report.offending) report.offending = std::make_pair(g, h);
    }
  }
  report.passed = !report.offending.has_value();
  return report;
}

}  // namespace orbitfam
