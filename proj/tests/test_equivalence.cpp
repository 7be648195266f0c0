#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "catalog.hpp"
#include "orbitfam/equivalence.hpp"
#include "orbitfam/errors.hpp"

using namespace orbitfam;

namespace {

const GroupChart kPos = GroupChart::positive_reals();
const GroupChart kCircle = GroupChart::circle();

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

PairSpec diag_pair(std::vector<double> weights, Vector v0) {
  return PairSpec::make(RepSpec(DiagonalWeights{std::move(weights)}, kPos), std::move(v0));
}

PairSpec gig() { return diag_pair({1, -1}, vec({0.5, 0.5})); }

FunctionSpaceSample span_g_inv_g() {
  return make_function_space(default_grid(kPos), {[](double g) { return g; }, [](double g) { return 1.0 / g; }});
}

FunctionSpaceSample span_one_log() {
  return make_function_space(default_grid(kPos), {[](double) { return 1.0; }, [](double g) { return std::log(g); }});
}

FunctionSpaceSample span_cos_sin() {
  return make_function_space(default_grid(kCircle),
                             {[](double t) { return std::cos(t); }, [](double t) { return std::sin(t); }});
}

}  // namespace

TEST(Eta, Examples) {
  EXPECT_NEAR(eta_eval(gig(), vec({1, 0}), 2.0), 1.0, 1e-15);
  EXPECT_EQ(eta_eval(gig(), vec({0, 0}), 3.7), 0.0);
  const Vector xi = vec({0.3, -1.2});
  EXPECT_NEAR(eta_eval(gig(), xi, 1.0), xi.dot(gig().v0()), 1e-15);
}

TEST(Eta, EquivariantAndLinear) {
  std::mt19937_64 gen(3);
  std::normal_distribution<double> normal;
  for (const auto& entry : catalog::named_pairs()) {
    const PairSpec& p = entry.pair;
    const auto gs = sample_group(p.chart(), 8, 1);
    const auto hs = sample_group(p.chart(), 8, 2);
    for (std::size_t i = 0; i < gs.size(); ++i) {
      Vector xi(p.dim()), zeta(p.dim());
      for (int j = 0; j < p.dim(); ++j) {
        xi(j) = normal(gen);
        zeta(j) = normal(gen);
      }
      const double lhs = eta_eval(p, p.rep().dual_eval(gs[i]) * xi, hs[i]);
      const double rhs = eta_eval(p, xi, p.chart().compose(p.chart().inverse(gs[i]), hs[i]));
      EXPECT_NEAR(lhs, rhs, 1e-10 * std::max(1.0, std::abs(rhs))) << entry.label;
      const double sum = eta_eval(p, 2.0 * xi + zeta, hs[i]);
      EXPECT_NEAR(sum, 2.0 * eta_eval(p, xi, hs[i]) + eta_eval(p, zeta, hs[i]), 1e-12 * std::max(1.0, std::abs(sum)));
    }
  }
}

TEST(PhiMap, GigColumnsOnSmallGrid) {
  const FunctionSpaceSample w = phi_map(gig(), {1, 2, 3, 4});
  ASSERT_EQ(w.basis_matrix.cols(), 2);
  for (int i = 0; i < 4; ++i) {
    const double g = i + 1.0;
    EXPECT_NEAR(w.basis_matrix(i, 0), g / 2, 1e-15);
    EXPECT_NEAR(w.basis_matrix(i, 1), 1 / (2 * g), 1e-15);
  }
  EXPECT_EQ(rank(w.basis_matrix).rank, 2);
}

TEST(PhiMap, NonCyclicPairIsRejected) {
  EXPECT_THROW(phi_map(diag_pair({1, -1}, vec({1, 0})), default_grid(kPos)), PreconditionViolation);
}

TEST(PhiMap, TrivialPairIsConstantColumn) {
  const FunctionSpaceSample w = phi_map(diag_pair({0}, vec({1})), default_grid(kPos));
  EXPECT_EQ(w.basis_matrix.cols(), 1);
  EXPECT_LE((w.basis_matrix.array() - 1.0).abs().maxCoeff(), 1e-15);
}

TEST(FunctionSpace, GridTooSmall) {
  EXPECT_THROW(make_function_space({1.0, 2.0, 3.0}, {[](double g) { return g; }, [](double g) { return 1 / g; }}),
               GridTooSmall);
  EXPECT_THROW(make_function_space(default_grid(kPos), {[](double g) { return g; }, [](double g) { return 2 * g; }}),
               GridTooSmall);
}

TEST(PsiMap, DiagonalActionOnGAndInverse) {
  const PsiResult r = psi_map(span_g_inv_g(), kPos, {2.0, 0.5, 3.0});
  const std::vector<double> as = {2.0, 0.5, 3.0};
  for (std::size_t i = 0; i < as.size(); ++i) {
    Matrix expected = Matrix::Zero(2, 2);
    expected(0, 0) = 1 / as[i];
    expected(1, 1) = as[i];
    EXPECT_LE((r.action_matrices[i] - expected).norm(), 1e-10);
    EXPECT_LE((r.dual_matrices[i] - expected.inverse().transpose()).norm(), 1e-10);
  }
  EXPECT_LE(r.max_residual, 1e-8);
  EXPECT_LE((r.pair.v0() - vec({1, 1})).norm(), 1e-15);
}

TEST(PsiMap, ConstantsAndLogarithm) {
  const PsiResult c = psi_map(make_function_space(default_grid(kPos), {[](double) { return 1.0; }}), kPos, {2.0});
  EXPECT_NEAR(c.action_matrices[0](0, 0), 1.0, 1e-12);
  EXPECT_NEAR(c.pair.v0()(0), 1.0, 1e-15);

  const double a = 3.0;
  const PsiResult l = psi_map(span_one_log(), kPos, {a});
  // L_a log = log - log a: coefficient matrix in the basis (1, log)
  Matrix expected(2, 2);
  expected << 1, -std::log(a), 0, 1;
  EXPECT_LE((l.action_matrices[0] - expected).norm(), 1e-10);
}

TEST(PsiMap, NonInvariantSpaceIsRejected) {
  const FunctionSpaceSample w =
      make_function_space(default_grid(kPos), {[](double g) { return g; }, [](double g) { return 1.0 + g * g; }});
  EXPECT_THROW(psi_map(w, kPos, {2.0}), NotInvariant);
}

TEST(PsiMap, EvaluationAtIdentityIsCyclic) {
  for (const FunctionSpaceSample& w : {span_g_inv_g(), span_one_log()}) {
    const PsiResult r = psi_map(w, kPos, {2.0});
    EXPECT_TRUE(cyclic_check(r.pair, 16).holds);
  }
  EXPECT_TRUE(cyclic_check(psi_map(span_cos_sin(), kCircle, {1.0}).pair, 16).holds);
}

TEST(Correspondence, PhiAfterPsiIsIdentity) {
  const std::vector<std::pair<FunctionSpaceSample, GroupChart>> spaces = {
      {span_g_inv_g(), kPos}, {span_one_log(), kPos}, {span_cos_sin(), kCircle}};
  for (const auto& [w, chart] : spaces) {
    const PsiResult r = psi_map(w, chart, {chart.from_additive(0.7)});
    const FunctionSpaceSample back = phi_map(r.pair, w.grid);
    // Same functions, not merely the same span.
    EXPECT_LE((back.basis_matrix - w.basis_matrix).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_TRUE(compare_spans(back.basis_matrix, w.basis_matrix, 1e-9).same);
  }
}

TEST(Correspondence, PsiAfterPhiIsEquivalentToThePair) {
  for (const auto& entry : catalog::named_pairs()) {
    if (!cyclic_check(entry.pair).holds) continue;
    const FunctionSpaceSample w = phi_map(entry.pair, default_grid(entry.pair.chart()));
    const PsiResult r = psi_map(w, entry.pair.chart(), {entry.pair.chart().from_additive(0.3)});
    const EquivalenceSearch s = find_equivalence(r.pair, entry.pair, 24);
    EXPECT_TRUE(s.intertwiner.has_value()) << entry.label << ": " << s.reason;
  }
}

TEST(FindEquivalence, GigToRescaledVector) {
  const EquivalenceSearch s = find_equivalence(gig(), diag_pair({1, -1}, vec({3, -1})));
  ASSERT_TRUE(s.intertwiner.has_value());
  Matrix expected = Matrix::Zero(2, 2);
  expected(0, 0) = 6;
  expected(1, 1) = -2;
  EXPECT_LE((s.intertwiner->psi - expected).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LE(s.constraint_residual, 1e-8);
}

TEST(FindEquivalence, DifferentWeightsHaveNone) {
  const EquivalenceSearch s = find_equivalence(gig(), diag_pair({1, 2}, vec({1, 1})));
  EXPECT_FALSE(s.intertwiner.has_value());
  EXPECT_FALSE(s.reason.empty());
  EXPECT_FALSE(same_family_check(gig(), diag_pair({1, 2}, vec({1, 1})), default_grid(kPos)).same);
}

TEST(FindEquivalence, ReflexiveSymmetricTransitive) {
  const PairSpec a = gig();
  const PairSpec b = diag_pair({1, -1}, vec({3, -1}));
  const PairSpec c = diag_pair({1, -1}, vec({-0.25, 2}));
  const auto aa = find_equivalence(a, a);
  ASSERT_TRUE(aa.intertwiner);
  EXPECT_LE((aa.intertwiner->psi - Matrix::Identity(2, 2)).norm(), 1e-10);

  const auto ab = find_equivalence(a, b);
  const auto ba = find_equivalence(b, a);
  ASSERT_TRUE(ab.intertwiner && ba.intertwiner);
  EXPECT_LE((ab.intertwiner->psi * ba.intertwiner->psi - Matrix::Identity(2, 2)).norm(), 1e-10);

  const auto bc = find_equivalence(b, c);
  const auto ac = find_equivalence(a, c);
  ASSERT_TRUE(bc.intertwiner && ac.intertwiner);
  EXPECT_LE((bc.intertwiner->psi * ab.intertwiner->psi - ac.intertwiner->psi).norm(), 1e-10);
}

TEST(FindEquivalence, RequiresCyclicPairsOnOneChart) {
  EXPECT_THROW(find_equivalence(gig(), diag_pair({1, -1}, vec({1, 0}))), PreconditionViolation);
  const PairSpec circle = PairSpec::make(RepSpec(Rotation{{1}}, kCircle), vec({1, 0}));
  EXPECT_THROW(find_equivalence(gig(), circle), PreconditionViolation);
}

TEST(FindEquivalence, ImpliesSameFamily) {
  const auto pairs = catalog::named_pairs();
  for (const auto& a : pairs) {
    for (const auto& b : pairs) {
      if (!(a.pair.chart() == b.pair.chart())) continue;
      if (!cyclic_check(a.pair).holds || !cyclic_check(b.pair).holds) continue;
      const auto s = find_equivalence(a.pair, b.pair, 24);
      if (s.intertwiner) {
        EXPECT_TRUE(same_family_check(a.pair, b.pair, default_grid(a.pair.chart())).same)
            << a.label << " ~ " << b.label;
      }
    }
  }
}

TEST(SameFamily, Examples) {
  const auto grid = default_grid(kPos);
  EXPECT_TRUE(same_family_check(gig(), diag_pair({-1, 1}, vec({0.5, 0.5})), grid).same);
  EXPECT_FALSE(same_family_check(gig(), diag_pair({1, 2}, vec({1, 1})), grid).same);
  EXPECT_TRUE(same_family_check(gig(), gig(), grid).same);
}

TEST(RhFixed, Examples) {
  EXPECT_TRUE(rh_fixed_check(span_g_inv_g(), kPos, SubgroupSpec::trivial()).fixed);
  EXPECT_FALSE(rh_fixed_check(span_g_inv_g(), kPos, SubgroupSpec::finite({2.0})).fixed);
  const FunctionSpaceSample constants = make_function_space(default_grid(kPos), {[](double) { return 1.0; }});
  EXPECT_TRUE(rh_fixed_check(constants, kPos, SubgroupSpec::finite({2.0, 0.5})).fixed);
  // cos(2t), sin(2t) are invariant under t -> t + pi
  const FunctionSpaceSample doubled = make_function_space(
      default_grid(kCircle), {[](double t) { return std::cos(2 * t); }, [](double t) { return std::sin(2 * t); }});
  EXPECT_TRUE(rh_fixed_check(doubled, kCircle, SubgroupSpec::finite({std::numbers::pi})).fixed);
}
