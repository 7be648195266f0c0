#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "orbitfam/errors.hpp"
#include "orbitfam/linalg.hpp"
#include "orbitfam/quadrature.hpp"
#include "orbitfam/rng.hpp"
#include "oracles.hpp"

using namespace orbitfam;

namespace {

Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double x : r) m(i, j++) = x;
    ++i;
  }
  return m;
}

// sqrt(pi / 4) e^-2, from K_{1/2}(z) = sqrt(pi / (2z)) e^-z.
const double kHalfBessel2 = std::sqrt(std::numbers::pi / 4.0) * std::exp(-2.0);

}  // namespace

// -- rank and nullspace -----------------------------------------------------------

TEST(Rank, IdentityHasFullRank) {
  const RankReport r = rank(Matrix::Identity(3, 3), 1e-9);
  EXPECT_EQ(r.rank, 3);
  EXPECT_EQ(r.singular_values.size(), 3u);
  EXPECT_DOUBLE_EQ(r.tolerance_used, 1e-9);
}

TEST(Rank, ZeroMatrixHasRankZero) { EXPECT_EQ(rank(Matrix::Zero(2, 2)).rank, 0); }

TEST(Rank, GigConditionAMatrixAtTwoAndFour) {
  // columns rho(g) v0 - v0 for v0 = (1/2, 1/2), g = 2, 4; determinant 0.1875
  const Matrix m = mat({{0.5, 1.5}, {-0.25, -0.375}});
  EXPECT_NEAR(m.determinant(), 0.1875, 1e-15);
  EXPECT_EQ(rank(m).rank, 2);
}

TEST(Rank, SingularValuesDescendAndCountMatchesThreshold) {
  const Matrix m = mat({{3, 0, 0}, {0, 1e-12, 0}, {0, 0, 2}});
  const RankReport r = rank(m, 1e-9);
  ASSERT_EQ(r.singular_values.size(), 3u);
  EXPECT_GE(r.singular_values[0], r.singular_values[1]);
  EXPECT_GE(r.singular_values[1], r.singular_values[2]);
  EXPECT_EQ(r.rank, 2);
  EXPECT_DOUBLE_EQ(r.tolerance_used, 3e-9);
}

TEST(Rank, RejectsInvalidInput) {
  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(rank(bad), InvalidInput);
  bad(0, 1) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(rank(bad), InvalidInput);
  EXPECT_THROW(rank(Matrix(0, 0)), InvalidInput);
  EXPECT_THROW(rank(Matrix::Identity(2, 2), 0.0), InvalidInput);
  EXPECT_THROW(rank(Matrix::Identity(2, 2), 1.0), InvalidInput);
}

TEST(Rank, EqualsRankOfTransposeOnRandomMatrices) {
  std::mt19937_64 gen(7);
  std::uniform_int_distribution<int> dim(1, 8);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 50; ++trial) {
    const int rows = dim(gen), cols = dim(gen), inner = dim(gen);
    Matrix a(rows, inner), b(inner, cols);
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = normal(gen);
    for (Eigen::Index i = 0; i < b.size(); ++i) b.data()[i] = normal(gen);
    const Matrix m = a * b;  // rank min(rows, cols, inner) generically
    EXPECT_EQ(rank(m).rank, rank(m.transpose()).rank) << "trial " << trial;
    EXPECT_EQ(rank(m).rank, std::min({rows, cols, inner})) << "trial " << trial;
  }
}

TEST(Nullspace, DualGigAtTwoIsTrivial) {
  EXPECT_TRUE(nullspace(mat({{-0.5, 0}, {0, 1}})).empty());
}

TEST(Nullspace, ZeroMatrixGivesOrthonormalBasis) {
  const auto ns = nullspace(Matrix::Zero(2, 2));
  ASSERT_EQ(ns.size(), 2u);
  EXPECT_NEAR(ns[0].norm(), 1.0, 1e-15);
  EXPECT_NEAR(ns[1].norm(), 1.0, 1e-15);
  EXPECT_NEAR(ns[0].dot(ns[1]), 0.0, 1e-15);
}

TEST(Nullspace, RowOneOneGivesAntidiagonal) {
  const auto ns = nullspace(mat({{1, 1}}));
  ASSERT_EQ(ns.size(), 1u);
  const double s = ns[0](0) > 0 ? 1.0 : -1.0;
  EXPECT_NEAR(s * ns[0](0), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(s * ns[0](1), -1.0 / std::sqrt(2.0), 1e-15);
}

TEST(Nullspace, VectorsAreAnnihilatedWithinThreshold) {
  std::mt19937_64 gen(11);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 30; ++trial) {
    Matrix a(3, 2), b(2, 5);
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = normal(gen);
    for (Eigen::Index i = 0; i < b.size(); ++i) b.data()[i] = normal(gen);
    const Matrix m = a * b;
    const RankReport r = rank(m);
    const auto ns = nullspace(m);
    ASSERT_EQ(static_cast<int>(ns.size()), 5 - r.rank);
    for (const Vector& v : ns) {
      EXPECT_LE((m * v).norm(), 1e-9 * r.singular_values.front() * v.norm());
    }
    EXPECT_EQ(nullspace_basis(m).cols(), static_cast<Eigen::Index>(ns.size()));
  }
}

TEST(LeastSquares, ExactSystemHasZeroResidual) {
  const Matrix a = mat({{1, 0}, {0, 2}, {1, 1}});
  const Matrix x = mat({{3}, {-1}});
  const LeastSquaresResult r = least_squares(a, a * x);
  EXPECT_LE((r.solution - x).norm(), 1e-14);
  EXPECT_LE(r.relative_residual, 1e-15);
}

TEST(LeastSquares, InconsistentSystemReportsResidual) {
  const Matrix a = mat({{1}, {1}});
  const Matrix b = mat({{0}, {2}});
  const LeastSquaresResult r = least_squares(a, b);
  EXPECT_NEAR(r.solution(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(r.residual, std::sqrt(2.0), 1e-14);
}

TEST(LeastSquares, MinimumNormForUnderdetermined) {
  const LeastSquaresResult r = least_squares(mat({{1, 1}}), mat({{2}}));
  EXPECT_NEAR(r.solution(0, 0), 1.0, 1e-14);
  EXPECT_NEAR(r.solution(1, 0), 1.0, 1e-14);
}

TEST(BlockDiagonal, PlacesBlocks) {
  const Matrix m = block_diagonal({mat({{1}}), mat({{2, 3}, {4, 5}})});
  EXPECT_EQ(m, mat({{1, 0, 0}, {0, 2, 3}, {0, 4, 5}}));
}

// -- quadrature -------------------------------------------------------------------

TEST(HalflineQuadrature, UnitExponential) {
  const QuadResult r = integrate_halfline([](double x) { return std::exp(-x); }, 1e-12);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, 1.0, 1e-12);
  EXPECT_LE(r.abs_error_estimate, 1e-12 * std::abs(r.value));
}

TEST(HalflineQuadrature, GammaThree) {
  const QuadResult r = integrate_halfline([](double x) { return x * x * std::exp(-x); }, 1e-12);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, 2.0, 2e-12);
}

TEST(HalflineQuadrature, BesselHalfIntegrand) {
  auto f = [](double x) { return std::exp(-x - 1.0 / x) / std::sqrt(x); };
  const QuadResult r = integrate_halfline(f, 1e-12);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, 2.0 * kHalfBessel2, 1e-12);
  EXPECT_NEAR(r.value, 0.23987554, 1e-8);
}

TEST(HalflineQuadrature, ScaleOptionLocatesFarMass) {
  QuadOptions opts;
  opts.tol = 1e-12;
  opts.scale = 1e4;
  const QuadResult r = integrate_halfline([](double x) { return std::exp(-x / 1e4) / 1e4; }, opts);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, 1.0, 1e-11);
}

TEST(HalflineQuadrature, FlagsNonIntegrableTail) {
  const QuadResult r = integrate_halfline([](double x) { return 1.0 / (1.0 + x); }, 1e-10);
  EXPECT_FALSE(r.converged);
  EXPECT_TRUE(r.divergent);
}

TEST(HalflineQuadrature, FlagsNonFiniteValues) {
  const QuadResult r = integrate_halfline([](double x) { return std::exp(x); }, 1e-10);
  EXPECT_FALSE(r.converged);
  EXPECT_TRUE(r.divergent);
}

TEST(HalflineQuadrature, LinearOnFixedSet) {
  const std::vector<RealFunction> fs = {
      [](double x) { return std::exp(-x); },
      [](double x) { return std::exp(-x * x); },
      [](double x) { return std::exp(-x - 1.0 / x) / std::sqrt(x); },
      [](double x) { return 1.0 / (1.0 + x * x); },
  };
  for (std::size_t i = 0; i < fs.size(); ++i) {
    for (std::size_t j = 0; j < fs.size(); ++j) {
      const QuadResult a = integrate_halfline(fs[i], 1e-10);
      const QuadResult b = integrate_halfline(fs[j], 1e-10);
      const QuadResult s = integrate_halfline([&](double x) { return fs[i](x) + fs[j](x); }, 1e-10);
      ASSERT_TRUE(a.converged && b.converged && s.converged);
      const double bound =
          2.0 * (a.abs_error_estimate + b.abs_error_estimate + s.abs_error_estimate) + 1e-15 * std::abs(s.value);
      EXPECT_LE(std::abs(a.value + b.value - s.value), bound) << i << "," << j;
    }
  }
}

TEST(HalflineQuadrature, AgreesWithBoostOnSmoothIntegrands) {
  const std::vector<RealFunction> fs = {
      [](double x) { return std::pow(x, 2.3) * std::exp(-1.7 * x); },
      [](double x) { return std::exp(-0.5 * (3 * x + 2 / x)) / x; },
      [](double x) { return std::exp(-x * x) * std::cos(x); },
  };
  for (const auto& f : fs) {
    const QuadResult r = integrate_halfline(f, 1e-12);
    ASSERT_TRUE(r.converged);
    EXPECT_NEAR(r.value, oracle::integrate_halfline_boost(f), 1e-11 * std::abs(r.value));
  }
}

TEST(IntervalQuadrature, ConstantAndLinear) {
  EXPECT_NEAR(integrate_interval([](double) { return 1.0; }, 0.0, 1.0, 1e-12).value, 1.0, 1e-14);
  EXPECT_NEAR(integrate_interval([](double x) { return x; }, 0.0, 2.0, 1e-12).value, 2.0, 1e-14);
}

TEST(IntervalQuadrature, EndpointSingularityIsNotEvaluated) {
  const QuadResult r = integrate_interval([](double x) { return std::log(x); }, 0.0, 1.0, 1e-12);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, -1.0, 1e-12);
}

TEST(IntervalQuadrature, TruncatedBesselIntegrandMatchesHalfline) {
  auto f = [](double x) { return std::exp(-x - 1.0 / x) / std::sqrt(x); };
  const double interval = integrate_interval(f, 1e-6, 50.0, 1e-12).value;
  const double halfline = integrate_halfline(f, 1e-12).value;
  EXPECT_NEAR(interval, halfline, 1e-6);
}

TEST(GaussLegendre, ExactForPolynomialsOfDegree39) {
  auto p = [](double x) { return std::pow(x, 39) + 3 * x * x; };
  // int_0^1 x^39 + 3x^2 = 1/40 + 1
  EXPECT_NEAR(gauss_legendre(p, 0.0, 1.0, 20), 1.025, 1e-14);
  EXPECT_NEAR(gauss_legendre([](double x) { return std::exp(x); }, 0.0, 1.0, 20), std::exp(1.0) - 1.0, 1e-15);
}

TEST(DivergenceProbe, Verdicts) {
  EXPECT_EQ(probe_halfline_divergence([](double x) { return std::exp(-x - 1.0 / x); }).verdict,
            DivergenceVerdict::convergent);
  EXPECT_EQ(probe_halfline_divergence([](double) { return 1.0; }).verdict, DivergenceVerdict::divergent);
  EXPECT_EQ(probe_halfline_divergence([](double x) { return std::exp(-x) / std::pow(x, 1.5); }).verdict,
            DivergenceVerdict::divergent);
  // Logarithmic growth stays below the ratio threshold: never reported convergent.
  EXPECT_NE(probe_halfline_divergence([](double x) { return 1.0 / (1.0 + x); }).verdict,
            DivergenceVerdict::convergent);
  EXPECT_NE(probe_halfline_divergence([](double x) { return std::exp(-x) / x; }).verdict,
            DivergenceVerdict::convergent);
  EXPECT_EQ(probe_line_divergence([](double x) { return std::exp(-x * x); }).verdict,
            DivergenceVerdict::convergent);
  EXPECT_EQ(probe_line_divergence([](double) { return 1.0; }).verdict, DivergenceVerdict::divergent);
  // Decays too slowly to settle within the probe range.
  EXPECT_EQ(probe_halfline_divergence([](double x) { return 1.0 / (1.0 + std::pow(x, 1.05)); }).verdict,
            DivergenceVerdict::inconclusive);
  EXPECT_EQ(probe_halfline_divergence([](double) { return 0.0; }).verdict, DivergenceVerdict::inconclusive);
}

// -- rng ----------------------------------------------------------------------------

TEST(Rng, SplitMixReferenceValue) {
  std::uint64_t state = 0;
  EXPECT_EQ(splitmix64(state), 0xE220A8397B1DCDAFULL);
}

TEST(Rng, DeterministicPerSeed) {
  EXPECT_EQ(rng_uniform(42, 3), rng_uniform(42, 3));
  EXPECT_NE(rng_uniform(42, 1)[0], rng_uniform(43, 1)[0]);
}

TEST(Rng, OpenIntervalAndMean) {
  const auto us = rng_uniform(2024, 100000);
  double sum = 0.0;
  for (double u : us) {
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  const double mean = sum / static_cast<double>(us.size());
  EXPECT_GE(mean, 0.49);
  EXPECT_LE(mean, 0.51);
}

TEST(Rng, RejectsEmptyRequest) { EXPECT_THROW(rng_uniform(1, 0), InvalidInput); }

TEST(Rng, MatchesReferenceXoshiro256StarStar) {
  // Reference algorithm written out independently: splitmix64 expansion of the
  // seed into four words, then the published xoshiro256** step.
  auto rotl = [](std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
  std::uint64_t sm = 12345;
  std::uint64_t s[4];
  for (auto& w : s) {
    std::uint64_t z = (sm += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    w = z ^ (z >> 31);
  }
  Xoshiro256 gen(12345);
  for (int i = 0; i < 10; ++i) {
    const std::uint64_t expected = rotl(s[1] * 5, 7) * 9;
    const std::uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl(s[3], 45);
    EXPECT_EQ(gen.next_u64(), expected) << "draw " << i;
  }
}
