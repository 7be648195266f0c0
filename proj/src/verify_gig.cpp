#include "orbitfam/verify_gig.hpp"

#include <algorithm>
#include <cmath>

#include "orbitfam/equivalence.hpp"
#include "orbitfam/rng.hpp"

namespace orbitfam {

PairSpec gig_pair(double r, double s) {
  RepSpec rep(DiagonalWeights{{1.0, -1.0}}, GroupChart::positive_reals());
  Vector v0(2);
  v0 << r, s;
  return PairSpec::make(rep, v0, SubgroupSpec::trivial(), CharacterBasis::power());
}

std::vector<special::GigParams> gig_acceptance_grid(std::uint64_t seed) {
  std::vector<special::GigParams> grid = {
      {2, 2, 0.5}, {2, 2, 1}, {1, 3, -0.7}, {0.5, 4, 2}, {2, 0, 1},
      {2, 0, 3},   {3, 0, 0.5}, {0, 2, -3}, {0, 1, -0.5},
  };
  Xoshiro256 rng(seed);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * rng.next_open01(); };
  grid.push_back({uniform(0.2, 5.0), uniform(0.2, 5.0), uniform(-3.0, 3.0)});
  grid.push_back({uniform(0.2, 5.0), 0.0, uniform(0.3, 3.0)});
  grid.push_back({0.0, uniform(0.2, 5.0), uniform(-3.0, -0.3)});
  return grid;
}

namespace {

std::string case_label(special::GigCase c) {
  switch (c) {
    case special::GigCase::i:
      return "i";
    case special::GigCase::ii:
      return "ii";
    case special::GigCase::iii:
      return "iii";
    case special::GigCase::none:
      break;
  }
  return "none";
}

}  // namespace

std::size_t VerifyGigReport::normalizer_passed() const {
  return static_cast<std::size_t>(
      std::count_if(normalizer.begin(), normalizer.end(), [](const auto& c) { return c.passed; }));
}

bool VerifyGigReport::passed() const {
  const bool equiv_ok =
      std::all_of(equivalence.begin(), equivalence.end(), [](const auto& c) { return c.passed; });
  return normalizer_passed() == normalizer.size() && injectivity.injective && condition_a && equiv_ok;
}

VerifyGigReport verify_gig(const VerifyGigOptions& options) {
  VerifyGigReport report;
  report.options = options;
  const PairSpec pair = gig_pair();
  const FamilySpec fam = FamilySpec::make(pair);

  for (const special::GigParams& p : gig_acceptance_grid(options.seed)) {
    GigNormalizerCase c;
    c.params = p;
    c.gig_case = case_label(special::classify(p));
    try {
      c.phi = log_normalizer(fam, gig_theta(fam, p));
      c.norm_const = special::gig_norm_const(p);
      if (special::classify(p) == special::GigCase::i) c.norm_const /= options.bessel_scale;
      c.rel_error = std::abs(std::exp(c.phi) * c.norm_const - 1.0);
      c.passed = c.rel_error <= options.tolerance;
    } catch (const std::exception& e) {
      c.error = e.what();
    }
    report.normalizer.push_back(c);
  }

  report.injectivity = injectivity_check(pair, kDefaultSamples, options.seed);
  report.condition_a = condition_A(pair, kDefaultSamples, options.seed).holds;

  Xoshiro256 rng(options.seed ^ 0x9e3779b97f4a7c15ULL);
  auto signed_draw = [&] {
    const double mag = 0.2 + 3.8 * rng.next_open01();
    return rng.next_open01() < 0.5 ? -mag : mag;
  };
  const std::vector<special::GigParams> shared = {{2, 2, 0.5}, {2, 0, 1}, {0, 1, -0.5}};
  for (int k = 0; k < 5; ++k) {
    GigEquivalenceCase c;
    c.r = signed_draw();
    c.s = signed_draw();
    try {
      const PairSpec other = gig_pair(c.r, c.s);
      const EquivalenceSearch search = find_equivalence(pair, other, kDefaultSamples, options.seed);
      c.found = search.intertwiner.has_value();
      if (c.found) {
        c.psi = search.intertwiner->psi;
        Matrix expected = Matrix::Zero(2, 2);
        expected(0, 0) = 2.0 * c.r;
        expected(1, 1) = 2.0 * c.s;
        c.psi_error = (c.psi - expected).cwiseAbs().maxCoeff();
        const FamilySpec fam_b = FamilySpec::make(other);
        for (const auto& p : shared) {
          const ThetaParam theta = gig_theta(fam, p);
          const FamilyMember pa(fam, theta);
          const FamilyMember pb(fam_b, transport_theta(c.psi, theta));
          for (double x : carrier_grid(fam.carrier(), 32)) {
            const double ya = pa.pdf(x);
            c.max_pdf_difference = std::max(c.max_pdf_difference, std::abs(ya - pb.pdf(x)) / std::max(1.0, ya));
          }
        }
        c.passed = c.psi_error <= options.tolerance && c.max_pdf_difference <= options.pdf_tolerance;
      }
    } catch (const std::exception& e) {
      c.error = e.what();
    }
    report.equivalence.push_back(c);
  }
  return report;
}

}  // namespace orbitfam
