#include "catalog.hpp"

#include <optional>
#include <random>
#include <sstream>

namespace catalog {

using namespace orbitfam;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

std::string describe(const PairSpec& p) {
  std::ostringstream out;
  out << p.chart().name() << " " << p.rep().describe() << " v0=(" << p.v0().transpose() << ") chars="
      << p.characters().name();
  return out.str();
}

}  // namespace

std::vector<Entry> named_pairs() {
  const auto pos = GroupChart::positive_reals();
  const auto line = GroupChart::real_line();
  const auto circ = GroupChart::circle();
  const RepSpec gig(DiagonalWeights{{1, -1}}, pos);
  std::vector<Entry> out;
  auto add = [&](std::string label, PairSpec p) { out.push_back({std::move(label), std::move(p)}); };
  add("gig", PairSpec::make(gig, vec({0.5, 0.5}), SubgroupSpec::trivial(), CharacterBasis::power()));
  add("gig-r-s", PairSpec::make(gig, vec({3, -1}), SubgroupSpec::trivial(), CharacterBasis::power()));
  add("gamma", PairSpec::make(gig, vec({1, 0}), SubgroupSpec::trivial(), CharacterBasis::power()));
  add("inverse-gamma", PairSpec::make(gig, vec({0, 1}), SubgroupSpec::trivial(), CharacterBasis::power()));
  add("trivial-1d", PairSpec::make(RepSpec(DiagonalWeights{{0}}, pos), vec({1})));
  add("weights-1-2", PairSpec::make(RepSpec(DiagonalWeights{{1, 2}}, pos), vec({0.5, 0.5})));
  add("von-mises", PairSpec::make(RepSpec(Rotation{{1}}, circ), vec({1, 0})));
  add("rotation-1-2", PairSpec::make(RepSpec(Rotation{{1, 2}}, circ), vec({1, 0, 0, 1})));
  add("log-unipotent-cyclic", PairSpec::make(RepSpec(LogUnipotent{}, pos), vec({0, 1})));
  add("log-unipotent-fixed", PairSpec::make(RepSpec(LogUnipotent{}, pos), vec({1, 0})));
  add("gaussian-line", PairSpec::make(RepSpec(DiagonalWeights{{1, 2}}, line), vec({1, 1})));
  add("sum-with-trivial",
      PairSpec::make(RepSpec(DirectSum{{RepSpec(DiagonalWeights{{1, -1}}, pos), RepSpec(DiagonalWeights{{0}}, pos)}},
                             pos),
                     vec({0.5, 0.5, 1})));
  return out;
}

std::vector<Entry> random_pairs(std::uint64_t seed, std::size_t n, CharacterBasis characters) {
  std::mt19937_64 gen(seed);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); };
  const double entries[] = {-1.0, 0.0, 1.0, 0.5};
  auto random_v0 = [&](int dim) {
    Vector v = Vector::Zero(dim);
    while (v.isZero(0.0)) {
      for (int i = 0; i < dim; ++i) v(i) = entries[pick(0, 3)];
    }
    return v;
  };
  auto chars_for = [&](const GroupChart& chart) {
    const bool ok = (characters.kind == CharacterBasis::Kind::power && chart.kind() == ChartKind::positive_reals) ||
                    (characters.kind == CharacterBasis::Kind::linear && chart.kind() == ChartKind::real_line);
    return ok ? characters : CharacterBasis::trivial();
  };

  std::vector<Entry> out;
  while (out.size() < n) {
    const int shape = pick(0, 5);
    std::optional<RepSpec> rep;
    if (shape <= 2) {
      const GroupChart chart = shape == 2 ? GroupChart::real_line() : GroupChart::positive_reals();
      std::vector<double> w(static_cast<std::size_t>(pick(1, 3)));
      for (double& x : w) x = pick(-2, 2);
      rep.emplace(DiagonalWeights{w}, chart);
    } else if (shape == 3) {
      std::vector<double> f(static_cast<std::size_t>(pick(1, 2)));
      for (double& x : f) x = pick(0, 2);
      rep.emplace(Rotation{f}, GroupChart::circle());
    } else if (shape == 4) {
      rep.emplace(LogUnipotent{}, GroupChart::positive_reals());
    } else {
      const auto pos = GroupChart::positive_reals();
      std::vector<double> w = {static_cast<double>(pick(-2, 2))};
      rep.emplace(DirectSum{{RepSpec(LogUnipotent{}, pos), RepSpec(DiagonalWeights{w}, pos)}}, pos);
    }
    PairSpec pair = PairSpec::make(*rep, random_v0(rep->dim()), SubgroupSpec::trivial(), chars_for(rep->chart()));
    out.push_back({describe(pair), pair});
  }
  return out;
}

}  // namespace catalog
