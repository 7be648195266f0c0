#include "orbitfam/group.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "orbitfam/errors.hpp"
#include "orbitfam/rng.hpp"

namespace orbitfam {

namespace {

constexpr std::uint64_t kValidationSeed = 0x6f72626974666d31ULL;

double wrap_angle(double a) {
  // to (-pi, pi]
  double r = std::remainder(a, 2.0 * std::numbers::pi);
  if (r <= -std::numbers::pi) r += 2.0 * std::numbers::pi;
  return r;
}

}  // namespace

std::string to_string(ChartKind kind) {
  switch (kind) {
    case ChartKind::positive_reals:
      return "positive_reals";
    case ChartKind::real_line:
      return "real_line";
    case ChartKind::circle:
      return "circle";
  }
  return "unknown";
}

GroupChart::GroupChart(ChartKind kind) : kind_(kind) {}

double GroupChart::identity() const { return kind_ == ChartKind::positive_reals ? 1.0 : 0.0; }

double GroupChart::compose(double g, double h) const {
  switch (kind_) {
    case ChartKind::positive_reals:
      return g * h;
    case ChartKind::real_line:
      return g + h;
    case ChartKind::circle:
      return wrap_angle(g + h);
  }
  return 0.0;
}

double GroupChart::inverse(double g) const {
  switch (kind_) {
    case ChartKind::positive_reals:
      return 1.0 / g;
    case ChartKind::real_line:
      return -g;
    case ChartKind::circle:
      return wrap_angle(-g);
  }
  return 0.0;
}

bool GroupChart::contains(double g) const {
  if (!std::isfinite(g)) return false;
  switch (kind_) {
    case ChartKind::positive_reals:
      return g > 0.0;
    case ChartKind::real_line:
      return true;
    case ChartKind::circle:
      return g > -std::numbers::pi && g <= std::numbers::pi;
  }
  return false;
}

void GroupChart::require_contains(double g) const {
  if (!contains(g)) {
    std::ostringstream msg;
    msg << "parameter " << g << " outside the " << name() << " chart";
    throw DomainError(msg.str());
  }
}

double GroupChart::additive(double g) const {
  return kind_ == ChartKind::positive_reals ? std::log(g) : g;
}

double GroupChart::from_additive(double tau) const {
  switch (kind_) {
    case ChartKind::positive_reals:
      return std::exp(tau);
    case ChartKind::real_line:
      return tau;
    case ChartKind::circle:
      return wrap_angle(tau);
  }
  return tau;
}

std::pair<double, double> GroupChart::sampling_window() const {
  switch (kind_) {
    case ChartKind::positive_reals:
      return {-2.0, 2.0};
    case ChartKind::real_line:
      return {-3.0, 3.0};
    case ChartKind::circle:
      return {-std::numbers::pi, std::numbers::pi};
  }
  return {0.0, 0.0};
}

std::vector<double> sample_group(const GroupChart& chart, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw InvalidInput("sample_group: n must be >= 1");
  Xoshiro256 gen(seed);
  const auto [lo, hi] = chart.sampling_window();
  std::vector<double> out;
  out.reserve(n);
  out.push_back(chart.identity());
  while (out.size() < n) {
    const double g = chart.from_additive(lo + (hi - lo) * gen.next_open01());
    if (!chart.contains(g)) continue;
    if (std::find(out.begin(), out.end(), g) != out.end()) continue;
    out.push_back(g);
  }
  return out;
}

void validate_subgroup(const SubgroupSpec& h, const GroupChart& chart) {
  for (double e : h.elements) chart.require_contains(e);
}

// -- RepSpec ----------------------------------------------------------------------

namespace {

int template_dim(const RepTemplate& t) {
  return std::visit(
      [](const auto& x) -> int {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, DiagonalWeights>) {
          return static_cast<int>(x.weights.size());
        } else if constexpr (std::is_same_v<T, Rotation>) {
          return 2 * static_cast<int>(x.frequencies.size());
        } else if constexpr (std::is_same_v<T, LogUnipotent>) {
          return 2;
        } else if constexpr (std::is_same_v<T, DirectSum>) {
          int d = 0;
          for (const auto& s : x.summands) d += s.dim();
          return d;
        } else {
          return x ? x->dim() : 0;
        }
      },
      t);
}

void check_structure(const RepTemplate& t, const GroupChart& chart) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, DiagonalWeights>) {
          for (double w : x.weights) {
            if (!std::isfinite(w)) throw InvalidRepresentation("non-finite weight");
            if (chart.kind() == ChartKind::circle && w != 0.0) {
              throw InvalidRepresentation(
                  "diagonal_weights on the circle is a homomorphism only for zero weights");
            }
          }
        } else if constexpr (std::is_same_v<T, Rotation>) {
          for (double k : x.frequencies) {
            if (!std::isfinite(k)) throw InvalidRepresentation("non-finite frequency");
            if (chart.kind() == ChartKind::circle && k != std::round(k)) {
              throw InvalidRepresentation("rotation frequencies on the circle must be integers");
            }
          }
        } else if constexpr (std::is_same_v<T, LogUnipotent>) {
          if (chart.kind() == ChartKind::circle) {
            throw InvalidRepresentation("log_unipotent is not defined on the circle");
          }
        } else if constexpr (std::is_same_v<T, DirectSum>) {
          if (x.summands.empty()) throw InvalidRepresentation("direct_sum needs summands");
          for (const auto& s : x.summands) {
            if (!(s.chart() == chart)) throw InvalidRepresentation("direct_sum summands on a different chart");
          }
        } else {
          if (!x) throw InvalidRepresentation("null custom template");
        }
      },
      t);
}

Matrix eval_template(const RepTemplate& t, const GroupChart& chart, double g) {
  const double tau = chart.additive(g);
  return std::visit(
      [&](const auto& x) -> Matrix {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, DiagonalWeights>) {
          const auto n = static_cast<Eigen::Index>(x.weights.size());
          Matrix m = Matrix::Zero(n, n);
          for (Eigen::Index i = 0; i < n; ++i) {
            const double w = x.weights[static_cast<std::size_t>(i)];
            // pow keeps g^1 and g^-1 exact on positive_reals
            m(i, i) = chart.kind() == ChartKind::positive_reals ? std::pow(g, w) : std::exp(w * tau);
          }
          return m;
        } else if constexpr (std::is_same_v<T, Rotation>) {
          std::vector<Matrix> blocks;
          for (double k : x.frequencies) {
            const double a = k * tau;
            Matrix r(2, 2);
            r << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
            blocks.push_back(std::move(r));
          }
          return block_diagonal(blocks);
        } else if constexpr (std::is_same_v<T, LogUnipotent>) {
          Matrix m(2, 2);
          m << 1.0, -tau, 0.0, 1.0;
          return m;
        } else if constexpr (std::is_same_v<T, DirectSum>) {
          std::vector<Matrix> blocks;
          for (const auto& s : x.summands) blocks.push_back(s.eval(g));
          return block_diagonal(blocks);
        } else {
          return x->eval(g);
        }
      },
      t);
}

std::string describe_template(const RepTemplate& t) {
  std::ostringstream out;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        auto list = [&](const std::vector<double>& v) {
          out << '[';
          for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << v[i];
          out << ']';
        };
        if constexpr (std::is_same_v<T, DiagonalWeights>) {
          out << "diagonal_weights";
          list(x.weights);
        } else if constexpr (std::is_same_v<T, Rotation>) {
          out << "rotation";
          list(x.frequencies);
        } else if constexpr (std::is_same_v<T, LogUnipotent>) {
          out << "log_unipotent";
        } else if constexpr (std::is_same_v<T, DirectSum>) {
          out << "direct_sum(";
          for (std::size_t i = 0; i < x.summands.size(); ++i) {
            out << (i ? ", " : "") << x.summands[i].describe();
          }
          out << ')';
        } else {
          out << x->name();
        }
      },
      t);
  return out.str();
}

}  // namespace

RepSpec::RepSpec(RepTemplate tmpl, GroupChart chart) : tmpl_(std::move(tmpl)), chart_(chart) {
  check_structure(tmpl_, chart_);
  dim_ = template_dim(tmpl_);
  if (dim_ <= 0) throw InvalidRepresentation("representation must have positive dimension");

  const HomomorphismReport h = check_homomorphism(*this, 8, kValidationSeed);
  if (h.identity_residual > 1e-12) {
    throw InvalidRepresentation(describe() + ": rho(e) differs from the identity by " +
                                std::to_string(h.identity_residual));
  }
  if (h.min_rank_ratio <= kDefaultRankRelTol) {
    throw InvalidRepresentation(describe() + ": rho(g) is numerically singular at a sampled g");
  }
  if (h.max_homomorphism_residual > 1e-10) {
    throw InvalidRepresentation(describe() + ": homomorphism residual " +
                                std::to_string(h.max_homomorphism_residual) + " exceeds 1e-10");
  }
}

std::string RepSpec::describe() const { return describe_template(tmpl_); }

Matrix RepSpec::eval(double g) const {
  chart_.require_contains(g);
  return eval_template(tmpl_, chart_, g);
}

Matrix RepSpec::dual_eval(double g) const {
  const Matrix m = eval(g);
  return m.inverse().transpose();
}

Matrix rep_eval(const RepSpec& rep, double g) { return rep.eval(g); }
Matrix dual_rep_eval(const RepSpec& rep, double g) { return rep.dual_eval(g); }

HomomorphismReport check_homomorphism(const RepSpec& rep, std::size_t pairs, std::uint64_t seed) {
  const GroupChart& chart = rep.chart();
  HomomorphismReport report;
  const int n = rep.dim();
  report.identity_residual = (rep.eval(chart.identity()) - Matrix::Identity(n, n)).norm();
  const auto gs = sample_group(chart, pairs + 1, seed);
  const auto hs = sample_group(chart, pairs + 1, seed ^ 0x9e3779b97f4a7c15ULL);
  for (std::size_t i = 1; i <= pairs; ++i) {
    const Matrix a = rep.eval(gs[i]);
    const Matrix b = rep.eval(hs[i]);
    const Matrix ab = rep.eval(chart.compose(gs[i], hs[i]));
    report.max_homomorphism_residual =
        std::max(report.max_homomorphism_residual, relative_difference(a * b, ab));
    Eigen::JacobiSVD<Matrix> svd(a);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    report.min_rank_ratio = std::min(report.min_rank_ratio, smax > 0.0 ? smin / smax : 0.0);
  }
  return report;
}

// -- characters -------------------------------------------------------------------

Vector CharacterBasis::log_characters(double g) const {
  switch (kind) {
    case Kind::power: {
      if (!(g > 0.0)) throw DomainError("power character needs g > 0");
      Vector v(1);
      v(0) = std::log(g);
      return v;
    }
    case Kind::linear: {
      Vector v(1);
      v(0) = g;
      return v;
    }
    case Kind::trivial:
      return Vector(0);
  }
  return Vector(0);
}

std::string CharacterBasis::name() const {
  switch (kind) {
    case Kind::power:
      return "power";
    case Kind::linear:
      return "linear";
    case Kind::trivial:
      return "trivial";
  }
  return "unknown";
}

CharacterValidation validate_character_basis(const CharacterBasis& basis, const GroupChart& chart,
                                             const SubgroupSpec& h, std::uint64_t seed) {
  constexpr double kTol = 1e-10;
  CharacterValidation report;
  report.notes.push_back(
      "continuity of the declared characters is assumed; sampling cannot certify it");
  if (basis.size() == 0) return report;

  for (double e : h.elements) {
    double r = 0.0;
    try {
      r = basis.log_characters(e).cwiseAbs().maxCoeff();
    } catch (const DomainError&) {
      r = std::numeric_limits<double>::infinity();
    }
    if (r > report.max_subgroup_residual) report.max_subgroup_residual = r;
    if (r > kTol && !report.offending_element) report.offending_element = e;
  }

  const auto gs = sample_group(chart, 33, seed);
  const auto hs = sample_group(chart, 33, seed + 1);
  for (std::size_t i = 1; i < gs.size(); ++i) {
    double r = 0.0;
    try {
      const Vector lhs = basis.log_characters(chart.compose(gs[i], hs[i]));
      const Vector rhs = basis.log_characters(gs[i]) + basis.log_characters(hs[i]);
      r = (lhs - rhs).cwiseAbs().maxCoeff();
    } catch (const DomainError&) {
      r = std::numeric_limits<double>::infinity();
    }
    if (r > report.max_additivity_residual) report.max_additivity_residual = r;
    if (r > kTol && !report.offending_pair) report.offending_pair = std::make_pair(gs[i], hs[i]);
  }
  report.valid = report.max_subgroup_residual <= kTol && report.max_additivity_residual <= kTol;
  return report;
}

}  // namespace orbitfam
