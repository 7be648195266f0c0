#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "orbitfam/linalg.hpp"

namespace orbitfam {

enum class ChartKind { positive_reals, real_line, circle };

std::string to_string(ChartKind kind);

/// One-parameter group chart. Parameters are stored in the group's own
/// coordinate (g > 0 for positive_reals, an angle in (-pi, pi] for circle).
/// `additive` maps to the Lie-algebra coordinate where the law is addition.
class GroupChart {
 public:
  explicit GroupChart(ChartKind kind);
  static GroupChart positive_reals() { return GroupChart(ChartKind::positive_reals); }
  static GroupChart real_line() { return GroupChart(ChartKind::real_line); }
  static GroupChart circle() { return GroupChart(ChartKind::circle); }

  ChartKind kind() const { return kind_; }
  std::string name() const { return to_string(kind_); }
  int dim() const { return 1; }

  double identity() const;
  double compose(double g, double h) const;
  double inverse(double g) const;
  bool contains(double g) const;
  /// Throws DomainError outside the chart.
  void require_contains(double g) const;

  double additive(double g) const;
  double from_additive(double tau) const;

  /// Sampler window in the additive coordinate: [-2, 2] (log-uniform on
  /// [e^-2, e^2]) for positive_reals, [-3, 3] for real_line, [-pi, pi] for circle.
  std::pair<double, double> sampling_window() const;

  bool operator==(const GroupChart& other) const { return kind_ == other.kind_; }

 private:
  ChartKind kind_;
};

/// n pairwise distinct chart parameters, element 0 is the identity.
std::vector<double> sample_group(const GroupChart& chart, std::size_t n, std::uint64_t seed);

struct SubgroupSpec {
  enum class Kind { trivial, finite_list };
  Kind kind = Kind::trivial;
  std::vector<double> elements;

  static SubgroupSpec trivial() { return {}; }
  static SubgroupSpec finite(std::vector<double> elements) {
    return {Kind::finite_list, std::move(elements)};
  }
  bool is_trivial() const { return kind == Kind::trivial || elements.empty(); }
};

/// Throws DomainError if a listed element lies outside the chart.
void validate_subgroup(const SubgroupSpec& h, const GroupChart& chart);

// -- representation catalog ---------------------------------------------------

class RepSpec;

/// g -> diag(exp(w_i * tau(g))), i.e. diag(g^{w_i}) on positive_reals.
struct DiagonalWeights {
  std::vector<double> weights;
};

/// One 2x2 rotation block by angle k * tau(g) per frequency k.
struct Rotation {
  std::vector<double> frequencies;
};

/// g -> [[1, -tau(g)], [0, 1]]; [[1, -log g], [0, 1]] on positive_reals.
struct LogUnipotent {};

struct DirectSum {
  std::vector<RepSpec> summands;
};

/// Extension point: anything that can evaluate rho(g). Must pass the same
/// construction-time validation as the catalog templates.
class CustomTemplate {
 public:
  virtual ~CustomTemplate() = default;
  virtual int dim() const = 0;
  virtual Matrix eval(double g) const = 0;
  virtual std::string name() const = 0;
};

using RepTemplate =
    std::variant<DiagonalWeights, Rotation, LogUnipotent, DirectSum, std::shared_ptr<const CustomTemplate>>;

class RepSpec {
 public:
  /// Validates: invertible at 8 sampled g, rho(e) = I within 1e-12, and
  /// ||rho(g)rho(g') - rho(gg')|| <= 1e-10 * max(1, ||rho(gg')||) on 8 pairs.
  /// Throws InvalidRepresentation.
  RepSpec(RepTemplate tmpl, GroupChart chart);

  int dim() const { return dim_; }
  const GroupChart& chart() const { return chart_; }
  const RepTemplate& tmpl() const { return tmpl_; }
  std::string describe() const;

  /// rho(g). Throws DomainError for g outside the chart.
  Matrix eval(double g) const;
  /// Contragredient rho(g)^{-T}.
  Matrix dual_eval(double g) const;

 private:
  RepTemplate tmpl_;
  GroupChart chart_;
  int dim_ = 0;
};

Matrix rep_eval(const RepSpec& rep, double g);
Matrix dual_rep_eval(const RepSpec& rep, double g);

struct HomomorphismReport {
  double identity_residual = 0.0;
  double max_homomorphism_residual = 0.0;  // relative
  double min_rank_ratio = 1.0;             // sigma_min / sigma_max over samples
};

/// Measures the homomorphism laws of `rep` on `pairs` sampled pairs.
HomomorphismReport check_homomorphism(const RepSpec& rep, std::size_t pairs, std::uint64_t seed);

// -- characters -----------------------------------------------------------------

struct CharacterBasis {
  enum class Kind { power, linear, trivial };
  Kind kind = Kind::trivial;

  static CharacterBasis power() { return {Kind::power}; }
  static CharacterBasis linear() { return {Kind::linear}; }
  static CharacterBasis trivial() { return {Kind::trivial}; }

  int size() const { return kind == Kind::trivial ? 0 : 1; }
  /// (log chi_j(g))_j for unit coefficients: log g (power) or g (linear).
  Vector log_characters(double g) const;
  std::string name() const;
};

struct CharacterValidation {
  bool valid = true;
  double max_subgroup_residual = 0.0;
  double max_additivity_residual = 0.0;
  std::optional<std::pair<double, double>> offending_pair;
  std::optional<double> offending_element;
  std::vector<std::string> notes;
};

/// Checks log chi(h) = 0 on H and log chi(gg') = log chi(g) + log chi(g') on
/// 32 sampled pairs; rejects residuals above 1e-10. Continuity is not
/// checkable from samples and is recorded as a note.
CharacterValidation validate_character_basis(const CharacterBasis& basis, const GroupChart& chart,
                                             const SubgroupSpec& h, std::uint64_t seed);

}  // namespace orbitfam
