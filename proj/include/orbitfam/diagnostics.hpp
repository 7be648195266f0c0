#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orbitfam/group.hpp"
#include "orbitfam/linalg.hpp"

namespace orbitfam {

inline constexpr std::size_t kDefaultSamples = 64;
inline constexpr std::uint64_t kDefaultSeed = 20190827;

/// A representation together with an H-fixed vector v0, the subgroup H and
/// the declared basis of log-characters trivial on H.
class PairSpec {
 public:
  /// Validates dimensions, v0 in V^H (within 1e-10), v0 != 0 unless
  /// allow_zero, H inside the chart. Throws InvalidInput / PreconditionViolation.
  static PairSpec make(RepSpec rep, Vector v0, SubgroupSpec h = SubgroupSpec::trivial(),
                       CharacterBasis characters = CharacterBasis::trivial(), bool allow_zero = false);
  /// Only checks shapes; for exercising well_definedness_check on bad input.
  static PairSpec unchecked(RepSpec rep, Vector v0, SubgroupSpec h = SubgroupSpec::trivial(),
                            CharacterBasis characters = CharacterBasis::trivial());

  const RepSpec& rep() const { return rep_; }
  const Vector& v0() const { return v0_; }
  const GroupChart& chart() const { return rep_.chart(); }
  const SubgroupSpec& subgroup() const { return h_; }
  const CharacterBasis& characters() const { return characters_; }
  int dim() const { return rep_.dim(); }

  /// rho(g) v0
  Vector orbit_point(double g) const { return rep_.eval(g) * v0_; }

 private:
  PairSpec(RepSpec rep, Vector v0, SubgroupSpec h, CharacterBasis characters);
  RepSpec rep_;
  Vector v0_;
  SubgroupSpec h_;
  CharacterBasis characters_;
};

/// dim x n matrix with columns rho(g_i) v0.
Matrix orbit_matrix(const PairSpec& pair, const std::vector<double>& samples);

/// Orthonormal basis of V^H as columns (full identity for trivial H).
Matrix h_fixed_subspace(const RepSpec& rep, const SubgroupSpec& h, double rel_tol = kDefaultRankRelTol);

struct SpanVerdict {
  bool holds = false;
  RankReport rank;
};

SpanVerdict cyclic_check(const PairSpec& pair, std::size_t n_samples = kDefaultSamples,
                         std::uint64_t seed = kDefaultSeed, double rel_tol = kDefaultRankRelTol);

/// Basis (columns) of the G-fixed vectors of the contragredient: nullspace of
/// the stacked rho^v(g_i) - I.
Matrix dual_fixed_vectors(const RepSpec& rep, std::size_t n_samples = kDefaultSamples,
                          std::uint64_t seed = kDefaultSeed, double rel_tol = kDefaultRankRelTol);

/// Orbit not inside a proper affine subspace: rank of {rho(g_i)v0 - v0} = dim V.
SpanVerdict condition_A(const PairSpec& pair, std::size_t n_samples = kDefaultSamples,
                        std::uint64_t seed = kDefaultSeed, double rel_tol = kDefaultRankRelTol);

struct ConditionB {
  bool cyclic = false;         // (1)
  bool no_dual_fixed = false;  // (2)
  RankReport cyclic_rank;
  int dual_fixed_dim = 0;
  bool holds() const { return cyclic && no_dual_fixed; }
};

ConditionB condition_B(const PairSpec& pair, std::size_t n_samples = kDefaultSamples,
                       std::uint64_t seed = kDefaultSeed, double rel_tol = kDefaultRankRelTol);

/// (xi, lambda, c) with <xi, g v0> = sum_j lambda_j log chi_j(g) + c for all g.
struct Witness {
  Vector xi;
  Vector char_coeffs;
  double c = 0.0;
};

struct InjectivityVerdict {
  bool injective = false;
  std::optional<Witness> witness;
  RankReport rank_details;
  /// Largest xi-part norm over unit nullspace vectors; <= 1e-7 counts as zero.
  double xi_margin = 0.0;
  std::size_t samples_used = 0;
  std::string assumption;
};

/// Solves for (xi, lambda, c) over sampled g; injective iff every null vector
/// has a (numerically) zero xi-part. Throws InsufficientSamples when
/// n_samples < dim + basis_size + 1.
InjectivityVerdict injectivity_check(const PairSpec& pair, std::size_t n_samples = kDefaultSamples,
                                     std::uint64_t seed = kDefaultSeed,
                                     double rel_tol = kDefaultRankRelTol);

/// max over samples of |<xi, g v0> - lambda . log chi(g) - c| / max(1, |<xi, g v0>|).
double witness_residual(const PairSpec& pair, const Witness& w, const std::vector<double>& samples);

struct WellDefinednessReport {
  bool passed = true;
  double max_residual = 0.0;
  std::optional<std::pair<double, double>> offending;  // (g, h)
};

/// rho(gh) v0 = rho(g) v0 within 1e-10 (relative) for sampled g and all h in H.
WellDefinednessReport well_definedness_check(const PairSpec& pair, std::uint64_t seed = kDefaultSeed,
                                             std::size_t n_samples = kDefaultSamples);

}  // namespace orbitfam
