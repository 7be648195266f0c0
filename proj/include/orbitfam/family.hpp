#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "orbitfam/diagnostics.hpp"
#include "orbitfam/quadrature.hpp"
#include "orbitfam/special.hpp"

namespace orbitfam {

/// Sample space X = G/H as a 1-D interval with a relatively invariant base
/// density w. For trivial H the carrier is the chart itself; for a finite
/// cyclic H of order n on the circle it is the fundamental domain (-pi/n, pi/n].
struct CarrierSpec {
  enum class BaseMeasure { haar_multiplicative, lebesgue };  // w(x) = 1/x or 1

  ChartKind chart = ChartKind::positive_reals;
  double lower = 0.0;
  double upper = 0.0;
  BaseMeasure base = BaseMeasure::haar_multiplicative;
  int quotient_order = 1;

  double log_base_density(double x) const;
  bool interior(double x) const { return x > lower && x < upper; }
  std::string describe() const;
};

CarrierSpec carrier_for(const GroupChart& chart, const SubgroupSpec& h);

/// theta = (xi, chi): xi in V^v, chi = exp(sum_j char_coeffs_j log chi_j).
struct ThetaParam {
  Vector xi;
  Vector char_coeffs;
};

class FamilySpec {
 public:
  /// Requires v0 to pass well_definedness_check. Throws PreconditionViolation.
  static FamilySpec make(PairSpec pair);
  static FamilySpec make(PairSpec pair, CarrierSpec carrier);

  const PairSpec& pair() const { return pair_; }
  const CarrierSpec& carrier() const { return carrier_; }

 private:
  FamilySpec(PairSpec pair, CarrierSpec carrier) : pair_(std::move(pair)), carrier_(carrier) {}
  PairSpec pair_;
  CarrierSpec carrier_;
};

/// -<xi, x v0> + sum_j lambda_j log chi_j(x) + log w(x). Throws DomainError
/// outside the carrier interior and InvalidInput on mis-shaped theta.
double log_unnormalized_density(const FamilySpec& fam, const ThetaParam& theta, double x);
/// exp of the above; +inf on overflow.
double unnormalized_density(const FamilySpec& fam, const ThetaParam& theta, double x);

enum class Membership { inside, outside, inconclusive };
std::string to_string(Membership m);

struct MembershipReport {
  Membership verdict = Membership::inconclusive;
  std::string method;  // "analytic-gig", "compact-carrier" or "divergence-heuristic"
  std::string detail;
  std::optional<special::GigParams> gig;
  std::optional<DivergenceProbe> probe;
};

/// (a, b, lambda) when the family is the recognized GIG template:
/// diagonal_weights [1,-1] (or [-1,1]) on positive_reals, v0 = (r, s) with
/// rs != 0, power characters, trivial H, Haar carrier. Then
/// <xi, x v0> = (a x + b / x) / 2 with a = 2 r xi_1, b = 2 s xi_2.
std::optional<special::GigParams> as_gig(const FamilySpec& fam, const ThetaParam& theta);

/// Inverse of as_gig for a recognized family.
ThetaParam gig_theta(const FamilySpec& fam, const special::GigParams& p);

MembershipReport theta_membership(const FamilySpec& fam, const ThetaParam& theta);

/// log int_X dp~_theta. Throws PreconditionViolation when theta is outside
/// Theta, QuadratureError when the integral fails to converge.
double log_normalizer(const FamilySpec& fam, const ThetaParam& theta, double tol = 1e-10);

struct QuantileTable;

/// A normalized member p_theta of the family. Computes phi(theta) once.
class FamilyMember {
 public:
  FamilyMember(FamilySpec fam, ThetaParam theta, double tol = 1e-10);

  const FamilySpec& family() const { return fam_; }
  const ThetaParam& theta() const { return theta_; }
  double log_normalizer() const { return phi_; }

  double log_pdf(double x) const;
  double pdf(double x) const;
  /// P(X <= x), by quadrature from the nearer tail.
  double cdf(double x, double tol = 1e-12) const;
  /// P(X > x), by quadrature from the nearer tail.
  double sf(double x, double tol = 1e-12) const;
  /// Inverse CDF: bracket from a 256-point CDF table, then bisection to 1e-12 width.
  double quantile(double u) const;
  /// Inverse-CDF samples driven by rng_uniform(seed, n).
  std::vector<double> sample(std::size_t n, std::uint64_t seed) const;

  /// Integral of the pdf over the carrier (should be 1).
  QuadResult total_mass(double tol = 1e-12) const;

 private:
  const QuantileTable& table() const;
  /// Mass of the tail nearer to x; `lower` reports which tail was integrated.
  double nearer_tail(double x, double tol, bool& lower) const;

  FamilySpec fam_;
  ThetaParam theta_;
  double phi_ = 0.0;
  double mode_coord_ = 0.0;  // argmax of the density in the carrier's natural coordinate
  struct Lazy;
  std::shared_ptr<Lazy> lazy_;
};

double pdf(const FamilySpec& fam, const ThetaParam& theta, double x);
double cdf(const FamilySpec& fam, const ThetaParam& theta, double x, double tol = 1e-12);
std::vector<double> sample(const FamilySpec& fam, const ThetaParam& theta, std::size_t n, std::uint64_t seed);

struct WitnessReplay {
  ThetaParam theta2;
  /// max over the grid of |p~_theta2(x) / (e^{-c} p~_theta1(x)) - 1|
  double max_density_ratio_error = 0.0;
  bool densities_proportional = false;
  /// Set when both parameters are in Theta.
  std::optional<double> max_pdf_difference;
  bool pdfs_identical = false;
  std::vector<double> grid;
};

/// theta2 = theta1 + (xi, lambda); checks dp~_theta2 = e^{-c} dp~_theta1 on
/// `grid_points` points (1e-10) and, when normalizable, p_theta1 = p_theta2.
WitnessReplay proof_witness_replay(const FamilySpec& fam, const ThetaParam& theta1, const Witness& witness,
                                   std::size_t grid_points = 32);

/// Parameter of the equivalent pair generating the same density:
/// <xi', x psi v0> = <psi^T xi', x v0>, so xi' = psi^{-T} xi.
ThetaParam transport_theta(const Matrix& psi, const ThetaParam& theta);

/// Evaluation points spread over the bulk of the carrier.
std::vector<double> carrier_grid(const CarrierSpec& carrier, std::size_t n);

}  // namespace orbitfam
