#include "orbitfam/family.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <numeric>
#include <sstream>

#include "orbitfam/errors.hpp"
#include "orbitfam/rng.hpp"

namespace orbitfam {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int circle_order(double h) {
  for (int k = 1; k <= 360; ++k) {
    const double r = std::remainder(k * h, 2.0 * std::numbers::pi);
    if (std::abs(r) < 1e-9) return k;
  }
  std::ostringstream msg;
  msg << "subgroup element " << h << " does not generate a finite subgroup of the circle (order > 360)";
  throw PreconditionViolation(msg.str());
}

}  // namespace

// -- carrier ----------------------------------------------------------------------

double CarrierSpec::log_base_density(double x) const {
  return base == BaseMeasure::haar_multiplicative ? -std::log(x) : 0.0;
}

std::string CarrierSpec::describe() const {
  std::ostringstream out;
  out << to_string(chart) << " carrier (" << lower << ", " << upper << ") with base density "
      << (base == BaseMeasure::haar_multiplicative ? "1/x" : "1");
  if (quotient_order > 1) out << ", fundamental domain of a cyclic subgroup of order " << quotient_order;
  return out.str();
}

CarrierSpec carrier_for(const GroupChart& chart, const SubgroupSpec& h) {
  CarrierSpec c;
  c.chart = chart.kind();
  auto only_identity = [&] {
    return std::all_of(h.elements.begin(), h.elements.end(),
                       [&](double e) { return e == chart.identity(); });
  };
  switch (chart.kind()) {
    case ChartKind::positive_reals:
      if (!only_identity()) {
        throw PreconditionViolation("positive_reals has no nontrivial finite subgroup; the carrier needs H = {1}");
      }
      c.lower = 0.0;
      c.upper = kInf;
      c.base = CarrierSpec::BaseMeasure::haar_multiplicative;
      break;
    case ChartKind::real_line:
      if (!only_identity()) {
        throw PreconditionViolation("real_line has no nontrivial finite subgroup; the carrier needs H = {0}");
      }
      c.lower = -kInf;
      c.upper = kInf;
      c.base = CarrierSpec::BaseMeasure::lebesgue;
      break;
    case ChartKind::circle: {
      int order = 1;
      for (double e : h.elements) order = std::lcm(order, circle_order(e));
      c.quotient_order = order;
      c.lower = -std::numbers::pi / order;
      c.upper = std::numbers::pi / order;
      c.base = CarrierSpec::BaseMeasure::lebesgue;
      break;
    }
  }
  return c;
}

FamilySpec FamilySpec::make(PairSpec pair) {
  CarrierSpec carrier = carrier_for(pair.chart(), pair.subgroup());
  return make(std::move(pair), carrier);
}

FamilySpec FamilySpec::make(PairSpec pair, CarrierSpec carrier) {
  const WellDefinednessReport wd = well_definedness_check(pair);
  if (!wd.passed) {
    std::ostringstream msg;
    msg << "x v0 is not well defined on G/H (v0 not H-fixed): residual " << wd.max_residual;
    throw PreconditionViolation(msg.str());
  }
  if (carrier.chart != pair.chart().kind()) throw InvalidInput("carrier chart differs from the group chart");
  return FamilySpec(std::move(pair), carrier);
}

// -- densities ------------------------------------------------------------------------

namespace {

using LogDensity = std::function<double(double)>;

void check_theta(const FamilySpec& fam, const ThetaParam& theta) {
  if (theta.xi.size() != fam.pair().dim()) {
    throw InvalidInput("theta.xi has " + std::to_string(theta.xi.size()) + " entries, expected " +
                       std::to_string(fam.pair().dim()));
  }
  if (theta.char_coeffs.size() != fam.pair().characters().size()) {
    throw InvalidInput("theta has " + std::to_string(theta.char_coeffs.size()) +
                       " character coefficients, expected " + std::to_string(fam.pair().characters().size()));
  }
  if (!theta.xi.allFinite() || !theta.char_coeffs.allFinite()) throw InvalidInput("theta has non-finite entries");
}

/// log p~_theta(x) without the domain check. Diagonal templates skip the matrix.
LogDensity make_log_density(const FamilySpec& fam, const ThetaParam& theta) {
  check_theta(fam, theta);
  const PairSpec& pair = fam.pair();
  const CarrierSpec carrier = fam.carrier();
  const CharacterBasis chars = pair.characters();
  const Vector lambda = theta.char_coeffs;
  auto extras = [carrier, chars, lambda](double x) {
    double s = carrier.log_base_density(x);
    if (lambda.size() > 0) {
      s += chars.kind == CharacterBasis::Kind::power ? lambda(0) * std::log(x) : lambda(0) * x;
    }
    return s;
  };
  if (const auto* dw = std::get_if<DiagonalWeights>(&pair.rep().tmpl())) {
    std::vector<double> coeff, weight;
    for (std::size_t i = 0; i < dw->weights.size(); ++i) {
      const double c = theta.xi(static_cast<Eigen::Index>(i)) * pair.v0()(static_cast<Eigen::Index>(i));
      if (c == 0.0) continue;  // exact zero contribution
      coeff.push_back(c);
      weight.push_back(dw->weights[i]);
    }
    const bool positive = pair.chart().kind() == ChartKind::positive_reals;
    return [coeff, weight, positive, extras](double x) {
      double stat = 0.0;
      for (std::size_t i = 0; i < coeff.size(); ++i) {
        const double w = weight[i];
        double e;
        if (positive) {
          e = w == 1.0 ? x : w == -1.0 ? 1.0 / x : w == 0.0 ? 1.0 : std::pow(x, w);
        } else {
          e = std::exp(w * x);
        }
        stat += coeff[i] * e;
      }
      return -stat + extras(x);
    };
  }
  const Vector xi = theta.xi;
  return [pair, xi, extras](double x) { return -xi.dot(pair.orbit_point(x)) + extras(x); };
}

// Natural coordinate of the carrier: log x on positive_reals, x otherwise.
struct Coordinates {
  bool logarithmic = false;
  double to_x(double u) const { return logarithmic ? std::exp(u) : u; }
  double to_u(double x) const { return logarithmic ? std::log(x) : x; }
  double log_jacobian(double u) const { return logarithmic ? u : 0.0; }
};

/// Coarse scan of log p~ in the natural coordinate: location and height of the
/// peak and the range carrying all but ~e^-50 of the mass.
struct Landscape {
  Coordinates coords;
  double peak_u = 0.0;
  double peak_log = -kInf;  // max of log p~(x(u)) + log |dx/du|
  double bulk_lo = 0.0;
  double bulk_hi = 0.0;
  double width = 1.0;  // extent of {u : value >= peak - 1}
};

Landscape scan(const CarrierSpec& carrier, const LogDensity& logp) {
  Landscape l;
  l.coords.logarithmic = carrier.chart == ChartKind::positive_reals;
  std::vector<double> us;
  if (carrier.chart == ChartKind::positive_reals) {
    for (double u = -40.0; u <= 40.0 + 1e-12; u += 0.125) us.push_back(u);
  } else if (std::isinf(carrier.lower) || std::isinf(carrier.upper)) {
    for (double u = -60.0; u <= 60.0 + 1e-12; u += 0.125) us.push_back(u);
  } else {
    const int n = 512;
    for (int i = 0; i < n; ++i) {
      us.push_back(carrier.lower + (carrier.upper - carrier.lower) * (i + 0.5) / n);
    }
  }
  std::vector<double> vals(us.size(), -kInf);
  for (std::size_t i = 0; i < us.size(); ++i) {
    const double v = logp(l.coords.to_x(us[i])) + l.coords.log_jacobian(us[i]);
    if (std::isnan(v)) continue;
    vals[i] = v;
    if (v > l.peak_log) {
      l.peak_log = v;
      l.peak_u = us[i];
    }
  }
  if (!(l.peak_log > -kInf)) throw QuadratureError("density vanishes on the whole scan range");
  if (std::isinf(l.peak_log)) throw QuadratureError("density overflows on the scan range");
  double lo = l.peak_u, hi = l.peak_u, wlo = l.peak_u, whi = l.peak_u;
  for (std::size_t i = 0; i < us.size(); ++i) {
    if (vals[i] >= l.peak_log - 50.0) {
      lo = std::min(lo, us[i]);
      hi = std::max(hi, us[i]);
    }
    if (vals[i] >= l.peak_log - 1.0) {
      wlo = std::min(wlo, us[i]);
      whi = std::max(whi, us[i]);
    }
  }
  const double step = us.size() > 1 ? us[1] - us[0] : 0.0;
  l.bulk_lo = std::max(us.front(), lo - step);
  l.bulk_hi = std::min(us.back(), hi + step);
  l.width = std::max(whi - wlo, step);
  return l;
}

/// int_X exp(logp(x) - shift) dx over the carrier.
QuadResult integrate_carrier(const CarrierSpec& carrier, const LogDensity& logp, const Landscape& l,
                             double shift, double tol) {
  QuadOptions opts;
  opts.tol = tol;
  auto f = [&](double x) { return std::exp(logp(x) - shift); };
  if (carrier.chart == ChartKind::positive_reals) {
    opts.scale = std::exp(l.peak_u);
    return integrate_halfline(f, opts);
  }
  if (std::isinf(carrier.lower) || std::isinf(carrier.upper)) {
    opts.scale = std::max(l.width, 1e-3);
    const double c = l.peak_u;
    const QuadResult right = integrate_halfline([&](double t) { return f(c + t); }, opts);
    const QuadResult left = integrate_halfline([&](double t) { return f(c - t); }, opts);
    QuadResult r;
    r.value = right.value + left.value;
    r.abs_error_estimate = right.abs_error_estimate + left.abs_error_estimate;
    r.converged = right.converged && left.converged;
    r.divergent = right.divergent || left.divergent;
    r.evaluations = right.evaluations + left.evaluations;
    return r;
  }
  return integrate_interval(f, carrier.lower, carrier.upper, opts);
}

}  // namespace

double log_unnormalized_density(const FamilySpec& fam, const ThetaParam& theta, double x) {
  if (!fam.carrier().interior(x)) {
    std::ostringstream msg;
    msg << "x = " << x << " is outside the interior of the " << fam.carrier().describe();
    throw DomainError(msg.str());
  }
  return make_log_density(fam, theta)(x);
}

double unnormalized_density(const FamilySpec& fam, const ThetaParam& theta, double x) {
  return std::exp(log_unnormalized_density(fam, theta, x));
}

// -- parameter space --------------------------------------------------------------

std::string to_string(Membership m) {
  switch (m) {
    case Membership::inside:
      return "inside";
    case Membership::outside:
      return "outside";
    case Membership::inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

namespace {

/// (r, s, swapped) when the pair is the recognized GIG template.
struct GigShape {
  double r = 0.0;  // coefficient multiplying x
  double s = 0.0;  // coefficient multiplying 1/x
  bool swapped = false;
};

std::optional<GigShape> gig_shape(const FamilySpec& fam) {
  const PairSpec& pair = fam.pair();
  if (pair.chart().kind() != ChartKind::positive_reals) return std::nullopt;
  if (!pair.subgroup().is_trivial()) return std::nullopt;
  if (pair.characters().kind != CharacterBasis::Kind::power) return std::nullopt;
  if (fam.carrier().base != CarrierSpec::BaseMeasure::haar_multiplicative) return std::nullopt;
  const auto* dw = std::get_if<DiagonalWeights>(&pair.rep().tmpl());
  if (!dw || dw->weights.size() != 2) return std::nullopt;
  const Vector& v0 = pair.v0();
  if (v0(0) == 0.0 || v0(1) == 0.0) return std::nullopt;
  if (dw->weights[0] == 1.0 && dw->weights[1] == -1.0) return GigShape{v0(0), v0(1), false};
  if (dw->weights[0] == -1.0 && dw->weights[1] == 1.0) return GigShape{v0(1), v0(0), true};
  return std::nullopt;
}

}  // namespace

std::optional<special::GigParams> as_gig(const FamilySpec& fam, const ThetaParam& theta) {
  const auto shape = gig_shape(fam);
  if (!shape) return std::nullopt;
  check_theta(fam, theta);
  const double xi_x = shape->swapped ? theta.xi(1) : theta.xi(0);
  const double xi_inv = shape->swapped ? theta.xi(0) : theta.xi(1);
  return special::GigParams{2.0 * shape->r * xi_x, 2.0 * shape->s * xi_inv, theta.char_coeffs(0)};
}

ThetaParam gig_theta(const FamilySpec& fam, const special::GigParams& p) {
  const auto shape = gig_shape(fam);
  if (!shape) throw PreconditionViolation("family is not the recognized GIG template");
  ThetaParam t;
  t.xi.resize(2);
  const double xi_x = p.a / (2.0 * shape->r);
  const double xi_inv = p.b / (2.0 * shape->s);
  t.xi(0) = shape->swapped ? xi_inv : xi_x;
  t.xi(1) = shape->swapped ? xi_x : xi_inv;
  t.char_coeffs.resize(1);
  t.char_coeffs(0) = p.lambda;
  return t;
}

MembershipReport theta_membership(const FamilySpec& fam, const ThetaParam& theta) {
  MembershipReport report;
  if (auto gig = as_gig(fam, theta)) {
    report.method = "analytic-gig";
    report.gig = gig;
    report.verdict = special::classify(*gig) == special::GigCase::none ? Membership::outside : Membership::inside;
    report.detail = special::describe_case(*gig);
    return report;
  }
  const LogDensity logp = make_log_density(fam, theta);
  const CarrierSpec& carrier = fam.carrier();
  if (std::isfinite(carrier.lower) && std::isfinite(carrier.upper)) {
    report.method = "compact-carrier";
    try {
      const Landscape l = scan(carrier, logp);
      const QuadResult q = integrate_carrier(carrier, logp, l, l.peak_log, 1e-10);
      report.verdict = q.converged && std::isfinite(q.value) ? Membership::inside : Membership::outside;
      report.detail = "continuous density on a compact carrier";
    } catch (const QuadratureError& e) {
      report.verdict = Membership::outside;
      report.detail = e.what();
    }
    return report;
  }

  report.method = "divergence-heuristic";
  // Shift by the largest value inside the probe window so the truncated
  // integrals stay representable.
  const double reach = 6.0 * std::numbers::ln10;
  double shift = -kInf;
  const bool positive = carrier.chart == ChartKind::positive_reals;
  for (double u = -reach; u <= reach + 1e-12; u += reach / 400.0) {
    const double x = positive ? std::exp(u) : std::copysign(std::expm1(std::abs(u)), u);
    const double v = logp(x) + (positive ? u : 0.0);
    if (std::isfinite(v)) shift = std::max(shift, v);
    if (v == kInf) shift = kInf;
  }
  if (shift == kInf) {
    report.verdict = Membership::outside;
    report.detail = "density overflows inside the probe window";
    return report;
  }
  if (!(shift > -kInf)) {
    report.verdict = Membership::inconclusive;
    report.detail = "density underflows on the whole probe window";
    return report;
  }
  auto f = [&](double x) { return std::exp(logp(x) - shift); };
  const DivergenceProbe probe = positive ? probe_halfline_divergence(f) : probe_line_divergence(f);
  report.probe = probe;
  std::ostringstream detail;
  detail << "nested truncations k=1..6, last growth ratio " << probe.last_ratio << " (heuristic)";
  report.detail = detail.str();
  switch (probe.verdict) {
    case DivergenceVerdict::convergent:
      report.verdict = Membership::inside;
      break;
    case DivergenceVerdict::divergent:
      report.verdict = Membership::outside;
      break;
    case DivergenceVerdict::inconclusive:
      report.verdict = Membership::inconclusive;
      break;
  }
  return report;
}

double log_normalizer(const FamilySpec& fam, const ThetaParam& theta, double tol) {
  const MembershipReport m = theta_membership(fam, theta);
  if (m.verdict == Membership::outside) {
    throw PreconditionViolation("theta is outside the parameter space: " + m.detail);
  }
  const LogDensity logp = make_log_density(fam, theta);
  const Landscape l = scan(fam.carrier(), logp);
  const QuadResult q = integrate_carrier(fam.carrier(), logp, l, l.peak_log, tol);
  if (q.divergent) {
    throw QuadratureError("normalizing integral diverges although membership was '" + to_string(m.verdict) +
                          "' (" + m.method + ")");
  }
  if (!q.converged || !(q.value > 0.0)) {
    std::ostringstream msg;
    msg << "normalizing integral did not converge (estimate " << q.value << ", error " << q.abs_error_estimate
        << ")";
    throw QuadratureError(msg.str());
  }
  return l.peak_log + std::log(q.value);
}

// -- normalized members -------------------------------------------------------------

struct QuantileTable {
  std::vector<double> x;    // 256 increasing carrier points
  std::vector<double> cum;  // P(X <= x_k)
  std::vector<double> sf;   // P(X > x_k), summed from the upper end
};

struct FamilyMember::Lazy {
  LogDensity logp;
  Landscape landscape;
  std::once_flag once;
  QuantileTable table;
};

FamilyMember::FamilyMember(FamilySpec fam, ThetaParam theta, double tol)
    : fam_(std::move(fam)), theta_(std::move(theta)), lazy_(std::make_shared<Lazy>()) {
  phi_ = orbitfam::log_normalizer(fam_, theta_, tol);
  lazy_->logp = make_log_density(fam_, theta_);
  lazy_->landscape = scan(fam_.carrier(), lazy_->logp);
  mode_coord_ = lazy_->landscape.peak_u;
}

double FamilyMember::log_pdf(double x) const {
  if (!fam_.carrier().interior(x)) {
    std::ostringstream msg;
    msg << "x = " << x << " is outside the interior of the " << fam_.carrier().describe();
    throw DomainError(msg.str());
  }
  return lazy_->logp(x) - phi_;
}

double FamilyMember::pdf(double x) const { return std::exp(log_pdf(x)); }

QuadResult FamilyMember::total_mass(double tol) const {
  const Landscape& l = lazy_->landscape;
  return integrate_carrier(fam_.carrier(), lazy_->logp, l, phi_, tol);
}

double FamilyMember::cdf(double x, double tol) const {
  const CarrierSpec& c = fam_.carrier();
  if (std::isnan(x)) throw InvalidInput("cdf: x is NaN");
  if (x <= c.lower) return 0.0;
  if (x >= c.upper) return 1.0;
  bool lower = true;
  const double tail = nearer_tail(x, tol, lower);
  return lower ? tail : 1.0 - tail;
}

double FamilyMember::sf(double x, double tol) const {
  const CarrierSpec& c = fam_.carrier();
  if (std::isnan(x)) throw InvalidInput("sf: x is NaN");
  if (x <= c.lower) return 1.0;
  if (x >= c.upper) return 0.0;
  bool lower = true;
  const double tail = nearer_tail(x, tol, lower);
  return lower ? 1.0 - tail : tail;
}

double FamilyMember::nearer_tail(double x, double tol, bool& lower_tail) const {
  const CarrierSpec& c = fam_.carrier();
  const LogDensity& logp = lazy_->logp;
  const double phi = phi_;
  auto density = [&](double y) { return std::exp(logp(y) - phi); };
  QuadOptions opts;
  opts.tol = tol;
  QuadResult part;
  if (c.chart == ChartKind::positive_reals) {
    const double u = std::log(x);
    lower_tail = u <= mode_coord_;
    opts.scale = std::max(lazy_->landscape.width, 1e-3);
    if (lower_tail) {
      part = integrate_halfline([&](double v) {
        const double y = x * std::exp(-v);
        return y > 0.0 ? density(y) * y : 0.0;
      }, opts);
    } else {
      part = integrate_halfline([&](double v) {
        const double y = x * std::exp(v);
        return std::isfinite(y) ? density(y) * y : 0.0;
      }, opts);
    }
  } else if (std::isinf(c.lower) || std::isinf(c.upper)) {
    lower_tail = x <= mode_coord_;
    opts.scale = std::max(lazy_->landscape.width, 1e-3);
    part = lower_tail ? integrate_halfline([&](double t) { return density(x - t); }, opts)
                      : integrate_halfline([&](double t) { return density(x + t); }, opts);
  } else {
    lower_tail = x <= mode_coord_;
    part = lower_tail ? integrate_interval(density, c.lower, x, opts)
                      : integrate_interval(density, x, c.upper, opts);
  }
  if (part.divergent) throw QuadratureError("cdf: tail integral diverged");
  return std::clamp(part.value, 0.0, 1.0);
}

const QuantileTable& FamilyMember::table() const {
  std::call_once(lazy_->once, [this] {
    constexpr int kPoints = 256;
    const CarrierSpec& c = fam_.carrier();
    const Landscape& l = lazy_->landscape;
    double lo = l.bulk_lo, hi = l.bulk_hi;
    if (std::isfinite(c.lower) && std::isfinite(c.upper)) {
      lo = c.lower;
      hi = c.upper;
    }
    QuantileTable t;
    for (int k = 0; k < kPoints; ++k) {
      double u = lo + (hi - lo) * k / (kPoints - 1);
      double x = l.coords.to_x(u);
      // Keep the table strictly inside the carrier.
      if (k == 0 && x <= c.lower) x = l.coords.to_x(lo + (hi - lo) * 1e-6);
      if (k == kPoints - 1 && x >= c.upper) x = l.coords.to_x(hi - (hi - lo) * 1e-6);
      t.x.push_back(x);
    }
    const LogDensity& logp = lazy_->logp;
    const double phi = phi_;
    auto density = [&](double y) { return std::exp(logp(y) - phi); };
    std::vector<double> cells(kPoints, 0.0);
    for (int k = 1; k < kPoints; ++k) cells[k] = integrate_interval(density, t.x[k - 1], t.x[k], 1e-12).value;
    t.cum.push_back(cdf(t.x.front()));
    for (int k = 1; k < kPoints; ++k) t.cum.push_back(t.cum.back() + cells[k]);
    t.sf.assign(kPoints, 0.0);
    t.sf[kPoints - 1] = sf(t.x.back());
    for (int k = kPoints - 1; k > 0; --k) t.sf[k - 1] = t.sf[k] + cells[k];
    lazy_->table = std::move(t);
  });
  return lazy_->table;
}

double FamilyMember::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) throw InvalidInput("quantile: u must lie in (0, 1)");
  const QuantileTable& t = table();
  const CarrierSpec& c = fam_.carrier();
  const LogDensity& logp = lazy_->logp;
  const double phi = phi_;
  auto density = [&](double y) { return std::exp(logp(y) - phi); };

  double lo, hi;
  double target = u;
  std::function<double(double)> cumulative;
  if (u < t.cum.front()) {
    hi = t.x.front();
    lo = hi;
    const double step = std::max(1.0, std::abs(hi));
    for (int i = 0;; ++i) {
      if (std::isfinite(c.lower)) {
        lo = c.lower;
        break;
      }
      lo -= step * std::ldexp(1.0, i);
      if (cdf(lo) <= u) break;
      if (i > 60) throw RootFindingError("quantile: could not bracket the lower tail");
    }
    cumulative = [this](double y) { return cdf(y); };
  } else if (u >= t.cum.back()) {
    // Bisect on the survival function against 1 - u, which is exact near 1.
    const double q = 1.0 - u;
    lo = t.x.back();
    hi = lo;
    for (int i = 0;; ++i) {
      if (std::isfinite(c.upper)) {
        hi = c.upper;
        break;
      }
      hi = c.chart == ChartKind::positive_reals ? hi * 2.0 : hi + std::max(1.0, std::abs(hi));
      if (sf(hi) <= q) break;
      if (i > 60) {
        std::ostringstream msg;
        msg << "quantile: could not bracket u = " << u << " (table total " << t.cum.back() << ")";
        throw RootFindingError(msg.str());
      }
    }
    cumulative = [this, q](double y) { return q - sf(y); };
    target = 0.0;
  } else {
    const auto it = std::upper_bound(t.cum.begin(), t.cum.end(), u);
    const auto k = static_cast<std::size_t>(std::distance(t.cum.begin(), it)) - 1;
    lo = t.x[k];
    hi = t.x[k + 1];
    if (u <= 0.5) {
      const double base = t.cum[k];
      const double left = lo;
      cumulative = [base, left, density](double y) { return base + gauss_legendre(density, left, y, 20); };
    } else {
      // Work with 1 - u so that upper quantiles keep their relative precision.
      const double base = t.sf[k + 1];
      const double right = hi;
      const double q = 1.0 - u;
      cumulative = [base, right, q, density](double y) {
        return q - (base + gauss_legendre(density, y, right, 20));
      };
      target = 0.0;
    }
  }

  for (int it = 0; it < 400; ++it) {
    const double width = hi - lo;
    const double floor = std::max(1e-12, 4.0 * std::numeric_limits<double>::epsilon() * std::abs(hi));
    if (width <= floor) return 0.5 * (lo + hi);
    const double mid = 0.5 * (lo + hi);
    if (cumulative(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  std::ostringstream msg;
  msg << "quantile: bisection did not reach the target width for u = " << u << " (bracket [" << lo << ", " << hi
      << "])";
  throw RootFindingError(msg.str());
}

std::vector<double> FamilyMember::sample(std::size_t n, std::uint64_t seed) const {
  const std::vector<double> us = rng_uniform(seed, n);
  std::vector<double> out;
  out.reserve(n);
  for (double u : us) out.push_back(quantile(u));
  return out;
}

double pdf(const FamilySpec& fam, const ThetaParam& theta, double x) {
  return FamilyMember(fam, theta).pdf(x);
}

double cdf(const FamilySpec& fam, const ThetaParam& theta, double x, double tol) {
  return FamilyMember(fam, theta).cdf(x, tol);
}

std::vector<double> sample(const FamilySpec& fam, const ThetaParam& theta, std::size_t n, std::uint64_t seed) {
  return FamilyMember(fam, theta).sample(n, seed);
}

// -- witness replay -------------------------------------------------------------------

std::vector<double> carrier_grid(const CarrierSpec& carrier, std::size_t n) {
  std::vector<double> grid;
  grid.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    switch (carrier.chart) {
      case ChartKind::positive_reals:
        grid.push_back(std::exp(-3.0 + 6.0 * s));
        break;
      case ChartKind::real_line:
        grid.push_back(-3.0 + 6.0 * s);
        break;
      case ChartKind::circle:
        grid.push_back(carrier.lower + (carrier.upper - carrier.lower) * s);
        break;
    }
  }
  return grid;
}

WitnessReplay proof_witness_replay(const FamilySpec& fam, const ThetaParam& theta1, const Witness& witness,
                                   std::size_t grid_points) {
  if (witness.xi.size() != fam.pair().dim() || witness.xi.isZero(0.0)) {
    throw PreconditionViolation("witness must have a nonzero xi of the representation's dimension");
  }
  check_theta(fam, theta1);
  WitnessReplay out;
  out.theta2.xi = theta1.xi + witness.xi;
  out.theta2.char_coeffs = theta1.char_coeffs + witness.char_coeffs;
  out.grid = carrier_grid(fam.carrier(), grid_points);
  const LogDensity l1 = make_log_density(fam, theta1);
  const LogDensity l2 = make_log_density(fam, out.theta2);
  for (double x : out.grid) {
    const double ratio = std::exp(l2(x) - (l1(x) - witness.c));
    out.max_density_ratio_error = std::max(out.max_density_ratio_error, std::abs(ratio - 1.0));
  }
  out.densities_proportional = out.max_density_ratio_error <= 1e-10;

  if (theta_membership(fam, theta1).verdict != Membership::outside &&
      theta_membership(fam, out.theta2).verdict != Membership::outside) {
    try {
      const FamilyMember p1(fam, theta1);
      const FamilyMember p2(fam, out.theta2);
      double worst = 0.0;
      for (double x : out.grid) {
        const double a = p1.pdf(x), b = p2.pdf(x);
        worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(a)));
      }
      out.max_pdf_difference = worst;
      out.pdfs_identical = worst <= 1e-10;
    } catch (const std::exception&) {
      // not normalizable: only the proportionality identity is checked
    }
  }
  return out;
}

ThetaParam transport_theta(const Matrix& psi, const ThetaParam& theta) {
  if (psi.cols() != theta.xi.size()) throw InvalidInput("transport_theta: psi does not match theta");
  ThetaParam out;
  out.xi = psi.transpose().fullPivLu().solve(theta.xi);
  out.char_coeffs = theta.char_coeffs;
  return out;
}

}  // namespace orbitfam
