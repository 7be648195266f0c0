#include "orbitfam/special.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "orbitfam/errors.hpp"
#include "orbitfam/quadrature.hpp"

namespace orbitfam::special {

namespace {

// Lanczos coefficients for g = 7, n = 9 (Numerical Recipes / Godfrey).
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

double lanczos(double x) {
  // Gamma(x + 1) = sqrt(2 pi) t^{x + 1/2} e^{-t} A(x), t = x + g + 1/2
  double sum = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) sum += kLanczos[i] / (x + static_cast<double>(i));
  const double t = x + kLanczosG + 0.5;
  // Split the power to avoid overflow near x = 170.
  const double half_pow = std::pow(t, 0.5 * (x + 0.5));
  return std::sqrt(2.0 * std::numbers::pi) * half_pow * (half_pow * std::exp(-t)) * sum;
}

}  // namespace

double gamma_fn(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    std::ostringstream msg;
    msg << "gamma_fn: argument " << x << " must be positive and finite";
    throw DomainError(msg.str());
  }
  if (x < 0.5) {
    // Reflection: Gamma(x) Gamma(1 - x) = pi / sin(pi x)
    return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma_fn(1.0 - x));
  }
  // Integers up to 20 are exact factorials.
  if (x == std::floor(x) && x <= 21.0) {
    double f = 1.0;
    for (int k = 2; k < static_cast<int>(x); ++k) f *= k;
    return f;
  }
  return lanczos(x - 1.0);
}

double bessel_k(double lambda, double x) { return bessel_k(lambda, x, 1e-12); }

double bessel_k(double lambda, double x, double tol) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("bessel_k: x must be positive and finite");
  if (!(std::abs(lambda) <= 50.0)) throw DomainError("bessel_k: |lambda| must not exceed 50");
  const double nu = std::abs(lambda);
  // log of the integrand with exp(-x) factored out:
  //   log cosh(nu t) - x (cosh t - 1),  cosh t - 1 = 2 sinh^2(t/2)
  auto log_integrand = [nu, x](double t) {
    const double s = std::sinh(0.5 * t);
    const double log_cosh = nu * t + std::log1p(std::exp(-2.0 * nu * t)) - std::numbers::ln2;
    return log_cosh - 2.0 * x * s * s;
  };
  // Peak near sinh t = nu / x; used both as the map's length scale and the
  // exponent shift that keeps the integrand O(1).
  const double t_peak = std::asinh(nu / x);
  const double shift = log_integrand(t_peak);
  QuadOptions opts;
  opts.tol = tol;
  opts.scale = std::max(t_peak, std::min(1.0, 1.0 / std::sqrt(x)));
  const QuadResult r = integrate_halfline([&](double t) { return std::exp(log_integrand(t) - shift); }, opts);
  if (!r.converged) {
    std::ostringstream msg;
    msg << "bessel_k(" << lambda << ", " << x << "): quadrature did not converge (err "
        << r.abs_error_estimate << ")";
    throw QuadratureError(msg.str());
  }
  return std::exp(shift - x) * r.value;
}

GigCase classify(const GigParams& p) {
  if (!std::isfinite(p.a) || !std::isfinite(p.b) || !std::isfinite(p.lambda)) return GigCase::none;
  if (p.a > 0.0 && p.b > 0.0) return GigCase::i;
  if (p.a > 0.0 && p.b == 0.0 && p.lambda > 0.0) return GigCase::ii;
  if (p.a == 0.0 && p.b > 0.0 && p.lambda < 0.0) return GigCase::iii;
  return GigCase::none;
}

std::string describe_case(const GigParams& p) {
  std::ostringstream out;
  out << "(a, b, lambda) = (" << p.a << ", " << p.b << ", " << p.lambda << "): ";
  switch (classify(p)) {
    case GigCase::i:
      out << "case (i) a>0, b>0";
      break;
    case GigCase::ii:
      out << "case (ii) a>0, b=0, lambda>0";
      break;
    case GigCase::iii:
      out << "case (iii) a=0, b>0, lambda<0";
      break;
    case GigCase::none: {
      out << "matches none of the cases:";
      out << (p.a > 0.0 && p.b > 0.0 ? "" : " (i) needs a>0 and b>0;");
      if (p.a > 0.0 && p.b == 0.0) {
        out << " (ii) needs lambda>0;";
      } else {
        out << " (ii) needs a>0 and b=0;";
      }
      if (p.a == 0.0 && p.b > 0.0) {
        out << " (iii) needs lambda<0";
      } else {
        out << " (iii) needs a=0 and b>0";
      }
      break;
    }
  }
  return out.str();
}

void validate(const GigParams& p) {
  if (classify(p) == GigCase::none) throw DomainError("invalid GIG parameters: " + describe_case(p));
}

double gig_norm_const(const GigParams& p) {
  switch (classify(p)) {
    case GigCase::i:
      return std::pow(p.a / p.b, 0.5 * p.lambda) / (2.0 * bessel_k(p.lambda, std::sqrt(p.a * p.b)));
    case GigCase::ii:
      return std::pow(0.5 * p.a, p.lambda) / gamma_fn(p.lambda);
    case GigCase::iii:
      return std::pow(0.5 * p.b, -p.lambda) / gamma_fn(-p.lambda);
    case GigCase::none:
      break;
  }
  throw DomainError("invalid GIG parameters: " + describe_case(p));
}

double gig_pdf(const GigParams& p, double x) {
  if (!(x > 0.0)) throw DomainError("gig_pdf: x must be positive");
  const double c = gig_norm_const(p);
  return c * std::exp((p.lambda - 1.0) * std::log(x) - 0.5 * (p.a * x + p.b / x));
}

}  // namespace orbitfam::special
