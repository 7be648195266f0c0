#pragma once

#include <string>

namespace orbitfam::special {

/// Gamma function for x > 0 (Lanczos, g = 7, 9 coefficients; reflection for
/// x < 1/2). Relative error below 1e-13 on (0, 50]. Throws DomainError for x <= 0.
double gamma_fn(double x);

/// Modified Bessel function of the second kind,
///   K_lambda(x) = int_0^inf exp(-x cosh t) cosh(lambda t) dt,
/// by exp-sinh quadrature of that representation. Valid for x > 0 and
/// |lambda| <= 50; relative error <= 1e-9 on x in [1e-3, 50].
double bessel_k(double lambda, double x);

/// Same integral at a caller-chosen relative quadrature tolerance.
double bessel_k(double lambda, double x, double tol);

struct GigParams {
  double a = 0.0;
  double b = 0.0;
  double lambda = 0.0;
};

enum class GigCase { i, ii, iii, none };

/// (i) a>0, b>0; (ii) a>0, b=0, lambda>0; (iii) a=0, b>0, lambda<0.
GigCase classify(const GigParams& p);
std::string describe_case(const GigParams& p);

/// Throws DomainError unless one of the three cases holds exactly.
void validate(const GigParams& p);

/// c_{a,b,lambda}:
///   (i)   (a/b)^{lambda/2} / (2 K_lambda(sqrt(ab)))
///   (ii)  (a/2)^lambda / Gamma(lambda)
///   (iii) (b/2)^{-lambda} / Gamma(-lambda)
double gig_norm_const(const GigParams& p);

/// c_{a,b,lambda} x^{lambda-1} exp(-(a x + b/x) / 2). Throws DomainError for x <= 0.
double gig_pdf(const GigParams& p, double x);

}  // namespace orbitfam::special
