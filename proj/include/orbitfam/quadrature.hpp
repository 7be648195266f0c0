#pragma once

#include <functional>
#include <vector>

namespace orbitfam {

using RealFunction = std::function<double(double)>;

struct QuadResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  /// abs_error_estimate <= tol * |value| at the last level.
  bool converged = false;
  /// Non-finite terms or non-negligible mass at the truncation boundary.
  bool divergent = false;
  int evaluations = 0;
};

struct QuadOptions {
  /// Relative tolerance on the level-to-level difference.
  double tol = 1e-10;
  /// Characteristic length of the integrand; the half-line map is x = scale * exp(pi sinh t).
  double scale = 1.0;
  int min_level = 3;
  int max_level = 10;
};

/// Double-exponential quadrature on (0, inf). The substitution
/// u = x / (1 + x) followed by tanh-sinh on (0, 1) collapses to the exp-sinh
/// map x = scale * exp(pi sinh t); the trapezoid rule in t is refined by
/// halving h until successive levels agree.
QuadResult integrate_halfline(const RealFunction& f, double tol);
QuadResult integrate_halfline(const RealFunction& f, const QuadOptions& opts);

/// Tanh-sinh quadrature on (a, b). The integrand is never evaluated at the
/// endpoints, so integrable endpoint singularities are fine.
QuadResult integrate_interval(const RealFunction& f, double a, double b, double tol);
QuadResult integrate_interval(const RealFunction& f, double a, double b, const QuadOptions& opts);

/// Fixed n-point Gauss-Legendre rule on [a, b]; for smooth integrands on short cells.
double gauss_legendre(const RealFunction& f, double a, double b, int n = 20);

enum class DivergenceVerdict { convergent, divergent, inconclusive };

struct DivergenceProbe {
  DivergenceVerdict verdict = DivergenceVerdict::inconclusive;
  /// Integral over the k-th nested truncation, k = 1..6.
  std::vector<double> truncated_values;
  /// truncated_values[5] / truncated_values[4].
  double last_ratio = 0.0;
};

/// Heuristic growth test for a nonnegative integrand on (0, inf): integrates
/// over [10^-k, 10^k] for k = 1..6 (in log coordinates) and compares the last
/// two levels. Ratio > 1.5 => divergent; |ratio - 1| <= 1e-6 => convergent;
/// anything in between is inconclusive.
DivergenceProbe probe_halfline_divergence(const RealFunction& f);

/// Same test on the real line with truncations [-10^k, 10^k].
DivergenceProbe probe_line_divergence(const RealFunction& f);

}  // namespace orbitfam
