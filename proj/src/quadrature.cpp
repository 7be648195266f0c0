#include "orbitfam/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "orbitfam/errors.hpp"

namespace orbitfam {

namespace {

constexpr int kTableLevels = 12;
constexpr double kTMax = 6.5;
// Keeps exp(pi sinh t) within [1e-150, 1e150].
constexpr double kExpSinhTMax = 5.39;

// Node t = k * 2^-level for the k that are new at that level (odd k for level > 0).
struct TanhSinhNode {
  double t;
  double complement;  // 1 - |tanh(pi/2 sinh t)|, computed without cancellation
  double weight;      // (pi/2) cosh t / cosh^2(pi/2 sinh t)
};

struct ExpSinhNode {
  double t;
  double abscissa;  // exp(pi sinh t)
  double weight;    // pi cosh t exp(pi sinh t)
};

template <typename Node, typename Make>
std::vector<std::vector<Node>> build_levels(double t_max, Make make) {
  std::vector<std::vector<Node>> levels(kTableLevels + 1);
  for (int level = 0; level <= kTableLevels; ++level) {
    const double h = std::ldexp(1.0, -level);
    const int step = level == 0 ? 1 : 2;
    const int start = level == 0 ? 0 : 1;
    for (int k = start;; k += step) {
      const double t = k * h;
      if (t > t_max) break;
      levels[level].push_back(make(t));
    }
  }
  return levels;
}

const std::vector<std::vector<TanhSinhNode>>& tanh_sinh_table() {
  static const auto table = build_levels<TanhSinhNode>(kTMax, [](double t) {
    const double u = 0.5 * std::numbers::pi * std::sinh(t);
    const double e = std::exp(-2.0 * u);
    // 1 - tanh(u) = 2 e^{-2u} / (1 + e^{-2u})
    const double complement = 2.0 * e / (1.0 + e);
    const double ch = std::cosh(u);
    const double weight = 0.5 * std::numbers::pi * std::cosh(t) / (ch * ch);
    return TanhSinhNode{t, complement, weight};
  });
  return table;
}

const std::vector<std::vector<ExpSinhNode>>& exp_sinh_table() {
  static const auto table = build_levels<ExpSinhNode>(kExpSinhTMax, [](double t) {
    const double x = std::exp(std::numbers::pi * std::sinh(t));
    return ExpSinhNode{t, x, std::numbers::pi * std::cosh(t) * x};
  });
  return table;
}

void require_tol(double tol) {
  if (!(tol > 0.0 && tol < 1.0)) throw InvalidInput("quadrature tolerance must lie in (0, 1)");
}

// Shared level-refinement driver. `level_sum(level)` returns the weighted sum
// of f over the nodes new at that level, plus the largest |term| seen at the
// outermost nodes (for the truncation check).
struct LevelSum {
  double sum = 0.0;
  double boundary_term = 0.0;
  int evaluations = 0;
  bool finite = true;
};

template <typename LevelFn>
QuadResult refine(LevelFn level_sum, const QuadOptions& opts) {
  require_tol(opts.tol);
  QuadResult result;
  double raw = 0.0;  // sum over all nodes so far, not multiplied by h
  double previous = 0.0;
  double boundary = 0.0;
  const int max_level = std::min(opts.max_level, kTableLevels);
  for (int level = 0; level <= max_level; ++level) {
    const LevelSum ls = level_sum(level);
    result.evaluations += ls.evaluations;
    if (!ls.finite) {
      result.value = std::numeric_limits<double>::infinity();
      result.abs_error_estimate = std::numeric_limits<double>::infinity();
      result.divergent = true;
      return result;
    }
    raw += ls.sum;
    boundary = std::max(boundary, ls.boundary_term);
    const double h = std::ldexp(1.0, -level);
    const double estimate = raw * h;
    result.value = estimate;
    if (level > 0) {
      result.abs_error_estimate = std::abs(estimate - previous);
      const double target = opts.tol * std::abs(estimate);
      if (level >= opts.min_level && result.abs_error_estimate <= target) {
        result.converged = true;
        break;
      }
      if (estimate == 0.0 && previous == 0.0 && level >= opts.min_level) {
        result.converged = true;
        break;
      }
    }
    previous = estimate;
  }
  // Mass sitting at the edge of the node range means the integrand does not
  // decay where the map runs out of representable abscissas.
  if (boundary > opts.tol * std::abs(result.value) && boundary > 0.0) {
    result.converged = false;
    result.divergent = true;
  }
  return result;
}

}  // namespace

QuadResult integrate_halfline(const RealFunction& f, double tol) {
  QuadOptions opts;
  opts.tol = tol;
  return integrate_halfline(f, opts);
}

QuadResult integrate_halfline(const RealFunction& f, const QuadOptions& opts) {
  if (!(opts.scale > 0.0) || !std::isfinite(opts.scale)) {
    throw InvalidInput("integrate_halfline: scale must be positive and finite");
  }
  const auto& table = exp_sinh_table();
  const double scale = opts.scale;
  auto level_sum = [&](int level) {
    LevelSum ls;
    double outer_plus = 0.0, outer_minus = 0.0;
    // Nodes ascend in t, so the last visited node on each side is the outermost.
    auto visit = [&](double x, double w, double& outer_term) {
      if (!(x > 0.0) || !std::isfinite(x) || !std::isfinite(w)) return;
      const double fx = f(x);
      ++ls.evaluations;
      const double term = w * fx;
      if (!std::isfinite(term)) {
        // Far-out abscissas can overflow a polynomial factor whose exponential
        // partner has already underflowed; the boundary check still sees the
        // terms just inside.
        if (x > 1e100 || x < 1e-100) return;
        ls.finite = false;
        return;
      }
      ls.sum += term;
      outer_term = std::abs(term);
    };
    const auto& nodes = table[static_cast<std::size_t>(level)];
    for (const auto& n : nodes) {
      visit(scale * n.abscissa, scale * n.weight, outer_plus);
      if (n.t > 0.0) {
        // t -> -t: exp(pi sinh(-t)) = 1/abscissa, cosh even.
        const double inv = 1.0 / n.abscissa;
        visit(scale * inv, scale * std::numbers::pi * std::cosh(n.t) * inv, outer_minus);
      }
    }
    ls.boundary_term = std::max(outer_plus, outer_minus) * std::ldexp(1.0, -level);
    return ls;
  };
  return refine(level_sum, opts);
}

QuadResult integrate_interval(const RealFunction& f, double a, double b, double tol) {
  QuadOptions opts;
  opts.tol = tol;
  return integrate_interval(f, a, b, opts);
}

QuadResult integrate_interval(const RealFunction& f, double a, double b, const QuadOptions& opts) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
    throw InvalidInput("integrate_interval: need finite a < b");
  }
  const auto& table = tanh_sinh_table();
  const double half = 0.5 * (b - a);
  auto level_sum = [&](int level) {
    LevelSum ls;
    auto visit = [&](double x, double w) {
      if (!(x > a) || !(x < b)) return;
      const double fx = f(x);
      ++ls.evaluations;
      const double term = w * fx;
      if (!std::isfinite(term)) {
        ls.finite = false;
        return;
      }
      ls.sum += term;
    };
    for (const auto& n : table[static_cast<std::size_t>(level)]) {
      const double w = half * n.weight;
      const double d = half * n.complement;
      if (n.t == 0.0) {
        visit(a + half, w);
      } else {
        visit(b - d, w);
        visit(a + d, w);
      }
    }
    // The tanh-sinh weights underflow long before the table ends, so a
    // bounded integrand never trips the boundary check; singular ones are
    // caught through non-finite terms.
    ls.boundary_term = 0.0;
    return ls;
  };
  return refine(level_sum, opts);
}

double gauss_legendre(const RealFunction& f, double a, double b, int n) {
  if (n < 1 || n > 64) throw InvalidInput("gauss_legendre: order must be in [1, 64]");
  // Nodes by Newton iteration on P_n; cached per order.
  struct Rule {
    std::vector<double> x, w;
  };
  static const auto rules = [] {
    std::vector<Rule> out(65);
    for (int order = 1; order <= 64; ++order) {
      Rule r;
      r.x.resize(static_cast<std::size_t>(order));
      r.w.resize(static_cast<std::size_t>(order));
      for (int i = 0; i < order; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
          double p0 = 1.0, p1 = 0.0;
          for (int j = 1; j <= order; ++j) {
            const double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
          }
          dp = order * (z * p0 - p1) / (z * z - 1.0);
          const double dz = p0 / dp;
          z -= dz;
          if (std::abs(dz) < 1e-16) break;
        }
        r.x[static_cast<std::size_t>(i)] = z;
        r.w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - z * z) * dp * dp);
      }
      out[static_cast<std::size_t>(order)] = std::move(r);
    }
    return out;
  }();
  const Rule& r = rules[static_cast<std::size_t>(n)];
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < r.x.size(); ++i) sum += r.w[i] * f(mid + half * r.x[i]);
  return half * sum;
}

namespace {

DivergenceProbe classify(std::vector<double> values) {
  DivergenceProbe probe;
  probe.truncated_values = std::move(values);
  const double last = probe.truncated_values[5];
  const double prev = probe.truncated_values[4];
  if (!std::isfinite(last)) {
    probe.last_ratio = std::numeric_limits<double>::infinity();
    probe.verdict = DivergenceVerdict::divergent;
    return probe;
  }
  if (prev <= 0.0) {
    if (!(last > 0.0)) {
      // Nothing resolved at either truncation: no evidence either way.
      probe.last_ratio = std::numeric_limits<double>::quiet_NaN();
      probe.verdict = DivergenceVerdict::inconclusive;
      return probe;
    }
    probe.last_ratio = std::numeric_limits<double>::infinity();
  } else {
    probe.last_ratio = last / prev;
  }
  if (probe.last_ratio > 1.5) {
    probe.verdict = DivergenceVerdict::divergent;
  } else if (std::abs(probe.last_ratio - 1.0) <= 1e-6) {
    probe.verdict = DivergenceVerdict::convergent;
  } else {
    probe.verdict = DivergenceVerdict::inconclusive;
  }
  return probe;
}

double truncated(const RealFunction& g, double lo, double hi) {
  QuadOptions opts;
  opts.tol = 1e-9;
  const QuadResult r = integrate_interval(g, lo, hi, opts);
  return r.divergent ? std::numeric_limits<double>::infinity() : r.value;
}

}  // namespace

DivergenceProbe probe_halfline_divergence(const RealFunction& f) {
  // x = e^u, dx = e^u du
  const RealFunction g = [&](double u) {
    const double x = std::exp(u);
    return f(x) * x;
  };
  std::vector<double> values;
  for (int k = 1; k <= 6; ++k) {
    const double l = k * std::numbers::ln10;
    values.push_back(truncated(g, -l, 0.0) + truncated(g, 0.0, l));
  }
  return classify(std::move(values));
}

DivergenceProbe probe_line_divergence(const RealFunction& f) {
  std::vector<double> values;
  for (int k = 1; k <= 6; ++k) {
    const double l = std::pow(10.0, k);
    // Split at zero so the bulk near the origin is resolved at every level.
    values.push_back(truncated(f, -l, 0.0) + truncated(f, 0.0, l));
  }
  return classify(std::move(values));
}

}  // namespace orbitfam
