#include "orbitfam/cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "orbitfam/cli/spec_file.hpp"
#include "orbitfam/equivalence.hpp"
#include "orbitfam/family.hpp"

namespace orbitfam::cli {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ordered_json vec_json(const Vector& v) {
  ordered_json out = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

ordered_json matrix_json(const Matrix& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vec_json(m.row(i).transpose()));
  return rows;
}

ordered_json rank_json(const RankReport& r) {
  ordered_json out;
  out["rank"] = r.rank;
  out["tolerance_used"] = r.tolerance_used;
  out["singular_values"] = r.singular_values;
  return out;
}

ordered_json provenance(const SpecFile& spec) {
  ordered_json p;
  p["tool"] = kToolName;
  p["version"] = kToolVersion;
  p["spec"] = spec.origin;
  p["seed"] = spec.samples.seed;
  p["samples"] = spec.samples.count;
  p["tolerances"] = {{"rank_rel", spec.tolerances.rank_rel},
                     {"quad_tol", spec.tolerances.quad_tol},
                     {"residual", spec.tolerances.residual}};
  return p;
}

ordered_json pair_json(const PairSpec& pair) {
  ordered_json p;
  p["group"] = pair.chart().name();
  p["representation"] = pair.rep().describe();
  p["dim"] = pair.dim();
  p["v0"] = vec_json(pair.v0());
  p["subgroup"] = pair.subgroup().is_trivial() ? ordered_json("trivial") : ordered_json(pair.subgroup().elements);
  p["characters"] = pair.characters().name();
  return p;
}

CommandResult input_error(const std::string& message) {
  return {kExitInputError, "", "error: " + message + "\n"};
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace

CommandResult cmd_check(const std::string& spec_path) {
  try {
    const SpecFile spec = load_spec(spec_path);
    const PairSpec& pair = spec.pair;
    const std::size_t n = spec.samples.count;
    const std::uint64_t seed = spec.samples.seed;
    const double tol = spec.tolerances.rank_rel;

    ordered_json report;
    report["command"] = "check";
    report["provenance"] = provenance(spec);
    report["pair"] = pair_json(pair);

    const WellDefinednessReport wd = well_definedness_check(pair, seed, n);
    const bool well_defined = wd.max_residual <= spec.tolerances.residual;
    report["well_defined"] = {{"holds", well_defined}, {"max_residual", wd.max_residual}};
    if (!well_defined) {
      CommandResult r{kExitInputError, dump(report), "error: v0 is not H-fixed, x v0 is not well defined on G/H\n"};
      return r;
    }

    const SpanVerdict cyclic = cyclic_check(pair, n, seed, tol);
    ordered_json cj = {{"holds", cyclic.holds}, {"dim", pair.dim()}};
    cj.update(rank_json(cyclic.rank));
    report["cyclic"] = cj;

    const SpanVerdict a = condition_A(pair, n, seed, tol);
    ordered_json aj = {{"holds", a.holds}, {"dim", pair.dim()}};
    aj.update(rank_json(a.rank));
    report["condition_A"] = aj;

    const ConditionB b = condition_B(pair, n, seed, tol);
    report["condition_B"] = {{"holds", b.holds()},
                             {"cyclic", b.cyclic},
                             {"cyclic_rank", b.cyclic_rank.rank},
                             {"no_dual_fixed", b.no_dual_fixed},
                             {"dual_fixed_dim", b.dual_fixed_dim}};

    const InjectivityVerdict inj = injectivity_check(pair, n, seed, tol);
    ordered_json ij;
    ij["holds"] = inj.injective;
    ij["xi_margin"] = inj.xi_margin;
    ij["xi_margin_threshold"] = 1e-7;
    ij["system_rank"] = inj.rank_details.rank;
    ij["system_columns"] = pair.dim() + pair.characters().size() + 1;
    ij["samples_used"] = inj.samples_used;
    ij["assumption"] = inj.assumption;
    if (inj.witness) {
      const std::vector<double> fresh = sample_group(pair.chart(), n, seed + 1);
      ij["witness"] = {{"xi", vec_json(inj.witness->xi)},
                       {"char_coeffs", vec_json(inj.witness->char_coeffs)},
                       {"c", inj.witness->c},
                       {"residual_fresh_samples", witness_residual(pair, *inj.witness, fresh)}};
    }
    report["injective"] = ij;
    return {inj.injective ? kExitSuccess : kExitNegative, dump(report), ""};
  } catch (const SpecError& e) {
    return input_error(e.what());
  } catch (const std::exception& e) {
    return input_error(e.what());
  }
}

CommandResult cmd_equiv(const std::string& spec_a, const std::string& spec_b) {
  try {
    const SpecFile a = load_spec(spec_a);
    const SpecFile b = load_spec(spec_b);
    if (!(a.pair.chart() == b.pair.chart())) {
      return input_error("the two specs use different groups (" + a.pair.chart().name() + " vs " +
                         b.pair.chart().name() + ")");
    }
    const std::size_t n = a.samples.count;
    const std::uint64_t seed = a.samples.seed;
    const SpanVerdict ca = cyclic_check(a.pair, n, seed, a.tolerances.rank_rel);
    const SpanVerdict cb = cyclic_check(b.pair, n, seed, b.tolerances.rank_rel);

    ordered_json report;
    report["command"] = "equiv";
    report["provenance"] = {{"a", provenance(a)}, {"b", provenance(b)}};
    report["pair_a"] = pair_json(a.pair);
    report["pair_b"] = pair_json(b.pair);
    report["cyclic_a"] = {{"holds", ca.holds}, {"rank", ca.rank.rank}, {"dim", a.pair.dim()}};
    report["cyclic_b"] = {{"holds", cb.holds}, {"rank", cb.rank.rank}, {"dim", b.pair.dim()}};
    if (!ca.holds || !cb.holds) {
      return {kExitInputError, dump(report), "error: equivalence defined on cyclic pairs\n"};
    }

    const EquivalenceSearch search = find_equivalence(a.pair, b.pair, n, seed);
    ordered_json ej;
    ej["found"] = search.intertwiner.has_value();
    ej["solution_space_dim"] = search.solution_space_dim;
    ej["constraint_residual"] = search.constraint_residual;
    if (search.intertwiner) {
      ej["psi"] = matrix_json(search.intertwiner->psi);
      ej["intertwiner_residual"] = search.intertwiner->residual;
    } else {
      ej["reason"] = search.reason;
    }
    report["equivalence"] = ej;

    const SameFamilyReport same = same_family_check(a.pair, b.pair, default_grid(a.pair.chart()));
    report["same_family"] = {{"holds", same.same},
                             {"residual_a_in_b", same.residual_a_in_b},
                             {"residual_b_in_a", same.residual_b_in_a},
                             {"threshold", 1e-8}};
    return {search.intertwiner ? kExitSuccess : kExitNegative, dump(report), ""};
  } catch (const std::exception& e) {
    return input_error(e.what());
  }
}

GridRange parse_grid(const std::string& text) {
  std::istringstream in(text);
  GridRange g;
  char c1 = 0, c2 = 0;
  long long n = 0;
  if (!(in >> g.lo >> c1 >> g.hi >> c2 >> n) || c1 != ':' || c2 != ':' || !in.eof() || n < 1) {
    throw InvalidInput("grid must look like lo:hi:n with n >= 1, got '" + text + "'");
  }
  if (!std::isfinite(g.lo) || !std::isfinite(g.hi) || g.hi < g.lo) {
    throw InvalidInput("grid needs finite lo <= hi, got '" + text + "'");
  }
  g.n = static_cast<std::size_t>(n);
  return g;
}

std::vector<double> parse_reals(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || !std::isfinite(v)) {
      throw InvalidInput("'" + item + "' is not a finite real number");
    }
    out.push_back(v);
  }
  if (out.empty() || (!text.empty() && text.back() == ',')) {
    throw InvalidInput("expected a comma separated list of reals, got '" + text + "'");
  }
  return out;
}

CommandResult cmd_family(const FamilyArgs& args) {
  if (args.grid.has_value() == args.sample_count.has_value()) {
    return input_error("family needs exactly one of --grid or --sample");
  }
  std::optional<FamilySpec> fam;
  ThetaParam theta;
  try {
    const SpecFile spec = load_spec(args.spec_path);
    fam.emplace(FamilySpec::make(spec.pair));
    const int d = spec.pair.dim();
    const int k = spec.pair.characters().size();
    if (static_cast<int>(args.theta.size()) != d + k) {
      return input_error("--theta needs " + std::to_string(d + k) + " values (" + std::to_string(d) +
                         " for xi, " + std::to_string(k) + " for the characters), got " +
                         std::to_string(args.theta.size()));
    }
    theta.xi = Eigen::Map<const Vector>(args.theta.data(), d);
    theta.char_coeffs = Eigen::Map<const Vector>(args.theta.data() + d, k);

    const MembershipReport m = theta_membership(*fam, theta);
    if (m.verdict == Membership::outside) {
      return {kExitOutsideTheta, "",
              "error: theta is outside the parameter space (" + m.method + "): " + m.detail + "\n"};
    }
    std::optional<FamilyMember> member;
    try {
      member.emplace(*fam, theta, spec.tolerances.quad_tol);
    } catch (const QuadratureError& e) {
      return {kExitOutsideTheta, "",
              "error: membership " + to_string(m.verdict) + " (" + m.method + ": " + m.detail +
                  ") and the normalizing integral failed: " + e.what() + "\n"};
    }

    std::ostringstream out;
    std::ostringstream err;
    err << "phi=" << fmt(member->log_normalizer()) << " membership=" << to_string(m.verdict) << " (" << m.method
        << ")\n";
    if (args.grid) {
      const GridRange& g = *args.grid;
      out << "x,pdf\n";
      for (std::size_t i = 0; i < g.n; ++i) {
        const double x = g.n == 1 ? g.lo : g.lo + (g.hi - g.lo) * static_cast<double>(i) / (g.n - 1);
        if (!fam->carrier().interior(x)) {
          return input_error("grid point " + fmt(x) + " is outside the " + fam->carrier().describe());
        }
        out << fmt(x) << "," << fmt(member->pdf(x)) << "\n";
      }
    } else {
      for (double x : member->sample(*args.sample_count, args.seed)) out << fmt(x) << "\n";
    }
    return {kExitSuccess, out.str(), err.str()};
  } catch (const std::exception& e) {
    return input_error(e.what());
  }
}

CommandResult cmd_verify_gig(const VerifyGigOptions& options, bool json) {
  const VerifyGigReport r = verify_gig(options);
  std::ostringstream out;
  std::ostringstream err;
  if (json) {
    ordered_json j;
    j["command"] = "verify-gig";
    j["provenance"] = {{"tool", kToolName},
                       {"version", kToolVersion},
                       {"seed", options.seed},
                       {"tolerances", {{"normalizer_rel", options.tolerance}, {"pdf", options.pdf_tolerance}}},
                       {"bessel_scale", options.bessel_scale}};
    ordered_json cases = ordered_json::array();
    for (const auto& c : r.normalizer) {
      cases.push_back({{"a", c.params.a},
                       {"b", c.params.b},
                       {"lambda", c.params.lambda},
                       {"case", c.gig_case},
                       {"phi", c.phi},
                       {"norm_const", c.norm_const},
                       {"rel_error", c.rel_error},
                       {"passed", c.passed},
                       {"error", c.error}});
    }
    j["normalizer"] = cases;
    j["injectivity"] = {{"holds", r.injectivity.injective},
                        {"xi_margin", r.injectivity.xi_margin},
                        {"condition_A", r.condition_a}};
    ordered_json eq = ordered_json::array();
    for (const auto& c : r.equivalence) {
      eq.push_back({{"r", c.r},
                    {"s", c.s},
                    {"found", c.found},
                    {"psi", c.found ? matrix_json(c.psi) : ordered_json(nullptr)},
                    {"psi_error", c.psi_error},
                    {"max_pdf_difference", c.max_pdf_difference},
                    {"passed", c.passed},
                    {"error", c.error}});
    }
    j["equivalence"] = eq;
    j["passed"] = r.passed();
    out << dump(j);
  } else {
    out << "verify-gig  seed=" << options.seed << "  normalizer_tol=" << fmt(options.tolerance)
        << "  pdf_tol=" << fmt(options.pdf_tolerance) << "  version=" << kToolVersion << "\n";
    out << "case       a          b     lambda          rel_error  status\n";
    for (const auto& c : r.normalizer) {
      char line[160];
      std::snprintf(line, sizeof line, "%-4s %10.6g %10.6g %10.6g %18.3e  %s\n", c.gig_case.c_str(), c.params.a,
                    c.params.b, c.params.lambda, c.rel_error, c.passed ? "pass" : "FAIL");
      out << line;
      if (!c.error.empty()) out << "     error: " << c.error << "\n";
    }
    out << "normalizer: " << r.normalizer_passed() << "/" << r.normalizer.size() << " cases pass\n";
    out << "injective: " << (r.injectivity.injective ? "true" : "false")
        << " (xi margin " << fmt(r.injectivity.xi_margin) << "), condition_A: " << (r.condition_a ? "true" : "false")
        << "\n";
    for (const auto& c : r.equivalence) {
      char line[200];
      std::snprintf(line, sizeof line, "equivalence v0=(%.6g, %.6g): psi_error=%.3e pdf_diff=%.3e  %s\n", c.r, c.s,
                    c.psi_error, c.max_pdf_difference, c.passed ? "pass" : "FAIL");
      out << line;
      if (!c.error.empty()) out << "     error: " << c.error << "\n";
    }
  }
  if (!r.passed()) {
    err << "verify-gig failed:";
    for (const auto& c : r.normalizer) {
      if (!c.passed) err << " normalizer(" << fmt(c.params.a) << "," << fmt(c.params.b) << "," << fmt(c.params.lambda) << ")";
    }
    if (!r.injectivity.injective) err << " injectivity";
    if (!r.condition_a) err << " condition_A";
    for (const auto& c : r.equivalence) {
      if (!c.passed) err << " equivalence(" << fmt(c.r) << "," << fmt(c.s) << ")";
    }
    err << "\n";
  }
  return {r.passed() ? kExitSuccess : kExitVerificationFailed, out.str(), err.str()};
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exponential families on homogeneous spaces: diagnostics, equivalence and sampling"};
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
  app.require_subcommand(1);

  std::string check_spec;
  auto* check = app.add_subcommand("check", "Injectivity diagnostics for a pair spec (JSON report)");
  check->add_option("spec", check_spec, "Spec file (JSON)")->required();

  std::string equiv_a, equiv_b;
  auto* equiv = app.add_subcommand("equiv", "Search an intertwiner between two cyclic pair specs");
  equiv->add_option("spec_a", equiv_a, "First spec file")->required();
  equiv->add_option("spec_b", equiv_b, "Second spec file")->required();

  FamilyArgs fam_args;
  std::string theta_text, grid_text;
  std::size_t sample_n = 0;
  auto* family = app.add_subcommand("family", "Evaluate or sample a member of the family");
  family->add_option("spec", fam_args.spec_path, "Spec file (JSON)")->required();
  family->add_option("--theta", theta_text, "xi components then character coefficients, comma separated")
      ->required();
  auto* grid_opt = family->add_option("--grid", grid_text, "Evaluation grid lo:hi:n (CSV x,pdf)");
  auto* sample_opt = family->add_option("--sample", sample_n, "Number of inverse-CDF draws");
  family->add_option("--seed", fam_args.seed, "Sampling seed")->needs(sample_opt);
  grid_opt->excludes(sample_opt);

  VerifyGigOptions vg;
  bool vg_json = false;
  auto* verify = app.add_subcommand("verify-gig", "Run the GIG verification grid");
  verify->add_option("--seed", vg.seed, "Seed for the randomized cases");
  verify->add_flag("--json", vg_json, "Emit the report as JSON");
  verify->add_option("--bessel-scale", vg.bessel_scale, "Fault injection: scale K_lambda in the closed form")
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitSuccess;
  } catch (const CLI::CallForVersion& e) {
    out << std::string(kToolName) + " " + kToolVersion << "\n";
    return kExitSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  CommandResult result;
  if (*check) {
    result = cmd_check(check_spec);
  } else if (*equiv) {
    result = cmd_equiv(equiv_a, equiv_b);
  } else if (*family) {
    try {
      fam_args.theta = parse_reals(theta_text);
      if (*grid_opt) fam_args.grid = parse_grid(grid_text);
    } catch (const InvalidInput& e) {
      err << "error: " << e.what() << "\n";
      return kExitInputError;
    }
    if (*sample_opt) fam_args.sample_count = sample_n;
    result = cmd_family(fam_args);
  } else {
    result = cmd_verify_gig(vg, vg_json);
  }
  out << result.out;
  err << result.err;
  return result.exit_code;
}

}  // namespace orbitfam::cli
