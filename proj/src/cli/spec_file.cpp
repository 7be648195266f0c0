#include "orbitfam/cli/spec_file.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace orbitfam::cli {

using nlohmann::json;

SpecError::SpecError(std::string field, const std::string& message)
    : InvalidInput(field.empty() ? message : "field '" + field + "': " + message), field_(std::move(field)) {}

namespace {

std::string join(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

void require_object(const json& j, const std::string& field) {
  if (!j.is_object()) throw SpecError(field, "expected an object");
}

void reject_unknown(const json& j, const std::string& field, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw SpecError(join(field, key), "unknown key");
  }
}

const json& required(const json& j, const std::string& field, const std::string& key) {
  const auto it = j.find(key);
  if (it == j.end()) throw SpecError(join(field, key), "missing required key");
  return *it;
}

std::string kind_of(const json& j, const std::string& field) {
  const json& k = required(j, field, "kind");
  if (!k.is_string()) throw SpecError(join(field, "kind"), "expected a string");
  return k.get<std::string>();
}

double real(const json& j, const std::string& field) {
  if (!j.is_number()) throw SpecError(field, "expected a number");
  return j.get<double>();
}

std::vector<double> reals(const json& j, const std::string& field) {
  if (!j.is_array()) throw SpecError(field, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(real(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

GroupChart parse_group(const json& j, const std::string& field) {
  require_object(j, field);
  reject_unknown(j, field, {"kind"});
  const std::string kind = kind_of(j, field);
  if (kind == "positive_reals") return GroupChart::positive_reals();
  if (kind == "real_line") return GroupChart::real_line();
  if (kind == "circle") return GroupChart::circle();
  throw SpecError(join(field, "kind"), "unknown group kind '" + kind + "' (positive_reals, real_line, circle)");
}

SubgroupSpec parse_subgroup(const json& j, const std::string& field, const GroupChart& chart) {
  require_object(j, field);
  reject_unknown(j, field, {"kind", "elements"});
  const std::string kind = kind_of(j, field);
  SubgroupSpec h;
  if (kind == "trivial") {
    if (j.contains("elements")) throw SpecError(join(field, "elements"), "not allowed for a trivial subgroup");
  } else if (kind == "finite_list") {
    h = SubgroupSpec::finite(reals(required(j, field, "elements"), join(field, "elements")));
  } else {
    throw SpecError(join(field, "kind"), "unknown subgroup kind '" + kind + "' (trivial, finite_list)");
  }
  try {
    validate_subgroup(h, chart);
  } catch (const DomainError& e) {
    throw SpecError(join(field, "elements"), e.what());
  }
  return h;
}

RepTemplate parse_template(const json& j, const std::string& field, const GroupChart& chart) {
  require_object(j, field);
  const std::string kind = kind_of(j, field);
  if (kind == "diagonal_weights") {
    reject_unknown(j, field, {"kind", "weights"});
    return DiagonalWeights{reals(required(j, field, "weights"), join(field, "weights"))};
  }
  if (kind == "rotation") {
    reject_unknown(j, field, {"kind", "frequencies"});
    return Rotation{reals(required(j, field, "frequencies"), join(field, "frequencies"))};
  }
  if (kind == "log_unipotent") {
    reject_unknown(j, field, {"kind"});
    return LogUnipotent{};
  }
  if (kind == "direct_sum") {
    reject_unknown(j, field, {"kind", "summands"});
    const std::string sfield = join(field, "summands");
    const json& arr = required(j, field, "summands");
    if (!arr.is_array() || arr.empty()) throw SpecError(sfield, "expected a non-empty array of representations");
    DirectSum sum;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string f = sfield + "[" + std::to_string(i) + "]";
      try {
        sum.summands.emplace_back(parse_template(arr[i], f, chart), chart);
      } catch (const InvalidRepresentation& e) {
        throw SpecError(f, e.what());
      } catch (const DomainError& e) {
        throw SpecError(f, e.what());
      }
    }
    return sum;
  }
  throw SpecError(join(field, "kind"), "unknown representation kind '" + kind +
                                           "' (diagonal_weights, rotation, log_unipotent, direct_sum)");
}

CharacterBasis parse_characters(const json& j, const std::string& field) {
  require_object(j, field);
  reject_unknown(j, field, {"kind"});
  const std::string kind = kind_of(j, field);
  if (kind == "power") return CharacterBasis::power();
  if (kind == "linear") return CharacterBasis::linear();
  if (kind == "trivial") return CharacterBasis::trivial();
  throw SpecError(join(field, "kind"), "unknown character kind '" + kind + "' (power, linear, trivial)");
}

SampleSettings parse_samples(const json& j, const std::string& field) {
  require_object(j, field);
  reject_unknown(j, field, {"count", "seed"});
  SampleSettings s;
  if (j.contains("count")) {
    if (!j["count"].is_number_unsigned()) throw SpecError(join(field, "count"), "expected a positive integer");
    s.count = j["count"].get<std::size_t>();
    if (s.count == 0) throw SpecError(join(field, "count"), "expected a positive integer");
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw SpecError(join(field, "seed"), "expected a non-negative integer");
    s.seed = j["seed"].get<std::uint64_t>();
  }
  return s;
}

Tolerances parse_tolerances(const json& j, const std::string& field) {
  require_object(j, field);
  reject_unknown(j, field, {"rank_rel", "quad_tol", "residual"});
  Tolerances t;
  auto positive = [&](const char* key, double& target) {
    if (!j.contains(key)) return;
    const double v = real(j[key], join(field, key));
    if (!(v > 0.0 && v < 1.0)) throw SpecError(join(field, key), "expected a value in (0, 1)");
    target = v;
  };
  positive("rank_rel", t.rank_rel);
  positive("quad_tol", t.quad_tol);
  positive("residual", t.residual);
  return t;
}

}  // namespace

SpecFile parse_spec(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpecError("", origin + ": " + e.what());
  }
  require_object(j, "");
  reject_unknown(j, "",
                 {"group", "subgroup", "representation", "v0", "characters", "samples", "tolerances"});

  const GroupChart chart = parse_group(required(j, "", "group"), "group");
  const SubgroupSpec h =
      j.contains("subgroup") ? parse_subgroup(j["subgroup"], "subgroup", chart) : SubgroupSpec::trivial();
  RepTemplate tmpl = parse_template(required(j, "", "representation"), "representation", chart);
  std::optional<RepSpec> rep;
  try {
    rep.emplace(std::move(tmpl), chart);
  } catch (const InvalidRepresentation& e) {
    throw SpecError("representation", e.what());
  } catch (const DomainError& e) {
    throw SpecError("representation", e.what());
  }

  const std::vector<double> v0_values = reals(required(j, "", "v0"), "v0");
  if (static_cast<int>(v0_values.size()) != rep->dim()) {
    throw SpecError("v0", "has " + std::to_string(v0_values.size()) + " entries but the representation has dimension " +
                              std::to_string(rep->dim()));
  }
  const Vector v0 = Eigen::Map<const Vector>(v0_values.data(), static_cast<Eigen::Index>(v0_values.size()));

  const CharacterBasis chars =
      j.contains("characters") ? parse_characters(j["characters"], "characters") : CharacterBasis::trivial();
  SampleSettings samples = j.contains("samples") ? parse_samples(j["samples"], "samples") : SampleSettings{};
  Tolerances tolerances = j.contains("tolerances") ? parse_tolerances(j["tolerances"], "tolerances") : Tolerances{};

  try {
    const CharacterValidation cv = validate_character_basis(chars, chart, h, samples.seed);
    if (!cv.valid) {
      std::ostringstream msg;
      msg << "basis '" << chars.name() << "' is not a character basis on " << chart.name()
          << " trivial on H (subgroup residual " << cv.max_subgroup_residual << ", additivity residual "
          << cv.max_additivity_residual << ")";
      throw SpecError("characters", msg.str());
    }
  } catch (const DomainError& e) {
    throw SpecError("characters", e.what());
  }

  try {
    return SpecFile{origin, PairSpec::make(*rep, v0, h, chars), samples, tolerances};
  } catch (const PreconditionViolation& e) {
    throw SpecError("v0", e.what());
  } catch (const InvalidInput& e) {
    throw SpecError("v0", e.what());
  }
}

SpecFile load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("", "cannot read spec file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_spec(buf.str(), path);
}

}  // namespace orbitfam::cli
