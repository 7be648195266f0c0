#pragma once

#include <cstdint>
#include <string>

#include "orbitfam/diagnostics.hpp"
#include "orbitfam/errors.hpp"

namespace orbitfam::cli {

struct Tolerances {
  double rank_rel = kDefaultRankRelTol;  // singular values below rank_rel * sigma_max count as zero
  double quad_tol = 1e-10;               // relative quadrature tolerance for the normalizer
  double residual = 1e-10;               // acceptance threshold for well-definedness residuals
};

struct SampleSettings {
  std::size_t count = kDefaultSamples;
  std::uint64_t seed = kDefaultSeed;
};

struct SpecFile {
  std::string origin;  // file path, or a label for in-memory text
  PairSpec pair;
  SampleSettings samples;
  Tolerances tolerances;
};

/// Malformed or inconsistent spec. `field` is a dotted path such as
/// "representation.weights", empty for syntax errors (whose message carries
/// the line and column).
class SpecError : public InvalidInput {
 public:
  SpecError(std::string field, const std::string& message);
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Parses a JSON spec. Unknown keys are rejected; group, representation and
/// v0 are required, the rest default to a trivial subgroup, trivial
/// characters, kDefaultSamples samples at kDefaultSeed and the default
/// tolerances. Throws SpecError.
SpecFile parse_spec(const std::string& text, const std::string& origin = "<memory>");

/// Reads and parses a spec file. Throws SpecError (including for unreadable files).
SpecFile load_spec(const std::string& path);

}  // namespace orbitfam::cli
