#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "orbitfam/diagnostics.hpp"
#include "orbitfam/family.hpp"
#include "orbitfam/special.hpp"

namespace orbitfam {

/// The GIG pair: diag(g, 1/g) on positive_reals, v0 = (r, s), power characters.
PairSpec gig_pair(double r = 0.5, double s = 0.5);

/// Nine fixed (a, b, lambda) triples covering cases (i)-(iii), followed by one
/// seeded random triple per case.
std::vector<special::GigParams> gig_acceptance_grid(std::uint64_t seed);

struct VerifyGigOptions {
  std::uint64_t seed = kDefaultSeed;
  double tolerance = 1e-8;      // relative, for e^phi * c = 1 and for psi entries
  double pdf_tolerance = 1e-10;  // pdf agreement between equivalent pairs
  /// Multiplies K_lambda in the closed-form constant. 1 in normal use; any other
  /// value is a deliberate fault for exercising the failure path.
  double bessel_scale = 1.0;
};

struct GigNormalizerCase {
  special::GigParams params;
  std::string gig_case;  // "i", "ii", "iii"
  double phi = 0.0;
  double norm_const = 0.0;
  double rel_error = 0.0;  // |e^phi * c - 1|
  bool passed = false;
  std::string error;  // set when the computation threw
};

struct GigEquivalenceCase {
  double r = 0.0;
  double s = 0.0;
  bool found = false;
  Matrix psi;
  double psi_error = 0.0;      // max entrywise |psi - diag(2r, 2s)|
  double max_pdf_difference = 0.0;
  bool passed = false;
  std::string error;
};

struct VerifyGigReport {
  VerifyGigOptions options;
  std::vector<GigNormalizerCase> normalizer;
  InjectivityVerdict injectivity;
  bool condition_a = false;
  std::vector<GigEquivalenceCase> equivalence;

  std::size_t normalizer_passed() const;
  bool passed() const;
};

VerifyGigReport verify_gig(const VerifyGigOptions& options = {});

}  // namespace orbitfam
