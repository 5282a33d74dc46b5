#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "stateid/constraints.hpp"
#include "stateid/estimand.hpp"
#include "stateid/inference.hpp"
#include "stateid/model.hpp"
#include "stateid/model_io.hpp"

namespace stateid {

enum class Expectation { Separated, NotSeparated };

std::string expectation_name(Expectation e);
Expectation parse_expectation(std::string_view s);

/// Two parameterizations of one graph plus the target effect Pr_x(y).
struct CertificatePair {
  std::string label;
  Cbn model_a;
  Cbn model_b;
  std::vector<Constraint> constraints;
  Instantiation treatment;
  Instantiation outcome;
  Expectation expectation = Expectation::Separated;

  const CausalGraph& graph() const { return model_a.graph(); }
};

struct PairReport {
  ViolationReport violations_a;
  ViolationReport violations_b;
  bool constraints_ok = false;
  bool observational_equal = false;
  Dist observed_a;  // Pr(V) under model_a
  Rat effect_a;
  Rat effect_b;
  bool separated = false;
  Expectation expectation = Expectation::Separated;
  bool pass = false;
};

PairReport verify_pair(const CertificatePair& p, const InferenceOptions& opts = {});

/// An identification formula with the effect it claims to compute.
/// Treatment/outcome states may be written "$name" and are filled in from
/// each binding.
struct EstimandCheck {
  std::string text;
  Instantiation treatment;
  Instantiation outcome;
  std::vector<Binding> bindings;
  bool identifiable = true;
  /// Models drawn for the oracle comparison.
  CausalGraph sampling_graph;
  std::vector<Constraint> sampling_constraints;
};

/// Replaces "$name" states in `templ` using `b`. UnboundPlaceholder on a miss.
Instantiation substitute(const Instantiation& templ, const Binding& b);

/// Functional elimination of `var` checked on sampled models of `graph`.
struct EliminationCheck {
  CausalGraph graph;
  std::vector<Constraint> constraints;
  std::string var;
  Instantiation context;
};

/// State extension applied to every pair of the fixture.
struct ExtensionCheck {
  std::string var;
  std::string base;
  Rat eps;
};

struct Fixture {
  std::string id;
  std::string notes;
  std::vector<CertificatePair> pairs;
  std::vector<EstimandCheck> estimands;
  std::vector<EliminationCheck> eliminations;
  std::vector<ExtensionCheck> extensions;
};

struct FixtureOptions {
  std::size_t samples = 100;
  std::uint64_t seed = 1;
  InferenceOptions inference;
};

struct EstimandResult {
  std::string text;
  std::size_t comparisons = 0;    // (sample, binding) pairs checked
  std::size_t pair_checks = 0;    // evaluations compared across a pair
  std::vector<std::string> failures;
  std::vector<std::string> warnings;
  bool pass() const { return failures.empty(); }
};

struct EliminationResult {
  std::string var;
  std::size_t models = 0;
  std::size_t marginal_checks = 0;
  std::size_t cpt_checks = 0;
  std::vector<std::string> failures;
  bool pass() const { return failures.empty(); }
};

struct DrillCase {
  std::string label;
  bool pass = false;
  std::string detail;
};

struct DrillReport {
  std::vector<DrillCase> cases;
  bool pass() const;
};

struct FixtureReport {
  std::string id;
  std::vector<PairReport> pairs;
  std::vector<EstimandResult> estimands;
  std::vector<EliminationResult> eliminations;
  DrillReport extensions;
  bool pass = false;
};

/// Runs every check a fixture declares. Estimand and elimination checks
/// draw `opts.samples` constrained models each (seeds opts.seed, +1, ...).
FixtureReport verify_fixture(const Fixture& f, const FixtureOptions& opts = {});

/// Every fixture shipped with the library, in a fixed order.
const std::vector<Fixture>& builtin_fixtures();
/// Throws FixtureLoadError for an unknown id.
const Fixture& builtin_fixture(std::string_view id);

// State extension drills.

/// Extends `var` at `base` in both models and checks the outcome the state
/// extension argument predicts for this case of `var`.
DrillCase check_extension(const CertificatePair& p, const ExtensionCheck& ext,
                          const InferenceOptions& opts = {});
/// check_extension for every variable: hidden and observed non-outcome
/// variables at their first state, outcome variables at the outcome state
/// (scaling case), at another state (unchanged case) and reading the fresh
/// state (eps case).
DrillReport extension_drill(const CertificatePair& p, const Rat& eps, const InferenceOptions& opts = {});

// Permutation drills.

/// `trials` random relabelings of every variable: effects conjugate and
/// constraint satisfaction carries over to the relabeled constraints.
DrillReport permutation_drill(const CertificatePair& p, std::uint64_t seed, std::size_t trials = 20,
                              const InferenceOptions& opts = {});

// File IO. Layout under a root directory: <root>/<id>/fixture.json plus
// <root>/<id>/pair.json (first pair), pair2.json, ... for the CLI.

Json pair_to_json(const CertificatePair& p);
CertificatePair pair_from_json(const Json& j);
Json fixture_to_json(const Fixture& f);
Fixture fixture_from_json(const Json& j);
Json pair_report_to_json(const PairReport& r);
Json fixture_report_to_json(const FixtureReport& r);

void export_fixture(const Fixture& f, const std::filesystem::path& root);
Fixture load_fixture(const std::filesystem::path& dir);
/// Every subdirectory holding a fixture.json, sorted by id.
std::vector<Fixture> load_fixture_dir(const std::filesystem::path& root);

}  // namespace stateid
