#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stateid/model.hpp"

namespace stateid {

struct InferenceOptions {
  /// Cap on the number of full instantiations enumerated.
  std::uint64_t max_states = std::uint64_t{1} << 24;
};

/// Table over an ordered scope; entries are laid out lexicographically over
/// scope order (first variable most significant).
class Dist {
 public:
  Dist() = default;
  Dist(std::vector<Variable> scope, std::vector<Rat> values);

  const std::vector<Variable>& scope() const { return scope_; }
  std::vector<std::string> scope_names() const;
  const std::vector<Rat>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }

  /// Entry for a full instantiation of the scope (extra variables ignored).
  const Rat& at(const Instantiation& full) const;
  /// Full scope instantiation of entry `i`.
  Instantiation instantiation(std::size_t i) const;
  std::vector<std::size_t> states(std::size_t i) const;

  Rat total() const;
  /// Sum of entries consistent with `event` (variables outside scope: UnknownVariable).
  Rat probability(const Instantiation& event) const;
  /// Sums out everything not in `targets`, keeping `targets` order.
  Dist marginalize(const std::vector<std::string>& targets) const;
  /// Same table with scope reordered to `order` (a permutation of the scope).
  Dist reordered(const std::vector<std::string>& order) const;

 private:
  std::size_t scope_index(const std::string& name) const;

  std::vector<Variable> scope_;
  std::vector<Rat> values_;
};

/// Full joint over all variables via the OpenMP enumeration kernel.
Dist joint(const Cbn& model, const InferenceOptions& opts = {});
/// Serial enumeration; the reference path every acceptance check uses.
Dist joint_reference(const Cbn& model, const InferenceOptions& opts = {});

/// Marginal over `targets` (in the given order) by enumeration.
Dist marginal(const Cbn& model, const std::vector<std::string>& targets,
              const InferenceOptions& opts = {});
/// Pr(V) over the observed variables.
Dist observational(const Cbn& model, const InferenceOptions& opts = {});

/// Pr(target | given). Throws ZeroConditioningEvent when Pr(given) = 0.
Rat conditional(const Cbn& model, const Instantiation& target, const Instantiation& given,
                const InferenceOptions& opts = {});
/// Same, read off an already computed table.
Rat conditional(const Dist& table, const Instantiation& target, const Instantiation& given);

/// Mutilated model: each treated variable loses its incoming edges and gets a
/// point mass on its treated state.
Cbn intervene(const Cbn& model, const Instantiation& treatment);

/// Pr_treatment(outcome) by intervention plus enumeration.
Rat causal_effect(const Cbn& model, const Instantiation& treatment, const Instantiation& outcome,
                  const InferenceOptions& opts = {});

/// Sum-product variable elimination. Returns Pr(targets | evidence) (or the
/// marginal when evidence is empty), identical to the enumeration answer.
/// `order` must be a permutation of the non-target, non-evidence variables;
/// when absent, the min-degree heuristic picks one.
Dist eliminate_ve(const Cbn& model, const std::vector<std::string>& targets,
                  const Instantiation& evidence = {},
                  const std::optional<std::vector<std::string>>& order = std::nullopt);

std::vector<std::string> min_degree_order(const Cbn& model, const std::vector<std::string>& targets,
                                          const Instantiation& evidence);

/// Exact entrywise equality after aligning scopes; ScopeMismatch if the
/// scopes differ as sets (or in state lists).
bool dist_equal(const Dist& a, const Dist& b);

/// True when every entry is strictly positive.
bool strictly_positive(const Dist& d);

}  // namespace stateid
