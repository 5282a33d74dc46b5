#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "stateid/model.hpp"

namespace stateid {

/// (child indep `indep` | context, free): for each instantiation of `free`
/// the child's CPT rows matching `context` are identical across `indep`.
struct Csi {
  std::string child;
  std::vector<std::string> indep;
  Instantiation context;
  std::vector<std::string> free;
  friend bool operator==(const Csi&, const Csi&) = default;
};

/// [determinants, context] -> child: every CPT row consistent with
/// `context` is deterministic.
struct Cfd {
  std::string child;
  std::vector<std::string> determinants;
  Instantiation context;
  friend bool operator==(const Cfd&, const Cfd&) = default;
};

/// Every CPT row of `child` is deterministic.
struct Fd {
  std::string child;
  friend bool operator==(const Fd&, const Fd&) = default;
};

/// The variable's declared states are exactly `states`.
struct StateDomain {
  std::string var;
  std::vector<std::string> states;
  friend bool operator==(const StateDomain&, const StateDomain&) = default;
};

using Constraint = std::variant<Csi, Cfd, Fd, StateDomain>;

std::string describe(const Constraint& c);

/// Checks references and the parent-partition invariants. Throws
/// `MalformedConstraint` (or UnknownVariable/UnknownState).
void validate_constraint(const CausalGraph& g, const Constraint& c);

struct Violation {
  std::string constraint;
  std::string detail;
};

struct ViolationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  void append(const ViolationReport& other) {
    violations.insert(violations.end(), other.violations.begin(), other.violations.end());
  }
};

ViolationReport check_constraint(const Cbn& model, const Constraint& c);
ViolationReport check_all(const Cbn& model, std::span<const Constraint> cs);

struct SampleOptions {
  std::uint32_t weight_bound = 10;
  /// Require Pr(observed) > 0 everywhere; throws PositivityCheckFailed otherwise.
  bool check_positivity = true;
  std::uint64_t max_states = std::uint64_t{1} << 24;
};

/// Draws a model of `g` satisfying `cs`, deterministically in `seed`.
///
/// Free rows are integer weights in [1, weight_bound], normalized. Rows tied
/// by a CSI share one draw; rows under a CFD/FD context are point masses on a
/// uniformly drawn state. Errors: UnsatisfiableSyntactically,
/// PositivityCheckFailed, MalformedConstraint.
Cbn sample_constrained(const CausalGraph& g, std::span<const Constraint> cs, std::uint64_t seed,
                       const SampleOptions& opts = {});

/// Deterministic 64-bit generator (splitmix64). Portable across standard
/// libraries, unlike std::uniform_int_distribution.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform in [0, bound).
  std::uint64_t below(std::uint64_t bound);

 private:
  std::uint64_t state_;
};

}  // namespace stateid
