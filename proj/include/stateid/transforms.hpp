#pragma once

#include <map>
#include <string>
#include <vector>

#include "stateid/constraints.hpp"
#include "stateid/inference.hpp"
#include "stateid/model.hpp"

namespace stateid {

/// Removes `w`: every parent of `w` becomes a parent of every child of `w`,
/// and each child's CPT becomes sum_w f_W * f_C over the merged parent set
/// (in the new graph's parent order). Valid for any input model; rows sum
/// to 1 by construction.
Cbn functional_eliminate(const Cbn& model, const std::string& w);

struct EliminationReport {
  std::size_t checked = 0;
  std::size_t skipped = 0;  // conditioning events of probability 0
  std::vector<std::string> mismatches;

  bool ok() const { return mismatches.empty(); }
};

/// Eliminates `w` and compares the new joint with the original joint (with
/// `w` summed out) on every instantiation consistent with `context`.
/// `context` must be the context of a CFD on `w` that the model satisfies,
/// otherwise ConstraintNotSatisfied.
EliminationReport verify_feliminate_marginals(const Cbn& model, const std::string& w,
                                              const Instantiation& context,
                                              const InferenceOptions& opts = {});

/// For each child C of `w`: the eliminated model's f'_C(c | p') equals
/// Pr(c | p') in the original model for every p' consistent with `context`
/// with Pr(p') > 0. Same precondition as above.
EliminationReport verify_feliminate_cpts(const Cbn& model, const std::string& w,
                                         const Instantiation& context,
                                         const InferenceOptions& opts = {});

/// Name `extend_state` gives the fresh state: "<base>_ext<k>", k smallest unused.
std::string fresh_state_name(const Variable& v, const std::string& base);

/// Adds a fresh state w' to `w` that takes an `eps` share of `base`'s mass
/// in every row of f_W; children treat w' exactly like `base`.
/// Errors: EpsOutOfRange (eps must be in (0, 1)), UnknownState.
Cbn extend_state(const Cbn& model, const std::string& w, const std::string& base, const Rat& eps);

using StatePermutation = std::map<std::string, std::string>;

/// Relabels where the mass of `var` sits: the new model puts on perm(s) what
/// the old one put on s, in var's CPT and in every child's parent slices.
/// The state list itself is unchanged. Error: NotABijection.
Cbn permute_states(const Cbn& model, const std::string& var, const StatePermutation& perm);

Instantiation permute_instantiation(const Instantiation& inst, const std::string& var,
                                    const StatePermutation& perm);
/// Maps any context state of `var` through `perm`; state-domain constraints are unchanged.
Constraint permute_constraint(const Constraint& c, const std::string& var, const StatePermutation& perm);

/// "0:1,1:0" -> {0->1, 1->0}.
StatePermutation parse_permutation(std::string_view text);

}  // namespace stateid
