#include "stateid/inference.hpp"

#include <algorithm>
#include <set>

#include "kernels/enumerate.hpp"

namespace stateid {

// ---------------------------------------------------------------------------
// Dist

Dist::Dist(std::vector<Variable> scope, std::vector<Rat> values)
    : scope_(std::move(scope)), values_(std::move(values)) {
  std::size_t n = 1;
  for (const auto& v : scope_) n *= v.card();
  if (n != values_.size())
    throw Error(Errc::ScopeMismatch, "table has " + std::to_string(values_.size()) +
                                         " entries for a scope of size " + std::to_string(n));
}

std::vector<std::string> Dist::scope_names() const {
  std::vector<std::string> out;
  for (const auto& v : scope_) out.push_back(v.name);
  return out;
}

std::size_t Dist::scope_index(const std::string& name) const {
  for (std::size_t i = 0; i < scope_.size(); ++i)
    if (scope_[i].name == name) return i;
  throw Error(Errc::UnknownVariable, name + " is not in the distribution scope");
}

std::vector<std::size_t> Dist::states(std::size_t i) const {
  std::vector<std::size_t> out(scope_.size());
  for (std::size_t k = scope_.size(); k-- > 0;) {
    out[k] = i % scope_[k].card();
    i /= scope_[k].card();
  }
  return out;
}

Instantiation Dist::instantiation(std::size_t i) const {
  Instantiation out;
  auto st = states(i);
  for (std::size_t k = 0; k < scope_.size(); ++k) out.set(scope_[k].name, scope_[k].states[st[k]]);
  return out;
}

const Rat& Dist::at(const Instantiation& full) const {
  std::size_t idx = 0;
  for (const auto& v : scope_) {
    const auto* s = full.get(v.name);
    if (!s) throw Error(Errc::ScopeMismatch, "instantiation does not assign " + v.name);
    idx = idx * v.card() + v.state_index(*s);
  }
  return values_[idx];
}

Rat Dist::total() const {
  Rat sum;
  for (const auto& x : values_) sum += x;
  return sum;
}

Rat Dist::probability(const Instantiation& event) const {
  // Fixed positions per scope slot; -1 means free.
  std::vector<std::ptrdiff_t> fixed(scope_.size(), -1);
  for (const auto& [var, state] : event) {
    auto k = scope_index(var);
    fixed[k] = static_cast<std::ptrdiff_t>(scope_[k].state_index(state));
  }
  Rat sum;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i].is_zero()) continue;
    std::size_t rest = i;
    bool match = true;
    for (std::size_t k = scope_.size(); k-- > 0;) {
      auto s = static_cast<std::ptrdiff_t>(rest % scope_[k].card());
      rest /= scope_[k].card();
      if (fixed[k] >= 0 && fixed[k] != s) {
        match = false;
        break;
      }
    }
    if (match) sum += values_[i];
  }
  return sum;
}

Dist Dist::marginalize(const std::vector<std::string>& targets) const {
  std::vector<std::size_t> pos;
  std::vector<Variable> scope;
  std::set<std::string> seen;
  for (const auto& t : targets) {
    if (!seen.insert(t).second) throw Error(Errc::ScopeMismatch, "target " + t + " listed twice");
    pos.push_back(scope_index(t));
    scope.push_back(scope_[pos.back()]);
  }
  std::size_t n = 1;
  for (const auto& v : scope) n *= v.card();
  std::vector<Rat> out(n);
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i].is_zero()) continue;
    auto st = states(i);
    std::size_t j = 0;
    for (std::size_t k = 0; k < pos.size(); ++k) j = j * scope[k].card() + st[pos[k]];
    out[j] += values_[i];
  }
  return Dist(std::move(scope), std::move(out));
}

Dist Dist::reordered(const std::vector<std::string>& order) const {
  if (order.size() != scope_.size()) throw Error(Errc::ScopeMismatch, "reorder is not a permutation");
  return marginalize(order);
}

// ---------------------------------------------------------------------------
// Enumeration

Dist joint(const Cbn& model, const InferenceOptions& opts) {
  return Dist(model.graph().variables(), kernels::enumerate_joint_parallel(model, opts.max_states));
}

Dist joint_reference(const Cbn& model, const InferenceOptions& opts) {
  return Dist(model.graph().variables(), kernels::enumerate_joint_serial(model, opts.max_states));
}

Dist marginal(const Cbn& model, const std::vector<std::string>& targets, const InferenceOptions& opts) {
  if (targets.empty()) throw Error(Errc::ScopeMismatch, "marginal needs at least one target");
  for (const auto& t : targets) model.graph().index_of(t);
  return joint(model, opts).marginalize(targets);
}

Dist observational(const Cbn& model, const InferenceOptions& opts) {
  return marginal(model, model.graph().observed_names(), opts);
}

Rat conditional(const Dist& table, const Instantiation& target, const Instantiation& given) {
  Rat denom = table.probability(given);
  if (denom.is_zero()) throw Error(Errc::ZeroConditioningEvent, "Pr(" + given.str() + ") = 0");
  if (!target.compatible(given)) return Rat(0);
  return table.probability(target.merged(given)) / denom;
}

Rat conditional(const Cbn& model, const Instantiation& target, const Instantiation& given,
                const InferenceOptions& opts) {
  target.validate(model.graph());
  given.validate(model.graph());
  return conditional(joint(model, opts), target, given);
}

// ---------------------------------------------------------------------------
// Interventions

Cbn intervene(const Cbn& model, const Instantiation& treatment) {
  const auto& g = model.graph();
  treatment.validate(g);

  std::vector<Edge> edges;
  for (const auto& e : g.edges())
    if (!treatment.contains(e.child)) edges.push_back(e);
  CausalGraph mutilated(g.variables(), std::move(edges));

  std::vector<Cpt> cpts;
  for (std::size_t v = 0; v < g.size(); ++v) {
    const auto& var = g.variable(v);
    if (const auto* s = treatment.get(var.name)) {
      const auto hit = var.state_index(*s);
      cpts.push_back(Cpt::from_function(mutilated, var.name, {},
                                        [hit](auto, std::size_t st) { return indicator(st == hit); }));
    } else {
      cpts.push_back(model.cpt(v));
    }
  }
  return build_model(std::move(mutilated), std::move(cpts));
}

Rat causal_effect(const Cbn& model, const Instantiation& treatment, const Instantiation& outcome,
                  const InferenceOptions& opts) {
  outcome.validate(model.graph());
  if (outcome.empty()) throw Error(Errc::ScopeMismatch, "empty outcome");
  auto mutilated = intervene(model, treatment);
  return joint(mutilated, opts).probability(outcome);
}

// ---------------------------------------------------------------------------

bool dist_equal(const Dist& a, const Dist& b) {
  auto an = a.scope_names();
  auto bn = b.scope_names();
  std::set<std::string> as(an.begin(), an.end()), bs(bn.begin(), bn.end());
  if (as != bs || an.size() != bn.size()) throw Error(Errc::ScopeMismatch, "scopes differ");
  for (const auto& v : a.scope()) {
    for (const auto& w : b.scope())
      if (v.name == w.name && v.states != w.states)
        throw Error(Errc::ScopeMismatch, "state lists of " + v.name + " differ");
  }
  if (an == bn) return a.values() == b.values();
  return a.values() == b.reordered(an).values();
}

bool strictly_positive(const Dist& d) {
  return std::none_of(d.values().begin(), d.values().end(), [](const Rat& x) { return x.is_zero(); });
}

}  // namespace stateid
