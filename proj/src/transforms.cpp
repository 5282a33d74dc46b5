#include "stateid/transforms.hpp"

#include <algorithm>
#include <set>

namespace stateid {

Cbn functional_eliminate(const Cbn& model, const std::string& w) {
  const auto& g = model.graph();
  const auto wi = g.index_of(w);
  const auto& w_parents = g.parents(wi);
  const auto& w_children = g.children(wi);

  std::vector<Variable> vars;
  for (std::size_t v = 0; v < g.size(); ++v)
    if (v != wi) vars.push_back(g.variable(v));

  std::vector<Edge> edges;
  for (const auto& e : g.edges())
    if (e.parent != w && e.child != w) edges.push_back(e);
  for (auto c : w_children)
    for (auto p : w_parents)
      if (!g.has_edge(p, c)) edges.push_back({g.variable(p).name, g.variable(c).name});
  CausalGraph reduced(std::move(vars), std::move(edges));

  std::vector<Cpt> cpts;
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (v == wi) continue;
    const auto& name = g.variable(v).name;
    if (std::find(w_children.begin(), w_children.end(), v) == w_children.end()) {
      cpts.push_back(model.cpt(v));
      continue;
    }
    auto parents = reduced.parent_names(reduced.index_of(name));
    std::vector<std::size_t> orig;
    for (const auto& p : parents) orig.push_back(g.index_of(p));
    const std::size_t w_card = g.variable(wi).card();
    cpts.push_back(Cpt::from_function(
        reduced, name, parents, [&, v](std::span<const std::size_t> ps, std::size_t s) {
          std::vector<std::size_t> states(g.size(), 0);
          for (std::size_t k = 0; k < ps.size(); ++k) states[orig[k]] = ps[k];
          states[v] = s;
          Rat sum;
          for (std::size_t ws = 0; ws < w_card; ++ws) {
            states[wi] = ws;
            const Rat& fw = model.entry(wi, states);
            if (!fw.is_zero()) sum += fw * model.entry(v, states);
          }
          return sum;
        }));
  }
  return build_model(std::move(reduced), std::move(cpts));
}

namespace {

void require_cfd(const Cbn& model, const std::string& w, const Instantiation& context) {
  const auto& g = model.graph();
  const auto wi = g.index_of(w);
  Cfd cfd{w, {}, context};
  for (const auto& p : g.parent_names(wi))
    if (!context.contains(p)) cfd.determinants.push_back(p);
  auto rep = check_constraint(model, cfd);
  if (!rep.ok())
    throw Error(Errc::ConstraintNotSatisfied, describe(cfd) + ": " + rep.violations.front().detail);
}

}  // namespace

EliminationReport verify_feliminate_marginals(const Cbn& model, const std::string& w,
                                              const Instantiation& context, const InferenceOptions& opts) {
  require_cfd(model, w, context);
  auto reduced = functional_eliminate(model, w);
  auto after = joint_reference(reduced, opts);
  auto before = joint_reference(model, opts).marginalize(reduced.graph().names());

  EliminationReport rep;
  for (std::size_t i = 0; i < after.size(); ++i) {
    auto inst = after.instantiation(i);
    if (!inst.compatible(context)) continue;
    ++rep.checked;
    if (after.values()[i] != before.values()[i])
      rep.mismatches.push_back("Pr'(" + inst.str() + ") = " + after.values()[i].str() + " but Pr = " +
                               before.values()[i].str());
  }
  return rep;
}

EliminationReport verify_feliminate_cpts(const Cbn& model, const std::string& w,
                                         const Instantiation& context, const InferenceOptions& opts) {
  require_cfd(model, w, context);
  const auto& g = model.graph();
  auto reduced = functional_eliminate(model, w);
  auto original = joint_reference(model, opts);

  EliminationReport rep;
  for (auto c : g.children(g.index_of(w))) {
    const auto& child = g.variable(c);
    const auto& cpt = reduced.cpt(child.name);
    for (std::size_t r = 0; r < cpt.row_count(); ++r) {
      auto st = cpt.row_states(r);
      Instantiation given;
      for (std::size_t k = 0; k < st.size(); ++k)
        given.set(cpt.parents()[k], g.variable(cpt.parents()[k]).states[st[k]]);
      if (!given.compatible(context)) continue;
      if (original.probability(given).is_zero()) {
        ++rep.skipped;
        continue;
      }
      for (std::size_t s = 0; s < child.card(); ++s) {
        ++rep.checked;
        auto pr = conditional(original, Instantiation{{child.name, child.states[s]}}, given);
        if (pr != cpt.at(r, s))
          rep.mismatches.push_back("f'(" + child.name + "=" + child.states[s] + " | " + given.str() +
                                   ") = " + cpt.at(r, s).str() + " but Pr = " + pr.str());
      }
    }
  }
  return rep;
}

std::string fresh_state_name(const Variable& v, const std::string& base) {
  for (std::size_t k = 0;; ++k) {
    auto name = base + "_ext" + std::to_string(k);
    if (!v.find_state(name)) return name;
  }
}

Cbn extend_state(const Cbn& model, const std::string& w, const std::string& base, const Rat& eps) {
  if (eps.is_zero() || eps >= Rat(1))
    throw Error(Errc::EpsOutOfRange, "eps must lie strictly between 0 and 1, got " + eps.str());
  const auto& g = model.graph();
  const auto wi = g.index_of(w);
  const auto& old_var = g.variable(wi);
  const auto base_idx = old_var.state_index(base);
  const auto fresh = old_var.card();

  std::vector<Variable> vars = g.variables();
  vars[wi].states.push_back(fresh_state_name(old_var, base));
  CausalGraph extended(std::move(vars), g.edges());

  const Rat keep = Rat(1) - eps;
  std::vector<Cpt> cpts;
  for (std::size_t v = 0; v < g.size(); ++v) {
    const auto& cpt = model.cpt(v);
    const auto& pidx = model.cpt_parents(v);
    auto w_slot = std::find(pidx.begin(), pidx.end(), wi);
    if (v != wi && w_slot == pidx.end()) {
      cpts.push_back(cpt);
      continue;
    }
    const auto slot = static_cast<std::size_t>(w_slot - pidx.begin());
    cpts.push_back(Cpt::from_function(
        extended, g.variable(v).name, cpt.parents(), [&](std::span<const std::size_t> ps, std::size_t s) {
          std::vector<std::size_t> orig(ps.begin(), ps.end());
          if (v != wi) {
            // Child: the fresh parent state reads the base state's row.
            if (orig[slot] == fresh) orig[slot] = base_idx;
            return cpt.at(cpt.row_index(orig), s);
          }
          const auto r = cpt.row_index(orig);
          if (s == fresh) return cpt.at(r, base_idx) * eps;
          if (s == base_idx) return cpt.at(r, base_idx) * keep;
          return cpt.at(r, s);
        }));
  }
  return build_model(std::move(extended), std::move(cpts));
}

namespace {

// index -> index form of a label permutation; throws NotABijection.
std::vector<std::size_t> resolve_permutation(const Variable& v, const StatePermutation& perm) {
  if (perm.size() != v.card())
    throw Error(Errc::NotABijection, "permutation of " + v.name + " must map every state exactly once");
  std::vector<std::size_t> out(v.card(), v.card());
  std::set<std::size_t> images;
  for (const auto& [from, to] : perm) {
    auto a = v.find_state(from);
    auto b = v.find_state(to);
    if (!a || !b) throw Error(Errc::NotABijection, from + " -> " + to + " is not within " + v.name);
    out[*a] = *b;
    images.insert(*b);
  }
  if (images.size() != v.card()) throw Error(Errc::NotABijection, "permutation of " + v.name + " is not onto");
  return out;
}

}  // namespace

Cbn permute_states(const Cbn& model, const std::string& var, const StatePermutation& perm) {
  const auto& g = model.graph();
  const auto vi = g.index_of(var);
  auto forward = resolve_permutation(g.variable(vi), perm);
  std::vector<std::size_t> inverse(forward.size());
  for (std::size_t s = 0; s < forward.size(); ++s) inverse[forward[s]] = s;

  std::vector<Cpt> cpts;
  for (std::size_t v = 0; v < g.size(); ++v) {
    const auto& cpt = model.cpt(v);
    const auto& pidx = model.cpt_parents(v);
    auto slot_it = std::find(pidx.begin(), pidx.end(), vi);
    const bool is_child = slot_it != pidx.end();
    if (v != vi && !is_child) {
      cpts.push_back(cpt);
      continue;
    }
    const auto slot = static_cast<std::size_t>(slot_it - pidx.begin());
    cpts.push_back(Cpt::from_function(g, g.variable(v).name, cpt.parents(),
                                      [&](std::span<const std::size_t> ps, std::size_t s) {
                                        std::vector<std::size_t> orig(ps.begin(), ps.end());
                                        if (is_child) orig[slot] = inverse[orig[slot]];
                                        return cpt.at(cpt.row_index(orig), v == vi ? inverse[s] : s);
                                      }));
  }
  return build_model(g, std::move(cpts));
}

Instantiation permute_instantiation(const Instantiation& inst, const std::string& var,
                                    const StatePermutation& perm) {
  Instantiation out = inst;
  if (const auto* s = inst.get(var)) {
    auto it = perm.find(*s);
    if (it == perm.end()) throw Error(Errc::NotABijection, "permutation does not map " + var + "=" + *s);
    out.set(var, it->second);
  }
  return out;
}

Constraint permute_constraint(const Constraint& c, const std::string& var, const StatePermutation& perm) {
  if (const auto* x = std::get_if<Csi>(&c)) {
    auto y = *x;
    y.context = permute_instantiation(x->context, var, perm);
    return y;
  }
  if (const auto* x = std::get_if<Cfd>(&c)) {
    auto y = *x;
    y.context = permute_instantiation(x->context, var, perm);
    return y;
  }
  return c;
}

StatePermutation parse_permutation(std::string_view text) {
  StatePermutation out;
  std::size_t start = 0;
  while (start < text.size()) {
    auto comma = text.find(',', start);
    auto item = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
    auto colon = item.find(':');
    if (colon == std::string_view::npos || colon == 0 || colon + 1 == item.size())
      throw Error(Errc::FileFormat, "expected FROM:TO, got '" + std::string(item) + "'");
    if (!out.emplace(std::string(item.substr(0, colon)), std::string(item.substr(colon + 1))).second)
      throw Error(Errc::NotABijection, "state " + std::string(item.substr(0, colon)) + " mapped twice");
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace stateid
