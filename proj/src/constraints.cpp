#include "stateid/constraints.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "stateid/inference.hpp"

namespace stateid {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string join(const std::vector<std::string>& xs, const char* sep = ",") {
  std::string out;
  for (const auto& x : xs) {
    if (!out.empty()) out += sep;
    out += x;
  }
  return out;
}

[[noreturn]] void malformed(const Constraint& c, const std::string& why) {
  throw Error(Errc::MalformedConstraint, describe(c) + ": " + why);
}

// Checks that `groups` partition the parents of `child` exactly.
void check_partition(const CausalGraph& g, const Constraint& c, const std::string& child,
                     const std::vector<std::vector<std::string>>& groups) {
  auto v = g.index_of(child);
  std::set<std::string> parents;
  for (const auto& p : g.parent_names(v)) parents.insert(p);
  std::set<std::string> seen;
  for (const auto& group : groups)
    for (const auto& name : group) {
      g.index_of(name);
      if (!parents.count(name)) malformed(c, name + " is not a parent of " + child);
      if (!seen.insert(name).second) malformed(c, name + " appears in more than one part");
    }
  if (seen != parents) malformed(c, "parts do not cover all parents of " + child);
}

std::vector<std::string> keys(const Instantiation& inst) {
  std::vector<std::string> out;
  for (const auto& [k, v] : inst) out.push_back(k);
  return out;
}

// Per CPT slot: required state index, or -1.
std::vector<std::ptrdiff_t> context_mask(const Cbn& m, const Cpt& cpt, const Instantiation& ctx) {
  std::vector<std::ptrdiff_t> mask(cpt.parents().size(), -1);
  for (std::size_t k = 0; k < cpt.parents().size(); ++k)
    if (const auto* s = ctx.get(cpt.parents()[k]))
      mask[k] = static_cast<std::ptrdiff_t>(m.graph().variable(cpt.parents()[k]).state_index(*s));
  return mask;
}

bool matches(const std::vector<std::size_t>& states, const std::vector<std::ptrdiff_t>& mask) {
  for (std::size_t k = 0; k < mask.size(); ++k)
    if (mask[k] >= 0 && static_cast<std::size_t>(mask[k]) != states[k]) return false;
  return true;
}

std::string row_label(const Cbn& m, const Cpt& cpt, const std::vector<std::size_t>& states,
                      const std::set<std::string>& only) {
  std::string out;
  for (std::size_t k = 0; k < states.size(); ++k) {
    const auto& p = cpt.parents()[k];
    if (!only.empty() && !only.count(p)) continue;
    if (!out.empty()) out += ",";
    out += p + "=" + m.graph().variable(p).states[states[k]];
  }
  return "{" + out + "}";
}

bool deterministic(std::span<const Rat> row) {
  return std::any_of(row.begin(), row.end(), [](const Rat& x) { return x.is_one(); });
}

ViolationReport check_csi(const Cbn& m, const Csi& c) {
  ViolationReport rep;
  const auto& cpt = m.cpt(c.child);
  const auto& child = m.graph().variable(c.child);
  auto mask = context_mask(m, cpt, c.context);
  std::set<std::string> free_set(c.free.begin(), c.free.end());
  std::set<std::string> indep_set(c.indep.begin(), c.indep.end());

  // First row seen for each instantiation of the free parents.
  std::map<std::vector<std::size_t>, std::size_t> reference;
  for (std::size_t r = 0; r < cpt.row_count(); ++r) {
    auto st = cpt.row_states(r);
    if (!matches(st, mask)) continue;
    std::vector<std::size_t> key;
    for (std::size_t k = 0; k < st.size(); ++k)
      if (free_set.count(cpt.parents()[k])) key.push_back(st[k]);
    auto [it, fresh] = reference.emplace(key, r);
    if (fresh) continue;
    const auto ref = it->second;
    auto ref_st = cpt.row_states(ref);
    for (std::size_t s = 0; s < child.card(); ++s) {
      if (cpt.at(r, s) == cpt.at(ref, s)) continue;
      rep.violations.push_back(
          {describe(c), "s=" + row_label(m, cpt, st, free_set) + " x=" + row_label(m, cpt, st, indep_set) +
                            " x'=" + row_label(m, cpt, ref_st, indep_set) + " state=" + child.states[s] +
                            ": " + cpt.at(r, s).str() + " vs " + cpt.at(ref, s).str()});
    }
  }
  return rep;
}

ViolationReport check_rows_deterministic(const Cbn& m, const Constraint& c, const std::string& child,
                                         const Instantiation& ctx) {
  ViolationReport rep;
  const auto& cpt = m.cpt(child);
  auto mask = context_mask(m, cpt, ctx);
  for (std::size_t r = 0; r < cpt.row_count(); ++r) {
    auto st = cpt.row_states(r);
    if (!matches(st, mask) || deterministic(cpt.row(r))) continue;
    rep.violations.push_back({describe(c), "row " + row_label(m, cpt, st, {}) + " is not deterministic"});
  }
  return rep;
}

}  // namespace

std::string describe(const Constraint& c) {
  return std::visit(
      overloaded{
          [](const Csi& x) {
            std::string s = "CSI(" + x.child + " _||_ " + join(x.indep) + " | " + x.context.str();
            if (!x.free.empty()) s += "; " + join(x.free);
            return s + ")";
          },
          [](const Cfd& x) {
            return "CFD([" + join(x.determinants) + "; " + x.context.str() + "] -> " + x.child + ")";
          },
          [](const Fd& x) { return "FD(" + x.child + ")"; },
          [](const StateDomain& x) { return "STATES(" + x.var + " = {" + join(x.states) + "})"; },
      },
      c);
}

void validate_constraint(const CausalGraph& g, const Constraint& c) {
  std::visit(overloaded{
                 [&](const Csi& x) {
                   if (x.indep.empty()) malformed(c, "empty independent set");
                   if (x.context.empty()) malformed(c, "empty context");
                   check_partition(g, c, x.child, {x.indep, keys(x.context), x.free});
                   x.context.validate(g);
                 },
                 [&](const Cfd& x) {
                   check_partition(g, c, x.child, {x.determinants, keys(x.context)});
                   x.context.validate(g);
                 },
                 [&](const Fd& x) { g.index_of(x.child); },
                 [&](const StateDomain& x) {
                   g.index_of(x.var);
                   std::set<std::string> uniq(x.states.begin(), x.states.end());
                   if (x.states.empty() || uniq.size() != x.states.size())
                     malformed(c, "state list must be nonempty and duplicate-free");
                 },
             },
             c);
}

ViolationReport check_constraint(const Cbn& model, const Constraint& c) {
  validate_constraint(model.graph(), c);
  return std::visit(
      overloaded{
          [&](const Csi& x) { return check_csi(model, x); },
          [&](const Cfd& x) { return check_rows_deterministic(model, c, x.child, x.context); },
          [&](const Fd& x) { return check_rows_deterministic(model, c, x.child, {}); },
          [&](const StateDomain& x) {
            ViolationReport rep;
            const auto& declared = model.graph().variable(x.var).states;
            std::set<std::string> a(declared.begin(), declared.end()), b(x.states.begin(), x.states.end());
            if (a != b)
              rep.violations.push_back({describe(c), x.var + " declares {" + join(declared) + "}"});
            return rep;
          },
      },
      c);
}

ViolationReport check_all(const Cbn& model, std::span<const Constraint> cs) {
  ViolationReport rep;
  for (const auto& c : cs) rep.append(check_constraint(model, c));
  return rep;
}

// ---------------------------------------------------------------------------
// Sampling

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::below(std::uint64_t bound) {
  // Rejection sampling removes modulo bias.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t x;
  do x = next();
  while (x >= limit);
  return x % bound;
}

namespace {

struct UnionFind {
  std::vector<std::size_t> up;
  explicit UnionFind(std::size_t n) : up(n) { std::iota(up.begin(), up.end(), 0); }
  std::size_t find(std::size_t x) {
    while (up[x] != x) x = up[x] = up[up[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) up[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

Cbn sample_constrained(const CausalGraph& g, std::span<const Constraint> cs, std::uint64_t seed,
                       const SampleOptions& opts) {
  if (opts.weight_bound == 0) throw Error(Errc::InvalidModel, "weight bound must be positive");
  for (const auto& c : cs) {
    validate_constraint(g, c);
    if (const auto* sd = std::get_if<StateDomain>(&c)) {
      const auto& declared = g.variable(sd->var).states;
      std::set<std::string> a(declared.begin(), declared.end()), b(sd->states.begin(), sd->states.end());
      if (a != b)
        throw Error(Errc::UnsatisfiableSyntactically,
                    describe(c) + " but the graph declares {" + join(declared) + "}");
    }
  }

  SplitMix64 rng(seed);
  std::vector<Cpt> cpts;
  for (std::size_t v = 0; v < g.size(); ++v) {
    const auto& var = g.variable(v);
    const auto parents = g.parent_names(v);
    std::vector<std::size_t> cards;
    for (const auto& p : parents) cards.push_back(g.variable(p).card());
    // Skeleton CPT only used for row indexing helpers.
    std::size_t rows = 1;
    for (auto c : cards) rows *= c;
    Cpt layout(var.name, parents, cards, var.card(), std::vector<Rat>(rows * var.card()));

    auto slot_mask = [&](const Instantiation& ctx) {
      std::vector<std::ptrdiff_t> mask(parents.size(), -1);
      for (std::size_t k = 0; k < parents.size(); ++k)
        if (const auto* s = ctx.get(parents[k]))
          mask[k] = static_cast<std::ptrdiff_t>(g.variable(parents[k]).state_index(*s));
      return mask;
    };

    UnionFind classes(rows);
    std::vector<bool> det(rows, false);
    for (const auto& c : cs) {
      if (const auto* csi = std::get_if<Csi>(&c); csi && csi->child == var.name) {
        auto mask = slot_mask(csi->context);
        std::set<std::string> indep(csi->indep.begin(), csi->indep.end());
        std::map<std::vector<std::size_t>, std::size_t> first;
        for (std::size_t r = 0; r < rows; ++r) {
          auto st = layout.row_states(r);
          if (!matches(st, mask)) continue;
          std::vector<std::size_t> key;
          for (std::size_t k = 0; k < st.size(); ++k)
            if (!indep.count(parents[k])) key.push_back(st[k]);
          auto [it, fresh] = first.emplace(key, r);
          if (!fresh) classes.unite(it->second, r);
        }
      } else if (const auto* cfd = std::get_if<Cfd>(&c); cfd && cfd->child == var.name) {
        auto mask = slot_mask(cfd->context);
        for (std::size_t r = 0; r < rows; ++r)
          if (matches(layout.row_states(r), mask)) det[r] = true;
      } else if (const auto* fd = std::get_if<Fd>(&c); fd && fd->child == var.name) {
        std::fill(det.begin(), det.end(), true);
      }
    }
    for (std::size_t r = 0; r < rows; ++r)
      if (det[r]) det[classes.find(r)] = true;

    std::vector<Rat> table(rows * var.card());
    for (std::size_t r = 0; r < rows; ++r) {
      const auto root = classes.find(r);
      if (root != r) {
        std::copy_n(table.begin() + static_cast<std::ptrdiff_t>(root * var.card()), var.card(),
                    table.begin() + static_cast<std::ptrdiff_t>(r * var.card()));
        continue;
      }
      if (det[r]) {
        table[r * var.card() + rng.below(var.card())] = Rat(1);
        continue;
      }
      std::vector<std::int64_t> w(var.card());
      std::int64_t total = 0;
      for (auto& x : w) total += (x = static_cast<std::int64_t>(1 + rng.below(opts.weight_bound)));
      for (std::size_t s = 0; s < var.card(); ++s) table[r * var.card() + s] = Rat(w[s], total);
    }
    cpts.emplace_back(var.name, parents, cards, var.card(), std::move(table));
  }

  auto model = build_model(g, std::move(cpts));
  if (opts.check_positivity) {
    InferenceOptions io{opts.max_states};
    if (!strictly_positive(observational(model, io)))
      throw Error(Errc::PositivityCheckFailed,
                  "seed " + std::to_string(seed) + " gives an observed instantiation of probability 0");
  }
  return model;
}

}  // namespace stateid
