#include <algorithm>
#include <set>

#include "stateid/inference.hpp"

namespace stateid {

namespace {

// Factor over graph indices kept in ascending order.
struct Factor {
  std::vector<std::size_t> vars;
  std::vector<std::size_t> cards;
  std::vector<Rat> values;

  bool mentions(std::size_t v) const { return std::binary_search(vars.begin(), vars.end(), v); }
};

std::vector<std::size_t> decode(std::size_t i, const std::vector<std::size_t>& cards) {
  std::vector<std::size_t> out(cards.size());
  for (std::size_t k = cards.size(); k-- > 0;) {
    out[k] = i % cards[k];
    i /= cards[k];
  }
  return out;
}

std::size_t size_of(const std::vector<std::size_t>& cards) {
  std::size_t n = 1;
  for (auto c : cards) n *= c;
  return n;
}

// CPT of v as a factor, with evidence variables fixed and dropped.
Factor cpt_factor(const Cbn& m, std::size_t v, const std::vector<std::ptrdiff_t>& evidence) {
  const auto& g = m.graph();
  std::vector<std::size_t> family = m.cpt_parents(v);
  family.push_back(v);
  Factor f;
  for (auto x : family)
    if (evidence[x] < 0) f.vars.push_back(x);
  std::sort(f.vars.begin(), f.vars.end());
  for (auto x : f.vars) f.cards.push_back(g.variable(x).card());
  f.values.resize(size_of(f.cards));

  std::vector<std::size_t> states(g.size(), 0);
  for (std::size_t x = 0; x < g.size(); ++x)
    if (evidence[x] >= 0) states[x] = static_cast<std::size_t>(evidence[x]);
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    auto st = decode(i, f.cards);
    for (std::size_t k = 0; k < f.vars.size(); ++k) states[f.vars[k]] = st[k];
    f.values[i] = m.entry(v, states);
  }
  return f;
}

Factor multiply(const Factor& a, const Factor& b) {
  Factor out;
  std::set_union(a.vars.begin(), a.vars.end(), b.vars.begin(), b.vars.end(),
                 std::back_inserter(out.vars));
  auto card_of = [&](std::size_t v) {
    for (std::size_t k = 0; k < a.vars.size(); ++k)
      if (a.vars[k] == v) return a.cards[k];
    for (std::size_t k = 0; k < b.vars.size(); ++k)
      if (b.vars[k] == v) return b.cards[k];
    return std::size_t{0};
  };
  for (auto v : out.vars) out.cards.push_back(card_of(v));

  auto project = [&](const Factor& f, const std::vector<std::size_t>& st) {
    std::size_t idx = 0;
    std::size_t k = 0;
    for (std::size_t j = 0; j < out.vars.size(); ++j)
      if (k < f.vars.size() && f.vars[k] == out.vars[j]) {
        idx = idx * f.cards[k] + st[j];
        ++k;
      }
    return idx;
  };

  out.values.resize(size_of(out.cards));
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    auto st = decode(i, out.cards);
    const Rat& x = a.values[project(a, st)];
    if (x.is_zero()) continue;
    out.values[i] = x * b.values[project(b, st)];
  }
  return out;
}

Factor sum_out(const Factor& f, std::size_t v) {
  Factor out;
  std::size_t pos = 0;
  for (std::size_t k = 0; k < f.vars.size(); ++k) {
    if (f.vars[k] == v) {
      pos = k;
      continue;
    }
    out.vars.push_back(f.vars[k]);
    out.cards.push_back(f.cards[k]);
  }
  out.values.resize(size_of(out.cards));
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    if (f.values[i].is_zero()) continue;
    auto st = decode(i, f.cards);
    std::size_t j = 0;
    for (std::size_t k = 0; k < st.size(); ++k)
      if (k != pos) j = j * f.cards[k] + st[k];
    out.values[j] += f.values[i];
  }
  return out;
}

struct Query {
  std::vector<std::size_t> targets;
  std::vector<std::ptrdiff_t> evidence;  // per graph index, -1 = free
  std::set<std::size_t> to_eliminate;
};

Query resolve(const Cbn& model, const std::vector<std::string>& targets, const Instantiation& evidence) {
  const auto& g = model.graph();
  Query q;
  q.evidence.assign(g.size(), -1);
  for (const auto& [var, state] : evidence) {
    auto v = g.index_of(var);
    q.evidence[v] = static_cast<std::ptrdiff_t>(g.variable(v).state_index(state));
  }
  std::set<std::size_t> seen;
  for (const auto& t : targets) {
    auto v = g.index_of(t);
    if (q.evidence[v] >= 0) throw Error(Errc::ScopeMismatch, t + " is both target and evidence");
    if (!seen.insert(v).second) throw Error(Errc::ScopeMismatch, "target " + t + " listed twice");
    q.targets.push_back(v);
  }
  if (q.targets.empty()) throw Error(Errc::ScopeMismatch, "no targets");
  for (std::size_t v = 0; v < g.size(); ++v)
    if (q.evidence[v] < 0 && !seen.count(v)) q.to_eliminate.insert(v);
  return q;
}

}  // namespace

std::vector<std::string> min_degree_order(const Cbn& model, const std::vector<std::string>& targets,
                                          const Instantiation& evidence) {
  const auto& g = model.graph();
  auto q = resolve(model, targets, evidence);

  // Interaction graph over free variables.
  std::vector<std::set<std::size_t>> adj(g.size());
  for (std::size_t v = 0; v < g.size(); ++v) {
    std::vector<std::size_t> fam;
    for (auto x : model.cpt_parents(v))
      if (q.evidence[x] < 0) fam.push_back(x);
    if (q.evidence[v] < 0) fam.push_back(v);
    for (auto x : fam)
      for (auto y : fam)
        if (x != y) adj[x].insert(y);
  }

  std::vector<std::string> order;
  std::set<std::size_t> remaining = q.to_eliminate;
  while (!remaining.empty()) {
    std::size_t best = *remaining.begin();
    for (auto v : remaining)
      if (adj[v].size() < adj[best].size()) best = v;
    for (auto x : adj[best])
      for (auto y : adj[best])
        if (x != y) adj[x].insert(y);
    for (auto x : adj[best]) adj[x].erase(best);
    adj[best].clear();
    remaining.erase(best);
    order.push_back(g.variable(best).name);
  }
  return order;
}

Dist eliminate_ve(const Cbn& model, const std::vector<std::string>& targets,
                  const Instantiation& evidence, const std::optional<std::vector<std::string>>& order) {
  const auto& g = model.graph();
  auto q = resolve(model, targets, evidence);

  std::vector<std::size_t> elim;
  if (order) {
    std::set<std::size_t> seen;
    for (const auto& name : *order) {
      auto v = g.find(name);
      if (!v || !q.to_eliminate.count(*v) || !seen.insert(*v).second)
        throw Error(Errc::BadEliminationOrder, "unexpected or repeated variable " + name);
      elim.push_back(*v);
    }
    if (seen != q.to_eliminate)
      throw Error(Errc::BadEliminationOrder, "order does not cover every non-target variable");
  } else {
    for (const auto& name : min_degree_order(model, targets, evidence)) elim.push_back(g.index_of(name));
  }

  std::vector<Factor> pool;
  for (std::size_t v = 0; v < g.size(); ++v) pool.push_back(cpt_factor(model, v, q.evidence));

  for (auto v : elim) {
    std::vector<Factor> keep;
    std::optional<Factor> acc;
    for (auto& f : pool) {
      if (!f.mentions(v)) {
        keep.push_back(std::move(f));
        continue;
      }
      acc = acc ? multiply(*acc, f) : std::move(f);
    }
    if (acc) keep.push_back(sum_out(*acc, v));
    pool = std::move(keep);
  }

  Factor result{{}, {}, {Rat(1)}};
  for (const auto& f : pool) result = multiply(result, f);

  Rat norm;
  for (const auto& x : result.values) norm += x;
  if (norm.is_zero()) throw Error(Errc::ZeroConditioningEvent, "Pr(" + evidence.str() + ") = 0");
  if (!norm.is_one())
    for (auto& x : result.values) x /= norm;

  std::vector<Variable> scope;
  for (auto v : result.vars) scope.push_back(g.variable(v));
  return Dist(std::move(scope), std::move(result.values)).reordered(targets);
}

}  // namespace stateid
