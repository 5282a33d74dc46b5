#include "stateid/model.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace stateid {

std::optional<std::size_t> Variable::find_state(std::string_view label) const {
  for (std::size_t i = 0; i < states.size(); ++i)
    if (states[i] == label) return i;
  return std::nullopt;
}

std::size_t Variable::state_index(std::string_view label) const {
  if (auto i = find_state(label)) return *i;
  throw Error(Errc::UnknownState, "'" + std::string(label) + "' is not a state of " + name);
}

Variable numbered_variable(std::string name, std::size_t card, bool observed) {
  Variable v{std::move(name), {}, observed};
  for (std::size_t i = 0; i < card; ++i) v.states.push_back(std::to_string(i));
  return v;
}

// ---------------------------------------------------------------------------
// CausalGraph

CausalGraph::CausalGraph(std::vector<Variable> variables, std::vector<Edge> edges)
    : variables_(std::move(variables)), edges_(std::move(edges)) {
  const std::size_t n = variables_.size();
  std::set<std::string> seen;
  for (const auto& v : variables_) {
    if (v.name.empty()) throw Error(Errc::InvalidModel, "variable with empty name");
    if (!seen.insert(v.name).second)
      throw Error(Errc::InvalidModel, "duplicate variable " + v.name);
    if (v.states.size() < 2)
      throw Error(Errc::InvalidModel, "variable " + v.name + " needs at least two states");
    std::set<std::string> labels(v.states.begin(), v.states.end());
    if (labels.size() != v.states.size())
      throw Error(Errc::InvalidModel, "variable " + v.name + " has duplicate state labels");
    for (const auto& s : v.states)
      if (s.empty()) throw Error(Errc::InvalidModel, "variable " + v.name + " has an empty state label");
  }

  parents_.assign(n, {});
  children_.assign(n, {});
  for (const auto& e : edges_) {
    auto p = find(e.parent);
    auto c = find(e.child);
    if (!p) throw Error(Errc::UnknownVariable, "edge parent " + e.parent);
    if (!c) throw Error(Errc::UnknownVariable, "edge child " + e.child);
    if (*p == *c) throw Error(Errc::InvalidModel, "self-loop on " + e.parent);
    if (std::find(parents_[*c].begin(), parents_[*c].end(), *p) != parents_[*c].end())
      throw Error(Errc::InvalidModel, "duplicate edge " + e.parent + " -> " + e.child);
    parents_[*c].push_back(*p);
    children_[*p].push_back(*c);
  }

  // Kahn's algorithm; ties broken by declaration order so the order is stable.
  std::vector<std::size_t> indegree(n);
  for (std::size_t v = 0; v < n; ++v) indegree[v] = parents_[v].size();
  std::vector<bool> done(n, false);
  while (topo_.size() < n) {
    std::size_t pick = n;
    for (std::size_t v = 0; v < n; ++v)
      if (!done[v] && indegree[v] == 0) {
        pick = v;
        break;
      }
    if (pick == n) {
      std::string cyc;
      for (std::size_t v = 0; v < n; ++v)
        if (!done[v]) cyc += (cyc.empty() ? "" : ",") + variables_[v].name;
      throw Error(Errc::CycleDetected, "cycle among {" + cyc + "}");
    }
    done[pick] = true;
    topo_.push_back(pick);
    for (auto c : children_[pick]) --indegree[c];
  }
}

std::optional<std::size_t> CausalGraph::find(std::string_view name) const {
  for (std::size_t i = 0; i < variables_.size(); ++i)
    if (variables_[i].name == name) return i;
  return std::nullopt;
}

std::size_t CausalGraph::index_of(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw Error(Errc::UnknownVariable, std::string(name));
}

std::vector<std::string> CausalGraph::parent_names(std::size_t v) const {
  std::vector<std::string> out;
  for (auto p : parents_[v]) out.push_back(variables_[p].name);
  return out;
}

bool CausalGraph::has_edge(std::size_t parent, std::size_t child) const {
  const auto& ps = parents_[child];
  return std::find(ps.begin(), ps.end(), parent) != ps.end();
}

std::vector<std::string> CausalGraph::observed_names() const {
  std::vector<std::string> out;
  for (const auto& v : variables_)
    if (v.observed) out.push_back(v.name);
  return out;
}

std::vector<std::string> CausalGraph::names() const {
  std::vector<std::string> out;
  for (const auto& v : variables_) out.push_back(v.name);
  return out;
}

std::uint64_t CausalGraph::state_space(std::uint64_t cap) const {
  std::uint64_t total = 1;
  for (const auto& v : variables_) {
    total *= v.card();
    if (total > cap) return cap + 1;
  }
  return total;
}

bool operator==(const CausalGraph& a, const CausalGraph& b) {
  if (a.variables_.size() != b.variables_.size() || a.edges_.size() != b.edges_.size()) return false;
  for (std::size_t i = 0; i < a.variables_.size(); ++i) {
    const auto& x = a.variables_[i];
    const auto& y = b.variables_[i];
    if (x.name != y.name || x.states != y.states || x.observed != y.observed) return false;
  }
  return a.edges_ == b.edges_;
}

// ---------------------------------------------------------------------------
// Instantiation

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Instantiation Instantiation::parse(std::string_view text) {
  Instantiation out;
  text = trim(text);
  if (text.empty()) return out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    auto item = trim(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start));
    auto eq = item.find('=');
    if (eq == std::string_view::npos)
      throw Error(Errc::FileFormat, "expected VAR=STATE, got '" + std::string(item) + "'");
    auto var = trim(item.substr(0, eq));
    auto state = trim(item.substr(eq + 1));
    if (var.empty() || state.empty())
      throw Error(Errc::FileFormat, "expected VAR=STATE, got '" + std::string(item) + "'");
    if (out.contains(std::string(var)))
      throw Error(Errc::FileFormat, "variable " + std::string(var) + " assigned twice");
    out.set(std::string(var), std::string(state));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

const std::string* Instantiation::get(const std::string& var) const {
  auto it = map_.find(var);
  return it == map_.end() ? nullptr : &it->second;
}

bool Instantiation::compatible(const Instantiation& other) const {
  for (const auto& [k, v] : other.map_)
    if (auto* mine = get(k); mine && *mine != v) return false;
  return true;
}

Instantiation Instantiation::merged(const Instantiation& other) const {
  Instantiation out = *this;
  for (const auto& [k, v] : other.map_) out.map_.emplace(k, v);
  return out;
}

void Instantiation::validate(const CausalGraph& g) const {
  for (const auto& [k, v] : map_) g.variable(k).state_index(v);
}

std::string Instantiation::str() const {
  std::string out;
  for (const auto& [k, v] : map_) {
    if (!out.empty()) out += ",";
    out += k + "=" + v;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cpt

Cpt::Cpt(std::string child, std::vector<std::string> parents, std::vector<std::size_t> parent_cards,
         std::size_t child_card, std::vector<Rat> table)
    : child_(std::move(child)),
      parents_(std::move(parents)),
      parent_cards_(std::move(parent_cards)),
      child_card_(child_card),
      table_(std::move(table)) {
  if (parents_.size() != parent_cards_.size())
    throw Error(Errc::ParentMismatch, "CPT of " + child_ + ": parent/cardinality count differ");
  std::size_t rows = 1;
  for (auto c : parent_cards_) rows *= c;
  if (table_.size() != rows * child_card_)
    throw Error(Errc::ParentMismatch, "CPT of " + child_ + ": expected " +
                                          std::to_string(rows * child_card_) + " entries, got " +
                                          std::to_string(table_.size()));
}

Cpt Cpt::from_function(const CausalGraph& g, const std::string& child,
                       std::vector<std::string> parents, const RowFn& f) {
  std::vector<std::size_t> cards;
  for (const auto& p : parents) cards.push_back(g.variable(p).card());
  const std::size_t child_card = g.variable(child).card();
  std::size_t rows = 1;
  for (auto c : cards) rows *= c;
  std::vector<Rat> table;
  table.reserve(rows * child_card);
  std::vector<std::size_t> states(cards.size(), 0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t s = 0; s < child_card; ++s) table.push_back(f(states, s));
    for (std::size_t k = cards.size(); k-- > 0;) {
      if (++states[k] < cards[k]) break;
      states[k] = 0;
    }
  }
  return Cpt(child, std::move(parents), std::move(cards), child_card, std::move(table));
}

Cpt Cpt::from_function(const CausalGraph& g, const std::string& child, const RowFn& f) {
  return from_function(g, child, g.parent_names(g.index_of(child)), f);
}

std::size_t Cpt::row_index(std::span<const std::size_t> parent_states) const {
  std::size_t r = 0;
  for (std::size_t k = 0; k < parent_cards_.size(); ++k) r = r * parent_cards_[k] + parent_states[k];
  return r;
}

std::vector<std::size_t> Cpt::row_states(std::size_t row) const {
  std::vector<std::size_t> out(parent_cards_.size());
  for (std::size_t k = parent_cards_.size(); k-- > 0;) {
    out[k] = row % parent_cards_[k];
    row /= parent_cards_[k];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cbn

const Rat& Cbn::entry(std::size_t v, std::span<const std::size_t> states) const {
  const auto& cpt = cpts_[v];
  const auto& pidx = cpt_parent_idx_[v];
  std::size_t r = 0;
  for (std::size_t k = 0; k < pidx.size(); ++k) r = r * cpt.parent_cards()[k] + states[pidx[k]];
  return cpt.at(r, states[v]);
}

Cbn build_model(CausalGraph graph, std::vector<Cpt> cpts) {
  const std::size_t n = graph.size();
  std::vector<std::optional<Cpt>> slots(n);
  for (auto& cpt : cpts) {
    auto v = graph.find(cpt.child());
    if (!v) throw Error(Errc::UnknownVariable, "CPT for undeclared variable " + cpt.child());
    if (slots[*v]) throw Error(Errc::InvalidModel, "two CPTs for " + cpt.child());
    slots[*v] = std::move(cpt);
  }

  Cbn m;
  m.cpt_parent_idx_.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    const auto& var = graph.variable(v);
    if (!slots[v]) throw Error(Errc::MissingCpt, var.name);
    const Cpt& cpt = *slots[v];

    std::vector<std::size_t> idx;
    std::set<std::size_t> uniq;
    for (const auto& p : cpt.parents()) {
      auto pi = graph.find(p);
      if (!pi) throw Error(Errc::ParentMismatch, var.name + ": unknown CPT parent " + p);
      if (!uniq.insert(*pi).second) throw Error(Errc::ParentMismatch, var.name + ": repeated parent " + p);
      idx.push_back(*pi);
    }
    std::set<std::size_t> graph_parents(graph.parents(v).begin(), graph.parents(v).end());
    if (uniq != graph_parents)
      throw Error(Errc::ParentMismatch, var.name + ": CPT parents differ from graph parents");
    for (std::size_t k = 0; k < idx.size(); ++k)
      if (cpt.parent_cards()[k] != graph.variable(idx[k]).card())
        throw Error(Errc::ParentMismatch, var.name + ": wrong cardinality for parent " + cpt.parents()[k]);
    if (cpt.child_card() != var.card())
      throw Error(Errc::ParentMismatch, var.name + ": CPT has " + std::to_string(cpt.child_card()) +
                                            " columns for " + std::to_string(var.card()) + " states");

    for (std::size_t r = 0; r < cpt.row_count(); ++r) {
      Rat sum;
      for (const auto& x : cpt.row(r)) sum += x;
      if (!sum.is_one()) {
        auto states = cpt.row_states(r);
        std::string row;
        for (std::size_t k = 0; k < states.size(); ++k)
          row += (k ? "," : "") + cpt.parents()[k] + "=" + graph.variable(idx[k]).states[states[k]];
        throw Error(Errc::RowSumNotOne,
                    var.name + " row {" + row + "} sums to " + sum.str());
      }
    }
    m.cpt_parent_idx_[v] = std::move(idx);
  }

  m.graph_ = std::move(graph);
  m.cpts_.reserve(n);
  for (auto& s : slots) m.cpts_.push_back(std::move(*s));
  return m;
}

}  // namespace stateid
