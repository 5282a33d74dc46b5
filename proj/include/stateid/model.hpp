#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stateid/rat.hpp"

namespace stateid {

struct Variable {
  std::string name;
  std::vector<std::string> states;  // order fixes CPT layout
  bool observed = true;

  std::size_t card() const { return states.size(); }
  std::optional<std::size_t> find_state(std::string_view label) const;
  /// Throws `UnknownState`.
  std::size_t state_index(std::string_view label) const;
};

/// Convenience for fixtures and tests: states "0".."card-1".
Variable numbered_variable(std::string name, std::size_t card, bool observed = true);

struct Edge {
  std::string parent;
  std::string child;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// DAG over named variables; observed/hidden partition lives on each Variable.
/// Construction validates names, states, edges and acyclicity.
class CausalGraph {
 public:
  CausalGraph() = default;
  CausalGraph(std::vector<Variable> variables, std::vector<Edge> edges);

  std::size_t size() const { return variables_.size(); }
  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Variable& variable(std::size_t i) const { return variables_[i]; }
  const Variable& variable(std::string_view name) const { return variables_[index_of(name)]; }

  std::optional<std::size_t> find(std::string_view name) const;
  /// Throws `UnknownVariable`.
  std::size_t index_of(std::string_view name) const;

  /// Parents in edge-declaration order.
  const std::vector<std::size_t>& parents(std::size_t v) const { return parents_[v]; }
  const std::vector<std::size_t>& children(std::size_t v) const { return children_[v]; }
  std::vector<std::string> parent_names(std::size_t v) const;
  bool has_edge(std::size_t parent, std::size_t child) const;

  const std::vector<std::size_t>& topological_order() const { return topo_; }
  std::vector<std::string> observed_names() const;
  std::vector<std::string> names() const;

  /// Product of all cardinalities, saturating at `cap + 1`.
  std::uint64_t state_space(std::uint64_t cap) const;

  friend bool operator==(const CausalGraph& a, const CausalGraph& b);

 private:
  std::vector<Variable> variables_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> parents_;
  std::vector<std::vector<std::size_t>> children_;
  std::vector<std::size_t> topo_;
};

/// Partial or full assignment of state labels to variable names.
class Instantiation {
 public:
  using Map = std::map<std::string, std::string>;

  Instantiation() = default;
  Instantiation(std::initializer_list<Map::value_type> init) : map_(init) {}
  explicit Instantiation(Map m) : map_(std::move(m)) {}

  /// "X=0,Y=1" (whitespace tolerated); empty string is the empty instantiation.
  static Instantiation parse(std::string_view text);

  void set(std::string var, std::string state) { map_[std::move(var)] = std::move(state); }
  void erase(const std::string& var) { map_.erase(var); }
  const std::string* get(const std::string& var) const;
  bool contains(const std::string& var) const { return map_.count(var) != 0; }
  bool empty() const { return map_.empty(); }
  std::size_t size() const { return map_.size(); }
  const Map& assignments() const { return map_; }
  auto begin() const { return map_.begin(); }
  auto end() const { return map_.end(); }

  /// True when no shared variable disagrees.
  bool compatible(const Instantiation& other) const;
  /// Union; callers check `compatible` first.
  Instantiation merged(const Instantiation& other) const;

  /// Checks every variable and state against the graph.
  void validate(const CausalGraph& g) const;

  std::string str() const;

  friend bool operator==(const Instantiation&, const Instantiation&) = default;

 private:
  Map map_;
};

/// f(child | parents). Rows enumerate parent instantiations in lexicographic
/// order over the declared parent order (first parent most significant);
/// each row holds one entry per child state.
class Cpt {
 public:
  using RowFn = std::function<Rat(std::span<const std::size_t> parent_states, std::size_t state)>;

  Cpt() = default;
  Cpt(std::string child, std::vector<std::string> parents, std::vector<std::size_t> parent_cards,
      std::size_t child_card, std::vector<Rat> table);

  /// Builds the table by calling `f` for every (row, state); cards are read from `g`.
  static Cpt from_function(const CausalGraph& g, const std::string& child,
                           std::vector<std::string> parents, const RowFn& f);
  /// Same, with the graph's parent order.
  static Cpt from_function(const CausalGraph& g, const std::string& child, const RowFn& f);

  const std::string& child() const { return child_; }
  const std::vector<std::string>& parents() const { return parents_; }
  const std::vector<std::size_t>& parent_cards() const { return parent_cards_; }
  std::size_t child_card() const { return child_card_; }
  std::size_t row_count() const { return child_card_ == 0 ? 0 : table_.size() / child_card_; }
  const std::vector<Rat>& table() const { return table_; }

  const Rat& at(std::size_t row, std::size_t state) const { return table_[row * child_card_ + state]; }
  std::span<const Rat> row(std::size_t r) const {
    return {table_.data() + r * child_card_, child_card_};
  }
  std::size_t row_index(std::span<const std::size_t> parent_states) const;
  std::vector<std::size_t> row_states(std::size_t row) const;

  friend bool operator==(const Cpt&, const Cpt&) = default;

 private:
  std::string child_;
  std::vector<std::string> parents_;
  std::vector<std::size_t> parent_cards_;
  std::size_t child_card_ = 0;
  std::vector<Rat> table_;
};

/// Causal Bayesian network: graph plus one validated CPT per variable.
/// Immutable once built.
class Cbn {
 public:
  const CausalGraph& graph() const { return graph_; }
  const std::vector<Cpt>& cpts() const { return cpts_; }
  const Cpt& cpt(std::size_t v) const { return cpts_[v]; }
  const Cpt& cpt(std::string_view name) const { return cpts_[graph_.index_of(name)]; }

  /// Graph indices of `cpt(v).parents()`, in CPT order.
  const std::vector<std::size_t>& cpt_parents(std::size_t v) const { return cpt_parent_idx_[v]; }

  /// f_v(states[v] | states[parents]) for a full state vector indexed by graph order.
  const Rat& entry(std::size_t v, std::span<const std::size_t> states) const;

  friend bool operator==(const Cbn& a, const Cbn& b) {
    return a.graph_ == b.graph_ && a.cpts_ == b.cpts_;
  }

 private:
  friend Cbn build_model(CausalGraph graph, std::vector<Cpt> cpts);

  CausalGraph graph_;
  std::vector<Cpt> cpts_;
  std::vector<std::vector<std::size_t>> cpt_parent_idx_;
};

/// Validates and assembles a model. Errors: MissingCpt, ParentMismatch,
/// RowSumNotOne, UnknownVariable, InvalidModel (negative entries, duplicates).
Cbn build_model(CausalGraph graph, std::vector<Cpt> cpts);

/// Point-mass distribution row helper: 1 at `hit`, 0 elsewhere.
inline Rat indicator(bool hit) { return hit ? Rat(1) : Rat(0); }

}  // namespace stateid
