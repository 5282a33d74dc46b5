#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "stateid/constraints.hpp"
#include "stateid/model.hpp"

namespace stateid {

using Json = nlohmann::ordered_json;

/// A parsed model file: the model plus any constraints it carries.
struct ModelDocument {
  Cbn model;
  std::vector<Constraint> constraints;
};

// Model file layout (UTF-8 JSON, keys in this order):
//   variables:   [{name, states, observed}]
//   edges:       [[parent, child], ...]
//   cpts:        {child: {parents: [...], rows: [{given: {p: s}, dist: {state: "p/q"}}]}}
//   constraints: optional, see constraint_to_json
// Probabilities are strings read with parse_rat. The writer emits variables in
// declaration order and rows in lexicographic parent order.

Json graph_to_json(const CausalGraph& g);
CausalGraph graph_from_json(const Json& j);

Json cpts_to_json(const Cbn& m);
std::vector<Cpt> cpts_from_json(const Json& j, const CausalGraph& g);

Json constraint_to_json(const Constraint& c);
Constraint constraint_from_json(const Json& j);
Json constraints_to_json(std::span<const Constraint> cs);
/// Accepts a bare array or an object with a "constraints" array.
std::vector<Constraint> constraints_from_json(const Json& j);

Json instantiation_to_json(const Instantiation& inst);
Instantiation instantiation_from_json(const Json& j);

Json model_to_json(const Cbn& m, std::span<const Constraint> cs = {});
ModelDocument model_from_json(const Json& j);

/// Canonical text: two-space indented JSON plus trailing newline.
std::string write_model(const Cbn& m, std::span<const Constraint> cs = {});
ModelDocument read_model(std::string_view text);

Json parse_json(std::string_view text);
std::string dump_json(const Json& j);
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace stateid
