#include "stateid/model_io.hpp"

#include <fstream>
#include <sstream>

namespace stateid {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(Errc::FileFormat, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::string as_string(const Json& j, const std::string& what) {
  if (!j.is_string()) bad(what + " must be a string");
  return j.get<std::string>();
}

std::vector<std::string> string_list(const Json& j, const std::string& what) {
  if (!j.is_array()) bad(what + " must be an array");
  std::vector<std::string> out;
  for (const auto& x : j) out.push_back(as_string(x, what));
  return out;
}

Rat rat_field(const Json& j) {
  if (j.is_string()) return parse_rat(j.get<std::string>());
  if (j.is_number_unsigned()) return Rat(j.get<std::int64_t>());
  bad("probabilities must be strings such as \"1/2\"");
}

}  // namespace

Json graph_to_json(const CausalGraph& g) {
  Json vars = Json::array();
  for (const auto& v : g.variables())
    vars.push_back(Json{{"name", v.name}, {"states", v.states}, {"observed", v.observed}});
  Json edges = Json::array();
  for (const auto& e : g.edges()) edges.push_back(Json::array({e.parent, e.child}));
  return Json{{"variables", vars}, {"edges", edges}};
}

CausalGraph graph_from_json(const Json& j) {
  std::vector<Variable> vars;
  const auto& jv = field(j, "variables");
  if (!jv.is_array()) bad("'variables' must be an array");
  for (const auto& x : jv) {
    Variable v;
    v.name = as_string(field(x, "name"), "variable name");
    v.states = string_list(field(x, "states"), "states of " + v.name);
    if (x.contains("observed")) {
      if (!x.at("observed").is_boolean()) bad("'observed' of " + v.name + " must be a boolean");
      v.observed = x.at("observed").get<bool>();
    }
    vars.push_back(std::move(v));
  }
  std::vector<Edge> edges;
  if (j.contains("edges")) {
    const auto& je = j.at("edges");
    if (!je.is_array()) bad("'edges' must be an array");
    for (const auto& e : je) {
      if (e.is_array() && e.size() == 2) {
        edges.push_back({as_string(e[0], "edge parent"), as_string(e[1], "edge child")});
      } else if (e.is_object()) {
        edges.push_back({as_string(field(e, "parent"), "edge parent"), as_string(field(e, "child"), "edge child")});
      } else {
        bad("edges must be [parent, child] pairs");
      }
    }
  }
  return CausalGraph(std::move(vars), std::move(edges));
}

Json cpts_to_json(const Cbn& m) {
  const auto& g = m.graph();
  Json out = Json::object();
  for (std::size_t v = 0; v < g.size(); ++v) {
    const auto& cpt = m.cpt(v);
    const auto& var = g.variable(v);
    Json rows = Json::array();
    for (std::size_t r = 0; r < cpt.row_count(); ++r) {
      auto st = cpt.row_states(r);
      Json given = Json::object();
      for (std::size_t k = 0; k < st.size(); ++k)
        given[cpt.parents()[k]] = g.variable(cpt.parents()[k]).states[st[k]];
      Json dist = Json::object();
      for (std::size_t s = 0; s < var.card(); ++s) dist[var.states[s]] = cpt.at(r, s).str();
      rows.push_back(Json{{"given", given}, {"dist", dist}});
    }
    out[var.name] = Json{{"parents", cpt.parents()}, {"rows", rows}};
  }
  return out;
}

std::vector<Cpt> cpts_from_json(const Json& j, const CausalGraph& g) {
  if (!j.is_object()) bad("'cpts' must be an object keyed by variable");
  std::vector<Cpt> out;
  for (const auto& [child, body] : j.items()) {
    const auto& var = g.variable(child);
    auto parents = string_list(field(body, "parents"), "parents of " + child);
    std::vector<std::size_t> cards;
    for (const auto& p : parents) cards.push_back(g.variable(p).card());
    std::size_t rows = 1;
    for (auto c : cards) rows *= c;

    std::vector<Rat> table(rows * var.card());
    std::vector<bool> filled(rows, false);
    Cpt layout(child, parents, cards, var.card(), table);
    const auto& jrows = field(body, "rows");
    if (!jrows.is_array()) bad("rows of " + child + " must be an array");
    for (const auto& row : jrows) {
      const auto& given = field(row, "given");
      if (!given.is_object() || given.size() != parents.size())
        bad("row of " + child + " must assign exactly its parents");
      std::vector<std::size_t> st;
      for (const auto& p : parents) {
        if (!given.contains(p)) bad("row of " + child + " does not assign parent " + p);
        st.push_back(g.variable(p).state_index(as_string(given.at(p), "state")));
      }
      auto r = layout.row_index(st);
      if (filled[r]) bad("duplicate row in CPT of " + child);
      filled[r] = true;
      const auto& dist = field(row, "dist");
      if (!dist.is_object() || dist.size() != var.card())
        bad("each row of " + child + " must list every state");
      for (const auto& [label, p] : dist.items()) table[r * var.card() + var.state_index(label)] = rat_field(p);
    }
    for (std::size_t r = 0; r < rows; ++r)
      if (!filled[r]) bad("CPT of " + child + " is missing a row");
    out.emplace_back(child, std::move(parents), std::move(cards), var.card(), std::move(table));
  }
  return out;
}

Json instantiation_to_json(const Instantiation& inst) {
  Json out = Json::object();
  for (const auto& [k, v] : inst) out[k] = v;
  return out;
}

Instantiation instantiation_from_json(const Json& j) {
  if (!j.is_object()) bad("instantiation must be an object {var: state}");
  Instantiation out;
  for (const auto& [k, v] : j.items()) out.set(k, as_string(v, "state of " + k));
  return out;
}

Json constraint_to_json(const Constraint& c) {
  if (const auto* x = std::get_if<Csi>(&c))
    return Json{{"type", "csi"}, {"child", x->child}, {"indep", x->indep},
                {"context", instantiation_to_json(x->context)}, {"free", x->free}};
  if (const auto* x = std::get_if<Cfd>(&c))
    return Json{{"type", "cfd"}, {"child", x->child}, {"p1", x->determinants},
                {"context", instantiation_to_json(x->context)}};
  if (const auto* x = std::get_if<Fd>(&c)) return Json{{"type", "fd"}, {"child", x->child}};
  const auto& x = std::get<StateDomain>(c);
  return Json{{"type", "states"}, {"var", x.var}, {"states", x.states}};
}

Constraint constraint_from_json(const Json& j) {
  auto type = as_string(field(j, "type"), "constraint type");
  if (type == "csi") {
    Csi c;
    c.child = as_string(field(j, "child"), "child");
    c.indep = string_list(field(j, "indep"), "indep");
    c.context = instantiation_from_json(field(j, "context"));
    if (j.contains("free")) c.free = string_list(j.at("free"), "free");
    return c;
  }
  if (type == "cfd") {
    Cfd c;
    c.child = as_string(field(j, "child"), "child");
    c.determinants = string_list(field(j, "p1"), "p1");
    if (j.contains("context")) c.context = instantiation_from_json(j.at("context"));
    return c;
  }
  if (type == "fd") return Fd{as_string(field(j, "child"), "child")};
  if (type == "states")
    return StateDomain{as_string(field(j, "var"), "var"), string_list(field(j, "states"), "states")};
  bad("unknown constraint type '" + type + "'");
}

Json constraints_to_json(std::span<const Constraint> cs) {
  Json out = Json::array();
  for (const auto& c : cs) out.push_back(constraint_to_json(c));
  return out;
}

std::vector<Constraint> constraints_from_json(const Json& j) {
  const Json& arr = j.is_object() ? field(j, "constraints") : j;
  if (!arr.is_array()) bad("constraints must be an array");
  std::vector<Constraint> out;
  for (const auto& c : arr) out.push_back(constraint_from_json(c));
  return out;
}

Json model_to_json(const Cbn& m, std::span<const Constraint> cs) {
  Json out = graph_to_json(m.graph());
  out["cpts"] = cpts_to_json(m);
  if (!cs.empty()) out["constraints"] = constraints_to_json(cs);
  return out;
}

ModelDocument model_from_json(const Json& j) {
  auto g = graph_from_json(j);
  auto cpts = cpts_from_json(field(j, "cpts"), g);
  ModelDocument doc{build_model(std::move(g), std::move(cpts)), {}};
  if (j.contains("constraints")) doc.constraints = constraints_from_json(j.at("constraints"));
  for (const auto& c : doc.constraints) validate_constraint(doc.model.graph(), c);
  return doc;
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    bad(std::string("invalid JSON: ") + e.what());
  }
}

std::string write_model(const Cbn& m, std::span<const Constraint> cs) {
  return dump_json(model_to_json(m, cs));
}

ModelDocument read_model(std::string_view text) { return model_from_json(parse_json(text)); }

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) bad("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) bad("cannot write " + path.string());
  out << text;
}

}  // namespace stateid
