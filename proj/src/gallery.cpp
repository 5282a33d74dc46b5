#include "stateid/gallery.hpp"

#include <algorithm>

#include "stateid/transforms.hpp"

namespace stateid {

std::string expectation_name(Expectation e) {
  return e == Expectation::Separated ? "separated" : "not_separated";
}

Expectation parse_expectation(std::string_view s) {
  if (s == "separated") return Expectation::Separated;
  if (s == "not_separated") return Expectation::NotSeparated;
  throw Error(Errc::FileFormat, "expectation must be 'separated' or 'not_separated', got '" + std::string(s) + "'");
}

PairReport verify_pair(const CertificatePair& p, const InferenceOptions& opts) {
  PairReport r;
  r.expectation = p.expectation;
  r.violations_a = check_all(p.model_a, p.constraints);
  r.violations_b = check_all(p.model_b, p.constraints);
  r.constraints_ok = r.violations_a.ok() && r.violations_b.ok();

  r.observed_a = observational(p.model_a, opts);
  if (p.model_a.graph() == p.model_b.graph())
    r.observational_equal = dist_equal(r.observed_a, observational(p.model_b, opts));

  r.effect_a = causal_effect(p.model_a, p.treatment, p.outcome, opts);
  r.effect_b = causal_effect(p.model_b, p.treatment, p.outcome, opts);
  r.separated = r.effect_a != r.effect_b;
  r.pass = r.constraints_ok && r.observational_equal &&
           r.separated == (p.expectation == Expectation::Separated);
  return r;
}

Instantiation substitute(const Instantiation& templ, const Binding& b) {
  Instantiation out;
  for (const auto& [var, state] : templ) {
    if (state.empty() || state.front() != '$') {
      out.set(var, state);
      continue;
    }
    auto it = b.find(state.substr(1));
    if (it == b.end()) throw Error(Errc::UnboundPlaceholder, state + " has no binding");
    out.set(var, it->second);
  }
  return out;
}

bool DrillReport::pass() const {
  return std::all_of(cases.begin(), cases.end(), [](const DrillCase& c) { return c.pass; });
}

namespace {

std::string binding_str(const Binding& b) {
  std::string out;
  for (const auto& [k, v] : b) out += (out.empty() ? "$" : ", $") + k + "=" + v;
  return out.empty() ? "(no placeholders)" : out;
}

void check_pairs(const Estimand& e, const Fixture& f, const EstimandCheck& c, const InferenceOptions& opts,
                 EstimandResult& out) {
  for (const auto& p : f.pairs) {
    try {
      validate_estimand(e, p.graph());
    } catch (const Error&) {
      continue;  // the formula does not speak about this pair's graph
    }
    auto obs_a = observational(p.model_a, opts);
    auto obs_b = observational(p.model_b, opts);
    for (const auto& b : c.bindings) {
      std::optional<Rat> va, vb;
      try {
        va = evaluate(e, obs_a, b);
      } catch (const Error& err) {
        if (err.code() != Errc::ZeroConditioningEvent) throw;
      }
      try {
        vb = evaluate(e, obs_b, b);
      } catch (const Error& err) {
        if (err.code() != Errc::ZeroConditioningEvent) throw;
      }
      if (!va && !vb) continue;
      ++out.pair_checks;
      if (va != vb)
        out.failures.push_back(p.label + " at " + binding_str(b) + ": estimand differs across the pair (" +
                               (va ? va->str() : "undefined") + " vs " + (vb ? vb->str() : "undefined") + ")");
    }
  }
}

EstimandResult run_estimand(const Fixture& f, const EstimandCheck& c, const FixtureOptions& opts) {
  EstimandResult out;
  out.text = c.text;
  auto e = parse_estimand(c.text);
  out.warnings = e.warnings;
  check_pairs(e, f, c, opts.inference, out);
  if (!c.identifiable) return out;

  validate_estimand(e, c.sampling_graph);
  const auto n = static_cast<long>(opts.samples);
  std::vector<std::vector<std::string>> fails(opts.samples);
  std::vector<std::size_t> counts(opts.samples, 0);
#pragma omp parallel for schedule(dynamic)
  for (long k = 0; k < n; ++k) {
    const auto seed = opts.seed + static_cast<std::uint64_t>(k);
    try {
      auto m = sample_constrained(c.sampling_graph, c.sampling_constraints, seed,
                                  SampleOptions{.max_states = opts.inference.max_states});
      auto obs = observational(m, opts.inference);
      for (const auto& b : c.bindings) {
        auto value = evaluate(e, obs, b);
        auto truth = causal_effect(m, substitute(c.treatment, b), substitute(c.outcome, b), opts.inference);
        ++counts[k];
        if (value != truth)
          fails[k].push_back("seed " + std::to_string(seed) + " at " + binding_str(b) + ": estimand " +
                             value.str() + " but Pr_x(y) = " + truth.str());
      }
    } catch (const std::exception& ex) {
      fails[k].push_back("seed " + std::to_string(seed) + ": " + ex.what());
    }
  }
  for (std::size_t k = 0; k < opts.samples; ++k) {
    out.comparisons += counts[k];
    out.failures.insert(out.failures.end(), fails[k].begin(), fails[k].end());
  }
  return out;
}

EliminationResult run_elimination(const EliminationCheck& c, const FixtureOptions& opts) {
  EliminationResult out;
  out.var = c.var;
  const auto n = static_cast<long>(opts.samples);
  std::vector<std::vector<std::string>> fails(opts.samples);
  std::vector<std::size_t> marg(opts.samples, 0), cpts(opts.samples, 0);
#pragma omp parallel for schedule(dynamic)
  for (long k = 0; k < n; ++k) {
    const auto seed = opts.seed + static_cast<std::uint64_t>(k);
    try {
      auto m = sample_constrained(c.graph, c.constraints, seed,
                                  SampleOptions{.check_positivity = false, .max_states = opts.inference.max_states});
      auto a = verify_feliminate_marginals(m, c.var, c.context, opts.inference);
      auto b = verify_feliminate_cpts(m, c.var, c.context, opts.inference);
      marg[k] = a.checked;
      cpts[k] = b.checked;
      for (const auto* r : {&a, &b})
        for (const auto& msg : r->mismatches) fails[k].push_back("seed " + std::to_string(seed) + ": " + msg);
    } catch (const std::exception& ex) {
      fails[k].push_back("seed " + std::to_string(seed) + ": " + ex.what());
    }
  }
  out.models = opts.samples;
  for (std::size_t k = 0; k < opts.samples; ++k) {
    out.marginal_checks += marg[k];
    out.cpt_checks += cpts[k];
    out.failures.insert(out.failures.end(), fails[k].begin(), fails[k].end());
  }
  return out;
}

}  // namespace

FixtureReport verify_fixture(const Fixture& f, const FixtureOptions& opts) {
  FixtureReport r;
  r.id = f.id;
  bool ok = true;
  for (const auto& p : f.pairs) {
    r.pairs.push_back(verify_pair(p, opts.inference));
    ok = ok && r.pairs.back().pass;
  }
  for (const auto& p : f.pairs)
    for (const auto& ext : f.extensions) r.extensions.cases.push_back(check_extension(p, ext, opts.inference));
  ok = ok && r.extensions.pass();
  for (const auto& c : f.estimands) {
    r.estimands.push_back(run_estimand(f, c, opts));
    ok = ok && r.estimands.back().pass();
  }
  for (const auto& c : f.eliminations) {
    r.eliminations.push_back(run_elimination(c, opts));
    ok = ok && r.eliminations.back().pass();
  }
  r.pass = ok;
  return r;
}

const Fixture& builtin_fixture(std::string_view id) {
  for (const auto& f : builtin_fixtures())
    if (f.id == id) return f;
  throw Error(Errc::FixtureLoadError, "no fixture named '" + std::string(id) + "'");
}

// ---- JSON ----

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(Errc::FileFormat, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::string str_field(const Json& j, const char* key) {
  const auto& x = field(j, key);
  if (!x.is_string()) bad(std::string("'") + key + "' must be a string");
  return x.get<std::string>();
}

Json graph_with_constraints(const CausalGraph& g, std::span<const Constraint> cs) {
  auto j = graph_to_json(g);
  j["constraints"] = constraints_to_json(cs);
  return j;
}

std::vector<Constraint> constraints_of(const Json& j, const CausalGraph& g) {
  std::vector<Constraint> cs;
  if (j.contains("constraints")) cs = constraints_from_json(j.at("constraints"));
  for (const auto& c : cs) validate_constraint(g, c);
  return cs;
}

Json binding_to_json(const Binding& b) {
  Json out = Json::object();
  for (const auto& [k, v] : b) out[k] = v;
  return out;
}

Binding binding_from_json(const Json& j) {
  if (!j.is_object()) bad("binding must be an object");
  Binding b;
  for (const auto& [k, v] : j.items()) {
    if (!v.is_string()) bad("binding values must be strings");
    b[k] = v.get<std::string>();
  }
  return b;
}

template <class F>
auto as_load_error(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == Errc::FixtureLoadError) throw;
    throw Error(Errc::FixtureLoadError, e.what());
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::FixtureLoadError, e.what());
  }
}

Json dist_rows(const Dist& d) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < d.size(); ++i)
    rows.push_back(Json{{"assignment", instantiation_to_json(d.instantiation(i))}, {"p", d.values()[i].str()}});
  return rows;
}

Json violations_json(const ViolationReport& r) {
  Json out = Json::array();
  for (const auto& v : r.violations) out.push_back(Json{{"constraint", v.constraint}, {"detail", v.detail}});
  return out;
}

}  // namespace

Json pair_to_json(const CertificatePair& p) {
  Json j;
  j["schema"] = "stateid.pair/1";
  j["label"] = p.label;
  j["expectation"] = expectation_name(p.expectation);
  j["treatment"] = instantiation_to_json(p.treatment);
  j["outcome"] = instantiation_to_json(p.outcome);
  j["graph"] = graph_to_json(p.graph());
  j["constraints"] = constraints_to_json(p.constraints);
  j["model_a"] = cpts_to_json(p.model_a);
  j["model_b"] = cpts_to_json(p.model_b);
  return j;
}

CertificatePair pair_from_json(const Json& j) {
  return as_load_error([&] {
    auto g = graph_from_json(field(j, "graph"));
    CertificatePair p{
        .label = j.contains("label") ? str_field(j, "label") : std::string("pair"),
        .model_a = build_model(g, cpts_from_json(field(j, "model_a"), g)),
        .model_b = build_model(g, cpts_from_json(field(j, "model_b"), g)),
        .constraints = constraints_of(j, g),
        .treatment = instantiation_from_json(field(j, "treatment")),
        .outcome = instantiation_from_json(field(j, "outcome")),
        .expectation = parse_expectation(str_field(j, "expectation")),
    };
    p.treatment.validate(g);
    p.outcome.validate(g);
    return p;
  });
}

Json fixture_to_json(const Fixture& f) {
  Json j;
  j["schema"] = "stateid.fixture/1";
  j["id"] = f.id;
  j["notes"] = f.notes;
  j["pairs"] = Json::array();
  for (const auto& p : f.pairs) j["pairs"].push_back(pair_to_json(p));
  j["estimands"] = Json::array();
  for (const auto& c : f.estimands) {
    Json b = Json::array();
    for (const auto& x : c.bindings) b.push_back(binding_to_json(x));
    j["estimands"].push_back(Json{{"text", c.text},
                                  {"treatment", instantiation_to_json(c.treatment)},
                                  {"outcome", instantiation_to_json(c.outcome)},
                                  {"bindings", b},
                                  {"identifiable", c.identifiable},
                                  {"sampling", graph_with_constraints(c.sampling_graph, c.sampling_constraints)}});
  }
  j["eliminations"] = Json::array();
  for (const auto& c : f.eliminations)
    j["eliminations"].push_back(Json{{"var", c.var},
                                     {"context", instantiation_to_json(c.context)},
                                     {"sampling", graph_with_constraints(c.graph, c.constraints)}});
  j["extensions"] = Json::array();
  for (const auto& x : f.extensions)
    j["extensions"].push_back(Json{{"var", x.var}, {"base", x.base}, {"eps", x.eps.str()}});
  return j;
}

Fixture fixture_from_json(const Json& j) {
  return as_load_error([&] {
    Fixture f;
    f.id = str_field(j, "id");
    if (j.contains("notes")) f.notes = str_field(j, "notes");
    if (j.contains("pairs"))
      for (const auto& p : j.at("pairs")) f.pairs.push_back(pair_from_json(p));
    if (j.contains("estimands"))
      for (const auto& x : j.at("estimands")) {
        EstimandCheck c;
        c.text = str_field(x, "text");
        c.treatment = instantiation_from_json(field(x, "treatment"));
        c.outcome = instantiation_from_json(field(x, "outcome"));
        for (const auto& b : field(x, "bindings")) c.bindings.push_back(binding_from_json(b));
        if (x.contains("identifiable")) c.identifiable = x.at("identifiable").get<bool>();
        c.sampling_graph = graph_from_json(field(x, "sampling"));
        c.sampling_constraints = constraints_of(x.at("sampling"), c.sampling_graph);
        f.estimands.push_back(std::move(c));
      }
    if (j.contains("eliminations"))
      for (const auto& x : j.at("eliminations")) {
        EliminationCheck c;
        c.var = str_field(x, "var");
        c.context = instantiation_from_json(field(x, "context"));
        c.graph = graph_from_json(field(x, "sampling"));
        c.constraints = constraints_of(x.at("sampling"), c.graph);
        f.eliminations.push_back(std::move(c));
      }
    if (j.contains("extensions"))
      for (const auto& x : j.at("extensions"))
        f.extensions.push_back({str_field(x, "var"), str_field(x, "base"), parse_rat(str_field(x, "eps"))});
    return f;
  });
}

Json pair_report_to_json(const PairReport& r) {
  Json j;
  j["schema"] = "stateid.pair-report/1";
  j["pass"] = r.pass;
  j["expectation"] = expectation_name(r.expectation);
  j["constraints_ok"] = r.constraints_ok;
  j["violations"] = Json{{"model_a", violations_json(r.violations_a)}, {"model_b", violations_json(r.violations_b)}};
  j["observational_equal"] = r.observational_equal;
  j["effect_a"] = r.effect_a.str();
  j["effect_b"] = r.effect_b.str();
  j["separated"] = r.separated;
  j["observed"] = dist_rows(r.observed_a);
  return j;
}

Json fixture_report_to_json(const FixtureReport& r) {
  Json j;
  j["schema"] = "stateid.fixture-report/1";
  j["id"] = r.id;
  j["pass"] = r.pass;
  j["pairs"] = Json::array();
  for (const auto& p : r.pairs) {
    auto pj = pair_report_to_json(p);
    pj.erase("schema");
    pj.erase("observed");
    j["pairs"].push_back(pj);
  }
  j["estimands"] = Json::array();
  for (const auto& e : r.estimands)
    j["estimands"].push_back(Json{{"text", e.text},
                                  {"pass", e.pass()},
                                  {"comparisons", e.comparisons},
                                  {"pair_checks", e.pair_checks},
                                  {"failures", e.failures},
                                  {"warnings", e.warnings}});
  j["eliminations"] = Json::array();
  for (const auto& e : r.eliminations)
    j["eliminations"].push_back(Json{{"var", e.var},
                                     {"pass", e.pass()},
                                     {"models", e.models},
                                     {"marginal_checks", e.marginal_checks},
                                     {"cpt_checks", e.cpt_checks},
                                     {"failures", e.failures}});
  j["extensions"] = Json::array();
  for (const auto& c : r.extensions.cases)
    j["extensions"].push_back(Json{{"label", c.label}, {"pass", c.pass}, {"detail", c.detail}});
  return j;
}

void export_fixture(const Fixture& f, const std::filesystem::path& root) {
  auto dir = root / f.id;
  write_text_file(dir / "fixture.json", dump_json(fixture_to_json(f)));
  for (std::size_t i = 0; i < f.pairs.size(); ++i) {
    auto name = i == 0 ? std::string("pair.json") : "pair" + std::to_string(i + 1) + ".json";
    write_text_file(dir / name, dump_json(pair_to_json(f.pairs[i])));
  }
}

Fixture load_fixture(const std::filesystem::path& dir) {
  auto path = dir / "fixture.json";
  return as_load_error([&] { return fixture_from_json(parse_json(read_text_file(path))); });
}

std::vector<Fixture> load_fixture_dir(const std::filesystem::path& root) {
  std::error_code ec;
  if (!std::filesystem::is_directory(root, ec))
    throw Error(Errc::FixtureLoadError, root.string() + " is not a directory");
  std::vector<Fixture> out;
  for (const auto& entry : std::filesystem::directory_iterator(root))
    if (entry.is_directory() && std::filesystem::exists(entry.path() / "fixture.json"))
      out.push_back(load_fixture(entry.path()));
  std::sort(out.begin(), out.end(), [](const Fixture& a, const Fixture& b) { return a.id < b.id; });
  return out;
}

}  // namespace stateid
