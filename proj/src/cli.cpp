#include "stateid/cli.hpp"

#include <CLI11.hpp>

#include <functional>
#include <iomanip>
#include <sstream>

#include "stateid/estimand.hpp"
#include "stateid/gallery.hpp"
#include "stateid/model_io.hpp"
#include "stateid/transforms.hpp"

namespace stateid {

namespace {

std::vector<std::string> split_names(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto b = item.find_first_not_of(" \t");
    auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw Error(Errc::FileFormat, "empty name in '" + s + "'");
    out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

std::string show(const Rat& r) { return r.str() + "  (" + r.decimal() + ")"; }

struct Session {
  std::ostream& out;
  std::ostream& err;
  bool json = false;
  std::uint64_t max_states = std::uint64_t{1} << 24;

  InferenceOptions opts() const { return InferenceOptions{max_states}; }

  void emit(const std::string& schema, Json body) const {
    Json j;
    j["schema"] = "stateid." + schema + "/1";
    for (auto& [k, v] : body.items()) j[k] = v;
    out << dump_json(j);
  }

  ModelDocument load(const std::string& path) const { return read_model(read_text_file(path)); }

  // Writes `m` to `path`, or to stdout when no path is given and no JSON report follows.
  void save(const std::string& path, const Cbn& m, std::span<const Constraint> cs) const {
    auto text = write_model(m, cs);
    if (path.empty()) {
      if (!json) out << text;
      return;
    }
    write_text_file(path, text);
    if (!json) out << "wrote " << path << "\n";
  }
};

Json dist_json(const Dist& d) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < d.size(); ++i)
    rows.push_back(Json{{"assignment", instantiation_to_json(d.instantiation(i))}, {"p", d.values()[i].str()}});
  return rows;
}

void print_dist(std::ostream& out, const Dist& d) {
  std::vector<std::size_t> width;
  for (const auto& v : d.scope()) {
    std::size_t w = v.name.size();
    for (const auto& s : v.states) w = std::max(w, s.size());
    width.push_back(w);
  }
  for (std::size_t k = 0; k < d.scope().size(); ++k) out << std::left << std::setw(int(width[k]) + 2) << d.scope()[k].name;
  out << "p\n";
  for (std::size_t i = 0; i < d.size(); ++i) {
    auto st = d.states(i);
    for (std::size_t k = 0; k < st.size(); ++k)
      out << std::left << std::setw(int(width[k]) + 2) << d.scope()[k].states[st[k]];
    out << show(d.values()[i]) << "\n";
  }
}

Dist conditional_table(const Cbn& m, const std::vector<std::string>& targets, const Instantiation& given,
                       const InferenceOptions& opts) {
  if (given.empty()) return marginal(m, targets, opts);
  given.validate(m.graph());
  auto names = targets;
  for (const auto& [k, v] : given)
    if (std::find(names.begin(), names.end(), k) == names.end()) names.push_back(k);
    else throw Error(Errc::ScopeMismatch, k + " is both a target and evidence");
  auto joint_table = marginal(m, names, opts);
  auto denom = joint_table.probability(given);
  if (denom.is_zero()) throw Error(Errc::ZeroConditioningEvent, "Pr(" + given.str() + ") = 0");
  auto shape = marginal(m, targets, opts);
  std::vector<Rat> values;
  for (std::size_t i = 0; i < shape.size(); ++i)
    values.push_back(joint_table.probability(shape.instantiation(i).merged(given)) / denom);
  return Dist(shape.scope(), std::move(values));
}

void print_pair_report(std::ostream& out, const std::string& label, const PairReport& r) {
  out << (r.pass ? "PASS" : "FAIL") << "  " << label << "\n";
  out << "  constraints satisfied: " << (r.constraints_ok ? "yes" : "no") << "\n";
  for (const auto* v : {&r.violations_a, &r.violations_b})
    for (const auto& x : v->violations)
      out << "    " << (v == &r.violations_a ? "model_a" : "model_b") << ": " << x.constraint << ": " << x.detail << "\n";
  out << "  observed distributions equal: " << (r.observational_equal ? "yes" : "no") << "\n";
  out << "  effect under model_a: " << show(r.effect_a) << "\n";
  out << "  effect under model_b: " << show(r.effect_b) << "\n";
  out << "  separated: " << (r.separated ? "yes" : "no") << " (expected " << expectation_name(r.expectation) << ")\n";
}

void print_fixture_report(std::ostream& out, const Fixture& f, const FixtureReport& r) {
  out << (r.pass ? "PASS" : "FAIL") << "  " << r.id << "\n";
  for (std::size_t i = 0; i < r.pairs.size(); ++i) {
    const auto& p = r.pairs[i];
    out << "  pair " << f.pairs[i].label << ": " << (p.pass ? "pass" : "FAIL") << "  effects " << p.effect_a.str()
        << " vs " << p.effect_b.str() << ", Pr(V) " << (p.observational_equal ? "equal" : "DIFFERENT")
        << ", constraints " << (p.constraints_ok ? "ok" : "VIOLATED") << "\n";
  }
  for (const auto& e : r.estimands) {
    out << "  estimand: " << (e.pass() ? "pass" : "FAIL") << "  " << e.comparisons << " oracle comparisons, "
        << e.pair_checks << " pair checks\n    " << e.text << "\n";
    for (const auto& w : e.warnings) out << "    note: " << w << "\n";
    for (const auto& x : e.failures) out << "    " << x << "\n";
  }
  for (const auto& e : r.eliminations) {
    out << "  eliminate " << e.var << ": " << (e.pass() ? "pass" : "FAIL") << "  " << e.models << " models, "
        << e.marginal_checks << " marginal and " << e.cpt_checks << " CPT checks\n";
    for (const auto& x : e.failures) out << "    " << x << "\n";
  }
  for (const auto& c : r.extensions.cases)
    out << "  " << c.label << ": " << (c.pass ? "pass" : "FAIL") << "  " << c.detail << "\n";
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Session s{out, err};
  CLI::App app{"Exact causal-effect identifiability workbench"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--json", s.json, "Machine-readable output on stdout");
  app.add_option("--max-states", s.max_states, "Cap on enumerated joint instantiations")->capture_default_str();

  std::function<int()> action;
  std::string model_path, out_path, var, given_text, context_text;

  // infer
  auto* infer = app.add_subcommand("infer", "Marginal or conditional distribution");
  std::string targets_text, method = "enum";
  infer->add_option("-m,--model", model_path, "Model file")->required();
  infer->add_option("--targets", targets_text, "Comma-separated target variables")->required();
  infer->add_option("--given", given_text, "Evidence, e.g. X=0,Z=1");
  infer->add_option("--method", method, "enum or ve")->check(CLI::IsMember({"enum", "ve"}));
  infer->callback([&] {
    action = [&] {
      auto doc = s.load(model_path);
      auto targets = split_names(targets_text);
      auto given = Instantiation::parse(given_text);
      auto d = method == "ve" ? eliminate_ve(doc.model, targets, given)
                              : conditional_table(doc.model, targets, given, s.opts());
      if (s.json) {
        s.emit("infer", Json{{"targets", targets}, {"given", instantiation_to_json(given)}, {"method", method},
                             {"rows", dist_json(d)}});
      } else {
        print_dist(out, d);
      }
      return kExitOk;
    };
  });

  // do
  auto* doo = app.add_subcommand("do", "Interventional probability Pr_x(y)");
  std::string set_text, query_text;
  doo->add_option("-m,--model", model_path, "Model file")->required();
  doo->add_option("--set", set_text, "Treatment, e.g. X=0")->required();
  doo->add_option("--query", query_text, "Outcome, e.g. Y=0")->required();
  doo->callback([&] {
    action = [&] {
      auto doc = s.load(model_path);
      auto x = Instantiation::parse(set_text);
      auto y = Instantiation::parse(query_text);
      auto p = causal_effect(doc.model, x, y, s.opts());
      if (s.json) {
        s.emit("do", Json{{"treatment", instantiation_to_json(x)}, {"outcome", instantiation_to_json(y)},
                          {"p", p.str()}});
      } else {
        out << "Pr_{" << x.str() << "}(" << y.str() << ") = " << show(p) << "\n";
      }
      return kExitOk;
    };
  });

  // check
  auto* check = app.add_subcommand("check", "Check a model against constraints");
  std::string constraints_path;
  check->add_option("-m,--model", model_path, "Model file")->required();
  check->add_option("-c,--constraints", constraints_path, "Extra constraints file");
  check->callback([&] {
    action = [&] {
      auto doc = s.load(model_path);
      if (!constraints_path.empty()) {
        auto extra = constraints_from_json(parse_json(read_text_file(constraints_path)));
        for (const auto& c : extra) validate_constraint(doc.model.graph(), c);
        doc.constraints.insert(doc.constraints.end(), extra.begin(), extra.end());
      }
      auto rep = check_all(doc.model, doc.constraints);
      if (s.json) {
        Json v = Json::array();
        for (const auto& x : rep.violations) v.push_back(Json{{"constraint", x.constraint}, {"detail", x.detail}});
        s.emit("check", Json{{"ok", rep.ok()}, {"constraints", doc.constraints.size()}, {"violations", v}});
      } else {
        out << doc.constraints.size() << " constraints, " << rep.violations.size() << " violations\n";
        for (const auto& x : rep.violations) out << "  " << x.constraint << ": " << x.detail << "\n";
      }
      return rep.ok() ? kExitOk : kExitFailed;
    };
  });

  // sample
  auto* sample = app.add_subcommand("sample", "Draw a constrained model");
  std::string graph_path;
  std::uint64_t seed = 1;
  SampleOptions sopts;
  bool no_positivity = false;
  sample->add_option("-g,--graph", graph_path, "Graph file (variables, edges, optional constraints)")->required();
  sample->add_option("-c,--constraints", constraints_path, "Constraints file");
  sample->add_option("--seed", seed, "Seed")->capture_default_str();
  sample->add_option("--weight-bound", sopts.weight_bound, "Largest integer weight")->capture_default_str();
  sample->add_flag("--no-positivity", no_positivity, "Skip the Pr(V) > 0 check");
  sample->add_option("-o,--out", out_path, "Output model file");
  sample->callback([&] {
    action = [&] {
      auto gj = parse_json(read_text_file(graph_path));
      auto g = graph_from_json(gj);
      std::vector<Constraint> cs;
      if (gj.contains("constraints")) cs = constraints_from_json(gj.at("constraints"));
      if (!constraints_path.empty()) {
        auto extra = constraints_from_json(parse_json(read_text_file(constraints_path)));
        cs.insert(cs.end(), extra.begin(), extra.end());
      }
      for (const auto& c : cs) validate_constraint(g, c);
      sopts.check_positivity = !no_positivity;
      sopts.max_states = s.max_states;
      auto m = sample_constrained(g, cs, seed, sopts);
      s.save(out_path, m, cs);
      if (s.json) s.emit("sample", Json{{"seed", seed}, {"model", model_to_json(m, cs)}});
      return kExitOk;
    };
  });

  // feliminate
  auto* felim = app.add_subcommand("feliminate", "Functional elimination of one variable");
  felim->add_option("-m,--model", model_path, "Model file")->required();
  felim->add_option("--var", var, "Variable to eliminate")->required();
  felim->add_option("--context", context_text, "CFD context; triggers the marginal and CPT checks");
  felim->add_option("-o,--out", out_path, "Output model file");
  felim->callback([&] {
    action = [&] {
      auto doc = s.load(model_path);
      auto reduced = functional_eliminate(doc.model, var);
      int code = kExitOk;
      Json report = Json::object();
      if (felim->count("--context")) {
        auto ctx = Instantiation::parse(context_text);
        ctx.validate(doc.model.graph());
        auto a = verify_feliminate_marginals(doc.model, var, ctx, s.opts());
        auto b = verify_feliminate_cpts(doc.model, var, ctx, s.opts());
        if (!a.ok() || !b.ok()) code = kExitFailed;
        report = Json{{"context", instantiation_to_json(ctx)},
                      {"marginal_checks", a.checked},
                      {"cpt_checks", b.checked},
                      {"cpt_rows_skipped", b.skipped},
                      {"mismatches", a.mismatches}};
        for (const auto& x : b.mismatches) report["mismatches"].push_back(x);
        if (!s.json) {
          out << (code == kExitOk ? "PASS" : "FAIL") << "  eliminate " << var << " under " << ctx.str() << ": "
              << a.checked << " marginals, " << b.checked << " CPT entries checked\n";
          for (const auto& x : report["mismatches"]) out << "  " << x.get<std::string>() << "\n";
        }
      }
      s.save(out_path, reduced, {});
      if (s.json) s.emit("feliminate", Json{{"var", var}, {"verification", report}, {"model", model_to_json(reduced)}});
      return code;
    };
  });

  // extend-state
  auto* extend = app.add_subcommand("extend-state", "Add a state that splits off from an existing one");
  std::string base, eps_text = "1/2";
  extend->add_option("-m,--model", model_path, "Model file")->required();
  extend->add_option("--var", var, "Variable")->required();
  extend->add_option("--base", base, "State the new one copies")->required();
  extend->add_option("--eps", eps_text, "Share of the base mass moved to the new state")->capture_default_str();
  extend->add_option("-o,--out", out_path, "Output model file");
  extend->callback([&] {
    action = [&] {
      auto doc = s.load(model_path);
      auto m = extend_state(doc.model, var, base, parse_rat(eps_text));
      s.save(out_path, m, doc.constraints);
      if (s.json)
        s.emit("extend-state", Json{{"var", var},
                                    {"new_state", m.graph().variable(var).states.back()},
                                    {"model", model_to_json(m, doc.constraints)}});
      return kExitOk;
    };
  });

  // permute
  auto* permute = app.add_subcommand("permute", "Relabel the states of a variable");
  std::string map_text;
  permute->add_option("-m,--model", model_path, "Model file")->required();
  permute->add_option("--var", var, "Variable")->required();
  permute->add_option("--map", map_text, "Bijection, e.g. 0:1,1:0")->required();
  permute->add_option("-o,--out", out_path, "Output model file");
  permute->callback([&] {
    action = [&] {
      auto doc = s.load(model_path);
      auto perm = parse_permutation(map_text);
      auto m = permute_states(doc.model, var, perm);
      std::vector<Constraint> cs;
      for (const auto& c : doc.constraints) cs.push_back(permute_constraint(c, var, perm));
      s.save(out_path, m, cs);
      if (s.json) s.emit("permute", Json{{"var", var}, {"model", model_to_json(m, cs)}});
      return kExitOk;
    };
  });

  // eval-estimand
  auto* eval = app.add_subcommand("eval-estimand", "Evaluate an identification formula on Pr(V)");
  std::string formula_path, formula_text, bind_text;
  eval->add_option("-m,--model", model_path, "Model file")->required();
  auto* fopt = eval->add_option("-e,--estimand", formula_path, "File holding the formula");
  eval->add_option("--expr", formula_text, "Formula text")->excludes(fopt);
  eval->add_option("--bind", bind_text, "Placeholder values, e.g. x=0,y=1");
  eval->callback([&] {
    action = [&] {
      if (formula_path.empty() && formula_text.empty())
        throw Error(Errc::FileFormat, "give the formula with -e FILE or --expr TEXT");
      auto text = formula_path.empty() ? formula_text : read_text_file(formula_path);
      auto e = parse_estimand(text);
      auto b = parse_binding(bind_text);
      for (const auto& p : free_placeholders(e))
        if (!b.count(p)) throw Error(Errc::UnboundPlaceholder, "$" + p + " has no binding (use --bind)");
      auto doc = s.load(model_path);
      auto v = evaluate(e, doc.model, b, s.opts());
      if (s.json) {
        s.emit("eval-estimand", Json{{"estimand", to_string(e)}, {"value", v.str()}, {"warnings", e.warnings}});
      } else {
        for (const auto& w : e.warnings) err << "note: " << w << "\n";
        out << show(v) << "\n";
      }
      return kExitOk;
    };
  });

  // verify-pair
  auto* vpair = app.add_subcommand("verify-pair", "Verify a certificate pair");
  std::string pair_path;
  vpair->add_option("-p,--pair", pair_path, "Pair file")->required();
  vpair->callback([&] {
    action = [&] {
      auto p = pair_from_json(parse_json(read_text_file(pair_path)));
      auto r = verify_pair(p, s.opts());
      if (s.json) {
        out << dump_json(pair_report_to_json(r));
      } else {
        print_pair_report(out, p.label, r);
        out << "  observed distribution Pr(V) under model_a:\n";
        std::ostringstream table;
        print_dist(table, r.observed_a);
        std::istringstream lines(table.str());
        for (std::string line; std::getline(lines, line);) out << "    " << line << "\n";
      }
      return r.pass ? kExitOk : kExitFailed;
    };
  });

  // gallery
  auto* gallery = app.add_subcommand("gallery", "Built-in certificate fixtures");
  gallery->require_subcommand(1);
  std::string fixture_id, dir, export_dir;
  FixtureOptions fopts;
  auto fixtures = [&]() -> std::vector<Fixture> {
    std::vector<Fixture> all = dir.empty() ? builtin_fixtures() : load_fixture_dir(dir);
    if (fixture_id.empty()) return all;
    for (auto& f : all)
      if (f.id == fixture_id) return {f};
    throw Error(Errc::FixtureLoadError, "no fixture named '" + fixture_id + "'");
  };

  auto* glist = gallery->add_subcommand("list", "List fixtures");
  glist->add_option("--dir", dir, "Load fixtures from this directory instead of the built-in set");
  glist->callback([&] {
    action = [&] {
      auto all = fixtures();
      if (s.json) {
        Json arr = Json::array();
        for (const auto& f : all)
          arr.push_back(Json{{"id", f.id}, {"pairs", f.pairs.size()}, {"estimands", f.estimands.size()},
                             {"eliminations", f.eliminations.size()}, {"extensions", f.extensions.size()},
                             {"notes", f.notes}});
        s.emit("gallery-list", Json{{"fixtures", arr}});
      } else {
        for (const auto& f : all)
          out << std::left << std::setw(24) << f.id << f.pairs.size() << " pairs, " << f.estimands.size()
              << " estimands, " << f.eliminations.size() << " eliminations, " << f.extensions.size()
              << " extensions\n";
      }
      return kExitOk;
    };
  });

  auto* gverify = gallery->add_subcommand("verify", "Verify fixtures");
  gverify->add_option("--id", fixture_id, "Only this fixture");
  gverify->add_option("--samples", fopts.samples, "Sampled models per check")->capture_default_str();
  gverify->add_option("--seed", fopts.seed, "First seed")->capture_default_str();
  gverify->add_option("--dir", dir, "Load fixtures from this directory instead of the built-in set");
  gverify->callback([&] {
    action = [&] {
      fopts.inference = s.opts();
      bool ok = true;
      Json reports = Json::array();
      for (const auto& f : fixtures()) {
        auto r = verify_fixture(f, fopts);
        ok = ok && r.pass;
        if (s.json) reports.push_back(fixture_report_to_json(r));
        else print_fixture_report(out, f, r);
      }
      if (s.json) s.emit("gallery-verify", Json{{"pass", ok}, {"samples", fopts.samples}, {"fixtures", reports}});
      return ok ? kExitOk : kExitFailed;
    };
  });

  auto* gexport = gallery->add_subcommand("export", "Write the built-in fixtures as JSON files");
  gexport->add_option("--out", export_dir, "Root directory")->required();
  gexport->callback([&] {
    action = [&] {
      for (const auto& f : fixtures()) {
        export_fixture(f, export_dir);
        if (!s.json) out << "wrote " << (std::filesystem::path(export_dir) / f.id).string() << "\n";
      }
      if (s.json) s.emit("gallery-export", Json{{"root", export_dir}, {"fixtures", builtin_fixtures().size()}});
      return kExitOk;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    return action ? action() : kExitInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    if (s.json) s.emit("error", Json{{"error", errc_name(e.code())}, {"message", e.what()}});
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    if (s.json) s.emit("error", Json{{"error", "Internal"}, {"message", e.what()}});
    return kExitInput;
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"stateid"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace stateid
