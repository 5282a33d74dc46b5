#include <algorithm>
#include <numeric>

#include "stateid/gallery.hpp"
#include "stateid/transforms.hpp"

namespace stateid {

namespace {

enum class ExtCase { Unchanged, Scaled, FreshOutcome };

DrillCase extension_case(const CertificatePair& p, const std::string& var, const std::string& base,
                         const Rat& eps, ExtCase kind, const InferenceOptions& opts) {
  const auto& v = p.graph().variable(var);
  auto a = extend_state(p.model_a, var, base, eps);
  auto b = extend_state(p.model_b, var, base, eps);

  auto outcome = p.outcome;
  if (kind == ExtCase::FreshOutcome) outcome.set(var, fresh_state_name(v, base));

  std::string what = kind == ExtCase::Scaled         ? "outcome at base, expect x(1-eps)"
                     : kind == ExtCase::FreshOutcome ? "outcome at fresh state, expect x eps"
                     : !v.observed                   ? "hidden, expect unchanged"
                                                     : "observed, expect unchanged";
  DrillCase c;
  c.label = p.label + ": extend " + var + " at " + base + " (" + what + ")";

  const bool obs_equal = dist_equal(observational(a, opts), observational(b, opts));
  const Rat old_a = causal_effect(p.model_a, p.treatment, p.outcome, opts);
  const Rat old_b = causal_effect(p.model_b, p.treatment, p.outcome, opts);
  const Rat new_a = causal_effect(a, p.treatment, outcome, opts);
  const Rat new_b = causal_effect(b, p.treatment, outcome, opts);

  Rat factor(1);
  if (kind == ExtCase::Scaled) factor = Rat(1) - eps;
  if (kind == ExtCase::FreshOutcome) factor = eps;
  const bool predicted = new_a == old_a * factor && new_b == old_b * factor;
  const bool separation_kept = (new_a != new_b) == (old_a != old_b);

  c.pass = obs_equal && predicted && separation_kept;
  c.detail = "Pr'_x(y): " + new_a.str() + " vs " + new_b.str() + " (before " + old_a.str() + " vs " +
             old_b.str() + ")";
  if (!obs_equal) c.detail += "; observed distributions differ";
  if (!predicted) c.detail += "; effect does not follow the predicted case";
  return c;
}

std::vector<std::size_t> random_permutation(SplitMix64& rng, std::size_t n) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[rng.below(i)]);
  return p;
}

}  // namespace

DrillCase check_extension(const CertificatePair& p, const ExtensionCheck& ext, const InferenceOptions& opts) {
  ExtCase kind = ExtCase::Unchanged;
  if (const auto* y = p.outcome.get(ext.var); y && *y == ext.base) kind = ExtCase::Scaled;
  return extension_case(p, ext.var, ext.base, ext.eps, kind, opts);
}

DrillReport extension_drill(const CertificatePair& p, const Rat& eps, const InferenceOptions& opts) {
  DrillReport r;
  for (const auto& v : p.graph().variables()) {
    const auto* y = p.outcome.get(v.name);
    if (!y) {
      r.cases.push_back(extension_case(p, v.name, v.states.front(), eps, ExtCase::Unchanged, opts));
      continue;
    }
    r.cases.push_back(extension_case(p, v.name, *y, eps, ExtCase::Scaled, opts));
    r.cases.push_back(extension_case(p, v.name, *y, eps, ExtCase::FreshOutcome, opts));
    for (const auto& s : v.states)
      if (s != *y) {
        r.cases.push_back(extension_case(p, v.name, s, eps, ExtCase::Unchanged, opts));
        break;
      }
  }
  return r;
}

DrillReport permutation_drill(const CertificatePair& p, std::uint64_t seed, std::size_t trials,
                              const InferenceOptions& opts) {
  DrillReport r;
  SplitMix64 rng(seed);
  const Rat eff_a = causal_effect(p.model_a, p.treatment, p.outcome, opts);
  const Rat eff_b = causal_effect(p.model_b, p.treatment, p.outcome, opts);
  std::vector<bool> sat_a, sat_b;
  for (const auto& c : p.constraints) {
    sat_a.push_back(check_constraint(p.model_a, c).ok());
    sat_b.push_back(check_constraint(p.model_b, c).ok());
  }

  for (std::size_t t = 0; t < trials; ++t) {
    Cbn a = p.model_a, b = p.model_b;
    auto x = p.treatment, y = p.outcome;
    auto cs = p.constraints;
    std::string shown;
    for (const auto& v : p.graph().variables()) {
      auto idx = random_permutation(rng, v.card());
      StatePermutation perm;
      for (std::size_t s = 0; s < v.card(); ++s) perm[v.states[s]] = v.states[idx[s]];
      a = permute_states(a, v.name, perm);
      b = permute_states(b, v.name, perm);
      x = permute_instantiation(x, v.name, perm);
      y = permute_instantiation(y, v.name, perm);
      for (auto& c : cs) c = permute_constraint(c, v.name, perm);
      if (x.contains(v.name) || y.contains(v.name)) {
        shown += (shown.empty() ? "" : " ") + v.name + ":";
        for (std::size_t s = 0; s < v.card(); ++s) shown += (s ? "," : "") + v.states[idx[s]];
      }
    }

    DrillCase c;
    c.label = p.label + ": permutation " + std::to_string(t + 1);
    const Rat new_a = causal_effect(a, x, y, opts);
    const Rat new_b = causal_effect(b, x, y, opts);
    bool sat_ok = true;
    for (std::size_t k = 0; k < cs.size(); ++k)
      sat_ok = sat_ok && check_constraint(a, cs[k]).ok() == sat_a[k] && check_constraint(b, cs[k]).ok() == sat_b[k];
    c.pass = new_a == eff_a && new_b == eff_b && sat_ok;
    c.detail = "Pr_{" + x.str() + "}(" + y.str() + ") = " + new_a.str() + " vs " + new_b.str() + " [" + shown + "]";
    if (!sat_ok) c.detail += "; constraint satisfaction changed";
    r.cases.push_back(std::move(c));
  }
  return r;
}

}  // namespace stateid
