#include "kernels/enumerate.hpp"

#include <omp.h>

namespace stateid::kernels {

namespace {

std::uint64_t checked_size(const Cbn& model, std::uint64_t max_states) {
  auto total = model.graph().state_space(max_states);
  if (total > max_states)
    throw Error(Errc::StateSpaceTooLarge,
                "more than " + std::to_string(max_states) + " joint instantiations");
  return total;
}

// Assigns variables in topological order so each CPT factor joins the
// running product as soon as its parents are fixed; zero branches are pruned
// (their entries stay 0).
void walk(const Cbn& model, std::size_t depth, std::vector<std::size_t>& states, const Rat& acc,
          std::vector<Rat>& out) {
  const auto& g = model.graph();
  if (depth == g.size()) {
    std::size_t index = 0;
    for (std::size_t v = 0; v < g.size(); ++v) index = index * g.variable(v).card() + states[v];
    out[index] = acc;
    return;
  }
  const std::size_t v = g.topological_order()[depth];
  for (std::size_t s = 0; s < g.variable(v).card(); ++s) {
    states[v] = s;
    Rat next = acc * model.entry(v, states);
    if (next.is_zero()) continue;
    walk(model, depth + 1, states, next, out);
  }
}

}  // namespace

std::vector<Rat> enumerate_joint_serial(const Cbn& model, std::uint64_t max_states) {
  const auto total = checked_size(model, max_states);
  const auto& g = model.graph();
  std::vector<Rat> out(total);
  std::vector<std::size_t> states(g.size(), 0);
  walk(model, 0, states, Rat(1), out);
  return out;
}

std::vector<Rat> enumerate_joint_parallel(const Cbn& model, std::uint64_t max_states) {
  const auto total = checked_size(model, max_states);
  const auto& g = model.graph();
  const std::size_t n = g.size();
  std::vector<std::size_t> cards(n);
  for (std::size_t v = 0; v < n; ++v) cards[v] = g.variable(v).card();

  std::vector<Rat> out(total);
  const auto count = static_cast<std::int64_t>(total);
#pragma omp parallel
  {
    std::vector<std::size_t> states(n);
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < count; ++i) {
      auto rest = static_cast<std::uint64_t>(i);
      for (std::size_t v = n; v-- > 0;) {
        states[v] = rest % cards[v];
        rest /= cards[v];
      }
      Rat p(1);
      for (std::size_t v = 0; v < n && !p.is_zero(); ++v) p *= model.entry(v, states);
      out[static_cast<std::size_t>(i)] = std::move(p);
    }
  }
  return out;
}

}  // namespace stateid::kernels
