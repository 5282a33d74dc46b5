#pragma once

#include <cstdint>
#include <vector>

#include "stateid/model.hpp"

namespace stateid::kernels {

// Both kernels return the full joint laid out over graph variable order
// (first variable most significant). They throw StateSpaceTooLarge past
// `max_states`.

/// Depth-first walk with a running product. Single-threaded reference.
std::vector<Rat> enumerate_joint_serial(const Cbn& model, std::uint64_t max_states);

/// One independent product per linear index, split across OpenMP threads.
std::vector<Rat> enumerate_joint_parallel(const Cbn& model, std::uint64_t max_states);

}  // namespace stateid::kernels
