// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "crdra/types.hpp"

#include <cstdint>
#include <random>

namespace crdra {

/// Draws one network realization at transmit dimension `dim`.
///
/// Every channel entry is an independent circularly-symmetric complex
/// Gaussian with the variance configured in `fading` (direct, cross-link and
/// SU-to-PU channels each have their own variance). The draw depends only on
/// (topology, fading.seed, dim), so regenerating is bit-identical. Weights are
/// initialized to 1 for every user.
NetworkInstance generate_instance(const Topology& topology, const FadingProcess& fading, std::size_t dim = 0);

/// Matrix of i.i.d. CN(0, variance) entries.
Matrix complex_gaussian(Index rows, Index cols, double variance, std::mt19937_64& rng);

/// Engine seeded from (seed, stream) through std::seed_seq.
std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t stream);

}  // namespace crdra
