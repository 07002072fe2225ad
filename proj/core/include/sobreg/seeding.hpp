#pragma once

#include <cstdint>
#include <string_view>

namespace sobreg {

/// Derives an independent stream seed from a master seed and a cell key.
/// Adding new cells never perturbs the stream of any existing cell, so
/// experiment tables stay reproducible when a grid is extended.
std::uint64_t derive_seed(std::uint64_t master_seed, std::string_view cell_key);

/// splitmix64 mixing step; also usable as a cheap stateless PRNG.
std::uint64_t splitmix64(std::uint64_t& state);

/// Uniform double in [0, 1) at a fixed index of the stream identified by
/// `seed`. Index-addressed so extending a sequence keeps its prefix.
double uniform_at(std::uint64_t seed, std::uint64_t index);

}  // namespace sobreg
