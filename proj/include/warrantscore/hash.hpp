#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace warrantscore {

// FNV-1a, 64 bit. Used for prompt content addressing, cache keys and the
// deterministic mock backend; std::hash is not stable across runs or
// platforms, so it must never leak into any persisted or asserted value.
std::uint64_t fnv1a64(std::string_view data);

// Lowercase 16-digit hex of fnv1a64.
std::string fnv1a64_hex(std::string_view data);

// splitmix64 step; advances `state` and returns the next value. The basis of
// every seeded pseudo-random stream in the project (schedule-independent:
// each consumer derives its own state).
std::uint64_t splitmix64(std::uint64_t& state);

// Uniform value in [0, 1) from one splitmix64 step.
double splitmix_unit(std::uint64_t& state);

} // namespace warrantscore
