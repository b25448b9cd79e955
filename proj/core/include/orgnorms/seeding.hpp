#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace orgnorms {

using Seed = std::uint64_t;
using Engine = std::mt19937_64;

// SplitMix64 finalizer.
Seed mix64(Seed x) noexcept;

// Order-sensitive hash of a seed and a list of coordinates. Used for every
// derived stream (scenario, run, landscape, agent) so that a stream depends
// only on its coordinates and never on scheduling or iteration order.
Seed derive_seed(Seed base, std::initializer_list<std::uint64_t> coords) noexcept;

// Bit pattern of a double, for hashing real-valued coordinates.
std::uint64_t double_bits(double v) noexcept;

// Stream tags.
inline constexpr std::uint64_t kTagLandscape = 0x4c414e44;  // "LAND"
inline constexpr std::uint64_t kTagInitial = 0x494e4954;    // "INIT"
inline constexpr std::uint64_t kTagAgent = 0x4147454e;      // "AGEN"
inline constexpr std::uint64_t kTagRun = 0x52554e5f;        // "RUN_"
inline constexpr std::uint64_t kTagScenario = 0x5343454e;   // "SCEN"
inline constexpr std::uint64_t kTagPaired = 0x50414952;     // "PAIR"

}  // namespace orgnorms
