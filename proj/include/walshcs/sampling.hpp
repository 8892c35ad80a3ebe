#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "walshcs/levels.hpp"

namespace walshcs {

struct SamplingScheme {
    LevelStructure levels;
    std::vector<std::size_t> m;                    // per-level counts
    std::vector<std::vector<std::size_t>> omega;   // per-level sorted 0-based rows
    std::uint64_t seed = 0;

    std::size_t total() const;
    // Sorted union of all levels.
    std::vector<std::size_t> indices() const;
};

struct SparsityProfile {
    std::vector<std::size_t> s;
    std::size_t total() const;
};

// Per level, a partial Fisher-Yates shuffle of [N_{k-1}, N_k) driven by one
// SplitMix64 stream seeded with `seed`, levels consumed in increasing order.
SamplingScheme draw_scheme(const LevelStructure& levels, const std::vector<std::size_t>& m, std::uint64_t seed);

// Rebuilds a scheme from explicit indices (levels recomputed).
SamplingScheme scheme_from_indices(const LevelStructure& levels, std::vector<std::size_t> indices,
                                   std::uint64_t seed = 0);

enum class AllocationWeights { Theorem, Uniform };
enum class LeftoverRule { LargestRemainder, LowLevelsFirst, HighLevelsFirst };

struct AllocationOptions {
    AllocationWeights weights = AllocationWeights::Theorem;
    bool full_first = false;
    LeftoverRule leftover = LeftoverRule::LargestRemainder;
    double epsilon = 0.5;  // failure parameter; a common factor, kept for validation only
};

// Theorem weight w_k = sum_l 2^{-|k-l|/2} s_l.
std::vector<double> theorem_weights(const SparsityProfile& profile);

std::vector<std::size_t> allocate_budget(const SparsityProfile& profile, const LevelStructure& levels,
                                         std::size_t budget, const AllocationOptions& opt = {});

// i -> N_r - 1 - i on the union, levels recomputed.
SamplingScheme flip_pattern(const SamplingScheme& scheme);

void write_scheme(const SamplingScheme& scheme, std::ostream& os);
SamplingScheme read_scheme(std::istream& is);

}  // namespace walshcs
