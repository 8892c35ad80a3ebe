#pragma once

#include <cstddef>
#include <vector>

namespace walshcs {

// Coefficient levels M = (0, 2^{J0+1}, ..., 2^{J0+r}) and sample levels
// N = (0, 2^{J0+1}, ..., 2^{J0+r-1}, 2^{J0+r+q}). Level k (1-based) covers
// the half-open ranges [M_{k-1}, M_k) and [N_{k-1}, N_k).
struct LevelStructure {
    int J0 = 0;
    int r = 0;
    int q = 0;
    std::vector<std::size_t> M;
    std::vector<std::size_t> N;

    static LevelStructure make(int J0, int r, int q);
    // Levels from explicit boundary vectors (used by custom experiments).
    static LevelStructure from_bounds(std::vector<std::size_t> M, std::vector<std::size_t> N);

    std::size_t Mr() const { return M.back(); }
    std::size_t Nr() const { return N.back(); }
    std::size_t coeff_level_size(int k) const { return M[k] - M[k - 1]; }
    std::size_t sample_level_size(int k) const { return N[k] - N[k - 1]; }
    // 1-based level containing coefficient j / sample i.
    int coeff_level(std::size_t j) const;
    int sample_level(std::size_t i) const;
};

}  // namespace walshcs
