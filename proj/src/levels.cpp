#include "walshcs/levels.hpp"

#include <algorithm>
#include <string>

#include "walshcs/error.hpp"

namespace walshcs {

LevelStructure LevelStructure::make(int J0, int r, int q) {
    if (J0 < 0 || r < 1 || q < 0) throw DomainError("LevelStructure: need J0 >= 0, r >= 1, q >= 0");
    if (J0 + r + q > 40) throw SizeGuardError("LevelStructure: exponent too large");
    LevelStructure ls;
    ls.J0 = J0;
    ls.r = r;
    ls.q = q;
    ls.M.push_back(0);
    ls.N.push_back(0);
    for (int k = 1; k <= r; ++k) {
        ls.M.push_back(std::size_t{1} << (J0 + k));
        ls.N.push_back(std::size_t{1} << (J0 + k));
    }
    ls.N.back() = std::size_t{1} << (J0 + r + q);
    return ls;
}

LevelStructure LevelStructure::from_bounds(std::vector<std::size_t> M, std::vector<std::size_t> N) {
    if (M.size() < 2 || M.size() != N.size() || M[0] != 0 || N[0] != 0)
        throw DomainError("LevelStructure: bounds must start at 0 and have equal length");
    for (std::size_t k = 1; k < M.size(); ++k)
        if (M[k] <= M[k - 1] || N[k] <= N[k - 1])
            throw DomainError("LevelStructure: bounds must be strictly increasing");
    if (N.back() < M.back()) throw DomainError("LevelStructure: need N_r >= M_r");
    LevelStructure ls;
    ls.r = static_cast<int>(M.size()) - 1;
    ls.M = std::move(M);
    ls.N = std::move(N);
    return ls;
}

namespace {
int find_level(const std::vector<std::size_t>& b, std::size_t v, const char* what) {
    if (v >= b.back()) throw DomainError(std::string(what) + " index beyond last level");
    auto it = std::upper_bound(b.begin(), b.end(), v);
    return static_cast<int>(it - b.begin());
}
}  // namespace

int LevelStructure::coeff_level(std::size_t j) const { return find_level(M, j, "coefficient"); }
int LevelStructure::sample_level(std::size_t i) const { return find_level(N, i, "sample"); }

}  // namespace walshcs
