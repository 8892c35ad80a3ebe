#include "walshcs/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "walshcs/error.hpp"
#include "walshcs/rng.hpp"

namespace walshcs {

double SplitMix64::normal() {
    double u1 = 1.0 - uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::size_t SamplingScheme::total() const { return std::accumulate(m.begin(), m.end(), std::size_t{0}); }

std::vector<std::size_t> SamplingScheme::indices() const {
    std::vector<std::size_t> all;
    for (const auto& o : omega) all.insert(all.end(), o.begin(), o.end());
    std::sort(all.begin(), all.end());
    return all;
}

std::size_t SparsityProfile::total() const { return std::accumulate(s.begin(), s.end(), std::size_t{0}); }

SamplingScheme draw_scheme(const LevelStructure& levels, const std::vector<std::size_t>& m, std::uint64_t seed) {
    if (m.size() != static_cast<std::size_t>(levels.r)) throw DomainError("draw_scheme: need one count per level");
    SamplingScheme sc;
    sc.levels = levels;
    sc.m = m;
    sc.seed = seed;
    SplitMix64 rng(seed);
    for (int k = 1; k <= levels.r; ++k) {
        const std::size_t lo = levels.N[k - 1], size = levels.sample_level_size(k), mk = m[k - 1];
        if (mk > size) throw DomainError("draw_scheme: m_" + std::to_string(k) + " exceeds the level size");
        std::vector<std::size_t> a(size);
        std::iota(a.begin(), a.end(), lo);
        for (std::size_t t = 0; t < mk; ++t) {
            std::size_t j = t + static_cast<std::size_t>(rng.bounded(size - t));
            std::swap(a[t], a[j]);
        }
        a.resize(mk);
        std::sort(a.begin(), a.end());
        sc.omega.push_back(std::move(a));
    }
    return sc;
}

SamplingScheme scheme_from_indices(const LevelStructure& levels, std::vector<std::size_t> indices,
                                   std::uint64_t seed) {
    std::sort(indices.begin(), indices.end());
    if (std::adjacent_find(indices.begin(), indices.end()) != indices.end())
        throw DomainError("scheme: duplicate sample index");
    SamplingScheme sc;
    sc.levels = levels;
    sc.seed = seed;
    sc.omega.assign(levels.r, {});
    for (auto i : indices) sc.omega[levels.sample_level(i) - 1].push_back(i);
    for (const auto& o : sc.omega) sc.m.push_back(o.size());
    return sc;
}

std::vector<double> theorem_weights(const SparsityProfile& profile) {
    const std::size_t r = profile.s.size();
    std::vector<double> w(r, 0.0);
    for (std::size_t k = 0; k < r; ++k)
        for (std::size_t l = 0; l < r; ++l) {
            double d = std::abs(static_cast<double>(k) - static_cast<double>(l));
            w[k] += std::pow(2.0, -0.5 * d) * static_cast<double>(profile.s[l]);
        }
    return w;
}

namespace {

// Distributes `budget` over the levels in `active` proportionally to w,
// with per-level minimum 1 and capacity caps, then rounds.
void proportional_fill(std::vector<std::size_t>& m, const std::vector<std::size_t>& active,
                       const std::vector<double>& w, const std::vector<std::size_t>& cap, std::size_t budget,
                       LeftoverRule rule) {
    std::vector<bool> fixed(m.size(), false);
    std::vector<double> x(m.size(), 0.0);
    for (;;) {
        std::size_t fixed_sum = 0;
        double wsum = 0.0;
        for (auto k : active) {
            if (fixed[k])
                fixed_sum += m[k];
            else
                wsum += w[k];
        }
        if (fixed_sum > budget) throw DomainError("allocate_budget: budget too small for the level minimums");
        const double rest = static_cast<double>(budget - fixed_sum);
        bool changed = false;
        for (auto k : active) {
            if (fixed[k]) continue;
            x[k] = wsum > 0.0 ? rest * w[k] / wsum : 0.0;
        }
        // Clip over-capacity levels first, then raise levels below the minimum.
        for (auto k : active)
            if (!fixed[k] && x[k] >= static_cast<double>(cap[k])) {
                m[k] = cap[k];
                fixed[k] = changed = true;
            }
        if (!changed)
            for (auto k : active)
                if (!fixed[k] && x[k] < 1.0) {
                    m[k] = 1;
                    fixed[k] = changed = true;
                }
        if (!changed) break;
    }
    std::size_t used = 0;
    std::vector<std::size_t> open;
    for (auto k : active) {
        if (!fixed[k]) {
            m[k] = static_cast<std::size_t>(std::floor(x[k]));
            open.push_back(k);
        }
        used += m[k];
    }
    if (used > budget) throw NumericalError("allocate_budget: rounding overflow");
    std::size_t left = budget - used;
    std::vector<std::size_t> order = open;
    if (rule == LeftoverRule::LargestRemainder) {
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return (x[a] - std::floor(x[a])) > (x[b] - std::floor(x[b]));
        });
    } else if (rule == LeftoverRule::HighLevelsFirst) {
        std::reverse(order.begin(), order.end());
    }
    while (left > 0) {
        bool progress = false;
        for (auto k : order) {
            if (left == 0) break;
            if (m[k] < cap[k]) {
                ++m[k];
                --left;
                progress = true;
                if (rule == LeftoverRule::LargestRemainder) continue;
            }
        }
        if (!progress) throw DomainError("allocate_budget: budget exceeds level capacity");
    }
}

}  // namespace

std::vector<std::size_t> allocate_budget(const SparsityProfile& profile, const LevelStructure& levels,
                                         std::size_t budget, const AllocationOptions& opt) {
    const std::size_t r = static_cast<std::size_t>(levels.r);
    if (opt.epsilon <= 0.0 || opt.epsilon >= 1.0) throw DomainError("allocate_budget: epsilon must lie in (0,1)");
    if (budget > levels.Nr()) throw DomainError("allocate_budget: budget exceeds N_r");
    if (opt.weights == AllocationWeights::Theorem && profile.s.size() != r)
        throw DomainError("allocate_budget: sparsity profile has wrong number of levels");
    for (std::size_t k = 0; k < profile.s.size() && k < r; ++k)
        if (profile.s[k] > levels.coeff_level_size(static_cast<int>(k + 1)))
            throw DomainError("allocate_budget: s_k exceeds the coefficient level size");

    std::vector<std::size_t> cap(r), m(r, 0);
    for (std::size_t k = 0; k < r; ++k) cap[k] = levels.sample_level_size(static_cast<int>(k + 1));

    std::vector<double> w(r, 1.0);
    if (opt.weights == AllocationWeights::Theorem) {
        w = theorem_weights(profile);
        if (std::all_of(w.begin(), w.end(), [](double v) { return v == 0.0; })) w.assign(r, 1.0);
    }

    std::size_t rest = budget;
    std::size_t first = 0;
    if (opt.full_first) {
        m[0] = std::min(cap[0], budget);
        rest -= m[0];
        first = 1;
    }
    std::vector<std::size_t> active;
    for (std::size_t k = first; k < r; ++k)
        if (w[k] > 0.0) active.push_back(k);
    if (active.empty()) {
        if (rest > 0) throw DomainError("allocate_budget: no level can take the remaining budget");
        return m;
    }
    if (rest < active.size()) throw DomainError("allocate_budget: infeasible, budget smaller than the number of levels");
    proportional_fill(m, active, w, cap, rest, opt.leftover);
    return m;
}

SamplingScheme flip_pattern(const SamplingScheme& scheme) {
    const std::size_t nr = scheme.levels.Nr();
    std::vector<std::size_t> flipped;
    for (auto i : scheme.indices()) flipped.push_back(nr - 1 - i);
    return scheme_from_indices(scheme.levels, std::move(flipped), scheme.seed);
}

namespace {
std::string join(const std::vector<std::size_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}
std::vector<std::size_t> split(const std::string& s) {
    std::vector<std::size_t> v;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) v.push_back(std::stoull(tok));
    return v;
}
}  // namespace

void write_scheme(const SamplingScheme& scheme, std::ostream& os) {
    os << "# J0=" << scheme.levels.J0 << " q=" << scheme.levels.q << " N=" << join(scheme.levels.N) << " M=" << join(scheme.levels.M) << " m=" << join(scheme.m)
       << " seed=" << scheme.seed << '\n';
    for (auto i : scheme.indices()) os << i << '\n';
}

SamplingScheme read_scheme(std::istream& is) {
    std::string header;
    if (!std::getline(is, header) || header.rfind("# ", 0) != 0) throw DomainError("scheme file: missing header");
    std::stringstream hs(header.substr(2));
    std::string field;
    std::vector<std::size_t> N, M;
    std::uint64_t seed = 0;
    int J0 = 0, q = 0;
    try {
        while (hs >> field) {
            auto eq = field.find('=');
            if (eq == std::string::npos) throw DomainError("scheme file: bad header field " + field);
            std::string key = field.substr(0, eq), val = field.substr(eq + 1);
            if (key == "N")
                N = split(val);
            else if (key == "M")
                M = split(val);
            else if (key == "seed")
                seed = std::stoull(val);
            else if (key == "J0")
                J0 = std::stoi(val);
            else if (key == "q")
                q = std::stoi(val);
        }
    } catch (const std::logic_error& e) {
        throw DomainError(std::string("scheme file: bad header: ") + e.what());
    }
    LevelStructure ls = LevelStructure::from_bounds(M, N);
    ls.J0 = J0;
    ls.q = q;
    std::vector<std::size_t> idx;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        try {
            idx.push_back(std::stoull(line));
        } catch (const std::logic_error&) {
            throw DomainError("scheme file: bad index line '" + line + "'");
        }
    }
    return scheme_from_indices(ls, std::move(idx), seed);
}

}  // namespace walshcs
