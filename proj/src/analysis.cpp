#include "walshcs/analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <string>

#include "walshcs/error.hpp"
#include "walshcs/rng.hpp"

namespace walshcs {

namespace {

double sq(double v) { return v * v; }

double pow2(double e) { return std::exp2(e); }

// Calls f(j, column) for every column j < 2^Q.
void scan_columns(const CobOperator& op, std::size_t cols,
                  const std::function<void(std::size_t, const std::vector<double>&)>& f) {
    for (std::size_t j = 0; j < cols; ++j) f(j, op.column(j));
}

Eigen::MatrixXd block_of(const DenseMatrix& tall, std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) {
    Eigen::MatrixXd b(r1 - r0, c1 - c0);
    for (std::size_t i = r0; i < r1; ++i)
        for (std::size_t j = c0; j < c1; ++j) b(i - r0, j - c0) = tall(i, j);
    return b;
}

double power_iteration(const Eigen::MatrixXd& g, int& iterations) {
    const auto n = g.rows();
    iterations = 0;
    if (n == 0 || g.cwiseAbs().maxCoeff() == 0.0) return 0.0;
    SplitMix64 rng(0x5eed);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = 0.5 + rng.uniform();
    v.normalize();
    double lambda = 0.0;
    for (iterations = 1; iterations <= 10000; ++iterations) {
        Eigen::VectorXd w = g * v;
        double nw = w.norm();
        if (nw == 0.0) return 0.0;
        double next = v.dot(w);
        v = w / nw;
        if (std::abs(next - lambda) <= 1e-8 * std::abs(next)) return next;
        lambda = next;
    }
    return lambda;
}

}  // namespace

double coherence(const DenseMatrix& section) {
    if (section.data.empty()) throw DomainError("coherence: empty section");
    double m = 0.0;
    for (double v : section.data) m = std::max(m, v * v);
    return m;
}

double CoherenceReport::shape_ratio(int k, int l) const {
    return at(k, l) * pow2(J0 + k - 1) * pow2(0.5 * std::abs(k - l));
}

double CoherenceReport::block_ratio(int k, int l) const {
    return block_at(k, l) / (pow2(-J0 - k) * pow2(-std::abs(l - k)));
}

CoherenceReport local_coherence(const CobOperator& op) {
    const auto& lv = op.levels();
    const int r = lv.r;
    const std::size_t Nr = lv.Nr(), Mr = lv.Mr(), mlast = lv.M[r - 1];
    CoherenceReport rep;
    rep.r = r;
    rep.J0 = lv.J0;
    rep.block_mu.assign(r * r, 0.0);
    rep.row_mu.assign(r, 0.0);
    rep.mu_inf.assign(r, 0.0);
    std::vector<int> row_level(Nr);
    for (std::size_t i = 0; i < Nr; ++i) row_level[i] = lv.sample_level(i) - 1;
    std::vector<double> energy(Nr, 0.0);
    scan_columns(op, op.grid_size(), [&](std::size_t j, const std::vector<double>& col) {
        const int l = j < Mr ? lv.coeff_level(j) - 1 : -1;
        for (std::size_t i = 0; i < Nr; ++i) {
            const double v = col[i] * col[i];
            const int k = row_level[i];
            energy[i] += v;
            rep.row_mu[k] = std::max(rep.row_mu[k], v);
            if (l >= 0) rep.block_mu[k * r + l] = std::max(rep.block_mu[k * r + l], v);
            if (j >= mlast) rep.mu_inf[k] = std::max(rep.mu_inf[k], v);
        }
    });
    for (double e : energy) rep.row_residual = std::max(rep.row_residual, 1.0 - e);
    rep.row_residual = std::max(rep.row_residual, 0.0);
    rep.mu.assign(r * r, 0.0);
    for (int k = 1; k <= r; ++k) {
        rep.mu_inf[k - 1] = std::sqrt(rep.mu_inf[k - 1] * rep.row_mu[k - 1]);
        for (int l = 1; l <= r; ++l) {
            const std::size_t idx = (k - 1) * r + (l - 1);
            rep.mu[idx] = std::sqrt(rep.block_mu[idx] * rep.row_mu[k - 1]);
            rep.global = std::max(rep.global, rep.block_mu[idx]);
            rep.shape_constant = std::max(rep.shape_constant, rep.shape_ratio(k, l));
            rep.c_mu = std::max(rep.c_mu, rep.block_ratio(k, l));
        }
    }
    return rep;
}

double local_coherence(const CobOperator& op, int k, int l) {
    const int r = op.levels().r;
    if (k < 1 || k > r || l < 1 || l > r) throw DomainError("local_coherence: level out of range");
    return local_coherence(op).at(k, l);
}

double local_coherence_inf(const CobOperator& op, int k) {
    if (k < 1 || k > op.levels().r) throw DomainError("local_coherence_inf: level out of range");
    return local_coherence(op).mu_inf[k - 1];
}

AnalyticConstants analytic_constants(int p, int s) {
    WaveletBasis b(p, std::max(min_level(p), 0));
    const FilterBank& bank = b.filters();
    const std::vector<double> a = mother_cell_averages(bank, s);
    const long long n = static_cast<long long>(a.size());
    const long long step = 1LL << s;
    std::vector<double> psi(a.size(), 0.0);
    for (long long m = 0; m < n; ++m) {
        double acc = 0.0;
        for (std::size_t t = 0; t < bank.g.size(); ++t) {
            const long long base = 2 * m - static_cast<long long>(t) * step;
            for (long long d = 0; d < 2; ++d)
                if (base + d >= 0 && base + d < n) acc += bank.g[t] * 0.5 * a[base + d];
        }
        psi[m] = std::sqrt(2.0) * acc;
    }
    auto max_slope = [&](const std::vector<double>& v) {
        double m = 0.0;
        for (std::size_t i = 1; i < v.size(); ++i) m = std::max(m, std::abs(v[i] - v[i - 1]) * static_cast<double>(step));
        return m;
    };
    AnalyticConstants c;
    c.c_phi = max_slope(a);
    c.c_psi = max_slope(psi);
    c.c_phi_psi = std::max(c.c_phi, c.c_psi);
    c.c_mu = sq(2.0 * p * c.c_phi_psi);
    c.c_rs = sq(16.0 * p - 8.0) * sq(c.c_phi);
    return c;
}

double geometric_constant(int r) {
    double best = 0.0;
    for (int k = 1; k <= r; ++k) {
        double s = 0.0;
        for (int l = 1; l <= r; ++l) s += pow2(-0.5 * std::abs(k - l));
        best = std::max(best, s);
    }
    return best;
}

double fitted_block_constant(const CobOperator& op) {
    const auto& lv = op.levels();
    auto tall = op.tall_section(lv.Mr());
    double c = 0.0;
    for (int k = 1; k <= lv.r; ++k)
        for (int l = 1; l <= lv.r; ++l) {
            Eigen::MatrixXd b = block_of(*tall, lv.N[k - 1], lv.N[k], lv.M[l - 1], lv.M[l]);
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(b);
            const double n2 = sq(svd.singularValues()(0));
            c = std::max(c, n2 / pow2(1.0 - std::abs(k - l)));
        }
    return c;
}

std::vector<double> relative_sparsity_exact(const CobOperator& op, const SparsityProfile& prof, std::size_t M_cap) {
    const auto& lv = op.levels();
    const int r = lv.r;
    if (prof.s.size() != static_cast<std::size_t>(r)) throw DomainError("relative_sparsity: need one s_l per level (" + std::to_string(r) + " levels)");
    if (lv.Mr() > M_cap)
        throw DomainError("relative_sparsity_exact: M_r = " + std::to_string(lv.Mr()) + " exceeds the cap " +
                          std::to_string(M_cap) + "; use the bound from relative_sparsity");
    double count = 1.0;
    for (int l = 1; l <= r; ++l) {
        const std::size_t sz = lv.coeff_level_size(l), sl = prof.s[l - 1];
        if (sl > sz) throw DomainError("relative_sparsity: s_l exceeds the level size");
        double c = 1.0;
        for (std::size_t t = 0; t < sl; ++t) c = c * static_cast<double>(sz - t) / static_cast<double>(t + 1);
        count *= c;
    }
    const std::size_t s = prof.total();
    if (s > 0) count *= pow2(static_cast<double>(s) - 1.0);
    if (count > 5e8) throw SizeGuardError("relative_sparsity_exact: enumeration too large");

    auto tall = op.tall_section(lv.Mr());
    std::vector<double> S(r, 0.0);
    if (s == 0) return S;

    // Enumerate supports as one combination per level.
    std::vector<std::vector<std::size_t>> choice(r);
    for (int l = 0; l < r; ++l)
        for (std::size_t t = 0; t < prof.s[l]; ++t) choice[l].push_back(lv.M[l] + t);
    auto advance = [&](int l) {
        auto& c = choice[l];
        const std::size_t sl = c.size(), hi = lv.M[l + 1];
        for (std::size_t t = sl; t-- > 0;) {
            if (c[t] + (sl - t) < hi) {
                ++c[t];
                for (std::size_t u = t + 1; u < sl; ++u) c[u] = c[u - 1] + 1;
                return true;
            }
        }
        for (std::size_t t = 0; t < sl; ++t) c[t] = lv.M[l] + t;
        return false;
    };

    for (int k = 1; k <= r; ++k) {
        const Eigen::MatrixXd b = block_of(*tall, lv.N[k - 1], lv.N[k], 0, lv.Mr());
        const Eigen::MatrixXd gram = b.transpose() * b;
        double best = 0.0;
        std::vector<std::size_t> supp(s);
        Eigen::MatrixXd g(s, s);
        for (;;) {
            std::size_t pos = 0;
            for (const auto& c : choice)
                for (auto j : c) supp[pos++] = j;
            for (std::size_t a = 0; a < s; ++a)
                for (std::size_t c = 0; c < s; ++c) g(a, c) = gram(supp[a], supp[c]);
            // Gray-code walk over sign vectors with eta_0 fixed to +1.
            Eigen::VectorXd eta = Eigen::VectorXd::Ones(s);
            Eigen::VectorXd w = g * eta;
            double val = eta.dot(w);
            best = std::max(best, val);
            const std::uint64_t total = std::uint64_t{1} << (s - 1);
            for (std::uint64_t step = 1; step < total; ++step) {
                const std::size_t t = 1 + static_cast<std::size_t>(__builtin_ctzll(step));
                val += -4.0 * eta(t) * w(t) + 4.0 * g(t, t);
                w -= 2.0 * eta(t) * g.col(t);
                eta(t) = -eta(t);
                best = std::max(best, val);
            }
            int l = 0;
            while (l < r && !advance(l)) ++l;
            if (l == r) break;
        }
        S[k - 1] = best;
    }
    return S;
}

SparsityReport relative_sparsity(const CobOperator& op, const SparsityProfile& prof, std::size_t M_cap) {
    const auto& lv = op.levels();
    const int r = lv.r;
    if (prof.s.size() != static_cast<std::size_t>(r)) throw DomainError("relative_sparsity: need one s_l per level (" + std::to_string(r) + " levels)");
    SparsityReport rep;
    rep.c_geo = geometric_constant(r);
    rep.c_max = fitted_block_constant(op);
    for (int k = 1; k <= r; ++k) {
        double w = 0.0;
        for (int l = 1; l <= r; ++l) w += pow2(-0.5 * std::abs(k - l)) * static_cast<double>(prof.s[l - 1]);
        rep.bound.push_back(2.0 * rep.c_geo * rep.c_max * w);
    }
    if (lv.Mr() <= M_cap) rep.S = relative_sparsity_exact(op, prof, M_cap);
    return rep;
}

TailNorm tail_norm(const CobOperator& op, std::size_t N, std::size_t M) {
    const std::size_t n = op.grid_size();
    if (N < M) throw DomainError("tail_norm: need N >= M");
    if (N > n || M > n) throw DomainError("tail_norm: N and M must not exceed 2^Q");
    Eigen::MatrixXd c(n - N, M);
    double deficit = 0.0;
    for (std::size_t j = 0; j < M; ++j) {
        const auto col = op.column(j);
        double e = 0.0;
        for (std::size_t i = 0; i < n; ++i) e += col[i] * col[i];
        deficit += std::max(0.0, 1.0 - e);
        for (std::size_t i = N; i < n; ++i) c(i - N, j) = col[i];
    }
    TailNorm t;
    const Eigen::MatrixXd g = c.transpose() * c;
    t.value = std::sqrt(std::max(0.0, power_iteration(g, t.iterations)));
    t.residual = std::sqrt(deficit);
    t.upper = std::sqrt(sq(t.value) + sq(t.residual));
    return t;
}

BalancingReport balancing_check(const CobOperator& op, std::size_t N, std::size_t M, double K, std::size_t s) {
    const std::size_t n = op.grid_size();
    if (N > n || M > n) throw DomainError("balancing_check: N and M must not exceed 2^Q");
    if (K < 1.0 || s == 0) throw DomainError("balancing_check: need K >= 1 and s >= 1");
    BalancingReport rep;
    rep.N = N;
    rep.M = M;
    rep.K = K;
    rep.s = s;
    Eigen::MatrixXd b(N, M);
    std::vector<double> energy(N, 0.0);
    scan_columns(op, M, [&](std::size_t j, const std::vector<double>& col) {
        for (std::size_t i = 0; i < N; ++i) b(i, j) = col[i];
    });
    const Eigen::MatrixXd g = b.transpose() * b - Eigen::MatrixXd::Identity(M, M);
    rep.first = g.cwiseAbs().rowwise().sum().maxCoeff();
    Eigen::VectorXd a(N);
    scan_columns(op, n, [&](std::size_t j, const std::vector<double>& col) {
        for (std::size_t i = 0; i < N; ++i) energy[i] += col[i] * col[i];
        if (j < M) return;
        for (std::size_t i = 0; i < N; ++i) a(i) = col[i];
        rep.second = std::max(rep.second, (b.transpose() * a).cwiseAbs().sum());
    });
    double deficit = 0.0;
    for (double e : energy) deficit += std::max(0.0, 1.0 - e);
    rep.second_residual = std::sqrt(deficit) * b.colwise().norm().sum();
    rep.first_threshold = 0.125 / std::sqrt(std::log(4.0 * std::sqrt(static_cast<double>(s)) * K * static_cast<double>(M)));
    rep.passed = rep.first <= rep.first_threshold && rep.second <= rep.second_threshold;
    return rep;
}

MTilde m_tilde(const CobOperator& op, std::size_t N, double K, std::size_t s, double c_mu) {
    const std::size_t n = op.grid_size();
    if (N > n) throw DomainError("m_tilde: N exceeds 2^Q");
    if (K <= 0.0 || s == 0) throw DomainError("m_tilde: need K > 0 and s >= 1");
    MTilde out;
    out.threshold = 1.0 / (32.0 * K * std::sqrt(static_cast<double>(s)));
    std::vector<double> norms(n), energy(N, 0.0);
    scan_columns(op, n, [&](std::size_t j, const std::vector<double>& col) {
        double e = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            e += col[i] * col[i];
            energy[i] += col[i] * col[i];
        }
        norms[j] = std::sqrt(e);
    });
    double deficit = 0.0;
    for (double e : energy) deficit += std::max(0.0, 1.0 - e);
    out.residual = std::sqrt(deficit);
    if (norms.back() > out.threshold)
        throw NumericalError("m_tilde: column norms of P_N U stay above " + std::to_string(out.threshold) +
                             " up to 2^Q = " + std::to_string(n) + "; increase Q");
    std::size_t i = n;
    while (i > 0 && norms[i - 1] <= out.threshold) --i;
    out.value = i;
    out.bound = c_mu * std::ceil(static_cast<double>(N) * 1024.0 * K * K * static_cast<double>(s));
    return out;
}

double sigma_sM(std::span<const double> x, const std::vector<std::size_t>& M, const SparsityProfile& prof) {
    if (M.size() != prof.s.size() + 1 || M.front() != 0) throw DomainError("sigma_sM: level bounds do not match s");
    double total = 0.0;
    for (std::size_t l = 0; l + 1 < M.size(); ++l) {
        std::vector<double> mags;
        for (std::size_t j = M[l]; j < M[l + 1] && j < x.size(); ++j) mags.push_back(std::abs(x[j]));
        std::sort(mags.begin(), mags.end(), std::greater<>());
        for (std::size_t t = std::min(prof.s[l], mags.size()); t < mags.size(); ++t) total += mags[t];
    }
    for (std::size_t j = M.back(); j < x.size(); ++j) total += std::abs(x[j]);
    return total;
}

void write_coherence_csv(const CoherenceReport& rep, std::ostream& os) {
    os.precision(17);
    os << "k,l,mu,block_mu,bound,ratio\n";
    for (int k = 1; k <= rep.r; ++k) {
        for (int l = 1; l <= rep.r; ++l) {
            const double bound = pow2(-rep.J0 - k) * pow2(-std::abs(l - k));
            os << k << ',' << l << ',' << rep.at(k, l) << ',' << rep.block_at(k, l) << ',' << bound << ','
               << rep.block_ratio(k, l) << '\n';
        }
        os << k << ",inf," << rep.mu_inf[k - 1] << ",,,\n";
    }
}

void write_sparsity_csv(const SparsityReport& rep, const SparsityProfile& s, std::ostream& os) {
    os.precision(17);
    os << "k,s,S_exact,bound,ratio\n";
    for (std::size_t k = 0; k < rep.bound.size(); ++k) {
        os << k + 1 << ',' << s.s[k] << ',';
        if (!rep.S.empty()) os << rep.S[k];
        os << ',' << rep.bound[k] << ',';
        if (!rep.S.empty() && rep.bound[k] > 0) os << rep.S[k] / rep.bound[k];
        os << '\n';
    }
}

}  // namespace walshcs
