#include "walshcs/wavelet.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <string>

#include "walshcs/error.hpp"
#include "walshcs/walsh.hpp"

namespace walshcs {

namespace {

std::shared_ptr<const FilterBank> cached_bank(int p) {
    static std::mutex mu;
    static std::map<int, std::shared_ptr<const FilterBank>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(p);
    if (it != cache.end()) return it->second;
    auto fb = std::make_shared<const FilterBank>(construct_filter_bank(p));
    cache.emplace(p, fb);
    return fb;
}

void validate_bank(const FilterBank& fb) {
    const int p = fb.p;
    min_level(p);
    auto bad = [](const char* what) { throw DomainError(std::string("filter bank: malformed ") + what); };
    if (fb.h.size() != static_cast<std::size_t>(2 * p) || fb.g.size() != fb.h.size()) bad("interior filters");
    if (fb.cell_avg.size() != static_cast<std::size_t>(2 * p - 1)) bad("cell averages");
    if (p == 1) return;
    auto rows_ok = [&](const std::vector<std::vector<double>>& m, std::size_t len) {
        if (m.size() != static_cast<std::size_t>(p)) return false;
        for (const auto& r : m)
            if (r.size() != len) return false;
        return true;
    };
    const std::size_t len = 3 * p - 1, w = 2 * p - 1;
    if (!rows_ok(fb.left_scaling, len) || !rows_ok(fb.right_scaling, len)) bad("edge scaling rows");
    if (!rows_ok(fb.left_wavelet, len) || !rows_ok(fb.right_wavelet, len)) bad("edge wavelet rows");
    if (!rows_ok(fb.left_edge, w) || !rows_ok(fb.right_edge, w)) bad("edge functions");
    if (!rows_ok(fb.left_cell_avg, w) || !rows_ok(fb.right_cell_avg, w)) bad("edge cell averages");
    if (fb.small_level != min_level(p)) bad("small level");
    const std::size_t ns = std::size_t{1} << fb.small_level;
    if (fb.small_level_wavelets.size() != ns) bad("small level rows");
    for (const auto& r : fb.small_level_wavelets)
        if (r.size() != 2 * ns) bad("small level rows");
}

void push_nonzero(CsrMatrix& m, std::size_t col, double v) {
    if (v != 0.0) m.push(static_cast<std::uint32_t>(col), v);
}

CsrMatrix build_analysis(const FilterBank& fb, int j) {
    const int p = fb.p, E = fb.edge_count();
    const std::size_t n = std::size_t{1} << j, nf = 2 * n;
    const int len = 3 * p - 1;
    CsrMatrix m;
    m.cols = nf;
    auto edge_or_interior = [&](std::size_t b, const std::vector<std::vector<double>>& lb,
                                const std::vector<std::vector<double>>& rb, const std::vector<double>& f) {
        if (b < static_cast<std::size_t>(E)) {
            for (int t = 0; t < len; ++t) push_nonzero(m, t, lb[b][t]);
        } else if (b >= n - E) {
            const auto& r = rb[n - 1 - b];
            for (int t = len - 1; t >= 0; --t) push_nonzero(m, nf - 1 - t, r[t]);
        } else {
            for (int a = 0; a < 2 * p; ++a) push_nonzero(m, 2 * b + a - (p - 1), f[a]);
        }
        m.end_row();
    };
    for (std::size_t b = 0; b < n; ++b) edge_or_interior(b, fb.left_scaling, fb.right_scaling, fb.h);
    const bool small = (E > 0 && j == fb.small_level);
    for (std::size_t b = 0; b < n; ++b) {
        if (small) {
            const auto& r = fb.small_level_wavelets[b];
            for (std::size_t t = 0; t < nf; ++t) push_nonzero(m, t, r[t]);
            m.end_row();
        } else {
            edge_or_interior(b, fb.left_wavelet, fb.right_wavelet, fb.g);
        }
    }
    return m;
}

double half_power_of_two(int Q) { return std::pow(2.0, 0.5 * Q); }

CsrMatrix build_cell_average_adjoint(const FilterBank& fb, int Q) {
    const int p = fb.p, E = fb.edge_count();
    const std::size_t n = std::size_t{1} << Q;
    const double s = half_power_of_two(Q);
    CsrMatrix kt;
    kt.cols = n;
    for (std::size_t k = 0; k < n; ++k) {
        if (k < static_cast<std::size_t>(E)) {
            for (int m = 0; m < 2 * p - 1; ++m) push_nonzero(kt, m, s * fb.left_cell_avg[k][m]);
        } else if (k >= n - E) {
            const auto& r = fb.right_cell_avg[n - 1 - k];
            for (int m = 2 * p - 2; m >= 0; --m) push_nonzero(kt, n - 1 - m, s * r[m]);
        } else {
            for (int t = -p + 1; t <= p - 1; ++t) push_nonzero(kt, k + t, s * fb.cell_avg[t + p - 1]);
        }
        kt.end_row();
    }
    return kt;
}

}  // namespace

struct WaveletBasis::Impl {
    std::shared_ptr<const FilterBank> fb;
    int J0 = 0;
    std::mutex mu;
    std::map<int, std::shared_ptr<const CsrMatrix>> ana, syn, cav, cavt;
};

WaveletBasis::WaveletBasis(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}

WaveletBasis::WaveletBasis(int p, int J0) {
    int jmin = min_level(p);
    if (J0 < jmin) throw DomainError("build_basis: J0 too small, need 2^J0 >= 2p-1");
    if (J0 > 30) throw SizeGuardError("build_basis: J0 too large");
    impl_ = std::make_shared<Impl>();
    impl_->fb = cached_bank(p);
    impl_->J0 = J0;
}

WaveletBasis WaveletBasis::from_filters(FilterBank bank, int J0) {
    validate_bank(bank);
    if (J0 < min_level(bank.p)) throw DomainError("build_basis: J0 too small, need 2^J0 >= 2p-1");
    auto impl = std::make_shared<Impl>();
    impl->fb = std::make_shared<const FilterBank>(std::move(bank));
    impl->J0 = J0;
    return WaveletBasis(impl);
}

int WaveletBasis::order() const { return impl_->fb->p; }
int WaveletBasis::J0() const { return impl_->J0; }
int WaveletBasis::edge_count() const { return impl_->fb->edge_count(); }
const FilterBank& WaveletBasis::filters() const { return *impl_->fb; }

namespace {
void check_level(const FilterBank& fb, int j) {
    if (j < min_level(fb.p)) throw DomainError("level below the minimal boundary level");
    if (j > 28) throw SizeGuardError("level too large");
}
}  // namespace

std::shared_ptr<const CsrMatrix> WaveletBasis::analysis(int j) const {
    check_level(*impl_->fb, j);
    std::lock_guard<std::mutex> lock(impl_->mu);
    auto& slot = impl_->ana[j];
    if (!slot) slot = std::make_shared<const CsrMatrix>(build_analysis(*impl_->fb, j));
    return slot;
}

std::shared_ptr<const CsrMatrix> WaveletBasis::synthesis(int j) const {
    auto a = analysis(j);
    std::lock_guard<std::mutex> lock(impl_->mu);
    auto& slot = impl_->syn[j];
    if (!slot) slot = std::make_shared<const CsrMatrix>(a->transpose());
    return slot;
}

std::shared_ptr<const CsrMatrix> WaveletBasis::cell_average_adjoint(int Q) const {
    check_level(*impl_->fb, Q);
    std::lock_guard<std::mutex> lock(impl_->mu);
    auto& slot = impl_->cavt[Q];
    if (!slot) slot = std::make_shared<const CsrMatrix>(build_cell_average_adjoint(*impl_->fb, Q));
    return slot;
}

std::shared_ptr<const CsrMatrix> WaveletBasis::cell_average(int Q) const {
    auto kt = cell_average_adjoint(Q);
    std::lock_guard<std::mutex> lock(impl_->mu);
    auto& slot = impl_->cav[Q];
    if (!slot) slot = std::make_shared<const CsrMatrix>(kt->transpose());
    return slot;
}

std::vector<double> wavelet_synthesis(const WaveletBasis& b, std::span<const double> coeffs, int R, int Q) {
    if (Q < R) throw DomainError("wavelet_synthesis: need Q >= R");
    check_level(b.filters(), R);
    const std::size_t n = std::size_t{1} << Q;
    if (coeffs.size() > n) throw DomainError("wavelet_synthesis: more coefficients than 2^Q");
    std::vector<double> work(n, 0.0), tmp(n);
    std::copy(coeffs.begin(), coeffs.end(), work.begin());
    for (int j = R; j < Q; ++j) {
        const std::size_t m = std::size_t{2} << j;
        auto s = b.synthesis(j);
        kernels::spmv(*s, std::span<const double>(work.data(), m), std::span<double>(tmp.data(), m));
        std::copy(tmp.begin(), tmp.begin() + m, work.begin());
    }
    return work;
}

std::vector<double> wavelet_analysis(const WaveletBasis& b, std::span<const double> scaling, int R,
                                     std::size_t keep) {
    const unsigned Q = log2_exact(scaling.size());
    if (static_cast<int>(Q) < R) throw DomainError("wavelet_analysis: need Q >= R");
    check_level(b.filters(), R);
    std::vector<double> work(scaling.begin(), scaling.end()), tmp(work.size());
    for (int j = static_cast<int>(Q) - 1; j >= R; --j) {
        const std::size_t m = std::size_t{2} << j;
        auto a = b.analysis(j);
        kernels::spmv(*a, std::span<const double>(work.data(), m), std::span<double>(tmp.data(), m));
        std::copy(tmp.begin(), tmp.begin() + m, work.begin());
    }
    if (keep != 0) {
        if (keep > work.size()) throw DomainError("wavelet_analysis: keep exceeds length");
        work.resize(keep);
    }
    return work;
}

std::vector<double> dwt_forward(std::span<const double> grid, const WaveletBasis& b, int R) {
    const unsigned Q = log2_exact(grid.size());
    if (R < b.J0() || static_cast<int>(Q) < R) throw DomainError("dwt_forward: need Q >= R >= J0");
    const double s = 1.0 / half_power_of_two(static_cast<int>(Q));
    std::vector<double> c(grid.begin(), grid.end());
    for (auto& x : c) x *= s;
    return wavelet_analysis(b, c, R);
}

std::vector<double> dwt_inverse(std::span<const double> coeffs, const WaveletBasis& b, int R) {
    const unsigned Q = log2_exact(coeffs.size());
    if (R < b.J0() || static_cast<int>(Q) < R) throw DomainError("dwt_inverse: need Q >= R >= J0");
    std::vector<double> v = wavelet_synthesis(b, coeffs, R, static_cast<int>(Q));
    const double s = half_power_of_two(static_cast<int>(Q));
    for (auto& x : v) x *= s;
    return v;
}

std::vector<double> cell_averages(const WaveletBasis& b, std::span<const double> scaling_Q) {
    const unsigned Q = log2_exact(scaling_Q.size());
    auto k = b.cell_average(static_cast<int>(Q));
    std::vector<double> out(scaling_Q.size());
    kernels::spmv(*k, scaling_Q, out);
    return out;
}

std::vector<double> cascade_tabulate(const WaveletBasis& b, int j, std::size_t n, int Q, BasisKind kind) {
    if (Q < j) throw DomainError("cascade_tabulate: need Q >= j");
    if (kind == BasisKind::Wavelet && Q == j) throw DomainError("cascade_tabulate: wavelets need Q > j");
    if (n >= (std::size_t{1} << j)) throw DomainError("cascade_tabulate: shift index out of range");
    if (Q > 26) throw SizeGuardError("cascade_tabulate: grid too large");
    std::vector<double> c((kind == BasisKind::Scaling ? 1u : 2u) << j, 0.0);
    c[kind == BasisKind::Scaling ? n : (std::size_t{1} << j) + n] = 1.0;
    return cell_averages(b, wavelet_synthesis(b, c, j, Q));
}

std::vector<double> mother_cell_averages(const FilterBank& fb, int s) {
    if (s < 0 || s > 24) throw DomainError("mother_cell_averages: scale out of range");
    const int p = fb.p;
    // cur[m] is the average over cell m of width 2^-level starting at -(p-1).
    std::vector<double> cur = fb.cell_avg;
    const double r2 = std::sqrt(2.0);
    for (int level = 1; level <= s; ++level) {
        const long long cells = static_cast<long long>(2 * p - 1) << level;
        const long long off = static_cast<long long>(p - 1) << level;          // absolute index shift
        const long long prev_off = static_cast<long long>(p - 1) << (level - 1);
        const long long half = 1LL << (level - 1);
        std::vector<double> next(cells, 0.0);
        for (long long m = 0; m < cells; ++m) {
            long long M = m - off;
            double acc = 0.0;
            for (int a = 0; a < 2 * p; ++a) {
                long long src = M - static_cast<long long>(a - p + 1) * half + prev_off;
                if (src >= 0 && src < static_cast<long long>(cur.size())) acc += fb.h[a] * cur[src];
            }
            next[m] = r2 * acc;
        }
        cur.swap(next);
    }
    return cur;
}

void export_filters_csv(const FilterBank& fb, std::ostream& os) {
    os << std::setprecision(17);
    auto row = [&](const std::string& name, std::size_t idx, const std::vector<double>& v) {
        os << name << ',' << idx;
        for (double x : v) os << ',' << x;
        os << '\n';
    };
    auto bank = [&](const std::string& name, const std::vector<std::vector<double>>& m) {
        for (std::size_t i = 0; i < m.size(); ++i) row(name, i, m[i]);
    };
    os << "p,0," << fb.p << '\n';
    os << "small_level,0," << fb.small_level << '\n';
    row("h", 0, fb.h);
    row("g", 0, fb.g);
    row("cell_avg", 0, fb.cell_avg);
    bank("left_scaling", fb.left_scaling);
    bank("right_scaling", fb.right_scaling);
    bank("left_wavelet", fb.left_wavelet);
    bank("right_wavelet", fb.right_wavelet);
    bank("left_edge", fb.left_edge);
    bank("right_edge", fb.right_edge);
    bank("left_cell_avg", fb.left_cell_avg);
    bank("right_cell_avg", fb.right_cell_avg);
    bank("small_level_wavelets", fb.small_level_wavelets);
}

FilterBank import_filters_csv(std::istream& is) {
    FilterBank fb;
    std::map<std::string, std::vector<std::vector<double>>*> banks = {
        {"left_scaling", &fb.left_scaling},   {"right_scaling", &fb.right_scaling},
        {"left_wavelet", &fb.left_wavelet},   {"right_wavelet", &fb.right_wavelet},
        {"left_edge", &fb.left_edge},         {"right_edge", &fb.right_edge},
        {"left_cell_avg", &fb.left_cell_avg}, {"right_cell_avg", &fb.right_cell_avg},
        {"small_level_wavelets", &fb.small_level_wavelets}};
    std::string line;
    bool have_p = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string name, idx, tok;
        std::getline(ss, name, ',');
        std::getline(ss, idx, ',');
        std::vector<double> vals;
        while (std::getline(ss, tok, ',')) {
            try {
                vals.push_back(std::stod(tok));
            } catch (const std::exception&) {
                throw DomainError("filter csv: bad number '" + tok + "'");
            }
        }
        if (name == "p" && vals.size() == 1) {
            fb.p = static_cast<int>(vals[0]);
            have_p = true;
        } else if (name == "small_level" && vals.size() == 1) {
            fb.small_level = static_cast<int>(vals[0]);
        } else if (name == "h") {
            fb.h = vals;
        } else if (name == "g") {
            fb.g = vals;
        } else if (name == "cell_avg") {
            fb.cell_avg = vals;
        } else if (auto it = banks.find(name); it != banks.end()) {
            std::size_t i = std::stoul(idx);
            if (i != it->second->size()) throw DomainError("filter csv: rows out of order for " + name);
            it->second->push_back(vals);
        } else {
            throw DomainError("filter csv: unknown row '" + name + "'");
        }
    }
    if (!have_p) throw DomainError("filter csv: missing order row");
    validate_bank(fb);
    return fb;
}

}  // namespace walshcs
