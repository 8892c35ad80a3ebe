#include "walshcs/cob_operator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <ostream>

#include "walshcs/error.hpp"
#include "walshcs/walsh.hpp"

namespace walshcs {

struct CobOperator::Cache {
    std::mutex mu;
    std::map<std::size_t, std::shared_ptr<const DenseMatrix>> tall;
};

namespace {
int ceil_log2(std::size_t n) {
    int k = 0;
    while ((std::size_t{1} << k) < n) ++k;
    return k;
}
}  // namespace

CobOperator::CobOperator(WaveletBasis basis, LevelStructure levels, int Q)
    : basis_(std::move(basis)), levels_(std::move(levels)), Q_(Q), R0_(basis_.J0()),
      cache_(std::make_shared<Cache>()) {
    if (levels_.J0 != basis_.J0() && levels_.J0 != 0)
        throw DomainError("CobOperator: level structure and basis disagree on J0");
    if (Q_ < 0) Q_ = std::max(ceil_log2(levels_.Nr()), ceil_log2(levels_.Mr()) + 3);
    Q_ = std::max(Q_, std::max(R0_, min_level(basis_.order())));
    if (Q_ > 24) throw SizeGuardError("CobOperator: fine grid exponent too large");
    if ((std::size_t{1} << Q_) < levels_.Nr() || (std::size_t{1} << Q_) < levels_.Mr())
        throw DomainError("CobOperator: need 2^Q >= N_r and 2^Q >= M_r");
}

void CobOperator::check_omega(std::span<const std::size_t> omega) const {
    for (auto i : omega)
        if (i >= grid_size()) throw DomainError("CobOperator: sample index beyond 2^Q");
}

std::vector<double> CobOperator::synthesize(std::span<const double> x) const {
    if (x.size() > grid_size()) throw DomainError("CobOperator: more coefficients than 2^Q");
    return cell_averages(basis_, wavelet_synthesis(basis_, x, R0_, Q_));
}

std::vector<double> CobOperator::apply(std::span<const double> x, std::span<const std::size_t> omega) const {
    check_omega(omega);
    std::vector<double> w = synthesize(x);
    fwht_sequency_inplace(w);
    std::vector<double> out(omega.size());
    for (std::size_t t = 0; t < omega.size(); ++t) out[t] = w[omega[t]];
    return out;
}

std::vector<double> CobOperator::apply_adjoint(std::span<const double> y, std::span<const std::size_t> omega,
                                               std::size_t L) const {
    check_omega(omega);
    if (y.size() != omega.size()) throw DomainError("apply_adjoint: |y| != |Omega|");
    if (L > grid_size()) throw DomainError("apply_adjoint: L exceeds 2^Q");
    std::vector<double> c(grid_size(), 0.0);
    for (std::size_t t = 0; t < omega.size(); ++t) c[omega[t]] += y[t];
    std::vector<double> v = fwht_sequency_adjoint(c);
    auto kt = basis_.cell_average_adjoint(Q_);
    std::vector<double> s(grid_size());
    kernels::spmv(*kt, v, s);
    return wavelet_analysis(basis_, s, R0_, L == 0 ? grid_size() : L);
}

std::vector<double> CobOperator::column(std::size_t j) const {
    if (j >= grid_size()) throw DomainError("CobOperator: coefficient index beyond 2^Q");
    std::vector<double> e(j + 1, 0.0);
    e[j] = 1.0;
    std::vector<double> w = synthesize(e);
    fwht_sequency_inplace(w);
    return w;
}

double CobOperator::entry(std::size_t i, std::size_t j) const {
    if (i >= grid_size()) throw DomainError("CobOperator: sample index beyond 2^Q");
    return column(j)[i];
}

DenseMatrix CobOperator::section_dense(std::size_t rows, std::size_t cols) const {
    if (rows > kSectionGuard || cols > kSectionGuard)
        throw SizeGuardError("section_dense: sections are limited to 4096 x 4096");
    if (rows > grid_size() || cols > grid_size()) throw DomainError("section_dense: section exceeds 2^Q");
    DenseMatrix m{rows, cols, std::vector<double>(rows * cols)};
    kernels::parallel::fill_columns(m.data.data(), rows, cols, [this](std::size_t j) { return column(j); });
    return m;
}

std::shared_ptr<const DenseMatrix> CobOperator::tall_section(std::size_t cols) const {
    if (cols > grid_size()) throw DomainError("tall_section: too many columns");
    if (cols * grid_size() > (std::size_t{1} << 25)) throw SizeGuardError("tall_section: section too large");
    std::lock_guard<std::mutex> lock(cache_->mu);
    auto& slot = cache_->tall[cols];
    if (!slot) {
        auto m = std::make_shared<DenseMatrix>(DenseMatrix{grid_size(), cols, std::vector<double>(grid_size() * cols)});
        kernels::parallel::fill_columns(m->data.data(), grid_size(), cols,
                                        [this](std::size_t j) { return column(j); });
        slot = m;
    }
    return slot;
}

void write_section_csv(const DenseMatrix& m, std::ostream& os) {
    os.precision(17);
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) {
            if (j) os << ',';
            os << m(i, j);
        }
        os << '\n';
    }
}

void write_section_pgm(const DenseMatrix& m, std::ostream& os, double clip_percentile) {
    if (clip_percentile <= 0.0 || clip_percentile > 100.0) throw DomainError("pgm: percentile must lie in (0,100]");
    std::vector<double> mags(m.data.size());
    for (std::size_t k = 0; k < mags.size(); ++k) mags[k] = std::abs(m.data[k]);
    double clip = 0.0;
    if (!mags.empty()) {
        std::vector<double> sorted = mags;
        std::size_t pos = static_cast<std::size_t>(std::ceil(clip_percentile / 100.0 * sorted.size()));
        pos = std::min(sorted.size() - 1, pos == 0 ? 0 : pos - 1);
        std::nth_element(sorted.begin(), sorted.begin() + pos, sorted.end());
        clip = sorted[pos];
    }
    os << "P5\n" << m.cols << ' ' << m.rows << "\n255\n";
    for (double v : mags) {
        double t = clip > 0.0 ? std::min(v / clip, 1.0) : 0.0;
        os.put(static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * t))));
    }
}

}  // namespace walshcs
