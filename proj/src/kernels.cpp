#include "walshcs/kernels.hpp"

#include <algorithm>

#include <omp.h>

#include "walshcs/error.hpp"

namespace walshcs {

void CsrMatrix::push(std::uint32_t col, double v) {
    idx.push_back(col);
    val.push_back(v);
}

void CsrMatrix::end_row() {
    ptr.push_back(val.size());
    ++rows;
}

CsrMatrix CsrMatrix::transpose() const {
    CsrMatrix t;
    t.rows = cols;
    t.cols = rows;
    t.ptr.assign(cols + 1, 0);
    for (auto c : idx) ++t.ptr[c + 1];
    for (std::size_t c = 0; c < cols; ++c) t.ptr[c + 1] += t.ptr[c];
    t.idx.resize(idx.size());
    t.val.resize(val.size());
    std::vector<std::size_t> fill(t.ptr.begin(), t.ptr.end() - 1);
    // Row-major traversal keeps column indices sorted within each output row.
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t k = ptr[r]; k < ptr[r + 1]; ++k) {
            std::size_t pos = fill[idx[k]]++;
            t.idx[pos] = static_cast<std::uint32_t>(r);
            t.val[pos] = val[k];
        }
    }
    return t;
}

namespace kernels {

namespace {
constexpr std::size_t kParallelThreshold = 1u << 12;
constexpr std::size_t kTile = 1u << 12;

bool single_thread() { return omp_get_max_threads() == 1; }

void check_pow2(std::size_t n) {
    if (n == 0 || (n & (n - 1)) != 0) throw DomainError("fwht: length must be a power of two");
}

void check_spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y) {
    if (x.size() != a.cols || y.size() != a.rows) throw DomainError("spmv: dimension mismatch");
}
}  // namespace

namespace serial {

void fwht(std::span<double> v) {
    const std::size_t n = v.size();
    check_pow2(n);
    for (std::size_t h = 1; h < n; h <<= 1) {
        for (std::size_t i = 0; i < n; i += 2 * h) {
            for (std::size_t j = i; j < i + h; ++j) {
                double a = v[j], b = v[j + h];
                v[j] = a + b;
                v[j + h] = a - b;
            }
        }
    }
}

void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y) {
    check_spmv(a, x, y);
    for (std::size_t r = 0; r < a.rows; ++r) {
        double s = 0.0;
        for (std::size_t k = a.ptr[r]; k < a.ptr[r + 1]; ++k) s += a.val[k] * x[a.idx[k]];
        y[r] = s;
    }
}

void fill_columns(double* data, std::size_t rows, std::size_t cols,
                  const std::function<std::vector<double>(std::size_t)>& column) {
    for (std::size_t j = 0; j < cols; ++j) {
        std::vector<double> c = column(j);
        for (std::size_t i = 0; i < rows; ++i) data[i * cols + j] = c[i];
    }
}

}  // namespace serial

namespace parallel {

void fwht(std::span<double> v) {
    const std::size_t n = v.size();
    check_pow2(n);
    double* d = v.data();
    // Stages with 2h <= tile run tile by tile; each tile stays in cache.
    const std::size_t tile = std::min(n, kTile);
    const std::ptrdiff_t tiles = static_cast<std::ptrdiff_t>(n / tile);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t t = 0; t < tiles; ++t)
        serial::fwht(std::span<double>(d + static_cast<std::size_t>(t) * tile, tile));
    // Remaining stages: chunks of `tile` butterflies never straddle a block.
    const std::ptrdiff_t chunks = static_cast<std::ptrdiff_t>(n / 2 / tile);
    for (std::size_t h = tile; h < n; h <<= 1) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t c = 0; c < chunks; ++c) {
            const std::size_t k0 = static_cast<std::size_t>(c) * tile;
            const std::size_t j0 = (k0 / h) * 2 * h + k0 % h;
            for (std::size_t j = j0; j < j0 + tile; ++j) {
                double a = d[j], b = d[j + h];
                d[j] = a + b;
                d[j + h] = a - b;
            }
        }
    }
}

void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y) {
    check_spmv(a, x, y);
    const std::ptrdiff_t rows = static_cast<std::ptrdiff_t>(a.rows);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t r = 0; r < rows; ++r) {
        double s = 0.0;
        for (std::size_t k = a.ptr[r]; k < a.ptr[r + 1]; ++k) s += a.val[k] * x[a.idx[k]];
        y[r] = s;
    }
}

void fill_columns(double* data, std::size_t rows, std::size_t cols,
                  const std::function<std::vector<double>(std::size_t)>& column) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(cols);
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t j = 0; j < n; ++j) {
        std::vector<double> c = column(static_cast<std::size_t>(j));
        for (std::size_t i = 0; i < rows; ++i) data[i * cols + j] = c[i];
    }
}

}  // namespace parallel

void fwht(std::span<double> v) {
    if (v.size() >= kParallelThreshold && !single_thread())
        parallel::fwht(v);
    else
        serial::fwht(v);
}

void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y) {
    if (a.rows >= kParallelThreshold && !single_thread())
        parallel::spmv(a, x, y);
    else
        serial::spmv(a, x, y);
}

}  // namespace kernels
}  // namespace walshcs
