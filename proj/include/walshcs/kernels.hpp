#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace walshcs {

// Compressed sparse row matrix. All linear maps of the library (level
// transforms, cell-average kernels) are stored this way.
struct CsrMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::size_t> ptr{0};
    std::vector<std::uint32_t> idx;
    std::vector<double> val;

    void push(std::uint32_t col, double v);
    void end_row();
    CsrMatrix transpose() const;
    std::size_t nnz() const { return val.size(); }
};

namespace kernels {

// Reference implementations.
namespace serial {
// Natural-order (Hadamard) unnormalized butterfly, in place.
void fwht(std::span<double> v);
void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y);
// data is row-major rows x cols; column(j) returns at least `rows` values.
void fill_columns(double* data, std::size_t rows, std::size_t cols,
                  const std::function<std::vector<double>(std::size_t)>& column);
}  // namespace serial

// OpenMP implementations; results are bitwise identical to serial ones.
namespace parallel {
void fwht(std::span<double> v);
void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y);
void fill_columns(double* data, std::size_t rows, std::size_t cols,
                  const std::function<std::vector<double>(std::size_t)>& column);
}  // namespace parallel

// Dispatch used by the library: parallel above a size threshold.
void fwht(std::span<double> v);
void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y);

}  // namespace kernels
}  // namespace walshcs
