#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "walshcs/levels.hpp"
#include "walshcs/wavelet.hpp"

namespace walshcs {

struct MeasurementVector {
    std::vector<std::size_t> indices;
    std::vector<double> values;
    double delta = 0.0;
};

// Row-major dense block.
struct DenseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
};

constexpr std::size_t kSectionGuard = std::size_t{1} << 12;

// Change of basis U with u_{i,j} = <Wal(i, .), phi_j>, rows in Kaczmarz
// order, columns ordered scaling block first then wavelet levels. Inner
// products are exact integrals against exact cell averages of phi_j on the
// 2^Q grid, so every row i < 2^Q is exact up to rounding.
class CobOperator {
public:
    // Q < 0 selects max(log2 N_r, log2 M_r + 3).
    CobOperator(WaveletBasis basis, LevelStructure levels, int Q = -1);

    const WaveletBasis& basis() const { return basis_; }
    const LevelStructure& levels() const { return levels_; }
    int Q() const { return Q_; }
    std::size_t grid_size() const { return std::size_t{1} << Q_; }
    std::size_t max_columns() const { return grid_size(); }

    double entry(std::size_t i, std::size_t j) const;

    // P_Omega U P_L x with L = x.size().
    std::vector<double> apply(std::span<const double> x, std::span<const std::size_t> omega) const;
    // (P_Omega U P_L)^* y, returns L coefficients.
    std::vector<double> apply_adjoint(std::span<const double> y, std::span<const std::size_t> omega,
                                      std::size_t L) const;

    // All 2^Q Walsh coefficients of column j (rows 0..2^Q-1).
    std::vector<double> column(std::size_t j) const;
    // Exact cell averages on the 2^Q grid of the expansion x.
    std::vector<double> synthesize(std::span<const double> x) const;
    // Columns 0..cols-1, rows 0..rows-1; rows, cols <= 2^12 and rows <= 2^Q.
    DenseMatrix section_dense(std::size_t rows, std::size_t cols) const;
    // Cached section of rows [0, 2^Q) by columns [0, cols), used by the analysis module.
    std::shared_ptr<const DenseMatrix> tall_section(std::size_t cols) const;

private:
    void check_omega(std::span<const std::size_t> omega) const;

    WaveletBasis basis_;
    LevelStructure levels_;
    int Q_;
    int R0_;  // coarsest level of the coefficient layout (J0)
    struct Cache;
    std::shared_ptr<Cache> cache_;
};

void write_section_csv(const DenseMatrix& m, std::ostream& os);
// 8-bit grayscale P5 heatmap of |m|, clipped at the given magnitude percentile.
void write_section_pgm(const DenseMatrix& m, std::ostream& os, double clip_percentile = 99.0);

}  // namespace walshcs
