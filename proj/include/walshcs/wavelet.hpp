#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "walshcs/kernels.hpp"

namespace walshcs {

// Numeric description of a boundary-corrected Daubechies basis. Positions of
// boundary filters are counted from the boundary: the left bank acts on fine
// indices 0, 1, ...; the right bank on fine indices n-1, n-2, ....
struct FilterBank {
    int p = 1;
    std::vector<double> h;  // interior scaling filter, length 2p
    std::vector<double> g;  // interior wavelet filter g_a = (-1)^a h_{2p-1-a}
    // Edge scaling / wavelet refinement rows, p rows of length 3p-1.
    std::vector<std::vector<double>> left_scaling, right_scaling;
    std::vector<std::vector<double>> left_wavelet, right_wavelet;
    // Edge functions as combinations of translates phi(x-k), k = -p+1..p-1,
    // restricted to the half line (right side in reflected coordinates).
    std::vector<std::vector<double>> left_edge, right_edge;
    // Unit-cell averages of phi on [t, t+1), t = -p+1..p-1.
    std::vector<double> cell_avg;
    // Unit-cell averages of the edge functions on cells 0..2p-2 from the boundary.
    std::vector<std::vector<double>> left_cell_avg, right_cell_avg;
    // Level j with 2p <= 2^j < 4p, where left and right edge wavelets interact
    // and the wavelet rows are level specific (2^j rows of length 2^{j+1}).
    int small_level = -1;
    std::vector<std::vector<double>> small_level_wavelets;

    int edge_count() const { return p == 1 ? 0 : p; }
};

// Builds the filter bank from the interior filter (binomial edge functions,
// Gram-Schmidt from the boundary inward, orthogonal complement for edge
// wavelets). Computation runs in quad precision.
FilterBank construct_filter_bank(int p);

// Smallest admissible coarsest level: 2^J0 >= 2p - 1.
int min_level(int p);

enum class BasisKind { Scaling, Wavelet };

// Immutable, cheaply copyable handle; level matrices are built lazily and
// cached behind a mutex.
class WaveletBasis {
public:
    WaveletBasis(int p, int J0);
    static WaveletBasis from_filters(FilterBank bank, int J0);

    int order() const;
    int J0() const;
    int edge_count() const;
    const FilterBank& filters() const;

    // Orthogonal level-j analysis map: V_{j+1} coefficients (2^{j+1}) to
    // [V_j scaling (2^j) | W_j wavelets (2^j)].
    std::shared_ptr<const CsrMatrix> analysis(int j) const;
    std::shared_ptr<const CsrMatrix> synthesis(int j) const;
    // V_Q coefficients to exact cell averages on the 2^Q grid, and transpose.
    std::shared_ptr<const CsrMatrix> cell_average(int Q) const;
    std::shared_ptr<const CsrMatrix> cell_average_adjoint(int Q) const;

private:
    struct Impl;
    explicit WaveletBasis(std::shared_ptr<Impl> impl);
    std::shared_ptr<Impl> impl_;
};

// Coefficient layout for level range [R, Q): [V_R scaling | W_R | ... | W_{Q-1}].
// Shorter inputs are zero padded to 2^Q.
std::vector<double> wavelet_synthesis(const WaveletBasis& b, std::span<const double> coeffs, int R, int Q);
// Adjoint (and inverse) of wavelet_synthesis; returns the first `keep` coefficients.
std::vector<double> wavelet_analysis(const WaveletBasis& b, std::span<const double> scaling, int R,
                                     std::size_t keep = 0);

// Discrete transform of grid values, treated as 2^{Q/2} times V_Q coefficients.
std::vector<double> dwt_forward(std::span<const double> grid, const WaveletBasis& b, int R);
std::vector<double> dwt_inverse(std::span<const double> coeffs, const WaveletBasis& b, int R);

// Exact cell averages on the 2^Q grid of sum_k c_k phi^b_{Q,k}.
std::vector<double> cell_averages(const WaveletBasis& b, std::span<const double> scaling_Q);

// Cell averages of phi^b_{j,n} (or psi^b_{j,n}) on the 2^Q grid.
std::vector<double> cascade_tabulate(const WaveletBasis& b, int j, std::size_t n, int Q,
                                     BasisKind kind = BasisKind::Scaling);

// Cell averages of the mother scaling function on cells of width 2^-s
// covering its support [-p+1, p]; entry m is the cell starting at -p+1 + m 2^-s.
std::vector<double> mother_cell_averages(const FilterBank& bank, int s);

void export_filters_csv(const FilterBank& bank, std::ostream& os);
FilterBank import_filters_csv(std::istream& is);

}  // namespace walshcs
