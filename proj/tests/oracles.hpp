#pragma once

// Independent reference computations used by the unit and acceptance tests.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "walshcs/cob_operator.hpp"

namespace oracle {

// Walsh functions on the 2^J grid built as products of Rademacher functions
// (Paley order) and then sorted by their number of sign changes, which is the
// sequency (Kaczmarz) order. Row n holds Wal(n, j 2^-J), j = 0..2^J-1.
std::vector<std::vector<int>> walsh_by_sign_changes(int J);

// O(N^2) transform: out[n] = 2^-J sum_j v[j] Wal(n, j 2^-J).
std::vector<double> naive_sequency_wht(const std::vector<double>& v);

// min ||x||_1 s.t. A x = g by a dense two-phase simplex on x = u - v.
// Returns the optimal objective (NaN when infeasible).
double basis_pursuit_lp(const walshcs::DenseMatrix& a, const std::vector<double>& g,
                        std::vector<double>* x = nullptr);

// min ||x||_1 s.t. ||A x - g||_2 <= delta (0 < delta < ||g||) by following the
// lasso homotopy path until the residual norm reaches delta.
double bpdn_homotopy(const walshcs::DenseMatrix& a, const std::vector<double>& g, double delta,
                     std::vector<double>* x = nullptr);

// Exhaustive max over all sign vertices and supports, no Gray code.
double relative_sparsity_brute(const walshcs::DenseMatrix& band, const std::vector<std::size_t>& M,
                               const std::vector<std::size_t>& s);

// min over (s,M)-sparse eta of ||x - eta||_1 by enumerating supports.
double sigma_brute(const std::vector<double>& x, const std::vector<std::size_t>& M, const std::vector<std::size_t>& s);

}  // namespace oracle
