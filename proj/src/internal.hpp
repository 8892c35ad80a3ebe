#pragma once

#include <quadmath.h>

#include <vector>

namespace walshcs::detail {

using qreal = __float128;

std::vector<qreal> daubechies_filter(int p);

// Solves a x = b in place by Gaussian elimination with partial pivoting.
// a is row-major n x n; b is overwritten with the solution.
void solve_dense(std::vector<qreal>& a, std::vector<qreal>& b, int n);

inline qreal qabs(qreal x) { return x < 0 ? -x : x; }

}  // namespace walshcs::detail
