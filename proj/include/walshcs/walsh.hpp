#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace walshcs {

enum class Ordering { Kaczmarz, Paley, Kronecker };

// x = num * 2^-scale in [0, 1).
struct DyadicPoint {
    std::uint64_t num = 0;
    unsigned scale = 0;

    DyadicPoint() = default;
    DyadicPoint(std::uint64_t numerator, unsigned scale_);

    // Bit of weight 2^-i, i >= 1.
    int bit(unsigned i) const;
    double value() const;
};

struct SequencyIndex {
    std::uint64_t value = 0;
    Ordering ordering = Ordering::Kaczmarz;
    unsigned d = 0;  // bit length, Kronecker only
};

constexpr unsigned kMaxDyadicScale = 62;

std::uint64_t gray_code(std::uint64_t n);
std::uint64_t gray_inverse(std::uint64_t g);
std::uint64_t bit_reverse(std::uint64_t v, unsigned bits);
bool is_power_of_two(std::uint64_t n);
unsigned log2_exact(std::uint64_t n);

int wal_eval(const SequencyIndex& z, const DyadicPoint& x);

// Kaczmarz ordering, integer index.
int wal(std::uint64_t n, const DyadicPoint& x);

// Generalized Walsh function Wal(z, x) for dyadic z = zn 2^-zs (sign carried
// by zn) and x = xn 2^-xs >= 0; both may exceed 1.
int wal_general(std::int64_t zn, unsigned zs, std::uint64_t xn, unsigned xs);

std::uint64_t ordering_convert(std::uint64_t n, Ordering from, Ordering to, unsigned d = 0);

// out[n] = 2^-J sum_j v[j] Wal(n, j 2^-J), Kaczmarz order.
std::vector<double> fwht_sequency(std::span<const double> v);
// Inverse of fwht_sequency: v[j] = sum_n c[n] Wal(n, j 2^-J).
std::vector<double> ifwht_sequency(std::span<const double> c);
// Transpose of fwht_sequency (= 2^-J * ifwht_sequency).
std::vector<double> fwht_sequency_adjoint(std::span<const double> c);

void fwht_sequency_inplace(std::span<double> v);
void ifwht_sequency_inplace(std::span<double> c);

struct WalshPolynomial {
    std::int64_t offset = 0;          // index A of coeffs[0]
    std::vector<double> coeffs;       // alpha_A .. alpha_B
    Ordering ordering = Ordering::Kaczmarz;
};

double walsh_poly_eval(const WalshPolynomial& phi, const DyadicPoint& x);

// max_s |W{f(. - t) on [t,t+1)}(s) - W{f}(s) Wal(t,s)| over s = k 2^-s_scale,
// k < s_count. f holds cell averages on the 2^J grid of [0,1).
double walsh_shift_identity_check(std::span<const double> f, std::uint64_t t, unsigned s_scale,
                                  std::uint64_t s_count);

}  // namespace walshcs
