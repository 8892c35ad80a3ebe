#include "walshcs/walsh.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "walshcs/error.hpp"
#include "walshcs/kernels.hpp"

namespace walshcs {

DyadicPoint::DyadicPoint(std::uint64_t numerator, unsigned scale_) : num(numerator), scale(scale_) {
    if (scale > kMaxDyadicScale) throw DomainError("DyadicPoint: scale exceeds 62 bits");
    if (num >= (std::uint64_t{1} << scale)) throw DomainError("DyadicPoint: value must lie in [0,1)");
}

int DyadicPoint::bit(unsigned i) const {
    if (i == 0 || i > scale) return 0;
    return static_cast<int>((num >> (scale - i)) & 1u);
}

double DyadicPoint::value() const { return std::ldexp(static_cast<double>(num), -static_cast<int>(scale)); }

std::uint64_t gray_code(std::uint64_t n) { return n ^ (n >> 1); }

std::uint64_t gray_inverse(std::uint64_t g) {
    std::uint64_t n = g;
    for (unsigned s = 1; s < 64; s <<= 1) n ^= n >> s;
    return n;
}

std::uint64_t bit_reverse(std::uint64_t v, unsigned bits) {
    std::uint64_t r = 0;
    for (unsigned i = 0; i < bits; ++i) {
        r = (r << 1) | (v & 1u);
        v >>= 1;
    }
    return r;
}

bool is_power_of_two(std::uint64_t n) { return n != 0 && (n & (n - 1)) == 0; }

unsigned log2_exact(std::uint64_t n) {
    if (!is_power_of_two(n)) throw DomainError("expected a power of two, got " + std::to_string(n));
    return static_cast<unsigned>(std::countr_zero(n));
}

namespace {

// (-1)^{sum_i m_i x_{i+1}}: bit i of m pairs with the bit of weight 2^-(i+1) of x.
int paley_sign(std::uint64_t m, const DyadicPoint& x) {
    if (m == 0 || x.num == 0) return 1;
    unsigned top = 64 - static_cast<unsigned>(std::countl_zero(m));
    if (top > x.scale) m &= (x.scale == 0) ? 0 : ((std::uint64_t{1} << x.scale) - 1);
    std::uint64_t xr = bit_reverse(x.num, x.scale);
    return (std::popcount(m & xr) & 1) ? -1 : 1;
}

}  // namespace

int wal(std::uint64_t n, const DyadicPoint& x) { return paley_sign(gray_code(n), x); }

int wal_eval(const SequencyIndex& z, const DyadicPoint& x) {
    switch (z.ordering) {
        case Ordering::Kaczmarz:
            return wal(z.value, x);
        case Ordering::Paley:
            return paley_sign(z.value, x);
        case Ordering::Kronecker:
            if (z.d > 63 || z.value >= (std::uint64_t{1} << z.d))
                throw DomainError("wal_eval: Kronecker index out of range for bit length d");
            return paley_sign(bit_reverse(z.value, z.d), x);
    }
    return 1;
}

int wal_general(std::int64_t zn, unsigned zs, std::uint64_t xn, unsigned xs) {
    int sign = 1;
    std::uint64_t z = 0;
    if (zn < 0) {
        sign = -1;
        z = static_cast<std::uint64_t>(-(zn + 1)) + 1;
    } else {
        z = static_cast<std::uint64_t>(zn);
    }
    if (zs > 63 || xs > 63) throw DomainError("wal_general: scale exceeds 63 bits");
    if (z >> 62) throw DomainError("wal_general: index exceeds 62 bits");
    // Exponent sum_e (z[e] + z[e+1]) x[-e-1], with z[e] the bit of weight 2^e.
    // Bit i of z ^ (z << 1) carries z[e] + z[e+1] for e = i - zs - 1 and pairs
    // with bit (xs + zs - i) of xn. The lowest term (i = 0 of gray(z), shifted)
    // meets the integer part of x.
    std::uint64_t gz = z ^ (z << 1);
    int parity = 0;
    while (gz) {
        int i = std::countr_zero(gz);
        gz &= gz - 1;
        int xb = static_cast<int>(xs + zs) - i;
        if (xb >= 0 && xb < 64) parity ^= static_cast<int>((xn >> xb) & 1u);
    }
    return parity ? -sign : sign;
}

std::uint64_t ordering_convert(std::uint64_t n, Ordering from, Ordering to, unsigned d) {
    auto check_kron = [&](std::uint64_t v) {
        if (d > 63 || v >= (std::uint64_t{1} << d))
            throw DomainError("ordering_convert: index out of range for Kronecker bit length");
    };
    std::uint64_t paley = 0;
    switch (from) {
        case Ordering::Kaczmarz: paley = gray_code(n); break;
        case Ordering::Paley: paley = n; break;
        case Ordering::Kronecker:
            check_kron(n);
            paley = bit_reverse(n, d);
            break;
    }
    switch (to) {
        case Ordering::Kaczmarz: return gray_inverse(paley);
        case Ordering::Paley: return paley;
        case Ordering::Kronecker:
            check_kron(paley);
            return bit_reverse(paley, d);
    }
    return paley;
}

void fwht_sequency_inplace(std::span<double> v) {
    const std::size_t n = v.size();
    const unsigned J = log2_exact(n);
    kernels::fwht(v);
    // out[k] = 2^-J H[bitrev_J(gray(k))]
    std::vector<double> tmp(v.begin(), v.end());
    const double scale = std::ldexp(1.0, -static_cast<int>(J));
    for (std::size_t k = 0; k < n; ++k) v[k] = scale * tmp[bit_reverse(gray_code(k), J)];
}

void ifwht_sequency_inplace(std::span<double> c) {
    const std::size_t n = c.size();
    const unsigned J = log2_exact(n);
    std::vector<double> tmp(n);
    for (std::size_t k = 0; k < n; ++k) tmp[bit_reverse(gray_code(k), J)] = c[k];
    kernels::fwht(tmp);
    std::copy(tmp.begin(), tmp.end(), c.begin());
}

std::vector<double> fwht_sequency(std::span<const double> v) {
    std::vector<double> out(v.begin(), v.end());
    fwht_sequency_inplace(out);
    return out;
}

std::vector<double> ifwht_sequency(std::span<const double> c) {
    std::vector<double> out(c.begin(), c.end());
    ifwht_sequency_inplace(out);
    return out;
}

std::vector<double> fwht_sequency_adjoint(std::span<const double> c) {
    std::vector<double> out = ifwht_sequency(c);
    const double scale = std::ldexp(1.0, -static_cast<int>(log2_exact(c.size())));
    for (auto& x : out) x *= scale;
    return out;
}

double walsh_poly_eval(const WalshPolynomial& phi, const DyadicPoint& x) {
    double s = 0.0;
    for (std::size_t t = 0; t < phi.coeffs.size(); ++t) {
        std::int64_t j = phi.offset + static_cast<std::int64_t>(t);
        std::uint64_t mag = j < 0 ? static_cast<std::uint64_t>(-j) : static_cast<std::uint64_t>(j);
        int w = 0;
        if (phi.ordering == Ordering::Kaczmarz)
            w = wal(mag, x);
        else if (phi.ordering == Ordering::Paley)
            w = paley_sign(mag, x);
        else
            throw DomainError("walsh_poly_eval: Kronecker ordering needs a fixed bit length");
        s += (j < 0 ? -w : w) * phi.coeffs[t];
    }
    return s;
}

double walsh_shift_identity_check(std::span<const double> f, std::uint64_t t, unsigned s_scale,
                                  std::uint64_t s_count) {
    const unsigned J = log2_exact(f.size());
    if (s_scale > 20 || t >= (std::uint64_t{1} << 20))
        throw DomainError("walsh_shift_identity_check: parameters out of range");
    // Wal(s, .) must be constant on grid cells for the sums to be exact integrals.
    if (s_count > (std::uint64_t{1} << (J + s_scale)))
        throw DomainError("walsh_shift_identity_check: s must stay below 2^J");
    const double w = std::ldexp(1.0, -static_cast<int>(J));
    double worst = 0.0;
    for (std::uint64_t sn = 0; sn < s_count; ++sn) {
        const auto zs = static_cast<std::int64_t>(sn);
        double lhs = 0.0, base = 0.0;
        for (std::uint64_t c = 0; c < f.size(); ++c) {
            lhs += w * f[c] * wal_general(zs, s_scale, (t << J) + c, J);
            base += w * f[c] * wal_general(zs, s_scale, c, J);
        }
        double rhs = base * wal_general(static_cast<std::int64_t>(t), 0, sn, s_scale);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

}  // namespace walshcs
