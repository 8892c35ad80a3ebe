#include "doctest.h"

#include <cmath>
#include <bit>
#include <sstream>

#include "testing.hpp"
#include "walshcs/cob_operator.hpp"
#include "walshcs/error.hpp"
#include "walshcs/walsh.hpp"

using namespace walshcs;

namespace {

// Haar column c as a function on the 2^S grid: c = 0 is the constant,
// c = 2^R + j is psi_{R,j}.
double haar_value(std::size_t c, std::uint64_t t, unsigned S) {
    if (c == 0) return 1.0;
    unsigned R = 0;
    while ((std::size_t{2} << R) <= c) ++R;
    const std::uint64_t j = c - (std::uint64_t{1} << R);
    const std::uint64_t cell = t >> (S - R - 1);  // index at scale R + 1
    if (cell / 2 != j) return 0.0;
    return (cell % 2 ? -1.0 : 1.0) * std::pow(2.0, 0.5 * R);
}

double haar_entry(std::uint64_t n, std::size_t c, unsigned S) {
    double s = 0.0;
    for (std::uint64_t t = 0; t < (std::uint64_t{1} << S); ++t) s += wal(n, DyadicPoint(t, S)) * haar_value(c, t, S);
    return std::ldexp(s, -static_cast<int>(S));
}

CobOperator make_op(int p, int J0, int r, int q, int Q = -1) {
    return CobOperator(WaveletBasis(p, J0), LevelStructure::make(J0, r, q), Q);
}

}  // namespace

TEST_CASE("Haar entries equal the closed forms") {
    const CobOperator op = make_op(1, 0, 8, 0, 8);
    const auto a = op.section_dense(256, 256);
    double worst = 0.0;
    for (std::size_t n = 0; n < 256; ++n)
        for (std::size_t c = 0; c < 256; ++c) {
            double want_mag = 0.0;
            if (c == 0) {
                want_mag = n == 0 ? 1.0 : 0.0;
            } else {
                unsigned R = 0;
                while ((std::size_t{2} << R) <= c) ++R;
                if (n >= (std::size_t{1} << R) && n < (std::size_t{2} << R)) want_mag = std::pow(2.0, -0.5 * R);
            }
            worst = std::max(worst, std::abs(std::abs(a(n, c)) - want_mag));
        }
    CHECK(worst <= 1e-12);
}

TEST_CASE("Haar entries agree with direct summation") {
    const CobOperator op = make_op(1, 0, 6, 0, 6);
    const auto a = op.section_dense(64, 64);
    for (std::size_t n = 0; n < 64; ++n)
        for (std::size_t c = 0; c < 64; ++c) REQUIRE(std::abs(a(n, c) - haar_entry(n, c, 6)) <= 1e-14);
}

TEST_CASE("Haar scaling block") {
    // Scaling functions phi_{R,j} at J0 = R: |u(n, phi)| = 2^{-R/2} for n < 2^R.
    const CobOperator op(WaveletBasis(1, 3), LevelStructure::make(3, 2, 0), 8);
    for (std::size_t n = 0; n < 32; ++n)
        for (std::size_t j = 0; j < 8; ++j) {
            const double want = n < 8 ? std::sqrt(0.125) : 0.0;
            CHECK(std::abs(std::abs(op.entry(n, j)) - want) <= 1e-14);
        }
}

TEST_CASE("Haar section of size 16 is block diagonal") {
    const CobOperator op = make_op(1, 0, 4, 0);
    const auto a = op.section_dense(16, 16);
    for (std::size_t i = 0; i < 16; ++i)
        for (std::size_t j = 0; j < 16; ++j) {
            const bool same = (i < 2 && j < 2) || (i >= 2 && j >= 2 && std::bit_width(i) == std::bit_width(j));
            if (!same) CHECK(a(i, j) == 0.0);
        }
}

TEST_CASE("adjoint consistency") {
    for (int p : {1, 3, 4, 8}) {
        const int J0 = min_level(p);
        const CobOperator op = make_op(p, J0, 3, 1);
        SplitMix64 rng(77 + p);
        for (int t = 0; t < 100; ++t) {
            const std::size_t L = 1 + rng.bounded(op.levels().Mr());
            std::vector<std::size_t> omega;
            for (std::size_t i = 0; i < op.grid_size(); ++i)
                if (rng.uniform() < 0.3) omega.push_back(i);
            const auto x = testing::random_vector(L, 100 * p + t);
            const auto y = testing::random_vector(omega.size(), 900 * p + t);
            const double lhs = testing::dot(op.apply(x, omega), y);
            const double rhs = testing::dot(x, op.apply_adjoint(y, omega, L));
            CHECK(std::abs(lhs - rhs) <= 1e-10 * testing::norm(x) * testing::norm(y));
        }
    }
}

TEST_CASE("apply on unit vectors matches entries") {
    const CobOperator op = make_op(4, 3, 2, 1);
    std::vector<std::size_t> omega(op.levels().Nr());
    for (std::size_t i = 0; i < omega.size(); ++i) omega[i] = i;
    const std::vector<double> zero(10, 0.0);
    for (double v : op.apply(zero, omega)) CHECK(v == 0.0);
    for (std::size_t j : {0u, 5u, 17u, 31u}) {
        std::vector<double> e(32, 0.0);
        e[j] = 1.0;
        const auto col = op.apply(e, omega);
        for (std::size_t i = 0; i < omega.size(); ++i) CHECK(std::abs(col[i] - op.entry(i, j)) <= 1e-12);
    }
    const auto a = op.section_dense(64, 32);
    CHECK(a(13, 7) == doctest::Approx(op.entry(13, 7)).epsilon(1e-14));
}

TEST_CASE("Haar isometry on the full grid") {
    const CobOperator op = make_op(1, 0, 8, 0, 8);
    std::vector<std::size_t> all(256);
    for (std::size_t i = 0; i < 256; ++i) all[i] = i;
    const auto x = testing::random_vector(256, 4);
    CHECK(testing::norm(op.apply(x, all)) == doctest::Approx(testing::norm(x)).epsilon(1e-12));
}

TEST_CASE("first row integrates the scaling functions") {
    const CobOperator op = make_op(4, 3, 2, 1);
    const int Qf = op.Q() + 4;
    for (std::size_t n = 0; n < 8; ++n) {
        const auto f = cascade_tabulate(op.basis(), 3, n, Qf);
        double integral = 0.0;
        for (double v : f) integral += v;
        CHECK(op.entry(0, n) == doctest::Approx(std::ldexp(integral, -Qf)).epsilon(1e-12));
    }
}

TEST_CASE("column norms of sections") {
    for (int p : {3, 8}) {
        const CobOperator op = make_op(p, min_level(p), 4, 0);
        const auto a = op.section_dense(op.levels().Nr(), op.levels().Mr());
        for (std::size_t j = 0; j < a.cols; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < a.rows; ++i) s += a(i, j) * a(i, j);
            CHECK(std::sqrt(s) <= 1.0 + 1e-10);
        }
        // Over all 2^Q rows a column holds the piecewise constant projection.
        const double tol = std::ldexp(1.0, -(op.Q() - op.levels().J0 - op.levels().r));
        for (std::size_t j = 0; j < op.levels().Mr(); ++j) {
            const double nrm = testing::norm(op.column(j));
            CHECK(nrm <= 1.0 + 1e-12);
            CHECK(1.0 - nrm <= tol);
        }
    }
}

TEST_CASE("refining the fine grid leaves low rows unchanged") {
    // Wal(i, .) is constant on the cells for i < 2^Q, so the integrals are exact.
    const LevelStructure lv = LevelStructure::make(3, 2, 1);
    const WaveletBasis b(4, 3);
    const CobOperator a(b, lv, 8), c(b, lv, 10);
    double d = 0.0;
    for (std::size_t i = 0; i < 256; ++i)
        for (std::size_t j = 0; j < 32; ++j) d = std::max(d, std::abs(a.entry(i, j) - c.entry(i, j)));
    CHECK(d <= 1e-13);
    // The neglected energy beyond 2^Q shrinks with Q.
    CHECK(testing::norm(a.column(31)) < testing::norm(c.column(31)));
}

TEST_CASE("validation and guards") {
    const CobOperator op = make_op(4, 3, 2, 1);
    const std::vector<std::size_t> bad{op.grid_size()};
    const std::vector<double> x(4, 1.0);
    CHECK_THROWS_AS(op.apply(x, bad), DomainError);
    CHECK_THROWS_AS(op.entry(op.grid_size(), 0), DomainError);
    CHECK_THROWS_AS(op.column(op.grid_size()), DomainError);
    const CobOperator big = make_op(1, 0, 12, 1);
    CHECK_THROWS_AS(big.section_dense(5000, 4), SizeGuardError);
    CHECK_THROWS_AS(CobOperator(WaveletBasis(4, 3), LevelStructure::make(3, 2, 1), 30), SizeGuardError);
    CHECK_THROWS_AS(CobOperator(WaveletBasis(4, 3), LevelStructure::make(3, 4, 1), 6), DomainError);
}

TEST_CASE("section export") {
    const CobOperator op = make_op(1, 0, 4, 0);
    const auto a = op.section_dense(16, 16);
    std::stringstream csv;
    write_section_csv(a, csv);
    std::string line;
    int lines = 0;
    while (std::getline(csv, line)) {
        std::stringstream ls(line);
        std::string cell;
        int col = 0;
        while (std::getline(ls, cell, ',')) {
            CHECK(std::stod(cell) == a(lines, col));
            ++col;
        }
        CHECK(col == 16);
        ++lines;
    }
    CHECK(lines == 16);

    std::stringstream pgm;
    write_section_pgm(a, pgm, 100.0);
    const std::string s = pgm.str();
    const std::string header = "P5\n16 16\n255\n";
    REQUIRE(s.size() == header.size() + 256);
    CHECK(s.substr(0, header.size()) == header);
    CHECK(static_cast<unsigned char>(s[header.size()]) == 255);  // |u_00| = 1
    CHECK(static_cast<unsigned char>(s[header.size() + 2]) == 0);
    CHECK_THROWS_AS(write_section_pgm(a, pgm, 0.0), DomainError);
}
