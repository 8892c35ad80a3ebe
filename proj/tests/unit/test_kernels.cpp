#include "doctest.h"

#include <cstring>

#include "testing.hpp"
#include "walshcs/kernels.hpp"

using namespace walshcs;

namespace {

CsrMatrix random_csr(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    SplitMix64 rng(seed);
    CsrMatrix a;
    a.cols = cols;
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j)
            if (rng.uniform() < 0.1) a.push(static_cast<std::uint32_t>(j), rng.normal());
        a.end_row();
    }
    return a;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("fwht serial and parallel agree bitwise") {
    for (std::size_t n : {1u, 2u, 64u, 1u << 12, 1u << 16}) {
        auto a = testing::random_vector(n, n);
        auto b = a;
        kernels::serial::fwht(a);
        kernels::parallel::fwht(b);
        CHECK(bitwise_equal(a, b));
    }
}

TEST_CASE("fwht is its own inverse up to n") {
    const auto v = testing::random_vector(256, 5);
    auto w = v;
    kernels::serial::fwht(w);
    kernels::serial::fwht(w);
    for (auto& x : w) x /= 256.0;
    CHECK(testing::max_abs_diff(v, w) < 1e-13);
}

TEST_CASE("spmv serial and parallel agree bitwise") {
    const auto a = random_csr(3000, 700, 9);
    const auto x = testing::random_vector(700, 10);
    std::vector<double> y1(3000), y2(3000);
    kernels::serial::spmv(a, x, y1);
    kernels::parallel::spmv(a, x, y2);
    CHECK(bitwise_equal(y1, y2));
}

TEST_CASE("csr transpose") {
    const auto a = random_csr(40, 30, 2);
    const auto t = a.transpose();
    CHECK(t.rows == 30);
    CHECK(t.cols == 40);
    CHECK(t.nnz() == a.nnz());
    const auto x = testing::random_vector(30, 3), y = testing::random_vector(40, 4);
    std::vector<double> ax(40), ty(30);
    kernels::serial::spmv(a, x, ax);
    kernels::serial::spmv(t, y, ty);
    CHECK(testing::dot(ax, y) == doctest::Approx(testing::dot(x, ty)).epsilon(1e-13));
}

TEST_CASE("fill_columns serial and parallel agree") {
    const std::size_t rows = 50, cols = 70;
    auto column = [](std::size_t j) {
        std::vector<double> c(60);
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = std::sin(double(i * 31 + j * 7));
        return c;
    };
    std::vector<double> a(rows * cols), b(rows * cols);
    kernels::serial::fill_columns(a.data(), rows, cols, column);
    kernels::parallel::fill_columns(b.data(), rows, cols, column);
    CHECK(bitwise_equal(a, b));
    CHECK(a[3 * cols + 5] == column(5)[3]);
}
