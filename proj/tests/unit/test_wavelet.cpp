#include "doctest.h"

#include <cmath>
#include <sstream>

#include "testing.hpp"
#include "walshcs/error.hpp"
#include "walshcs/wavelet.hpp"

using namespace walshcs;

namespace {

// Columns are the synthesized unit vectors, so B maps coefficients to V_Q.
std::vector<std::vector<double>> synthesis_columns(const WaveletBasis& b, int Q) {
    const std::size_t n = std::size_t{1} << Q;
    std::vector<std::vector<double>> cols;
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> e(n, 0.0);
        e[j] = 1.0;
        cols.push_back(wavelet_synthesis(b, e, b.J0(), Q));
    }
    return cols;
}

// Gram matrix of the level-J scaling functions from cell averages at Q and
// Q + 2, extrapolated for the O(h^2) midpoint error.
double gram_error(const WaveletBasis& b, int J, int d) {
    const std::size_t n = std::size_t{1} << J;
    auto gram = [&](int Q) {
        std::vector<std::vector<double>> f;
        std::vector<std::size_t> lo(n), hi(n);
        for (std::size_t k = 0; k < n; ++k) {
            f.push_back(cascade_tabulate(b, J, k, Q));
            lo[k] = f[k].size();
            hi[k] = 0;
            for (std::size_t i = 0; i < f[k].size(); ++i)
                if (f[k][i] != 0.0) {
                    lo[k] = std::min(lo[k], i);
                    hi[k] = i + 1;
                }
        }
        std::vector<double> g(n * n, 0.0);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t c = 0; c < n; ++c) {
                double s = 0.0;
                for (std::size_t i = std::max(lo[a], lo[c]); i < std::min(hi[a], hi[c]); ++i) s += f[a][i] * f[c][i];
                g[a * n + c] = s * std::ldexp(1.0, -Q);
            }
        return g;
    };
    const auto g1 = gram(J + d), g2 = gram(J + d + 2);
    double err = 0.0;
    for (std::size_t i = 0; i < n * n; ++i)
        err = std::max(err, std::abs((16 * g2[i] - g1[i]) / 15 - (i / n == i % n ? 1.0 : 0.0)));
    return err;
}

}  // namespace

TEST_CASE("interior filter properties") {
    for (int p = 1; p <= 10; ++p) {
        if (p == 2) continue;
        const auto fb = construct_filter_bank(p);
        REQUIRE(fb.h.size() == static_cast<std::size_t>(2 * p));
        double sum = 0.0;
        for (double v : fb.h) sum += v;
        CHECK(sum == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
        for (int m = 0; m < p; ++m) {
            double s = 0.0;
            for (int k = 0; k + 2 * m < 2 * p; ++k) s += fb.h[k] * fb.h[k + 2 * m];
            CHECK(std::abs(s - (m == 0 ? 1.0 : 0.0)) < 1e-12);
        }
        for (int k = 0; k < p; ++k) {
            double s = 0.0;
            for (int a = 0; a < 2 * p; ++a) s += std::pow(a, k) * fb.g[a];
            CHECK(std::abs(s) < 1e-9 * std::pow(2 * p, k));
        }
    }
}

TEST_CASE("order and level validation") {
    CHECK_THROWS_AS(construct_filter_bank(2), DomainError);
    CHECK_THROWS_AS(construct_filter_bank(11), DomainError);
    CHECK(min_level(1) == 0);
    CHECK(min_level(3) == 3);
    CHECK(min_level(8) == 4);
    CHECK_THROWS_AS(WaveletBasis(4, 2), DomainError);
}

TEST_CASE("Haar reduces to the piecewise constant system") {
    const WaveletBasis b(1, 0);
    CHECK(b.edge_count() == 0);
    CHECK(b.filters().h[0] == doctest::Approx(1 / std::sqrt(2.0)));
    CHECK(b.filters().h[1] == doctest::Approx(1 / std::sqrt(2.0)));
    const auto psi = cascade_tabulate(b, 0, 0, 3, BasisKind::Wavelet);
    const std::vector<double> want_psi{1, 1, 1, 1, -1, -1, -1, -1};
    CHECK(testing::max_abs_diff(psi, want_psi) < 1e-14);
    const auto phi = cascade_tabulate(b, 2, 1, 3);
    const std::vector<double> want_phi{0, 0, 2, 2, 0, 0, 0, 0};
    CHECK(testing::max_abs_diff(phi, want_phi) < 1e-14);
    CHECK_THROWS_AS(cascade_tabulate(b, 3, 0, 2), DomainError);
}

TEST_CASE("edge functions have staggered support") {
    for (int p : {3, 4, 8}) {
        const WaveletBasis b(p, min_level(p) + 2);
        const int J = b.J0();
        const int Q = J + 6;
        const std::size_t cells_per_unit = std::size_t{1} << (Q - J);
        for (int k = 0; k < p; ++k) {
            const auto f = cascade_tabulate(b, J, static_cast<std::size_t>(k), Q);
            std::size_t last = 0;
            for (std::size_t i = 0; i < f.size(); ++i)
                if (std::abs(f[i]) > 1e-13) last = i;
            CHECK(last < (static_cast<std::size_t>(p + k)) * cells_per_unit);
            CHECK(last < static_cast<std::size_t>(2 * p - 1) * cells_per_unit);
        }
    }
}

TEST_CASE("orthonormality by refined quadrature") {
    for (int p : {3, 4, 8}) {
        const WaveletBasis b(p, min_level(p));
        for (int J = b.J0(); J <= b.J0() + 2; ++J) CHECK(gram_error(b, J, 12) <= 1e-10);
    }
}

TEST_CASE("synthesis is orthogonal and analysis is its transpose") {
    for (int p : {1, 3, 4, 8}) {
        const WaveletBasis b(p, min_level(p));
        const int Q = 6;
        const auto cols = synthesis_columns(b, Q);
        double err = 0.0;
        for (std::size_t a = 0; a < cols.size(); ++a)
            for (std::size_t c = 0; c < cols.size(); ++c)
                err = std::max(err, std::abs(testing::dot(cols[a], cols[c]) - (a == c ? 1.0 : 0.0)));
        CHECK(err < 1e-12);
        const auto x = testing::random_vector(64, 17);
        const auto ana = wavelet_analysis(b, x, b.J0());
        for (std::size_t j = 0; j < 64; ++j) CHECK(ana[j] == doctest::Approx(testing::dot(cols[j], x)).epsilon(1e-12));
    }
}

TEST_CASE("dwt round trip at length 1024") {
    for (int p : {1, 3, 4, 8}) {
        const WaveletBasis b(p, min_level(p));
        const auto v = testing::random_vector(1024, 40 + p);
        const auto back = dwt_inverse(dwt_forward(v, b, b.J0()), b, b.J0());
        CHECK(testing::max_abs_diff(v, back) <= 1e-10);
        const std::vector<double> zero(1024, 0.0);
        CHECK(testing::max_abs_diff(dwt_forward(zero, b, b.J0()), zero) == 0.0);
    }
}

TEST_CASE("analysis and synthesis are adjoint") {
    for (int p : {1, 3, 4, 8}) {
        const WaveletBasis b(p, min_level(p));
        for (int t = 0; t < 100; ++t) {
            const auto x = testing::random_vector(256, 1000 * p + t);
            const auto y = testing::random_vector(256, 5000 * p + t);
            const double lhs = testing::dot(wavelet_analysis(b, x, b.J0()), y);
            const double rhs = testing::dot(x, wavelet_synthesis(b, y, b.J0(), 8));
            CHECK(std::abs(lhs - rhs) <= 1e-10 * testing::norm(x) * testing::norm(y));
        }
    }
}

TEST_CASE("dwt validation") {
    const WaveletBasis b(4, 3);
    std::vector<double> v(1000, 1.0);
    CHECK_THROWS_AS(dwt_forward(v, b, 3), DomainError);
    std::vector<double> w(8, 1.0);
    CHECK_THROWS_AS(dwt_forward(w, b, 4), DomainError);
}

TEST_CASE("linear samples give vanishing interior wavelet coefficients") {
    for (int p : {3, 4, 8}) {
        const WaveletBasis b(p, min_level(p));
        const int Q = 10;
        std::vector<double> grid(1024);
        for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = (static_cast<double>(i) + 0.5) / 1024.0;
        const auto c = dwt_forward(grid, b, b.J0());
        double worst = 0.0;
        for (int j = b.J0(); j < Q - 1; ++j) {
            const std::size_t n = std::size_t{1} << j;
            if (n < static_cast<std::size_t>(4 * p)) continue;
            for (std::size_t k = p; k + p < n; ++k) worst = std::max(worst, std::abs(c[n + k]));
        }
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("vanishing moments of all wavelets, edges included") {
    for (int p : {3, 4}) {
        const WaveletBasis b(p, min_level(p));
        const int j = b.J0() + 1, Q = j + 12;
        const double h = std::ldexp(1.0, -Q);
        for (std::size_t n = 0; n < (std::size_t{1} << j); ++n) {
            const auto psi = cascade_tabulate(b, j, n, Q, BasisKind::Wavelet);
            double m0 = 0.0;
            for (double v : psi) m0 += v * h;
            CHECK(std::abs(m0) < 1e-12);
            // Higher moments from cell averages carry an O(h^2) quadrature error.
            for (int k = 1; k < p; ++k) {
                double mk = 0.0;
                for (std::size_t i = 0; i < psi.size(); ++i) mk += psi[i] * std::pow((i + 0.5) * h, k) * h;
                CHECK(std::abs(mk) < 1e-6);
            }
        }
    }
}

TEST_CASE("interior scaling function integrates to one") {
    const WaveletBasis b(4, 3);
    const auto& fb = b.filters();
    double s = 0.0;
    for (double v : fb.cell_avg) s += v;
    CHECK(s == doctest::Approx(1.0).epsilon(1e-13));
    const auto fine = mother_cell_averages(fb, 14);
    double integral = 0.0, first = 0.0;
    for (std::size_t m = 0; m < fine.size(); ++m) {
        const double x = -3.0 + (m + 0.5) * std::ldexp(1.0, -14);
        integral += fine[m] * std::ldexp(1.0, -14);
        first += fine[m] * x * std::ldexp(1.0, -14);
    }
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-12));
    // Cell averages refine exactly, so the coarse sums must agree.
    const auto coarse = mother_cell_averages(fb, 0);
    for (std::size_t m = 0; m < coarse.size(); ++m) {
        double acc = 0.0;
        for (std::size_t t = 0; t < (std::size_t{1} << 14); ++t) acc += fine[(m << 14) + t];
        CHECK(acc * std::ldexp(1.0, -14) == doctest::Approx(coarse[m]).epsilon(1e-10));
    }
    // First moment of phi is sum_k k h_k / sqrt 2 (with our support origin).
    double mom = 0.0;
    for (std::size_t k = 0; k < fb.h.size(); ++k) mom += (static_cast<double>(k) - 3.0) * fb.h[k];
    CHECK(first == doctest::Approx(mom / std::sqrt(2.0)).epsilon(1e-6));
}

TEST_CASE("filter csv round trip") {
    const auto fb = construct_filter_bank(4);
    std::stringstream ss;
    export_filters_csv(fb, ss);
    const auto back = import_filters_csv(ss);
    CHECK(back.p == 4);
    CHECK(testing::max_abs_diff(back.h, fb.h) == 0.0);
    REQUIRE(back.left_scaling.size() == fb.left_scaling.size());
    for (std::size_t i = 0; i < fb.left_scaling.size(); ++i)
        CHECK(testing::max_abs_diff(back.left_scaling[i], fb.left_scaling[i]) == 0.0);
    const WaveletBasis b = WaveletBasis::from_filters(back, 3);
    const WaveletBasis ref(4, 3);
    const auto x = testing::random_vector(256, 9);
    CHECK(testing::max_abs_diff(wavelet_analysis(b, x, 3), wavelet_analysis(ref, x, 3)) == 0.0);

    std::stringstream bad("p,0,4\nh,0,abc\n");
    CHECK_THROWS_AS(import_filters_csv(bad), DomainError);
}
