#include "oracles.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace oracle {

std::vector<std::vector<int>> walsh_by_sign_changes(int J) {
    const std::size_t n = std::size_t{1} << J;
    std::vector<std::vector<int>> paley(n, std::vector<int>(n, 1));
    for (std::size_t m = 0; m < n; ++m)
        for (std::size_t j = 0; j < n; ++j) {
            const double x = (static_cast<double>(j) + 0.5) / static_cast<double>(n);
            int v = 1;
            for (int k = 0; k < J; ++k)
                if ((m >> k) & 1) {
                    // Rademacher r_{k+1}(x) = sign(sin(2^{k+1} pi x)).
                    const double t = std::ldexp(x, k + 1);
                    v *= (static_cast<long long>(std::floor(t)) % 2 == 0) ? 1 : -1;
                }
            paley[m][j] = v;
        }
    std::vector<std::vector<int>> out(n);
    for (auto& w : paley) {
        std::size_t changes = 0;
        for (std::size_t j = 1; j < n; ++j) changes += w[j] != w[j - 1];
        out.at(changes) = w;
    }
    return out;
}

std::vector<double> naive_sequency_wht(const std::vector<double>& v) {
    int J = 0;
    while ((std::size_t{1} << J) < v.size()) ++J;
    const auto w = walsh_by_sign_changes(J);
    std::vector<double> out(v.size(), 0.0);
    for (std::size_t n = 0; n < v.size(); ++n) {
        double s = 0.0;
        for (std::size_t j = 0; j < v.size(); ++j) s += v[j] * w[n][j];
        out[n] = s / static_cast<double>(v.size());
    }
    return out;
}

namespace {

struct Tableau {
    std::size_t m, cols;  // cols excludes the right-hand side
    std::vector<std::vector<double>> t;
    std::vector<std::size_t> basis;

    double& rhs(std::size_t i) { return t[i][cols]; }

    void pivot(std::size_t r, std::size_t c) {
        const double p = t[r][c];
        for (auto& v : t[r]) v /= p;
        for (std::size_t i = 0; i <= m; ++i) {
            if (i == r || t[i][c] == 0.0) continue;
            const double f = t[i][c];
            for (std::size_t j = 0; j <= cols; ++j) t[i][j] -= f * t[r][j];
        }
        basis[r] = c;
    }

    // Bland's rule; columns >= allowed never enter.
    void run(std::size_t allowed) {
        const double eps = 1e-11;
        for (int guard = 0; guard < 100000; ++guard) {
            std::size_t enter = cols;
            for (std::size_t j = 0; j < allowed; ++j)
                if (t[m][j] < -eps) {
                    enter = j;
                    break;
                }
            if (enter == cols) return;
            std::size_t leave = m;
            double best = std::numeric_limits<double>::infinity();
            // Pivot elements below 1e-9 are rounding residue of exact zeros.
            for (std::size_t i = 0; i < m; ++i)
                if (t[i][enter] > 1e-9) {
                    // Degenerate rows carry rhs ~ -1e-14; treating them as zero keeps Bland's rule acyclic.
                    const double ratio = std::max(t[i][cols], 0.0) / t[i][enter];
                    if (ratio < best - 1e-12 || (std::abs(ratio - best) <= 1e-12 && basis[i] < basis[leave])) {
                        best = ratio;
                        leave = i;
                    }
                }
            if (leave == m) throw std::runtime_error("simplex: unbounded");
            pivot(leave, enter);
        }
        throw std::runtime_error("simplex: iteration guard");
    }
};

}  // namespace

double basis_pursuit_lp(const walshcs::DenseMatrix& a, const std::vector<double>& g, std::vector<double>* x) {
    const std::size_t m = a.rows, n = a.cols, nv = 2 * n;
    Tableau tb{m, nv + m, {}, {}};
    tb.t.assign(m + 1, std::vector<double>(nv + m + 1, 0.0));
    tb.basis.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double sgn = g[i] < 0 ? -1.0 : 1.0;
        for (std::size_t j = 0; j < n; ++j) {
            tb.t[i][j] = sgn * a(i, j);
            tb.t[i][n + j] = -sgn * a(i, j);
        }
        tb.t[i][nv + i] = 1.0;
        tb.rhs(i) = sgn * g[i];
        tb.basis[i] = nv + i;
    }
    // Phase one: minimise the artificial sum.
    for (std::size_t j = 0; j <= nv + m; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += tb.t[i][j];
        tb.t[m][j] = (j >= nv && j < nv + m) ? 0.0 : -s;
    }
    tb.run(nv + m);
    if (-tb.t[m][nv + m] > 1e-9) return std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < m; ++i) {
        if (tb.basis[i] < nv) continue;
        for (std::size_t j = 0; j < nv; ++j)
            if (std::abs(tb.t[i][j]) > 1e-9) {
                tb.pivot(i, j);
                break;
            }
    }
    // Phase two with unit costs on u and v.
    for (std::size_t j = 0; j <= nv + m; ++j) tb.t[m][j] = j < nv ? 1.0 : 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t b = tb.basis[i];
        const double cb = b < nv ? 1.0 : 0.0;
        if (cb == 0.0) continue;
        for (std::size_t j = 0; j <= nv + m; ++j) tb.t[m][j] -= cb * tb.t[i][j];
    }
    tb.run(nv);
    std::vector<double> z(nv, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        if (tb.basis[i] < nv) z[tb.basis[i]] = tb.rhs(i);
    double obj = 0.0;
    std::vector<double> sol(n);
    for (std::size_t j = 0; j < n; ++j) {
        sol[j] = z[j] - z[n + j];
        obj += std::abs(sol[j]);
    }
    if (x) *x = sol;
    return obj;
}

double bpdn_homotopy(const walshcs::DenseMatrix& a, const std::vector<double>& g, double delta, std::vector<double>* x) {
    const std::size_t m = a.rows, n = a.cols;
    Eigen::MatrixXd A(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) A(i, j) = a(i, j);
    Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(g.data(), static_cast<Eigen::Index>(m));
    if (y.norm() <= delta) {
        if (x) x->assign(n, 0.0);
        return 0.0;
    }
    Eigen::VectorXd c = A.transpose() * y;
    Eigen::Index j0;
    double lambda = c.cwiseAbs().maxCoeff(&j0);
    std::vector<Eigen::Index> active{j0};
    std::vector<double> sign{c(j0) > 0 ? 1.0 : -1.0};
    for (int guard = 0; guard < 10000; ++guard) {
        const auto k = static_cast<Eigen::Index>(active.size());
        Eigen::MatrixXd AJ(m, k);
        Eigen::VectorXd s(k);
        for (Eigen::Index t = 0; t < k; ++t) {
            AJ.col(t) = A.col(active[t]);
            s(t) = sign[t];
        }
        const Eigen::MatrixXd G = AJ.transpose() * AJ;
        const Eigen::LDLT<Eigen::MatrixXd> ldlt(G);
        const Eigen::VectorXd av = ldlt.solve(AJ.transpose() * y);
        const Eigen::VectorXd bv = ldlt.solve(s);
        // On this segment x_J = av - lambda bv and r = r0 + lambda r1.
        const Eigen::VectorXd r0 = y - AJ * av, r1 = AJ * bv;
        double next = 0.0;
        int event = -1;
        Eigen::Index who = -1;
        for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(n); ++j) {
            if (std::find(active.begin(), active.end(), j) != active.end()) continue;
            const double p = A.col(j).dot(r0), q = A.col(j).dot(r1);
            for (double sg : {1.0, -1.0}) {
                // p + lambda q = sg lambda
                const double den = sg - q;
                if (std::abs(den) < 1e-14) continue;
                const double l = p / den;
                if (l < lambda * (1 - 1e-12) && l > next) {
                    next = l;
                    event = 0;
                    who = j;
                }
            }
        }
        for (Eigen::Index t = 0; t < k; ++t) {
            if (std::abs(bv(t)) < 1e-15) continue;
            const double l = av(t) / bv(t);
            if (l < lambda * (1 - 1e-12) && l > next) {
                next = l;
                event = 1;
                who = t;
            }
        }
        // Residual norm reaches delta inside [next, lambda]?
        auto rnorm = [&](double l) { return (r0 + l * r1).norm(); };
        if (rnorm(next) <= delta) {
            const double qa = r1.squaredNorm(), qb = 2.0 * r0.dot(r1), qc = r0.squaredNorm() - delta * delta;
            double l;
            if (qa < 1e-300) {
                l = -qc / qb;
            } else {
                const double disc = std::sqrt(std::max(0.0, qb * qb - 4 * qa * qc));
                const double l1 = (-qb + disc) / (2 * qa), l2 = (-qb - disc) / (2 * qa);
                l = (l1 >= next - 1e-12 && l1 <= lambda + 1e-12) ? l1 : l2;
            }
            const Eigen::VectorXd xj = av - l * bv;
            std::vector<double> sol(n, 0.0);
            double obj = 0.0;
            for (Eigen::Index t = 0; t < k; ++t) {
                sol[active[t]] = xj(t);
                obj += std::abs(xj(t));
            }
            if (x) *x = sol;
            return obj;
        }
        if (event < 0) throw std::runtime_error("homotopy: path ended above delta");
        if (event == 0) {
            active.push_back(who);
            const double p = A.col(who).dot(r0 + next * r1);
            sign.push_back(p > 0 ? 1.0 : -1.0);
        } else {
            active.erase(active.begin() + who);
            sign.erase(sign.begin() + who);
        }
        lambda = next;
    }
    throw std::runtime_error("homotopy: too many events");
}

namespace {

bool level_counts_ok(std::uint32_t mask, const std::vector<std::size_t>& M, const std::vector<std::size_t>& s,
                     bool exact) {
    for (std::size_t l = 0; l + 1 < M.size(); ++l) {
        std::size_t c = 0;
        for (std::size_t j = M[l]; j < M[l + 1]; ++j) c += (mask >> j) & 1;
        if (exact ? c != s[l] : c > s[l]) return false;
    }
    return true;
}

}  // namespace

double relative_sparsity_brute(const walshcs::DenseMatrix& band, const std::vector<std::size_t>& M,
                               const std::vector<std::size_t>& s) {
    const std::size_t cols = M.back();
    double best = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << cols); ++mask) {
        if (!level_counts_ok(mask, M, s, true)) continue;
        std::vector<std::size_t> supp;
        for (std::size_t j = 0; j < cols; ++j)
            if ((mask >> j) & 1) supp.push_back(j);
        for (std::uint32_t sg = 0; sg < (1u << supp.size()); ++sg) {
            double e = 0.0;
            for (std::size_t i = 0; i < band.rows; ++i) {
                double v = 0.0;
                for (std::size_t t = 0; t < supp.size(); ++t) v += ((sg >> t) & 1 ? -1.0 : 1.0) * band(i, supp[t]);
                e += v * v;
            }
            best = std::max(best, e);
        }
    }
    return best;
}

double sigma_brute(const std::vector<double>& x, const std::vector<std::size_t>& M, const std::vector<std::size_t>& s) {
    double best = std::numeric_limits<double>::infinity();
    for (std::uint32_t mask = 0; mask < (1u << x.size()); ++mask) {
        if (!level_counts_ok(mask, M, s, false)) continue;
        double r = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j)
            if (!((mask >> j) & 1)) r += std::abs(x[j]);
        best = std::min(best, r);
    }
    return best;
}

}  // namespace oracle
