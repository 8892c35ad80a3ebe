#include <algorithm>
#include <cmath>
#include <string>

#include "internal.hpp"
#include "walshcs/error.hpp"
#include "walshcs/wavelet.hpp"

namespace walshcs {

namespace detail {

void solve_dense(std::vector<qreal>& a, std::vector<qreal>& b, int n) {
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int r = c + 1; r < n; ++r)
            if (qabs(a[r * n + c]) > qabs(a[piv * n + c])) piv = r;
        if (a[piv * n + c] == 0) throw NumericalError("solve_dense: singular system");
        if (piv != c) {
            for (int k = 0; k < n; ++k) std::swap(a[c * n + k], a[piv * n + k]);
            std::swap(b[c], b[piv]);
        }
        for (int r = c + 1; r < n; ++r) {
            qreal f = a[r * n + c] / a[c * n + c];
            if (f == 0) continue;
            for (int k = c; k < n; ++k) a[r * n + k] -= f * a[c * n + k];
            b[r] -= f * b[c];
        }
    }
    for (int c = n - 1; c >= 0; --c) {
        qreal s = b[c];
        for (int k = c + 1; k < n; ++k) s -= a[c * n + k] * b[k];
        b[c] = s / a[c * n + c];
    }
}

}  // namespace detail

namespace {

using detail::qabs;
using detail::qreal;
using QVec = std::vector<qreal>;
using QMat = std::vector<QVec>;

// I(k, m) = integral over [0, inf) of phi(x-k) phi(x-m).
class HalfLineGram {
public:
    HalfLineGram(const QVec& h, int p) : p_(p), nu_(2 * p - 2) {
        const int nvar = nu_ * (nu_ + 1) / 2;
        if (nvar == 0) return;
        std::vector<qreal> a(static_cast<std::size_t>(nvar) * nvar, 0);
        std::vector<qreal> rhs(nvar, 0);
        for (int k = -p + 1; k <= p - 2; ++k) {
            for (int m = k; m <= p - 2; ++m) {
                const int row = index(k, m);
                a[static_cast<std::size_t>(row) * nvar + row] += 1;
                for (int ia = 0; ia < 2 * p; ++ia) {
                    for (int ib = 0; ib < 2 * p; ++ib) {
                        int i = 2 * k + ia - p + 1, j = 2 * m + ib - p + 1;
                        qreal c = h[ia] * h[ib], v;
                        if (known(i, j, v))
                            rhs[row] += c * v;
                        else
                            a[static_cast<std::size_t>(row) * nvar + index(std::min(i, j), std::max(i, j))] -= c;
                    }
                }
            }
        }
        detail::solve_dense(a, rhs, nvar);
        x_ = std::move(rhs);
    }

    qreal operator()(int k, int m) const {
        qreal v;
        if (known(k, m, v)) return v;
        return x_[index(std::min(k, m), std::max(k, m))];
    }

private:
    bool known(int k, int m, qreal& v) const {
        if (k >= p_ - 1 || m >= p_ - 1) {
            v = (k == m) ? 1 : 0;
            return true;
        }
        if (k <= -p_ || m <= -p_) {
            v = 0;
            return true;
        }
        return false;
    }
    int index(int k, int m) const {
        int a = k + p_ - 1, b = m + p_ - 1;
        return a * nu_ - a * (a - 1) / 2 + (b - a);
    }

    int p_;
    int nu_;
    QVec x_;
};

qreal binom(int n, int k) {
    if (k < 0 || n < k) return 0;
    qreal r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Edge functions e = 0..p-1 as coefficients over translates k = -p+1..p-1.
// Raw functions sum_k C(p-1-k, n) phi(x-k), orthonormalized from the
// boundary inward (n = p-1 first).
QMat edge_functions(int p, const HalfLineGram& I) {
    const int w = 2 * p - 1;
    QMat G(w, QVec(w));
    for (int a = 0; a < w; ++a)
        for (int b = 0; b < w; ++b) G[a][b] = I(a - p + 1, b - p + 1);
    auto dot = [&](const QVec& u, const QVec& v) {
        qreal s = 0;
        for (int a = 0; a < w; ++a) {
            if (u[a] == 0) continue;
            qreal t = 0;
            for (int b = 0; b < w; ++b) t += G[a][b] * v[b];
            s += u[a] * t;
        }
        return s;
    };
    QMat out;
    for (int n = p - 1; n >= 0; --n) {
        QVec v(w);
        for (int a = 0; a < w; ++a) v[a] = binom(p - 1 - (a - p + 1), n);
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& u : out) {
                qreal d = dot(u, v);
                for (int a = 0; a < w; ++a) v[a] -= d * u[a];
            }
        }
        qreal nn = dot(v, v);
        if (!(nn > 0)) throw NumericalError("edge construction: degenerate raw function");
        qreal s = sqrtq(nn);
        for (auto& x : v) x /= s;
        out.push_back(std::move(v));
    }
    return out;
}

// a0[t + p - 1] = integral of phi over [t, t+1).
QVec unit_cell_averages(const QVec& h, int p) {
    const int w = 2 * p - 1;
    std::vector<qreal> a(static_cast<std::size_t>(w) * w, 0), rhs(w, 0);
    const qreal half_sqrt2 = sqrtq(qreal(2)) / 2;
    for (int t = -p + 1; t <= p - 1; ++t) {
        int row = t + p - 1;
        a[row * w + row] -= 1;
        for (int ia = 0; ia < 2 * p; ++ia) {
            int s = ia - p + 1;
            for (int u : {2 * t - s, 2 * t - s + 1})
                if (u >= -p + 1 && u <= p - 1) a[row * w + u + p - 1] += half_sqrt2 * h[ia];
        }
    }
    // Replace the last (dependent) equation by the normalization sum = 1.
    for (int c = 0; c < w; ++c) a[(w - 1) * w + c] = 1;
    rhs[w - 1] = 1;
    detail::solve_dense(a, rhs, w);
    return rhs;
}

// Refinement rows of the edge scaling functions against the fine basis
// (fine edges 0..p-1, then fine interior translates p..3p-2).
QMat edge_scaling_rows(int p, const QVec& h, const QMat& edges, const HalfLineGram& I) {
    const int len = 3 * p - 1;
    QMat rows;
    for (const auto& c : edges) {
        // fine translate coefficients d_i, i = -3p+3 .. 3p-2
        const int off = 3 * p - 3;
        QVec d(6 * p - 4, 0);
        for (int k = -p + 1; k <= p - 1; ++k)
            for (int a = 0; a < 2 * p; ++a) d[2 * k + a - p + 1 + off] += c[k + p - 1] * h[a];
        QVec row(len, 0);
        for (int t = 0; t < len; ++t) {
            qreal s = 0;
            for (int i = 0; i < static_cast<int>(d.size()); ++i) {
                if (d[i] == 0) continue;
                if (t < p) {
                    const auto& ct = edges[t];
                    for (int m = -p + 1; m <= p - 1; ++m) s += d[i] * ct[m + p - 1] * I(i - off, m);
                } else {
                    s += d[i] * I(i - off, t);
                }
            }
            row[t] = s;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

struct LevelRows {
    QMat scaling;         // nc rows over nf fine positions
    QMat interior_wavelets;  // rows b = p .. nc-p-1
};

LevelRows level_rows(int p, int nc, const QVec& h, const QVec& g, const QMat& ls, const QMat& rs) {
    const int nf = 2 * nc;
    LevelRows lr;
    for (int b = 0; b < nc; ++b) {
        QVec row(nf, 0);
        if (b < p) {
            for (int t = 0; t < 3 * p - 1; ++t) row[t] = ls[b][t];
        } else if (b >= nc - p) {
            const auto& r = rs[nc - 1 - b];
            for (int t = 0; t < 3 * p - 1; ++t) row[nf - 1 - t] = r[t];
        } else {
            for (int a = 0; a < 2 * p; ++a) row[2 * b + a - p + 1] = h[a];
        }
        lr.scaling.push_back(std::move(row));
    }
    for (int b = p; b < nc - p; ++b) {
        QVec row(nf, 0);
        for (int a = 0; a < 2 * p; ++a) row[2 * b + a - p + 1] = g[a];
        lr.interior_wavelets.push_back(std::move(row));
    }
    return lr;
}

qreal qdot(const QVec& a, const QVec& b) {
    qreal s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Edge wavelets spanning the orthogonal complement of the given rows, from
// unit-vector candidates taken from the left boundary inward, then from the
// right boundary inward. Returns left rows followed by right rows.
QMat complement_wavelets(int p, int nf, const LevelRows& lr) {
    const qreal tau = qreal(1) / qreal(1e12);
    QMat accepted;
    auto project = [&](QVec& v) {
        for (int pass = 0; pass < 2; ++pass) {
            for (const QMat* set : {&lr.scaling, &lr.interior_wavelets, static_cast<const QMat*>(&accepted)})
                for (const auto& r : *set) {
                    qreal d = qdot(r, v);
                    if (d != 0)
                        for (int i = 0; i < nf; ++i) v[i] -= d * r[i];
                }
        }
    };
    auto run = [&](bool from_left) {
        std::size_t target = accepted.size() + p;
        for (int c = 0; c < nf && accepted.size() < target; ++c) {
            QVec v(nf, 0);
            v[from_left ? c : nf - 1 - c] = 1;
            project(v);
            qreal nn = sqrtq(qdot(v, v));
            if (nn > tau) {
                for (auto& x : v) x /= nn;
                accepted.push_back(std::move(v));
            }
        }
        if (accepted.size() != target) throw NumericalError("edge wavelet complement has wrong dimension");
    };
    run(true);
    run(false);
    return accepted;
}

void check_orthonormal(const QMat& rows, const char* what) {
    for (std::size_t a = 0; a < rows.size(); ++a)
        for (std::size_t b = a; b < rows.size(); ++b) {
            qreal d = qdot(rows[a], rows[b]) - (a == b ? 1 : 0);
            if (qabs(d) > qreal(1e-24))
                throw NumericalError(std::string("boundary construction: ") + what + " not orthonormal");
        }
}

std::vector<double> to_double(const QVec& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = static_cast<double>(v[i]);
    return out;
}

std::vector<std::vector<double>> to_double(const QMat& m) {
    std::vector<std::vector<double>> out;
    for (const auto& r : m) out.push_back(to_double(r));
    return out;
}

struct SideData {
    QMat edges;
    QVec a0;
    QMat scaling_rows;
    QMat cell_avg;
};

SideData build_side(int p, const QVec& h) {
    SideData sd;
    HalfLineGram I(h, p);
    sd.edges = edge_functions(p, I);
    sd.a0 = unit_cell_averages(h, p);
    sd.scaling_rows = edge_scaling_rows(p, h, sd.edges, I);
    for (const auto& c : sd.edges) {
        QVec avg(2 * p - 1, 0);
        for (int m = 0; m <= 2 * p - 2; ++m)
            for (int k = -p + 1; k <= p - 1; ++k) {
                int t = m - k;
                if (t >= -p + 1 && t <= p - 1) avg[m] += c[k + p - 1] * sd.a0[t + p - 1];
            }
        sd.cell_avg.push_back(std::move(avg));
    }
    return sd;
}

}  // namespace

int min_level(int p) {
    if (p == 1) return 0;
    if (p < 3 || p > 10) throw DomainError("unsupported Daubechies order p (expected 1 or 3..10)");
    int j = 0;
    while ((1 << j) < 2 * p - 1) ++j;
    return j;
}

FilterBank construct_filter_bank(int p) {
    min_level(p);  // validates p
    QVec h = detail::daubechies_filter(p);
    QVec g(2 * p);
    for (int a = 0; a < 2 * p; ++a) g[a] = ((a % 2) ? -1 : 1) * h[2 * p - 1 - a];

    FilterBank fb;
    fb.p = p;
    fb.h = to_double(h);
    fb.g = to_double(g);
    fb.cell_avg = to_double(unit_cell_averages(h, p));
    if (p == 1) return fb;

    QVec hr(h.rbegin(), h.rend());
    SideData left = build_side(p, h);
    SideData right = build_side(p, hr);

    fb.left_edge = to_double(left.edges);
    fb.right_edge = to_double(right.edges);
    fb.left_scaling = to_double(left.scaling_rows);
    fb.right_scaling = to_double(right.scaling_rows);
    fb.left_cell_avg = to_double(left.cell_avg);
    fb.right_cell_avg = to_double(right.cell_avg);

    // Canonical edge wavelets from a level where both edges are far apart.
    int nc = 1;
    while (nc < 4 * p) nc <<= 1;
    {
        const int nf = 2 * nc;
        LevelRows lr = level_rows(p, nc, h, g, left.scaling_rows, right.scaling_rows);
        QMat ew = complement_wavelets(p, nf, lr);
        QMat all = lr.scaling;
        all.insert(all.end(), lr.interior_wavelets.begin(), lr.interior_wavelets.end());
        all.insert(all.end(), ew.begin(), ew.end());
        check_orthonormal(all, "canonical level");
        const int len = 3 * p - 1;
        for (int e = 0; e < 2 * p; ++e) {
            const auto& row = ew[e];
            QVec local(len);
            qreal leak = 0;
            for (int i = 0; i < nf; ++i) {
                int t = (e < p) ? i : nf - 1 - i;
                if (t < len)
                    local[t] = row[i];
                else
                    leak = std::max(leak, qabs(row[i]));
            }
            if (leak > qreal(1e-26)) throw NumericalError("edge wavelet support exceeds 3p-1 fine positions");
            (e < p ? fb.left_wavelet : fb.right_wavelet).push_back(to_double(local));
        }
    }

    // Level where the two edges interact: wavelet rows are level specific.
    int js = 0;
    while ((1 << js) < 2 * p) ++js;
    {
        const int ns = 1 << js, nf = 2 * ns;
        LevelRows lr = level_rows(p, ns, h, g, left.scaling_rows, right.scaling_rows);
        QMat ew = complement_wavelets(p, nf, lr);
        QMat all = lr.scaling;
        all.insert(all.end(), lr.interior_wavelets.begin(), lr.interior_wavelets.end());
        all.insert(all.end(), ew.begin(), ew.end());
        check_orthonormal(all, "smallest level");
        fb.small_level = js;
        QMat rows(ns);
        for (int e = 0; e < p; ++e) rows[e] = ew[e];
        for (int e = 0; e < p; ++e) rows[ns - 1 - e] = ew[p + e];
        for (int b = p; b < ns - p; ++b) rows[b] = lr.interior_wavelets[b - p];
        fb.small_level_wavelets = to_double(rows);
    }
    return fb;
}

}  // namespace walshcs
