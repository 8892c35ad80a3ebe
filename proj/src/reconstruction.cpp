#include "walshcs/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "walshcs/error.hpp"
#include "walshcs/rng.hpp"
#include "walshcs/walsh.hpp"

namespace walshcs {

namespace {

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double norm1(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    return s;
}

double dot(std::span<const double> a, std::span<const double> b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

}  // namespace

LinearMap section_map(const CobOperator& op, std::vector<std::size_t> omega, std::size_t L) {
    if (L == 0 || L > op.grid_size()) throw DomainError("section_map: need 0 < L <= 2^Q");
    for (auto i : omega)
        if (i >= op.grid_size()) throw DomainError("section_map: sample index beyond 2^Q");
    auto om = std::make_shared<const std::vector<std::size_t>>(std::move(omega));
    LinearMap m;
    m.rows = om->size();
    m.cols = L;
    m.forward = [&op, om](std::span<const double> x) { return op.apply(x, *om); };
    m.adjoint = [&op, om, L](std::span<const double> y) { return op.apply_adjoint(y, *om, L); };
    return m;
}

LinearMap dense_map(const DenseMatrix& a) {
    auto mat = std::make_shared<const DenseMatrix>(a);
    LinearMap m;
    m.rows = a.rows;
    m.cols = a.cols;
    m.forward = [mat](std::span<const double> x) {
        std::vector<double> y(mat->rows, 0.0);
        for (std::size_t i = 0; i < mat->rows; ++i)
            for (std::size_t j = 0; j < mat->cols; ++j) y[i] += (*mat)(i, j) * x[j];
        return y;
    };
    m.adjoint = [mat](std::span<const double> y) {
        std::vector<double> x(mat->cols, 0.0);
        for (std::size_t i = 0; i < mat->rows; ++i)
            for (std::size_t j = 0; j < mat->cols; ++j) x[j] += (*mat)(i, j) * y[i];
        return x;
    };
    return m;
}

double operator_norm(const LinearMap& a, std::uint64_t seed, int max_iterations, double tol) {
    if (a.cols == 0 || a.rows == 0) return 0.0;
    SplitMix64 rng(seed ^ 0xA5A5A5A5ULL);
    std::vector<double> v(a.cols);
    for (auto& x : v) x = rng.normal();
    double nv = norm2(v);
    for (auto& x : v) x /= nv;
    double est = 0.0;
    for (int it = 0; it < max_iterations; ++it) {
        std::vector<double> w = a.adjoint(a.forward(v));
        const double nw = norm2(w);
        if (nw == 0.0) return 0.0;
        const double next = std::sqrt(nw);
        for (std::size_t j = 0; j < v.size(); ++j) v[j] = w[j] / nw;
        if (std::abs(next - est) <= tol * next) return next;
        est = next;
    }
    return est;
}

namespace {

struct Point {
    std::vector<double> x, ax, y, aty;
};

struct Merit {
    double gap = 0.0;       // ||Ax - g|| - delta
    double objective = 0.0;
    double dual = 0.0;      // dual objective of y rescaled to ||A^T y||_inf <= 1
    double kkt = 0.0;
};

Merit evaluate(const Point& p, std::span<const double> g, double delta) {
    Merit m;
    double r2 = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) r2 += (p.ax[i] - g[i]) * (p.ax[i] - g[i]);
    m.gap = std::sqrt(r2) - delta;
    m.objective = norm1(p.x);
    double inf = 0.0;
    for (double t : p.aty) inf = std::max(inf, std::abs(t));
    const double raw = -dot(g, p.y) - delta * norm2(p.y);
    m.dual = (inf > 1.0 ? 1.0 / inf : 1.0) * raw;
    const double pr = std::max(0.0, m.gap), dr = std::max(0.0, inf - 1.0), dg = m.objective - raw;
    m.kkt = std::sqrt(pr * pr + dr * dr + dg * dg);
    return m;
}

double distance(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

}  // namespace

// Chambolle-Pock iteration with restarts to the running average and an
// adaptive primal weight: a restart is triggered when the KKT residual of the
// candidate drops enough relative to the last restart point.
ReconstructionResult solve_bpdn(const LinearMap& a, std::span<const double> g, const ReconstructionConfig& cfg) {
    if (g.size() != a.rows) throw DomainError("solve_bpdn: |g| != |Omega|");
    if (cfg.delta < 0.0) throw DomainError("solve_bpdn: delta must be non-negative");
    if (cfg.max_iterations < 1 || cfg.tolerance <= 0.0) throw DomainError("solve_bpdn: invalid iteration settings");
    const std::size_t n = a.cols, m = a.rows;
    const double gnorm = norm2(g);
    ReconstructionResult res;
    res.xi.assign(n, 0.0);
    if (gnorm <= cfg.delta) {
        res.converged = true;
        res.feasibility_gap = gnorm - cfg.delta;
        return res;
    }
    res.operator_norm = operator_norm(a, cfg.seed);
    if (res.operator_norm == 0.0) throw NumericalError("solve_bpdn: operator is zero but 0 is infeasible");
    const bool fixed_steps = cfg.tau > 0.0 || cfg.sigma > 0.0;
    const double eta = 0.95 / res.operator_norm;
    double omega = 1.0;
    double tau = cfg.tau > 0.0 ? cfg.tau : eta;
    double sigma = cfg.sigma > 0.0 ? cfg.sigma : eta;
    if (sigma * tau * res.operator_norm * res.operator_norm >= 1.0)
        throw DomainError("solve_bpdn: step sizes violate sigma tau ||A||^2 < 1");

    const double feas_tol = cfg.tolerance * std::max(1.0, gnorm);
    auto done = [&](const Merit& mt) {
        return mt.gap <= feas_tol && std::abs(mt.objective - mt.dual) <= cfg.tolerance * std::max(1.0, mt.objective);
    };

    Point cur{std::vector<double>(n, 0.0), std::vector<double>(m, 0.0), std::vector<double>(m, 0.0),
              std::vector<double>(n, 0.0)};
    Point sum = cur, anchor = cur;
    std::size_t count = 0;
    double anchor_kkt = evaluate(cur, g, cfg.delta).kkt, last_check = anchor_kkt;
    int since_restart = 0;
    const int check_every = 64;
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> xnew(n), v(m);
    const Point* result = &cur;
    Point avg;

    for (int it = 1; it <= cfg.max_iterations; ++it) {
        for (std::size_t j = 0; j < n; ++j) {
            const double z = cur.x[j] - tau * cur.aty[j];
            xnew[j] = std::copysign(std::max(std::abs(z) - tau, 0.0), z);
        }
        std::vector<double> axnew = a.forward(xnew);
        // Dual step: prox of sigma F*, F the indicator of the delta ball around g.
        double dn2 = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            v[i] = cur.y[i] + sigma * (2.0 * axnew[i] - cur.ax[i]);
            const double d = v[i] / sigma - g[i];
            dn2 += d * d;
        }
        const double dn = std::sqrt(dn2);
        const double scale = dn > cfg.delta ? cfg.delta / dn : 1.0;
        for (std::size_t i = 0; i < m; ++i) cur.y[i] = v[i] - sigma * (g[i] + scale * (v[i] / sigma - g[i]));
        cur.x.swap(xnew);
        cur.ax.swap(axnew);
        cur.aty = a.adjoint(cur.y);

        ++count;
        ++since_restart;
        for (std::size_t j = 0; j < n; ++j) {
            sum.x[j] += cur.x[j];
            sum.aty[j] += cur.aty[j];
        }
        for (std::size_t i = 0; i < m; ++i) {
            sum.ax[i] += cur.ax[i];
            sum.y[i] += cur.y[i];
        }

        const Merit mc = evaluate(cur, g, cfg.delta);
        if (mc.gap <= feas_tol) best = std::min(best, mc.objective);
        if (std::isfinite(best)) res.best_feasible.push_back(best);
        res.iterations = it;
        if (done(mc)) {
            res.converged = true;
            break;
        }
        if (it % check_every != 0 && it != cfg.max_iterations) continue;

        avg = sum;
        for (auto* vec : {&avg.x, &avg.ax, &avg.y, &avg.aty})
            for (auto& t : *vec) t /= static_cast<double>(count);
        const Merit ma = evaluate(avg, g, cfg.delta);
        if (done(ma)) {
            result = &avg;
            res.converged = true;
            break;
        }
        const bool use_avg = ma.kkt < mc.kkt;
        const double cand = use_avg ? ma.kkt : mc.kkt;
        const bool restart = cand <= 0.2 * anchor_kkt || (cand <= 0.8 * anchor_kkt && cand > last_check) ||
                             since_restart >= 0.36 * it;
        last_check = cand;
        if (!restart) continue;
        if (use_avg) cur = avg;
        if (!fixed_steps) {
            const double dx = distance(cur.x, anchor.x), dy = distance(cur.y, anchor.y);
            if (dx > 1e-10 && dy > 1e-10) {
                omega = std::exp(0.5 * std::log(dy / dx) + 0.5 * std::log(omega));
                tau = eta / omega;
                sigma = eta * omega;
            }
        }
        anchor = cur;
        anchor_kkt = last_check = cand;
        for (auto* vec : {&sum.x, &sum.ax, &sum.y, &sum.aty}) std::fill(vec->begin(), vec->end(), 0.0);
        count = 0;
        since_restart = 0;
    }
    const Merit mf = evaluate(*result, g, cfg.delta);
    res.feasibility_gap = mf.gap;
    res.objective = mf.objective;
    res.dual_objective = mf.dual;
    res.xi = result->x;
    return res;
}

ReconstructionResult solve_bpdn(const CobOperator& op, const MeasurementVector& g, const ReconstructionConfig& cfg) {
    if (g.indices.size() != g.values.size()) throw DomainError("solve_bpdn: |values| != |Omega|");
    return solve_bpdn(section_map(op, g.indices, cfg.L), g.values, cfg);
}

MeasurementVector measure_signal(std::span<const double> cell_avg, std::vector<std::size_t> omega, double noise,
                                 std::uint64_t seed) {
    if (!is_power_of_two(cell_avg.size())) throw DomainError("measure_signal: grid size must be a power of two");
    if (noise < 0.0) throw DomainError("measure_signal: noise must be non-negative");
    for (auto i : omega)
        if (i >= cell_avg.size()) throw DomainError("measure_signal: sample index beyond the grid");
    const std::vector<double> c = fwht_sequency(cell_avg);
    MeasurementVector mv;
    mv.indices = std::move(omega);
    mv.delta = noise;
    for (auto i : mv.indices) mv.values.push_back(c[i]);
    if (noise > 0.0 && !mv.values.empty()) {
        SplitMix64 rng(seed);
        std::vector<double> z(mv.values.size());
        for (auto& v : z) v = rng.normal();
        const double nz = norm2(z);
        for (std::size_t t = 0; t < z.size(); ++t) mv.values[t] += noise * z[t] / nz;
    }
    return mv;
}

std::vector<double> truncated_walsh(std::span<const double> samples, int Q) {
    if (Q < 0 || Q > 30) throw DomainError("truncated_walsh: Q out of range");
    const std::size_t n = std::size_t{1} << Q;
    if (samples.size() > n) throw DomainError("truncated_walsh: more samples than 2^Q");
    std::vector<double> c(n, 0.0);
    std::copy(samples.begin(), samples.end(), c.begin());
    ifwht_sequency_inplace(c);
    return c;
}

double relative_l2_error(std::span<const double> estimate, std::span<const double> reference) {
    if (estimate.size() != reference.size()) throw DomainError("relative_l2_error: length mismatch");
    const double rn = norm2(reference);
    if (rn == 0.0) throw DomainError("relative_l2_error: zero reference");
    double s = 0.0;
    for (std::size_t i = 0; i < estimate.size(); ++i) s += (estimate[i] - reference[i]) * (estimate[i] - reference[i]);
    return std::sqrt(s) / rn;
}

void write_vector_csv(std::span<const double> v, const char* header, std::ostream& os) {
    os.precision(17);
    os << "index," << header << '\n';
    for (std::size_t i = 0; i < v.size(); ++i) os << i << ',' << v[i] << '\n';
}

}  // namespace walshcs
