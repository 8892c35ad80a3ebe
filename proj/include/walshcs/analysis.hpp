#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "walshcs/cob_operator.hpp"
#include "walshcs/sampling.hpp"

namespace walshcs {

// Max squared magnitude.
double coherence(const DenseMatrix& section);

// Local coherences of an operator over its own level structure. Block-row
// maxima run over columns < 2^Q; `row_residual` bounds the energy of the
// neglected columns (max row deficit 1 - sum_{j<2^Q} u_ij^2).
struct CoherenceReport {
    int r = 0;
    int J0 = 0;
    std::vector<double> mu;        // r x r, row-major in (k-1, l-1)
    std::vector<double> block_mu;  // max u^2 over block (k, l)
    std::vector<double> row_mu;    // max u^2 over block row k
    std::vector<double> mu_inf;    // mu(k, inf), columns [M_{r-1}, 2^Q)
    bool mu_inf_truncated = true;
    double global = 0.0;
    double row_residual = 0.0;
    // max_{k,l} mu(k,l) 2^{J0+k-1} 2^{|k-l|/2}
    double shape_constant = 0.0;
    // max_{k,l} block_mu / (2^{-J0-k} 2^{-|l-k|}), fitted C_mu
    double c_mu = 0.0;

    double at(int k, int l) const { return mu[(k - 1) * r + (l - 1)]; }
    double block_at(int k, int l) const { return block_mu[(k - 1) * r + (l - 1)]; }
    double shape_ratio(int k, int l) const;
    double block_ratio(int k, int l) const;
};

CoherenceReport local_coherence(const CobOperator& op);
double local_coherence(const CobOperator& op, int k, int l);
double local_coherence_inf(const CobOperator& op, int k);

// Closed-form constants of the decay estimates, evaluated with sup |phi'| and
// sup |psi'| estimated by finite differences of cell averages at scale 2^-s.
struct AnalyticConstants {
    double c_phi = 0.0;
    double c_psi = 0.0;
    double c_phi_psi = 0.0;
    double c_mu = 0.0;   // (2p C_{phi,psi})^2
    double c_rs = 0.0;   // (16p - 8)^2 C_phi^2
};
AnalyticConstants analytic_constants(int p, int s = 12);

struct SparsityReport {
    std::vector<double> S;      // exact values, empty when not computed
    std::vector<double> bound;  // 2 C_geo C_max sum_l 2^{-|k-l|/2} s_l
    double c_geo = 0.0;
    double c_max = 0.0;
};

// C_geo = max_k sum_l 2^{-|k-l|/2}.
double geometric_constant(int r);
// max_{k,l} ||P_k U P_l||_2^2 / 2^{1-|k-l|} over the operator's levels.
double fitted_block_constant(const CobOperator& op);

// Exhaustive max over supports with s_l entries per level and sign vertices.
std::vector<double> relative_sparsity_exact(const CobOperator& op, const SparsityProfile& s,
                                            std::size_t M_cap = 16);
// Bound with the given constant; exact values filled in when M_r <= M_cap.
SparsityReport relative_sparsity(const CobOperator& op, const SparsityProfile& s, std::size_t M_cap = 16);

struct TailNorm {
    double value = 0.0;     // over rows [N, 2^Q)
    double residual = 0.0;  // sqrt of summed column deficits beyond 2^Q
    double upper = 0.0;     // sqrt(value^2 + residual^2)
    int iterations = 0;
};

// ||P_N^perp U P_M||_2 by power iteration (fixed start, tol 1e-8, 1e4 steps).
TailNorm tail_norm(const CobOperator& op, std::size_t N, std::size_t M);

struct BalancingReport {
    std::size_t N = 0, M = 0, s = 0;
    double K = 1.0;
    double first = 0.0;          // ||P_M U* P_N U P_M - P_M||_{inf->inf}
    double second = 0.0;         // ||P_M^perp U* P_N U P_M||_{inf->inf}, rows < 2^Q
    double second_residual = 0.0;
    double first_threshold = 0.0;
    double second_threshold = 0.125;
    bool passed = false;
};

BalancingReport balancing_check(const CobOperator& op, std::size_t N, std::size_t M, double K, std::size_t s);

struct MTilde {
    std::size_t value = 0;
    double threshold = 0.0;   // 1 / (32 K sqrt(s))
    double residual = 0.0;    // bound on ||P_N U e_m|| for m >= 2^Q
    double bound = 0.0;       // C_mu ceil(N 32^2 K^2 s) with the supplied C_mu
};

// Column scan up to 2^Q; throws NumericalError when the threshold is not reached.
MTilde m_tilde(const CobOperator& op, std::size_t N, double K, std::size_t s, double c_mu = 1.0);

// l1 norm of all but the s_k largest-magnitude entries in each coefficient level.
double sigma_sM(std::span<const double> x, const std::vector<std::size_t>& M, const SparsityProfile& s);

void write_coherence_csv(const CoherenceReport& rep, std::ostream& os);
void write_sparsity_csv(const SparsityReport& rep, const SparsityProfile& s, std::ostream& os);

}  // namespace walshcs
