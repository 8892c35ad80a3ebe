#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "walshcs/cob_operator.hpp"

namespace walshcs {

// Matrix-free rows x cols linear map with its adjoint.
struct LinearMap {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::function<std::vector<double>(std::span<const double>)> forward;
    std::function<std::vector<double>(std::span<const double>)> adjoint;
};

// P_Omega U P_L.
LinearMap section_map(const CobOperator& op, std::vector<std::size_t> omega, std::size_t L);
LinearMap dense_map(const DenseMatrix& a);

struct ReconstructionConfig {
    std::size_t L = 4096;
    double delta = 1e-8;
    int max_iterations = 5000;
    double tolerance = 1e-6;
    double sigma = 0.0;  // 0 selects 0.95 / ||A||
    double tau = 0.0;    // 0 selects 0.95 / ||A||
    std::uint64_t seed = 0;
};

struct ReconstructionResult {
    std::vector<double> xi;
    int iterations = 0;
    double feasibility_gap = 0.0;  // ||A xi - g||_2 - delta
    double objective = 0.0;        // ||xi||_1
    double dual_objective = 0.0;   // of the rescaled dual iterate
    double operator_norm = 0.0;
    bool converged = false;
    // Best objective among iterates within the feasibility tolerance, one
    // entry per iteration once the first such iterate appears.
    std::vector<double> best_feasible;
};

// min ||xi||_1 subject to ||A xi - g||_2 <= delta by primal-dual splitting
// (soft thresholding and projection onto the delta ball). Stops when the
// feasibility gap is at most tol * max(1, ||g||) and the relative
// primal-dual gap is at most tol; otherwise returns flagged unconverged.
ReconstructionResult solve_bpdn(const LinearMap& a, std::span<const double> g, const ReconstructionConfig& cfg);
ReconstructionResult solve_bpdn(const CobOperator& op, const MeasurementVector& g, const ReconstructionConfig& cfg);

// Largest singular value by power iteration from a seeded start.
double operator_norm(const LinearMap& a, std::uint64_t seed = 0, int max_iterations = 500, double tol = 1e-8);

// Sequency Walsh coefficients (integrals against Wal(i, .)) of a function
// given by its cell averages on a 2^Q grid, at the rows of omega. Adds noise of
// l2 norm `noise` in a seeded Gaussian direction.
MeasurementVector measure_signal(std::span<const double> cell_avg, std::vector<std::size_t> omega,
                                 double noise = 0.0, std::uint64_t seed = 0);

// Inverse sequency transform of the zero-padded first samples on the 2^Q grid.
std::vector<double> truncated_walsh(std::span<const double> samples, int Q);

double relative_l2_error(std::span<const double> estimate, std::span<const double> reference);

void write_vector_csv(std::span<const double> v, const char* header, std::ostream& os);

}  // namespace walshcs
