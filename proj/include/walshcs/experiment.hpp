#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "walshcs/reconstruction.hpp"
#include "walshcs/sampling.hpp"

namespace walshcs {

enum class Signal { F, G };

Signal parse_signal(const std::string& name);
const char* signal_name(Signal s);
// f(x) = cos 2 pi x + 0.2 cos 10 pi x,  g(x) = cos 2 pi x + cos 10 pi x 1{x >= 1/2}.
double signal_value(Signal s, double x);
// Exact averages over the cells [i 2^-Q, (i+1) 2^-Q).
std::vector<double> signal_cell_averages(Signal s, int Q);

enum class Policy { Paper, Theorem, Uniform };
Policy parse_policy(const std::string& name);
const char* policy_name(Policy p);

struct ExperimentSpec {
    Signal signal = Signal::F;
    int p = 4;
    int J0 = 3;
    int R = 5;  // log2 N before oversampling; also log2 M_r
    int q = 1;
    std::size_t budget = 32;
    Policy policy = Policy::Paper;
    LeftoverRule leftover = LeftoverRule::LargestRemainder;
    std::vector<std::size_t> sparsity;  // per-level s for the theorem policy
    std::uint64_t seed = 1;
    double delta = 1e-8;
    double noise = 0.0;
    std::size_t L = 4096;
    int max_iterations = 5000;
    double tolerance = 1e-6;
    std::string out = "out";

    LevelStructure levels() const;
    // Fine grid exponent: max(R + q, log2 L).
    int grid_exponent() const;
};

// Applies key=value pairs (keys as the long CLI flags without dashes).
void apply_config(ExperimentSpec& spec, const std::map<std::string, std::string>& kv);
std::map<std::string, std::string> read_config_file(const std::string& path);

struct RunResult {
    SamplingScheme scheme;
    ReconstructionResult rec;
    int Q = 0;
    std::vector<double> reference;  // cell averages of the signal on the 2^Q grid
    std::vector<double> estimate;   // cell averages of the reconstruction
    std::vector<double> tw;         // truncated Walsh series from the first |m| samples
    double cs_error = 0.0;
    double tw_error = 0.0;
};

std::vector<std::size_t> allocate_for(const ExperimentSpec& spec);
SamplingScheme scheme_for(const ExperimentSpec& spec);
RunResult run_reconstruction(const ExperimentSpec& spec, const SamplingScheme& scheme);
RunResult run_reconstruction(const ExperimentSpec& spec);

std::string summary_json(const ExperimentSpec& spec, const RunResult& r);

}  // namespace walshcs
