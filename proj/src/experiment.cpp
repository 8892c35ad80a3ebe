#include "walshcs/experiment.hpp"

#include "json.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "walshcs/error.hpp"
#include "walshcs/walsh.hpp"

namespace walshcs {

namespace {

// Average of cos(2 pi k x) over [a, a + h).
double cos_average(int k, double a, double h) {
    const double t = std::numbers::pi * k * h;
    return std::cos(std::numbers::pi * k * (2.0 * a + h)) * std::sin(t) / t;
}

}  // namespace

Signal parse_signal(const std::string& name) {
    if (name == "f") return Signal::F;
    if (name == "g") return Signal::G;
    throw ConfigError("unknown signal '" + name + "' (expected f or g)");
}

const char* signal_name(Signal s) { return s == Signal::F ? "f" : "g"; }

double signal_value(Signal s, double x) {
    const double base = std::cos(2.0 * std::numbers::pi * x);
    const double hi = std::cos(10.0 * std::numbers::pi * x);
    if (s == Signal::F) return base + 0.2 * hi;
    return base + (x >= 0.5 ? hi : 0.0);
}

std::vector<double> signal_cell_averages(Signal s, int Q) {
    if (Q < 1 || Q > 26) throw DomainError("signal_cell_averages: Q out of range");
    const std::size_t n = std::size_t{1} << Q;
    const double h = 1.0 / static_cast<double>(n);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = static_cast<double>(i) * h;
        double hi = cos_average(5, a, h);
        if (s == Signal::F)
            hi *= 0.2;
        else if (a < 0.5)
            hi = 0.0;
        v[i] = cos_average(1, a, h) + hi;
    }
    return v;
}

Policy parse_policy(const std::string& name) {
    if (name == "paper") return Policy::Paper;
    if (name == "theorem") return Policy::Theorem;
    if (name == "uniform") return Policy::Uniform;
    throw ConfigError("unknown policy '" + name + "' (expected paper, theorem or uniform)");
}

const char* policy_name(Policy p) {
    switch (p) {
        case Policy::Paper: return "paper";
        case Policy::Theorem: return "theorem";
        case Policy::Uniform: return "uniform";
    }
    return "?";
}

LevelStructure ExperimentSpec::levels() const {
    if (R <= J0) throw ConfigError("R must exceed J0");
    return LevelStructure::make(J0, R - J0, q);
}

int ExperimentSpec::grid_exponent() const {
    if (!is_power_of_two(L)) throw ConfigError("L must be a power of two");
    return std::max(R + q, static_cast<int>(log2_exact(L)));
}

void apply_config(ExperimentSpec& spec, const std::map<std::string, std::string>& kv) {
    for (const auto& [key, val] : kv) {
        try {
            if (key == "signal")
                spec.signal = parse_signal(val);
            else if (key == "order")
                spec.p = std::stoi(val);
            else if (key == "J0")
                spec.J0 = std::stoi(val);
            else if (key == "R")
                spec.R = std::stoi(val);
            else if (key == "q")
                spec.q = std::stoi(val);
            else if (key == "budget")
                spec.budget = std::stoull(val);
            else if (key == "policy")
                spec.policy = parse_policy(val);
            else if (key == "leftover") {
                if (val == "remainder")
                    spec.leftover = LeftoverRule::LargestRemainder;
                else if (val == "low")
                    spec.leftover = LeftoverRule::LowLevelsFirst;
                else if (val == "high")
                    spec.leftover = LeftoverRule::HighLevelsFirst;
                else
                    throw ConfigError("leftover must be remainder, low or high");
            }
            else if (key == "seed")
                spec.seed = std::stoull(val);
            else if (key == "delta")
                spec.delta = std::stod(val);
            else if (key == "noise")
                spec.noise = std::stod(val);
            else if (key == "L")
                spec.L = std::stoull(val);
            else if (key == "max_iterations")
                spec.max_iterations = std::stoi(val);
            else if (key == "tolerance")
                spec.tolerance = std::stod(val);
            else if (key == "out")
                spec.out = val;
            else if (key == "sparsity") {
                spec.sparsity.clear();
                std::size_t pos = 0;
                while (pos <= val.size()) {
                    auto comma = val.find(',', pos);
                    if (comma == std::string::npos) comma = val.size();
                    spec.sparsity.push_back(std::stoull(val.substr(pos, comma - pos)));
                    pos = comma + 1;
                }
            } else
                throw ConfigError("unknown config key '" + key + "'");
        } catch (const std::logic_error&) {
            throw ConfigError("bad value '" + val + "' for key '" + key + "'");
        }
    }
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

std::vector<std::size_t> allocate_for(const ExperimentSpec& spec) {
    const LevelStructure lv = spec.levels();
    AllocationOptions opt;
    opt.leftover = spec.leftover;
    SparsityProfile prof;
    switch (spec.policy) {
        case Policy::Paper:
            opt.weights = AllocationWeights::Uniform;
            opt.full_first = true;
            break;
        case Policy::Uniform:
            opt.weights = AllocationWeights::Uniform;
            break;
        case Policy::Theorem:
            if (spec.sparsity.size() != static_cast<std::size_t>(lv.r))
                throw ConfigError("theorem policy needs sparsity with one entry per level");
            opt.weights = AllocationWeights::Theorem;
            prof.s = spec.sparsity;
            break;
    }
    return allocate_budget(prof, lv, spec.budget, opt);
}

SamplingScheme scheme_for(const ExperimentSpec& spec) {
    return draw_scheme(spec.levels(), allocate_for(spec), spec.seed);
}

RunResult run_reconstruction(const ExperimentSpec& spec, const SamplingScheme& scheme) {
    RunResult out;
    out.scheme = scheme;
    out.Q = spec.grid_exponent();
    const LevelStructure lv = spec.levels();
    CobOperator op(WaveletBasis(spec.p, spec.J0), lv, out.Q);
    out.reference = signal_cell_averages(spec.signal, out.Q);
    const MeasurementVector g = measure_signal(out.reference, scheme.indices(), spec.noise, spec.seed);

    ReconstructionConfig cfg;
    cfg.L = spec.L;
    cfg.delta = std::max(spec.delta, spec.noise);
    cfg.max_iterations = spec.max_iterations;
    cfg.tolerance = spec.tolerance;
    cfg.seed = spec.seed;
    out.rec = solve_bpdn(op, g, cfg);
    out.estimate = op.synthesize(out.rec.xi);
    out.cs_error = relative_l2_error(out.estimate, out.reference);

    std::vector<std::size_t> first(std::min(spec.budget, out.reference.size()));
    for (std::size_t i = 0; i < first.size(); ++i) first[i] = i;
    const MeasurementVector head = measure_signal(out.reference, first, spec.noise, spec.seed);
    out.tw = truncated_walsh(head.values, out.Q);
    out.tw_error = relative_l2_error(out.tw, out.reference);
    return out;
}

RunResult run_reconstruction(const ExperimentSpec& spec) { return run_reconstruction(spec, scheme_for(spec)); }

std::string summary_json(const ExperimentSpec& spec, const RunResult& r) {
    nlohmann::json j;
    j["signal"] = signal_name(spec.signal);
    j["order"] = spec.p;
    j["J0"] = spec.J0;
    j["R"] = spec.R;
    j["q"] = spec.q;
    j["N"] = r.scheme.levels.Nr();
    j["budget"] = spec.budget;
    j["policy"] = policy_name(spec.policy);
    j["m"] = r.scheme.m;
    j["seed"] = spec.seed;
    j["L"] = spec.L;
    j["Q"] = r.Q;
    j["delta"] = std::max(spec.delta, spec.noise);
    j["cs_error"] = r.cs_error;
    j["tw_error"] = r.tw_error;
    j["iterations"] = r.rec.iterations;
    j["feasibility_gap"] = r.rec.feasibility_gap;
    j["objective"] = r.rec.objective;
    j["converged"] = r.rec.converged;
    return j.dump();
}

}  // namespace walshcs
