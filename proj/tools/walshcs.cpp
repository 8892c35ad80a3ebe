// walshcs: experiment driver for Walsh sampling with boundary wavelets.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "walshcs/analysis.hpp"
#include "walshcs/error.hpp"
#include "walshcs/experiment.hpp"

namespace fs = std::filesystem;
using namespace walshcs;

namespace {

enum Exit { kOk = 0, kConfig = 2, kNumerical = 3, kSizeGuard = 4 };

// Writes through a temporary sibling and renames, so readers never see partial files.
void write_atomic(const fs::path& path, const std::function<void(std::ostream&)>& body, bool binary = false) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, binary ? std::ios::binary : std::ios::out);
        if (!os) throw ConfigError("cannot write " + tmp.string());
        body(os);
        if (!os) throw ConfigError("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

fs::path out_dir(const ExperimentSpec& spec) {
    fs::path d(spec.out);
    std::error_code ec;
    fs::create_directories(d, ec);
    if (ec) throw ConfigError("cannot create output directory " + spec.out);
    return d;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    try {
        while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
    } catch (const std::logic_error&) {
        throw ConfigError("bad integer list '" + s + "'");
    }
    if (out.empty()) throw ConfigError("empty integer list");
    return out;
}

// Black marks sampled rows, one column per Walsh index.
void write_pattern(const fs::path& base, const SamplingScheme& sc) {
    const std::size_t n = sc.levels.Nr(), h = 32;
    std::vector<unsigned char> row(n, 255);
    for (auto i : sc.indices()) row[i] = 0;
    write_atomic(base.string() + ".pgm", [&](std::ostream& os) {
        os << "P5\n" << n << ' ' << h << "\n255\n";
        for (std::size_t y = 0; y < h; ++y) os.write(reinterpret_cast<const char*>(row.data()), n);
    }, true);
    write_atomic(base.string() + ".csv", [&](std::ostream& os) {
        os << "index,level,sampled\n";
        for (std::size_t i = 0; i < n; ++i) os << i << ',' << sc.levels.sample_level(i) << ',' << (row[i] == 0) << '\n';
    });
}

void write_run(const fs::path& dir, const std::string& tag, const ExperimentSpec& spec, const RunResult& r) {
    write_atomic(dir / (tag + "_grid.csv"), [&](std::ostream& os) {
        os.precision(17);
        os << "x,reference,cs,tw\n";
        const double h = 1.0 / static_cast<double>(r.reference.size());
        for (std::size_t i = 0; i < r.reference.size(); ++i)
            os << (static_cast<double>(i) + 0.5) * h << ',' << r.reference[i] << ',' << r.estimate[i] << ',' << r.tw[i]
               << '\n';
    });
    write_atomic(dir / (tag + "_coefficients.csv"),
                 [&](std::ostream& os) { write_vector_csv(r.rec.xi, "coefficient", os); });
    write_atomic(dir / (tag + "_scheme.txt"), [&](std::ostream& os) { write_scheme(r.scheme, os); });
    write_pattern(dir / (tag + "_pattern"), r.scheme);
    const std::string line = summary_json(spec, r);
    write_atomic(dir / (tag + "_summary.json"), [&](std::ostream& os) { os << line << '\n'; });
    std::cout << line << '\n';
    if (!r.rec.converged)
        std::cerr << "warning: solver stopped after " << r.rec.iterations << " iterations without meeting the tolerance\n";
}

int cmd_matrix(const ExperimentSpec& spec, std::size_t N, double clip) {
    const int J0 = spec.p == 1 ? 0 : spec.J0;
    int R = 0;
    while ((std::size_t{1} << R) < N) ++R;
    if ((std::size_t{1} << R) != N) throw ConfigError("--N must be a power of two");
    if (R <= J0) throw ConfigError("--N must exceed 2^J0");
    CobOperator op(WaveletBasis(spec.p, J0), LevelStructure::make(J0, R - J0, 0));
    const DenseMatrix m = op.section_dense(N, N);
    const fs::path dir = out_dir(spec);
    const std::string base = "matrix_p" + std::to_string(spec.p) + "_N" + std::to_string(N);
    write_atomic(dir / (base + ".pgm"), [&](std::ostream& os) { write_section_pgm(m, os, clip); }, true);
    write_atomic(dir / (base + ".csv"), [&](std::ostream& os) { write_section_csv(m, os); });
    std::cout << (dir / (base + ".pgm")).string() << '\n';
    return kOk;
}

int cmd_analyze(const ExperimentSpec& spec, int Q, double K, std::size_t s) {
    const LevelStructure lv = spec.levels();
    CobOperator op(WaveletBasis(spec.p, spec.J0), lv, Q);
    const fs::path dir = out_dir(spec);
    const CoherenceReport coh = local_coherence(op);
    write_atomic(dir / "coherence.csv", [&](std::ostream& os) { write_coherence_csv(coh, os); });

    const std::size_t M = lv.Mr();
    write_atomic(dir / "tail.csv", [&](std::ostream& os) {
        os.precision(17);
        os << "N,M,tail,tail2_N_over_M,residual\n";
        for (std::size_t N = M; N <= op.grid_size() / 2; N *= 2) {
            const TailNorm t = tail_norm(op, N, M);
            os << N << ',' << M << ',' << t.value << ',' << t.value * t.value * N / M << ',' << t.residual << '\n';
        }
    });
    const BalancingReport bal = balancing_check(op, lv.Nr(), M, K, s);
    write_atomic(dir / "balancing.csv", [&](std::ostream& os) {
        os.precision(17);
        os << "N,M,K,s,first,first_threshold,second,second_threshold,second_residual,passed\n";
        os << bal.N << ',' << bal.M << ',' << bal.K << ',' << bal.s << ',' << bal.first << ',' << bal.first_threshold
           << ',' << bal.second << ',' << bal.second_threshold << ',' << bal.second_residual << ',' << bal.passed
           << '\n';
    });
    // Smallest N (powers of two from M up to 2^Q) at which the check passes.
    std::size_t n_pass = 0;
    write_atomic(dir / "balancing_sweep.csv", [&](std::ostream& os) {
        os.precision(17);
        os << "N,first,first_threshold,second,passed\n";
        for (std::size_t N = M; N <= op.grid_size() && n_pass == 0; N *= 2) {
            const BalancingReport b = balancing_check(op, N, M, K, s);
            os << N << ',' << b.first << ',' << b.first_threshold << ',' << b.second << ',' << b.passed << '\n';
            if (b.passed) n_pass = N;
        }
    });
    std::optional<MTilde> mt;
    try {
        mt = m_tilde(op, lv.Nr(), K, s, coh.c_mu);
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
    }
    if (!spec.sparsity.empty()) {
        SparsityProfile prof{spec.sparsity};
        const SparsityReport sp = relative_sparsity(op, prof);
        write_atomic(dir / "sparsity.csv", [&](std::ostream& os) { write_sparsity_csv(sp, prof, os); });
    }
    const AnalyticConstants ac = analytic_constants(spec.p);
    std::cout << "Q=" << op.Q() << " global_coherence=" << coh.global << " shape_constant=" << coh.shape_constant
              << " fitted_C_mu=" << coh.c_mu << " analytic_C_mu~" << ac.c_mu << " row_residual=" << coh.row_residual
              << "\nbalancing first=" << bal.first << " (<= " << bal.first_threshold << ") second=" << bal.second
              << " (<= 0.125) " << (bal.passed ? "passed" : "failed") << "\nbalancing first passes at N="
              << (n_pass ? std::to_string(n_pass) : std::string("none up to 2^Q")) << '\n';
    if (!mt) return kNumerical;
    std::cout << "M_tilde=" << mt->value << " threshold=" << mt->threshold << " bound=" << mt->bound << '\n';
    return kOk;
}

int cmd_reconstruct(const ExperimentSpec& spec) {
    const RunResult r = run_reconstruction(spec);
    write_run(out_dir(spec), "reconstruct", spec, r);
    return kOk;
}

int cmd_errorcurve(const ExperimentSpec& spec, const std::vector<int>& Rs) {
    std::vector<RunResult> runs(Rs.size());
    std::vector<ExperimentSpec> specs(Rs.size(), spec);
    for (std::size_t t = 0; t < Rs.size(); ++t) specs[t].R = Rs[t];
#pragma omp parallel for schedule(dynamic)
    for (std::size_t t = 0; t < Rs.size(); ++t) runs[t] = run_reconstruction(specs[t]);
    const fs::path dir = out_dir(spec);
    write_atomic(dir / "errorcurve.csv", [&](std::ostream& os) {
        os.precision(17);
        os << "N,cs_error,tw_error,iterations,converged\n";
        for (const auto& r : runs)
            os << r.scheme.levels.Nr() << ',' << r.cs_error << ',' << r.tw_error << ',' << r.rec.iterations << ','
               << r.rec.converged << '\n';
    });
    for (std::size_t t = 0; t < runs.size(); ++t)
        write_run(dir, "errorcurve_N" + std::to_string(runs[t].scheme.levels.Nr()), specs[t], runs[t]);
    return kOk;
}

int cmd_fliptest(const ExperimentSpec& spec) {
    const SamplingScheme sc = scheme_for(spec);
    const RunResult a = run_reconstruction(spec, sc);
    const RunResult b = run_reconstruction(spec, flip_pattern(sc));
    const fs::path dir = out_dir(spec);
    write_run(dir, "structured", spec, a);
    write_run(dir, "flipped", spec, b);
    write_atomic(dir / "fliptest.csv", [&](std::ostream& os) {
        os.precision(17);
        os << "pattern,cs_error,iterations,converged\n";
        os << "structured," << a.cs_error << ',' << a.rec.iterations << ',' << a.rec.converged << '\n';
        os << "flipped," << b.cs_error << ',' << b.rec.iterations << ',' << b.rec.converged << '\n';
    });
    std::cout << "structured " << a.cs_error << " flipped " << b.cs_error << " ratio " << b.cs_error / a.cs_error
              << '\n';
    return kOk;
}

int cmd_sweep(const ExperimentSpec& spec, int seeds) {
    if (seeds < 1) throw ConfigError("--seeds must be positive");
    std::vector<RunResult> runs(seeds);
    std::vector<ExperimentSpec> specs(seeds, spec);
    for (int t = 0; t < seeds; ++t) specs[t].seed = spec.seed + static_cast<std::uint64_t>(t);
#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < seeds; ++t) runs[t] = run_reconstruction(specs[t]);
    write_atomic(out_dir(spec) / "sweep.csv", [&](std::ostream& os) {
        os.precision(17);
        os << "seed,cs_error,tw_error,iterations,converged\n";
        for (int t = 0; t < seeds; ++t)
            os << specs[t].seed << ',' << runs[t].cs_error << ',' << runs[t].tw_error << ',' << runs[t].rec.iterations
               << ',' << runs[t].rec.converged << '\n';
    });
    for (int t = 0; t < seeds; ++t) std::cout << summary_json(specs[t], runs[t]) << '\n';
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Walsh sampling with boundary wavelets: operator, analysis and reconstruction experiments"};
    // Global flags may also follow the subcommand.
    app.fallthrough();
    app.require_subcommand(1);
    std::map<std::string, std::string> flags;
    std::string config;
    app.add_option("--config", config, "key=value file; command-line flags override it");
    const std::vector<std::pair<std::string, std::string>> keys = {
        {"signal", "signal f or g"},
        {"order", "wavelet order p (1 for Haar, 3..10)"},
        {"J0", "coarsest wavelet level"},
        {"R", "log2 of N before oversampling (M_r = 2^R)"},
        {"q", "oversampling exponent of the last sample level"},
        {"budget", "total number of samples |m|"},
        {"policy", "paper | theorem | uniform"},
        {"leftover", "remainder | low | high"},
        {"sparsity", "per-level sparsities s_1,..,s_r"},
        {"seed", "sampling seed"},
        {"delta", "constraint radius"},
        {"noise", "l2 norm of added measurement noise"},
        {"L", "number of reconstructed coefficients"},
        {"max_iterations", "solver iteration cap"},
        {"tolerance", "solver tolerance"},
        {"out", "output directory"},
    };
    for (const auto& [k, help] : keys)
        app.add_option("--" + k, flags[k], help)->option_text("VALUE");

    std::size_t N = 256;
    double clip = 99.0;
    auto* matrix = app.add_subcommand("matrix", "heatmap of |P_N U P_N|");
    matrix->add_option("--N", N, "section size (power of two)");
    matrix->add_option("--clip", clip, "magnitude percentile mapped to white");

    int Q = -1;
    double K = 1.0;
    std::size_t s = 16;
    auto* analyze = app.add_subcommand("analyze", "coherence, tail norm, balancing and sparsity reports");
    analyze->add_option("--Q", Q, "fine grid exponent (default max(log2 N_r, log2 M_r + 3))");
    analyze->add_option("--K", K, "balancing constant K");
    analyze->add_option("--s", s, "total sparsity for the balancing check and M tilde");

    auto* reconstruct = app.add_subcommand("reconstruct", "CS and truncated Walsh reconstruction");
    std::string Rs = "7,8,9";
    auto* errorcurve = app.add_subcommand("errorcurve", "fixed budget, sweep over N = 2^(R+q)");
    errorcurve->add_option("--Rs", Rs, "comma separated R values");
    auto* fliptest = app.add_subcommand("fliptest", "structured versus flipped sampling pattern");
    int seeds = 10;
    auto* sweep = app.add_subcommand("sweep", "repeat a reconstruction over consecutive seeds");
    sweep->add_option("--seeds", seeds, "number of seeds");

    app.require_subcommand(1);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        ExperimentSpec spec;
        if (!config.empty()) apply_config(spec, read_config_file(config));
        std::map<std::string, std::string> given;
        for (const auto& [k, v] : flags)
            if (!v.empty()) given[k] = v;
        apply_config(spec, given);
        if (*matrix) {
            if (!flags.count("J0") || flags["J0"].empty()) spec.J0 = spec.p == 1 ? 0 : std::max(spec.J0, min_level(spec.p));
            return cmd_matrix(spec, N, clip);
        }
        if (*analyze) return cmd_analyze(spec, Q, K, s);
        if (*reconstruct) return cmd_reconstruct(spec);
        if (*errorcurve) return cmd_errorcurve(spec, parse_int_list(Rs));
        if (*fliptest) return cmd_fliptest(spec);
        if (*sweep) return cmd_sweep(spec, seeds);
    } catch (const SizeGuardError& e) {
        std::cerr << "size guard: " << e.what() << '\n';
        return kSizeGuard;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const DomainError& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kConfig;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    }
    return kOk;
}
