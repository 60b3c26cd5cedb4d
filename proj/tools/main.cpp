// sumcap: generate MIMO broadcast-channel instances and compute their maximum
// sum rate by solving the dual sum-power MAC problem with conjugate gradient
// projection.
//
// Exit codes: 0 converged, 1 iteration limit reached, 2 input/usage error,
// 3 numeric failure (partial trace preserved).

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sumcap/channel.hpp"
#include "sumcap/digest.hpp"
#include "sumcap/solver.hpp"
#include "sumcap/trace_csv.hpp"
#include "sumcap/version.hpp"

namespace {

constexpr int kExitConverged = 0;
constexpr int kExitMaxIter = 1;
constexpr int kExitInputError = 2;
constexpr int kExitNumericFailure = 3;

const char* statusName(sumcap::SolveStatus s) {
    switch (s) {
        case sumcap::SolveStatus::Converged: return "converged";
        case sumcap::SolveStatus::MaxIterReached: return "max-iter";
        case sumcap::SolveStatus::NumericFailure: return "numeric-failure";
    }
    return "unknown";
}

int statusExit(sumcap::SolveStatus s) {
    switch (s) {
        case sumcap::SolveStatus::Converged: return kExitConverged;
        case sumcap::SolveStatus::MaxIterReached: return kExitMaxIter;
        case sumcap::SolveStatus::NumericFailure: return kExitNumericFailure;
    }
    return kExitNumericFailure;
}

double elapsedMs(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                     t0)
        .count();
}

struct SolveOptions {
    std::string channels;
    std::optional<double> power;
    double beta = 0.5;
    double sigma = 0.1;
    double epsilon = 1e-3;
    int max_iter = 1000;
    std::string deflection = "per-user";
    std::optional<int> fr_reset;
    std::string units = "nats";
    std::string init = "uniform";
    std::string trace_path;
    std::string seeds;
    bool timing = false;
};

sumcap::SolverConfig makeConfig(const SolveOptions& opt) {
    sumcap::SolverConfig cfg;
    cfg.beta = opt.beta;
    cfg.sigma = opt.sigma;
    cfg.epsilon = opt.epsilon;
    cfg.max_iter = opt.max_iter;
    cfg.fr_reset_period = opt.fr_reset;
    if (opt.deflection == "per-user")
        cfg.deflection_mode = sumcap::DeflectionMode::PerUser;
    else if (opt.deflection == "aggregate")
        cfg.deflection_mode = sumcap::DeflectionMode::Aggregate;
    else
        cfg.deflection_mode = sumcap::DeflectionMode::None;
    cfg.report_units = opt.units == "bits" ? sumcap::Units::Bits : sumcap::Units::Nats;
    sumcap::validate(cfg);
    return cfg;
}

// Near-zero start: diagonal blocks with pseudorandom positive entries scaled
// to one thousandth of the budget. The jitter seed is fixed so repeated runs
// stay byte-identical.
sumcap::CovarianceSet zeroPlusJitterInit(const sumcap::ChannelSet& c) {
    std::mt19937_64 eng(0x5eedcafeULL);
    std::vector<Eigen::VectorXd> diags;
    double total = 0.0;
    for (int i = 0; i < c.K; ++i) {
        Eigen::VectorXd d(c.nr);
        for (int j = 0; j < c.nr; ++j) {
            d[j] = static_cast<double>((eng() >> 11) + 1) * 0x1.0p-53;
            total += d[j];
        }
        diags.push_back(std::move(d));
    }
    const double scale = total > 0.0 ? 1e-3 * c.P / total : 0.0;
    sumcap::CovarianceSet q;
    for (int i = 0; i < c.K; ++i)
        q.Q.push_back(sumcap::HermMatrix::diagonal(scale * diags[static_cast<std::size_t>(i)]));
    return q;
}

std::optional<sumcap::CovarianceSet> makeInit(const SolveOptions& opt,
                                              const sumcap::ChannelSet& c) {
    if (opt.init == "zero-plus-jitter") return zeroPlusJitterInit(c);
    return std::nullopt;  // solve() uses the uniform-power start
}

std::pair<std::uint64_t, std::uint64_t> parseSeedRange(const std::string& s) {
    const auto dots = s.find("..");
    try {
        if (dots == std::string::npos) {
            const std::uint64_t v = std::stoull(s);
            return {v, v};
        }
        const std::uint64_t a = std::stoull(s.substr(0, dots));
        const std::uint64_t b = std::stoull(s.substr(dots + 2));
        if (b < a)
            throw sumcap::InvalidInputError("--seeds: range end before start");
        return {a, b};
    } catch (const std::logic_error&) {
        throw sumcap::InvalidInputError("--seeds: expected N or A..B");
    }
}

std::filesystem::path seedKeyedPath(const std::filesystem::path& base,
                                    std::uint64_t seed) {
    std::filesystem::path p = base;
    const std::string ext = p.extension().string();
    p.replace_extension();
    p += "-seed" + std::to_string(seed) + ext;
    return p;
}

void printSummary(const sumcap::SolveResult& res, const std::string& units) {
    const double nats = res.objective_nats;
    const double bits = nats / M_LN2;
    char line[160];
    if (units == "bits")
        std::snprintf(line, sizeof(line), "objective %.6f bits (%.6f nats)", bits, nats);
    else
        std::snprintf(line, sizeof(line), "objective %.6f nats (%.6f bits)", nats, bits);
    std::cout << line << "\n";
    std::cout << "iterations " << res.iterations << "\n";
    std::cout << "status " << statusName(res.status) << "\n";
}

void writeTraceFile(const std::filesystem::path& path, const sumcap::SolveResult& res,
                    bool timing) {
    std::ofstream out(path);
    if (!out)
        throw sumcap::InvalidInputError("cannot open trace file " + path.string());
    sumcap::write_trace_csv(out, res, timing);
    out.flush();
    if (!out)
        throw sumcap::InvalidInputError("write to trace file " + path.string() +
                                        " failed");
}

void writeManifest(const std::filesystem::path& tracePath, const std::string& cmdline,
                   const SolveOptions& opt, const sumcap::ChannelSet& c,
                   const std::string& digest, std::optional<std::uint64_t> seed,
                   const sumcap::SolveResult& res, double loadMs, double solveMs,
                   double writeMs) {
    nlohmann::json m;
    m["version"] = sumcap::kVersion;
    m["command_line"] = cmdline;
    m["channels"] = opt.channels;
    m["channel_digest"] = digest;
    if (seed) m["seed"] = *seed;
    m["config"] = {{"P", c.P},
                   {"beta", opt.beta},
                   {"sigma", opt.sigma},
                   {"epsilon", opt.epsilon},
                   {"max_iter", opt.max_iter},
                   {"deflection", opt.deflection},
                   {"fr_reset", opt.fr_reset ? nlohmann::json(*opt.fr_reset)
                                             : nlohmann::json(c.K * c.nr)},
                   {"units", opt.units},
                   {"init", opt.init}};
    m["result"] = {{"status", statusName(res.status)},
                   {"objective_nats", res.objective_nats},
                   {"iterations", res.iterations}};
    m["wall_ms"] = {{"load", loadMs}, {"solve", solveMs}, {"write", writeMs}};

    std::filesystem::path p = tracePath;
    p += ".manifest.json";
    std::ofstream out(p);
    if (out) out << m.dump(1, '\t') << '\n';
}

int runGen(int users, int nt, int nr, double power, std::uint64_t seed,
           const std::string& outPath) {
    const sumcap::ChannelSet c = sumcap::generate_rayleigh(users, nt, nr, power, seed);
    sumcap::save_channels(c, std::filesystem::path(outPath));
    std::cout << "wrote " << outPath << ": K=" << users << " nt=" << nt << " nr=" << nr
              << " P=" << power << " seed=" << seed << "\n";
    std::cout << "digest " << sumcap::file_digest(outPath) << "\n";
    return 0;
}

int runSolve(const SolveOptions& opt, const std::string& cmdline) {
    const auto tLoad = std::chrono::steady_clock::now();
    sumcap::ChannelSet base = sumcap::load_channels(std::filesystem::path(opt.channels));
    if (opt.power) {
        base.P = *opt.power;
        sumcap::validate(base);
    }
    const std::string digest = sumcap::file_digest(opt.channels);
    const double loadMs = elapsedMs(tLoad);

    const sumcap::SolverConfig cfg = makeConfig(opt);

    if (!opt.seeds.empty()) {
        // Seed sweep: regenerate channels with the template's shape and budget
        // for every seed in the range; each run is independent.
        const auto [first, last] = parseSeedRange(opt.seeds);
        std::vector<int> iterations;
        int exitCode = kExitConverged;
        for (std::uint64_t s = first; s <= last; ++s) {
            const sumcap::ChannelSet c =
                sumcap::generate_rayleigh(base.K, base.nt, base.nr, base.P, s);
            const auto tSolve = std::chrono::steady_clock::now();
            const sumcap::SolveResult res = sumcap::solve(c, cfg, makeInit(opt, c));
            const double solveMs = elapsedMs(tSolve);

            double writeMs = 0.0;
            if (!opt.trace_path.empty()) {
                const auto tWrite = std::chrono::steady_clock::now();
                const auto path = seedKeyedPath(opt.trace_path, s);
                writeTraceFile(path, res, opt.timing);
                writeMs = elapsedMs(tWrite);
                writeManifest(path, cmdline, opt, c, digest, s, res, loadMs, solveMs,
                              writeMs);
            }

            char line[200];
            std::snprintf(line, sizeof(line),
                          "seed %llu: objective %.6f %s, iterations %d, status %s",
                          static_cast<unsigned long long>(s),
                          opt.units == "bits" ? res.objective_nats / M_LN2
                                              : res.objective_nats,
                          opt.units.c_str(), res.iterations, statusName(res.status));
            std::cout << line << "\n";
            iterations.push_back(res.iterations);
            exitCode = std::max(exitCode, statusExit(res.status));
        }
        std::sort(iterations.begin(), iterations.end());
        const std::size_t n = iterations.size();
        const double median = n % 2 == 1
                                  ? iterations[n / 2]
                                  : 0.5 * (iterations[n / 2 - 1] + iterations[n / 2]);
        char line[96];
        std::snprintf(line, sizeof(line), "median iterations %.1f over %zu seeds",
                      median, n);
        std::cout << line << "\n";
        return exitCode;
    }

    const auto tSolve = std::chrono::steady_clock::now();
    const sumcap::SolveResult res = sumcap::solve(base, cfg, makeInit(opt, base));
    const double solveMs = elapsedMs(tSolve);

    double writeMs = 0.0;
    if (!opt.trace_path.empty()) {
        const auto tWrite = std::chrono::steady_clock::now();
        writeTraceFile(opt.trace_path, res, opt.timing);
        writeMs = elapsedMs(tWrite);
        writeManifest(opt.trace_path, cmdline, opt, base, digest, std::nullopt, res,
                      loadMs, solveMs, writeMs);
    }
    printSummary(res, opt.units);
    return statusExit(res.status);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MIMO broadcast-channel sum-rate solver (dual sum-power MAC, "
                 "conjugate gradient projection)"};
    app.require_subcommand(1);

    int users = 0, nt = 0, nr = 0;
    double power = 0.0;
    std::uint64_t seed = 0;
    std::string outPath;
    CLI::App* gen = app.add_subcommand("gen", "Generate a Rayleigh-fading instance");
    gen->add_option("--users", users, "Number of users K")->required()
        ->check(CLI::PositiveNumber);
    gen->add_option("--nt", nt, "Transmit antennas")->required()
        ->check(CLI::PositiveNumber);
    gen->add_option("--nr", nr, "Receive antennas per user")->required()
        ->check(CLI::PositiveNumber);
    gen->add_option("--power", power, "Sum power budget P")->required()
        ->check(CLI::NonNegativeNumber);
    gen->add_option("--seed", seed, "RNG seed (default 0)");
    gen->add_option("--out", outPath, "Output channel file")->required();

    SolveOptions opt;
    CLI::App* solve = app.add_subcommand("solve", "Solve an instance");
    solve->add_option("--channels", opt.channels, "Channel file")->required();
    solve->add_option("--power", opt.power, "Override the file's power budget")
        ->check(CLI::NonNegativeNumber);
    solve->add_option("--beta", opt.beta, "Armijo contraction (0,1)");
    solve->add_option("--sigma", opt.sigma, "Armijo slope fraction (0,1)");
    solve->add_option("--epsilon", opt.epsilon, "Stopping tolerance");
    solve->add_option("--max-iter", opt.max_iter, "Iteration cap")
        ->check(CLI::PositiveNumber);
    solve->add_option("--deflection", opt.deflection, "Deflection mode")
        ->check(CLI::IsMember({"per-user", "aggregate", "none"}));
    solve->add_option("--fr-reset", opt.fr_reset,
                      "Deflection restart period (default K*nr)")
        ->check(CLI::PositiveNumber);
    solve->add_option("--units", opt.units, "Reporting units")
        ->check(CLI::IsMember({"nats", "bits"}));
    solve->add_option("--init", opt.init, "Initial point")
        ->check(CLI::IsMember({"uniform", "zero-plus-jitter"}));
    solve->add_option("--trace", opt.trace_path, "Write the convergence trace CSV here");
    solve->add_option("--seeds", opt.seeds,
                      "Seed sweep N or A..B: regenerate channels with the file's "
                      "shape for each seed");
    solve->add_flag("--timing", opt.timing,
                    "Record wall-clock in the trace CSV (breaks byte-level "
                    "run-to-run reproducibility)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInputError;
    }

    std::string cmdline;
    for (int i = 0; i < argc; ++i) {
        if (i) cmdline += ' ';
        cmdline += argv[i];
    }

    try {
        if (gen->parsed()) return runGen(users, nt, nr, power, seed, outPath);
        return runSolve(opt, cmdline);
    } catch (const sumcap::NumericFailureError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumericFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}
