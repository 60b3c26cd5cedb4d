#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "sumcap/digest.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

class CliTest : public ::testing::Test {
protected:
    static fs::path dir() {
        static const fs::path d = [] {
            fs::path p = fs::temp_directory_path() /
                         ("sumcap_cli_test_" + std::to_string(::getpid()));
            fs::create_directories(p);
            return p;
        }();
        return d;
    }

    static RunResult run(const std::string& args) {
        static int counter = 0;
        const fs::path outP = dir() / ("stdout_" + std::to_string(counter) + ".txt");
        const fs::path errP = dir() / ("stderr_" + std::to_string(counter) + ".txt");
        ++counter;
        const std::string cmd = std::string(SUMCAP_CLI_PATH) + " " + args + " > " +
                                outP.string() + " 2> " + errP.string();
        const int status = std::system(cmd.c_str());
        RunResult r;
        r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        r.out = slurp(outP);
        r.err = slurp(errP);
        return r;
    }

    static fs::path writeScalarChannel(const std::string& name) {
        const fs::path p = dir() / name;
        std::ofstream out(p);
        out << "{\"version\":1,\"K\":1,\"nt\":1,\"nr\":1,\"P\":1.0,"
               "\"H\":[[[[1.0,0.0]]]]}";
        return p;
    }
};

double parseObjectiveNats(const std::string& out) {
    const auto pos = out.find("objective ");
    if (pos == std::string::npos) return std::nan("");
    return std::stod(out.substr(pos + 10));
}

}  // namespace

TEST_F(CliTest, GenWritesFileAndPrintsMatchingDigest) {
    const fs::path ch = dir() / "gen.json";
    const RunResult r =
        run("gen --users 3 --nt 4 --nr 2 --power 10 --seed 7 --out " + ch.string());
    EXPECT_EQ(r.exit_code, 0);
    ASSERT_TRUE(fs::exists(ch));
    const std::string digest = sumcap::file_digest(ch);
    EXPECT_NE(r.out.find("digest " + digest), std::string::npos) << r.out;
}

TEST_F(CliTest, GenZeroUsersIsUsageError) {
    const RunResult r = run("gen --users 0 --nt 1 --nr 1 --power 1 --out " +
                            (dir() / "zero.json").string());
    EXPECT_EQ(r.exit_code, 2);
}

TEST_F(CliTest, GenMissingFlagIsUsageError) {
    const RunResult r = run("gen --users 2 --nt 1 --nr 1 --power 1");
    EXPECT_EQ(r.exit_code, 2);
}

TEST_F(CliTest, GenIsByteDeterministic) {
    const fs::path a = dir() / "det_a.json";
    const fs::path b = dir() / "det_b.json";
    ASSERT_EQ(run("gen --users 2 --nt 3 --nr 2 --power 4 --seed 11 --out " + a.string())
                  .exit_code,
              0);
    ASSERT_EQ(run("gen --users 2 --nt 3 --nr 2 --power 4 --seed 11 --out " + b.string())
                  .exit_code,
              0);
    EXPECT_EQ(slurp(a), slurp(b));
}

TEST_F(CliTest, SolveScalarInstanceSummary) {
    const fs::path ch = writeScalarChannel("scalar.json");
    const RunResult r = run("solve --channels " + ch.string());
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.out.find("objective 0.693147 nats (1.000000 bits)"), std::string::npos)
        << r.out;
    EXPECT_NE(r.out.find("status converged"), std::string::npos);
}

TEST_F(CliTest, SolveReportsBitsWhenAsked) {
    const fs::path ch = writeScalarChannel("scalar_bits.json");
    const RunResult r = run("solve --channels " + ch.string() + " --units bits");
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.out.find("objective 1.000000 bits (0.693147 nats)"), std::string::npos)
        << r.out;
}

TEST_F(CliTest, DeflectionModesAgreeButTracesDiffer) {
    const fs::path ch = dir() / "modes.json";
    ASSERT_EQ(
        run("gen --users 4 --nt 3 --nr 2 --power 8 --seed 5 --out " + ch.string())
            .exit_code,
        0);
    const fs::path t1 = dir() / "modes_default.csv";
    const fs::path t2 = dir() / "modes_none.csv";
    const RunResult a =
        run("solve --channels " + ch.string() + " --trace " + t1.string());
    const RunResult b = run("solve --channels " + ch.string() +
                            " --deflection none --trace " + t2.string());
    ASSERT_EQ(a.exit_code, 0);
    ASSERT_EQ(b.exit_code, 0);
    const double fa = parseObjectiveNats(a.out);
    const double fb = parseObjectiveNats(b.out);
    EXPECT_NEAR(fa, fb, 1e-4 * std::max(1.0, fa));
    EXPECT_NE(slurp(t1), slurp(t2));
}

TEST_F(CliTest, TraceRowCountMatchesIterations) {
    const fs::path ch = dir() / "rows.json";
    ASSERT_EQ(
        run("gen --users 3 --nt 2 --nr 2 --power 5 --seed 9 --out " + ch.string())
            .exit_code,
        0);
    const fs::path tr = dir() / "rows.csv";
    const RunResult r =
        run("solve --channels " + ch.string() + " --trace " + tr.string());
    ASSERT_EQ(r.exit_code, 0);
    const auto pos = r.out.find("iterations ");
    ASSERT_NE(pos, std::string::npos);
    const int iters = std::stoi(r.out.substr(pos + 11));
    std::ifstream in(tr);
    std::string line;
    int dataRows = 0;
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '#' && line[0] != 'k') ++dataRows;
    EXPECT_EQ(dataRows, iters + 1);
}

TEST_F(CliTest, RepeatedSolvesProduceByteIdenticalTraces) {
    const fs::path ch = dir() / "repeat.json";
    ASSERT_EQ(
        run("gen --users 3 --nt 2 --nr 2 --power 5 --seed 13 --out " + ch.string())
            .exit_code,
        0);
    const fs::path t1 = dir() / "repeat1.csv";
    const fs::path t2 = dir() / "repeat2.csv";
    ASSERT_EQ(run("solve --channels " + ch.string() + " --trace " + t1.string())
                  .exit_code,
              0);
    ASSERT_EQ(run("solve --channels " + ch.string() + " --trace " + t2.string())
                  .exit_code,
              0);
    EXPECT_EQ(slurp(t1), slurp(t2));
}

TEST_F(CliTest, MissingChannelFileIsInputError) {
    const RunResult r = run("solve --channels " + (dir() / "nope.json").string());
    EXPECT_EQ(r.exit_code, 2);
}

TEST_F(CliTest, MalformedChannelFileIsInputError) {
    const fs::path p = dir() / "broken.json";
    std::ofstream(p) << "{\"version\": 1, \"K\": 1";
    const RunResult r = run("solve --channels " + p.string());
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_NE(r.err.find("error:"), std::string::npos);
}

TEST_F(CliTest, IterationLimitExitsOne) {
    const fs::path ch = dir() / "limit.json";
    ASSERT_EQ(
        run("gen --users 3 --nt 2 --nr 2 --power 5 --seed 17 --out " + ch.string())
            .exit_code,
        0);
    const RunResult r = run("solve --channels " + ch.string() +
                            " --max-iter 1 --epsilon 1e-15");
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_NE(r.out.find("status max-iter"), std::string::npos);
}

TEST_F(CliTest, NumericOverflowExitsThree) {
    const fs::path p = dir() / "hot.json";
    std::ofstream(p) << "{\"version\":1,\"K\":1,\"nt\":1,\"nr\":1,\"P\":1.0,"
                        "\"H\":[[[[100.0,0.0]]]]}";
    const RunResult r = run("solve --channels " + p.string() + " --power 1e308");
    EXPECT_EQ(r.exit_code, 3);
}

TEST_F(CliTest, SeedSweepReportsMedianAndKeyedTraces) {
    const fs::path ch = dir() / "sweep.json";
    ASSERT_EQ(
        run("gen --users 4 --nt 2 --nr 2 --power 6 --seed 1 --out " + ch.string())
            .exit_code,
        0);
    const fs::path tr = dir() / "sweep.csv";
    const RunResult r = run("solve --channels " + ch.string() + " --seeds 3..5 --trace " +
                            tr.string());
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.out.find("seed 3:"), std::string::npos);
    EXPECT_NE(r.out.find("seed 5:"), std::string::npos);
    EXPECT_NE(r.out.find("median iterations"), std::string::npos);
    EXPECT_TRUE(fs::exists(dir() / "sweep-seed3.csv"));
    EXPECT_TRUE(fs::exists(dir() / "sweep-seed4.csv"));
    EXPECT_TRUE(fs::exists(dir() / "sweep-seed5.csv"));
}

TEST_F(CliTest, ManifestRecordsDigestAndConfig) {
    const fs::path ch = dir() / "manifest.json";
    ASSERT_EQ(
        run("gen --users 2 --nt 2 --nr 2 --power 3 --seed 21 --out " + ch.string())
            .exit_code,
        0);
    const fs::path tr = dir() / "manifest_trace.csv";
    ASSERT_EQ(run("solve --channels " + ch.string() + " --trace " + tr.string())
                  .exit_code,
              0);
    const fs::path mf = tr.string() + ".manifest.json";
    ASSERT_TRUE(fs::exists(mf));
    const nlohmann::json m = nlohmann::json::parse(slurp(mf));
    EXPECT_EQ(m.at("channel_digest").get<std::string>(), sumcap::file_digest(ch));
    EXPECT_EQ(m.at("config").at("beta").get<double>(), 0.5);
    EXPECT_EQ(m.at("result").at("status").get<std::string>(), "converged");
}

TEST_F(CliTest, JitterInitReachesTheSameOptimum) {
    const fs::path ch = dir() / "jitter.json";
    ASSERT_EQ(
        run("gen --users 3 --nt 2 --nr 2 --power 5 --seed 23 --out " + ch.string())
            .exit_code,
        0);
    const RunResult a = run("solve --channels " + ch.string());
    const RunResult b =
        run("solve --channels " + ch.string() + " --init zero-plus-jitter");
    ASSERT_EQ(a.exit_code, 0);
    ASSERT_EQ(b.exit_code, 0);
    EXPECT_NEAR(parseObjectiveNats(a.out), parseObjectiveNats(b.out), 1e-3);
}
