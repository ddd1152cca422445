#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "heis/norm.hpp"

using heis::cli::Json;
using heis::cli::main_entry;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
    Json json() const { return Json::parse(out); }
};

Outcome call(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = main_entry(args, out, err);
    return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) { return testing::TempDir() + name; }

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST(Cli, NormEvalMatchesLibrary) {
    const auto r = call({"norm", "eval", "--n", "2", "--x", "1,1,0,0", "--t", "0.3", "--no-timestamp"});
    ASSERT_EQ(r.code, 0) << r.err;
    const Json j = r.json();
    EXPECT_EQ(j["schema"], 1);
    EXPECT_EQ(j["config"]["command"], "norm eval");
    EXPECT_FALSE(j.contains("timestamp"));
    const heis::GroupParams g(2);
    EXPECT_EQ(j["result"]["N"].get<double>(), heis::norm_N(heis::Point({1, 1, 0, 0}, 0.3), g));
    EXPECT_EQ(j["result"]["dN_dx"].size(), 4u);
}

TEST(Cli, NormEvalCenterLine) {
    const auto r = call({"norm", "eval", "--n", "2", "--x", "0,0,0,0", "--t", "4", "--no-timestamp"});
    ASSERT_EQ(r.code, 0);
    EXPECT_DOUBLE_EQ(r.json()["result"]["N"].get<double>(), 2.0);
    EXPECT_FALSE(r.json()["result"].contains("dN_dx"));
}

TEST(Cli, TimestampByDefault) {
    const auto r = call({"norm", "eval", "--n", "2", "--x", "1,0,0,0"});
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(r.json().contains("timestamp"));
}

TEST(Cli, ConstantsSignFlip) {
    const auto r = call({"check", "constants", "--n-range", "2..20", "--no-timestamp"});
    ASSERT_EQ(r.code, 0) << r.err;
    const Json res = r.json()["result"];
    EXPECT_EQ(res["table"].size(), 19u);
    EXPECT_EQ(res["sign_flip_between"], Json::array({5, 6}));
    EXPECT_EQ(r.json()["config"]["n_range"], Json::array({2, 20}));
}

TEST(Cli, BggCompare) {
    const auto r = call({"bgg", "compare", "--n", "2", "--points", "200", "--seed", "1", "--no-timestamp"});
    ASSERT_EQ(r.code, 0) << r.err;
    const Json res = r.json()["result"];
    for (const char* key : {"n", "points", "max_rel_err", "mean_rel_err", "worst_point"}) {
        EXPECT_TRUE(res.contains(key)) << key;
    }
    EXPECT_LE(res["max_rel_err"].get<double>(), 1e-8);
    EXPECT_EQ(res["points"], 200);
}

TEST(Cli, GradientBoundsCommand) {
    const auto r = call({"check", "lemma2", "--n", "6", "--points", "100000", "--seed", "42", "--no-timestamp"});
    ASSERT_EQ(r.code, 0) << r.err;
    const Json reps = r.json()["result"]["reports"];
    ASSERT_EQ(reps.size(), 3u);
    for (const auto& rep : reps) {
        EXPECT_TRUE(rep["pass"].get<bool>());
        EXPECT_GE(rep["min_margin"].get<double>(), -1e-12);
    }
}

TEST(Cli, ReproducibleAcrossRunsAndThreads) {
    const std::vector<std::string> base = {"check", "intermediate", "--n", "3", "--points", "20000",
                                           "--seed", "9", "--no-timestamp"};
    auto a = base, b = base;
    a.insert(a.end(), {"--threads", "1"});
    b.insert(b.end(), {"--threads", "4"});
    const auto r1 = call(a), r2 = call(a), r3 = call(b);
    ASSERT_EQ(r1.code, 0);
    EXPECT_EQ(r1.out, r2.out);
    EXPECT_EQ(r1.json()["result"].dump(), r3.json()["result"].dump());
}

TEST(Cli, VerifyReproducible) {
    const std::vector<std::string> args = {"verify", "ubound", "--n", "3", "--steps", "12000", "--burn",
                                           "2000", "--seed", "4", "--no-timestamp"};
    const auto r1 = call(args), r2 = call(args);
    EXPECT_EQ(r1.out, r2.out);
    const Json res = r1.json()["result"];
    EXPECT_EQ(res["fit"]["per_function"].size(), 8u);
    EXPECT_EQ(res["chains"].size(), 2u);
    EXPECT_EQ(res["conditions"][0]["name"], "curvature_condition");
}

TEST(Cli, FailedCheckExitsOne) {
    // The curvature condition for power-log(3) fails just above N = 1.
    const auto r = call({"verify", "ubound", "--family", "power-log", "--k", "3", "--steps", "12000", "--burn",
                         "2000", "--no-timestamp"});
    EXPECT_EQ(r.code, 1);
    const Json res = r.json()["result"];
    EXPECT_FALSE(res["pass"].get<bool>());
    EXPECT_FALSE(res["conditions"][0]["pass"].get<bool>());
    EXPECT_EQ(r.json()["exit_code"], 1);
}

TEST(Cli, ConfigErrorsExitTwo) {
    const std::vector<std::vector<std::string>> bad = {
        {"verify", "ubound", "--family", "bogus"},
        {"verify", "ubound", "--family", "power", "--k", "2"},
        {"verify", "lsi", "--beta", "0.5"},
        {"norm", "eval", "--n", "2", "--x", "1,2"},
        {"norm", "eval", "--n", "1", "--x", "1,2"},
        {"norm", "eval", "--n", "2"},
        {"check", "constants", "--n-range", "2-20"},
        {"check", "lemma2", "--format", "csv"},
        {"check", "nonsense"},
        {"measure", "sample", "--algorithm", "hmc"},
        {},
    };
    for (const auto& args : bad) {
        const auto r = call(args);
        EXPECT_EQ(r.code, 2) << (args.empty() ? "(none)" : args[0] + " " + args[1]);
        EXPECT_FALSE(r.err.empty());
    }
}

TEST(Cli, InfinityHarmonicWitness) {
    const auto r = call({"check", "infinity-harmonic", "--n", "2", "--no-timestamp"});
    ASSERT_EQ(r.code, 0);
    const Json res = r.json()["result"];
    EXPECT_GT(res["signal_to_noise"].get<double>(), 10.0);
    EXPECT_EQ(res["point"]["t"].get<double>(), 0.3);
}

TEST(Cli, MeasureSampleCsv) {
    const std::string path = temp_path("heis_samples.csv");
    const auto r = call({"measure", "sample", "--family", "power", "--k", "4", "--n", "2", "--steps", "3000",
                         "--burn", "1000", "--seed", "7", "--out", path, "--no-timestamp"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.json()["result"]["samples"], 2000);
    std::istringstream csv(slurp(path));
    std::string line;
    std::getline(csv, line);
    EXPECT_EQ(line, "x_1,x_2,x_3,x_4,t,logdens");
    int rows = 0;
    while (std::getline(csv, line)) ++rows;
    EXPECT_EQ(rows, 2000);
    std::remove(path.c_str());
}

TEST(Cli, ReportToFile) {
    const std::string path = temp_path("heis_report.json");
    const auto r = call({"check", "constants", "--n-range", "6..7", "--out", path, "--no-timestamp"});
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    const Json j = Json::parse(slurp(path));
    EXPECT_EQ(j["config"]["output_path"], path);
    EXPECT_TRUE(j["result"]["pass"].get<bool>());
    std::remove(path.c_str());
}

TEST(Cli, HelpExitsZero) {
    const auto r = call({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("verify"), std::string::npos);
}

TEST(Cli, GradientBoundsAlias) {
    const auto a = call({"check", "lemma2", "--n", "2", "--points", "5000", "--seed", "3", "--no-timestamp"});
    const auto b =
        call({"check", "gradient-bounds", "--n", "2", "--points", "5000", "--seed", "3", "--no-timestamp"});
    ASSERT_EQ(b.code, 0) << b.err;
    EXPECT_EQ(a.out, b.out);
}
