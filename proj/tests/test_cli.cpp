#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "parahoric/cli.hpp"

using namespace parahoric;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "parahoric_lab");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "parahoric_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST(Cli, CharTableOfGl2F2) {
    const auto path = scratch("ct.json");
    const auto r = run({"char-table", "--n", "2", "--q", "2", "--output", path.string()});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("3 irreducibles, degrees 1,1,2"), std::string::npos) << r.out;
    const auto j = Json::parse(slurp(path));
    EXPECT_EQ(j["group_order"], 6);
    std::vector<int> degrees;
    for (const auto& rec : j["records"])
        if (rec.contains("degree")) degrees.push_back(rec["degree"]);
    EXPECT_EQ(degrees, (std::vector<int>{1, 1, 2}));
    EXPECT_EQ(j["summary"]["failures"], 0);
    EXPECT_FALSE(j["summary"].contains("wall_ms"));
}

TEST(Cli, LemmaVerifyWorkedExample) {
    const auto r = run({"lemma-verify", "--q", "2", "--f", "1", "--e0", "2", "--shape", "2", "--tau", "trivial", "--x", "d:0,1",
                        "--output", "-"});
    EXPECT_EQ(r.code, 0);
    const auto j = Json::parse(r.out);
    ASSERT_EQ(j["records"].size(), 1u);
    EXPECT_EQ(j["records"][0]["left"], 1);
    EXPECT_EQ(j["records"][0]["right"], 1);
    EXPECT_EQ(j["records"][0]["equal"], true);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run({"char-table", "--n", "2", "--q", "2", "--bogus"}).code, 2);
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"no-such-command"}).code, 2);
    EXPECT_EQ(run({"char-table", "--n", "2", "--q", "6"}).code, 2);
    EXPECT_EQ(run({"lemma-verify", "--q", "2", "--f", "1", "--e0", "2", "--x", "d:0"}).code, 2);
    EXPECT_EQ(run({"lemma-verify", "--q", "2", "--f", "1", "--e0", "2", "--shape", "3"}).code, 2);
    EXPECT_EQ(run({"orbit-check", "--q", "2", "--e0", "2", "--face", "2", "--tau", "0"}).code, 2);
    EXPECT_EQ(run({"lemma-sweep", "--config", scratch("missing.txt").string()}).code, 2);
    EXPECT_EQ(run({"char-table", "--help"}).code, 0);
}

TEST(Cli, ExecutableExitCodes) {
    const std::string exe = PARAHORIC_LAB_EXE;
    const auto status = [&](const std::string& args) {
        const int s = std::system((exe + " " + args + " > /dev/null 2>&1").c_str());
        return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
    };
    EXPECT_EQ(status("char-table --n 2 --q 2"), 0);
    EXPECT_EQ(status("char-table --n 2 --q 2 --frobnicate"), 2);
}

TEST(Cli, SweepReportsAreDeterministic) {
    const auto a = scratch("a.json"), b = scratch("b.json");
    const std::vector<std::string> base{"lemma-sweep", "--q", "2,3", "--f", "1", "--e0", "2", "--bound", "1"};
    auto args_a = base, args_b = base;
    args_a.insert(args_a.end(), {"--threads", "4", "--output", a.string()});
    args_b.insert(args_b.end(), {"--threads", "1", "--output", b.string()});
    EXPECT_EQ(run(args_a).code, 0);
    const std::string first = slurp(a);
    EXPECT_EQ(run(args_a).code, 0);
    EXPECT_EQ(slurp(a), first);
    // Record order does not depend on the worker count.
    EXPECT_EQ(run(args_b).code, 0);
    auto ja = Json::parse(first), jb = Json::parse(slurp(b));
    ja["config"].erase("threads");
    jb["config"].erase("threads");
    EXPECT_EQ(ja, jb);
    const auto j = Json::parse(first);
    EXPECT_EQ(j["summary"]["cells"], j["records"].size());
    EXPECT_TRUE(j["failures"].empty());
}

TEST(Cli, EmptyAndOneCellSweeps) {
    const auto empty = run({"lemma-sweep", "--q", "", "--output", "-"});
    EXPECT_EQ(empty.code, 0);
    EXPECT_EQ(Json::parse(empty.out)["summary"]["cells"], 0);
    // R = 1: one representative, one cuspidal and one irreducible of GL_1(F_2).
    const auto one = run({"lemma-sweep", "--q", "2", "--f", "1", "--e0", "1", "--output", "-"});
    EXPECT_EQ(one.code, 0);
    const auto j = Json::parse(one.out);
    EXPECT_EQ(j["summary"]["cells"], 1);
    EXPECT_EQ(j["records"].size(), 1u);
}

TEST(Cli, ConfigFileWithCommandLineOverride) {
    const auto cfg = scratch("sweep.cfg");
    std::ofstream(cfg) << "# grid\nq=2\nf=1\ne0=2,3\nbound=1\ntau-filter=support\n";
    const auto full = run({"lemma-sweep", "--config", cfg.string(), "--output", "-"});
    const auto narrowed = run({"lemma-sweep", "--config", cfg.string(), "--e0", "2", "--output", "-"});
    ASSERT_EQ(full.code, 0);
    ASSERT_EQ(narrowed.code, 0);
    const auto jf = Json::parse(full.out), jn = Json::parse(narrowed.out);
    EXPECT_EQ(jf["config"]["e0"], Json::parse("[2,3]"));
    EXPECT_EQ(jn["config"]["e0"], Json::parse("[2]"));
    EXPECT_EQ(jf["config"]["tau-filter"], "support");
    EXPECT_LT(jn["summary"]["cells"].get<int>(), jf["summary"]["cells"].get<int>());
}

TEST(Cli, TimingIsOptIn) {
    const auto r = run({"cuspidals", "--n", "2", "--q", "3", "--timing", "--output", "-"});
    EXPECT_EQ(r.code, 0);
    const auto j = Json::parse(r.out);
    EXPECT_TRUE(j["summary"].contains("wall_ms"));
    EXPECT_EQ(j["count"], 3);
}

TEST(Cli, BuildingAndComplexChecks) {
    const auto b = run({"building", "--R", "2", "--q", "2", "--radius", "1", "--output", "-"});
    EXPECT_EQ(b.code, 0);
    const auto j = Json::parse(b.out);
    EXPECT_EQ(j["complex"]["vertices"].size(), 4u);
    EXPECT_EQ(j["complex"]["simplices"][1].size(), 3u);
    EXPECT_EQ(run({"complex-check", "--R", "3", "--q", "2", "--radius", "1"}).code, 0);
}

TEST(Cli, OrbitCheckWorkedExample) {
    const auto r = run({"orbit-check", "--q", "2", "--e0", "2", "--face", "2", "--x", "d:1,0", "--output", "-"});
    EXPECT_EQ(r.code, 0);
    const auto j = Json::parse(r.out);
    ASSERT_EQ(j["records"].size(), 1u);
    EXPECT_EQ(j["records"][0]["direct"], 2);
    EXPECT_EQ(j["records"][0]["predicted"], 2);
}

TEST(Cli, RobustnessSampleIsSeeded) {
    const std::vector<std::string> args{"lemma-sweep", "--q", "2", "--f", "1", "--e0", "2,3", "--bound", "1",
                                        "--robustness", "0.5", "--seed", "7", "--output", "-"};
    const auto a = run(args), b = run(args);
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    const auto j = Json::parse(a.out);
    EXPECT_EQ(j["records"].back()["check"], "unit_scaling_independence");
    EXPECT_GT(j["records"].back()["sampled"].get<int>(), 0);
}

TEST(Cli, ConfigEchoRoundTrips) {
    const auto first = run({"lemma-sweep", "--q", "2,3", "--f", "1", "--e0", "2", "--bound", "1", "--shape", "2;1,1",
                            "--tau-filter", "support", "--robustness", "0.25", "--seed", "5", "--threads", "2", "--output", "-"});
    ASSERT_EQ(first.code, 0);
    const auto j1 = Json::parse(first.out);
    const auto cfg = scratch("echo.cfg");
    std::ofstream(cfg) << cli::config_file_text(j1["config"]);
    const auto second = run({"lemma-sweep", "--config", cfg.string(), "--output", "-"});
    ASSERT_EQ(second.code, 0) << second.err;
    EXPECT_EQ(Json::parse(second.out), j1);
}
