#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "tqp/tqp.hpp"

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(TQP_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {-1, ""};
    std::string out;
    std::array<char, 4096> buf;
    while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string instance(const std::string& name) { return std::string(TQP_INSTANCES_DIR) + "/" + name; }

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("tqp_cli_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST(Cli, ClassifyTriangular) {
    const auto r = run("classify " + instance("triangular.txt"));
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("verdict: AlmostUniversal (clause 3a)"), std::string::npos) << r.out;
}

TEST(Cli, ClassifyMachineFormat) {
    const auto r = run("classify --format machine " + instance("diag_2_2_18.txt"));
    EXPECT_EQ(r.code, 0);
    const auto report = tqp::io::parse_machine(r.out);
    EXPECT_EQ(report.status, tqp::Status::NotAlmostUniversal);
    EXPECT_EQ(report.clause, "odd-local");
    EXPECT_EQ(tqp::io::render_machine(report), r.out);
}

TEST(Cli, InvalidInstancesExitWithTwo) {
    auto r = run("classify --format machine " + instance("diag_6_6_6.txt"));
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(tqp::io::parse_machine(r.out).status, tqp::Status::AssumptionViolated);
    r = run("classify --format machine " + instance("non_classic.txt"));
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(tqp::io::parse_machine(r.out).error, "NonClassicForm");
}

TEST(Cli, ParseErrorsExitWithFour) {
    const auto dir = scratch("parse");
    std::ofstream(dir / "bad.txt") << "form = lattice\ngram = 1 0 0 1 0\nw = 1 0 0\n";
    EXPECT_EQ(run("classify " + (dir / "bad.txt").string()).code, 4);
    EXPECT_EQ(run("classify " + (dir / "missing.txt").string()).code, 4);
    EXPECT_EQ(run("classify").code, 4);
    EXPECT_EQ(run("frobnicate").code, 4);
    EXPECT_EQ(run("classify --format xml " + instance("triangular.txt")).code, 4);
}

TEST(Cli, ClassifyIsDeterministic) {
    for (const char* name : {"triangular.txt", "diag_2_2_8.txt", "diag_2_2_18.txt", "spinor_2_2_16.txt"}) {
        const auto a = run("classify --format machine " + instance(name));
        const auto b = run("classify --format machine " + instance(name));
        EXPECT_EQ(a.code, b.code);
        EXPECT_EQ(a.out, b.out) << name;
    }
}

TEST(Cli, EnumerateTriangular) {
    const auto r = run("enumerate --bound 10000 --format machine " + instance("triangular.txt"));
    EXPECT_EQ(r.code, 0);
    const auto report = tqp::io::parse_machine(r.out);
    ASSERT_TRUE(report.spectrum.has_value());
    EXPECT_TRUE(report.spectrum->exceptions.empty());
    EXPECT_EQ(report.spectrum->bound, 10000u);
}

TEST(Cli, EnumerateDiag2218FindsOne) {
    const auto r = run("enumerate --bound 100 --format machine " + instance("diag_2_2_18.txt"));
    EXPECT_EQ(r.code, 0);
    const auto report = tqp::io::parse_machine(r.out);
    ASSERT_TRUE(report.spectrum.has_value());
    ASSERT_FALSE(report.spectrum->exceptions.empty());
    EXPECT_EQ(report.spectrum->exceptions.front(), 1u);
}

TEST(Cli, ZeroBoundIsAUsageError) {
    EXPECT_EQ(run("enumerate --bound 0 " + instance("triangular.txt")).code, 4);
    EXPECT_EQ(run("verify --bound 0 " + instance("triangular.txt")).code, 4);
}

TEST(Cli, EnumerationBudgetExitsWithThree) {
    EXPECT_EQ(run("enumerate --bound 10000 --enum-budget 10 " + instance("triangular.txt")).code, 3);
}

TEST(Cli, ThreadsDoNotChangeTheReport) {
    const auto a = run("enumerate --bound 5000 --format machine " + instance("diag_2_2_18.txt"));
    const auto b = run("enumerate --bound 5000 --threads 3 --format machine " + instance("diag_2_2_18.txt"));
    EXPECT_EQ(a.out, b.out);
}

TEST(Cli, VerifyExamples) {
    EXPECT_EQ(run("verify --bound 10000 " + instance("triangular.txt")).code, 0);
    EXPECT_EQ(run("verify --bound 10000 " + instance("diag_2_2_18.txt")).code, 0);
    const auto r = run("verify --format machine " + instance("spinor_2_2_16.txt"));
    EXPECT_EQ(r.code, 0);
    const auto report = tqp::io::parse_machine(r.out);
    ASSERT_TRUE(report.verification.has_value());
    EXPECT_TRUE(report.verification->spinor_branch);
    EXPECT_FALSE(report.verification->confirmed.empty());
}

TEST(Cli, CorruptedVerdictIsReportedInconsistent) {
    const auto r = run("verify --bound 10000 --force-status AlmostUniversal " + instance("diag_2_2_18.txt"));
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("INCONSISTENT"), std::string::npos);
    EXPECT_NE(r.out.find("trace:"), std::string::npos);
    EXPECT_EQ(run("verify --bound 2000 --force-status NotAlmostUniversal " + instance("triangular.txt")).code, 1);
}

TEST(Cli, GenerateWritesParseableValidInstances) {
    const auto dir = scratch("generate");
    auto r = run("generate --count 1 --seed 7 --out " + dir.string());
    ASSERT_EQ(r.code, 0);
    const auto file = dir / "instance_0001.txt";
    ASSERT_TRUE(std::filesystem::exists(file));
    EXPECT_NO_THROW(tqp::normalize(tqp::io::read_instance_file(file.string())));
    EXPECT_EQ(run("classify " + file.string()).code, 0);

    const auto again = scratch("generate_again");
    run("generate --count 1 --seed 7 --out " + again.string());
    std::ifstream a(file), b(again / "instance_0001.txt");
    EXPECT_EQ(std::string(std::istreambuf_iterator<char>(a), {}), std::string(std::istreambuf_iterator<char>(b), {}));
}

TEST(Cli, GenerateHundredInstances) {
    const auto dir = scratch("generate_100");
    ASSERT_EQ(run("generate --count 100 --seed 1 --out " + dir.string()).code, 0);
    int files = 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        ++files;
        EXPECT_NO_THROW(tqp::normalize(tqp::io::read_instance_file(entry.path().string()))) << entry.path();
    }
    EXPECT_EQ(files, 100);
}

TEST(Cli, GenerateGivesUpExplicitly) {
    const auto dir = scratch("generate_giveup");
    EXPECT_EQ(run("generate --count 5 --entry-bound 1 --max-rejections 1000 --out " + dir.string()).code, 3);
}
