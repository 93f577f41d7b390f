#include "seqcompact/jobs.hpp"
#include "support.hpp"

#include <fstream>
#include <sstream>

using namespace seqcompact;

namespace
{

std::string read_job(const std::string &name)
{
    std::ifstream in(std::string(SEQCOMPACT_JOBS_DIR) + "/" + name + ".json");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

JobOutcome run_file(const std::string &name) { return run_job_text(read_job(name)); }

} // namespace

TEST(Cli, ExtractBasisReportsZeroLimit)
{
    auto o = run_file("extract_basis");
    EXPECT_EQ(o.exit_code, 0);
    EXPECT_EQ(o.report["status"], "ok");
    const auto &w = o.report["result"]["witness"];
    EXPECT_EQ(w["mode"], "certified");
    EXPECT_EQ(w["limit"], Json::object());
    EXPECT_TRUE(w.contains("selection"));
    EXPECT_TRUE(w.contains("trace"));
}

TEST(Cli, UnsatisfiableFipSolveCarriesCertificate)
{
    auto o = run_file("fip_unsat");
    EXPECT_EQ(o.exit_code, 1);
    EXPECT_EQ(o.report["status"], "failed");
    const auto &cert = o.report["result"]["certificate"];
    EXPECT_EQ(cert["satisfiable"], false);
    ASSERT_EQ(cert["refutations"].size(), 1u);
    EXPECT_EQ(cert["refutations"][0]["coordinate"], 0);
}

TEST(Cli, MalformedDocumentsExitTwo)
{
    auto unknown = run_file("malformed");
    EXPECT_EQ(unknown.exit_code, 2);
    EXPECT_EQ(unknown.report["error"]["code"], "ParseError");
    EXPECT_EQ(run_job_text("{not json").exit_code, 2);
    EXPECT_EQ(run_job_text(R"({"command": "extract"})").exit_code, 2);
    EXPECT_EQ(run_job_text(R"({"command": "teleport", "input": {}})").exit_code, 2);
    EXPECT_EQ(run_job_text(R"({"command": "encode", "input": {"a": "1/2^1"}, "params": {"speed": 3}})").exit_code, 2);
    EXPECT_EQ(run_job_text(R"({"command": "encode", "input": {"a": "3/2^1"}})").exit_code, 2);
}

TEST(Cli, VerifyFailsOnWrongLimit)
{
    auto o = run_file("verify_wrong_limit");
    EXPECT_EQ(o.exit_code, 1);
    const auto &c = o.report["result"]["convergence"];
    EXPECT_EQ(c["pass"], false);
    EXPECT_EQ(c["first_failure"]["coordinate"]["label"], "a");
    EXPECT_EQ(run_file("verify_basis").exit_code, 0);
}

TEST(Cli, ValidateReportsViolations)
{
    auto o = run_file("validate_overfull");
    EXPECT_EQ(o.exit_code, 1);
    EXPECT_EQ(o.report["result"]["valid"], false);
    EXPECT_FALSE(o.report["result"]["violations"].empty());
}

TEST(Cli, EveryShippedJobRuns)
{
    for (const char *name : {"extract_sigma", "extract_hat_alternating", "extract_product", "extract_b1_signed",
                             "extract_empirical", "encode", "decode", "hp_map", "fip_solve", "fip_check_tilde",
                             "cross_check_random"})
        EXPECT_EQ(run_file(name).exit_code, 0) << name;
}

TEST(Cli, EncodeDecodeRoundTrip)
{
    auto enc = run_job_text(R"({"command": "encode", "input": {"a": "3/2^2", "b": "1/2^3"}})");
    ASSERT_EQ(enc.exit_code, 0);
    Json dec{{"command", "decode"}, {"input", enc.report["result"]["family"]}};
    auto d = run_job(dec);
    ASSERT_EQ(d.exit_code, 0);
    EXPECT_EQ(d.report["result"]["value"], (Json{{"a", "3/2^2"}, {"b", "1/2^3"}}));
    EXPECT_EQ(d.report["result"]["exact"], true);
}

TEST(Cli, ReportsAreByteDeterministic)
{
    for (const char *name : {"extract_b1_signed", "extract_empirical", "cross_check_random", "fip_solve", "batch", "hp_map"}) {
        auto a = run_file(name).report.dump(2);
        auto b = run_file(name).report.dump(2);
        EXPECT_EQ(a, b) << name;
    }
}

TEST(Cli, BatchKeepsJobOrderAndTakesWorstExit)
{
    auto o = run_file("batch");
    EXPECT_EQ(o.exit_code, 0);
    const auto &rs = o.report["reports"];
    ASSERT_EQ(rs.size(), 3u);
    EXPECT_EQ(rs[0]["command"], "encode");
    EXPECT_EQ(rs[1]["command"], "decode");
    EXPECT_EQ(rs[2]["command"], "fip-check");

    Json mixed{{"command", "batch"},
               {"jobs", Json::array({Json::parse(read_job("fip_unsat")), Json::parse(read_job("extract_basis")),
                                     Json::parse(read_job("malformed"))})}};
    auto m = run_job(mixed);
    EXPECT_EQ(m.exit_code, 2);
    EXPECT_EQ(m.report["reports"][0]["status"], "failed");
    EXPECT_EQ(m.report["reports"][1]["status"], "ok");
    EXPECT_EQ(m.report["reports"][2]["status"], "error");
}

TEST(Cli, RandomCrossCheckRecordsSeed)
{
    auto o = run_job_text(R"({"command": "cross-check", "params": {"seed": 11, "count": 20}})");
    EXPECT_EQ(o.exit_code, 0);
    EXPECT_EQ(o.report["result"]["seed"], 11);
    EXPECT_EQ(o.report["result"]["instances"], 40);
    EXPECT_EQ(o.report["result"]["agreements"], 40);
}
