#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <gtest/gtest.h>

#include "levy_smile/commands.hpp"
#include "levy_smile/errors.hpp"

using namespace levy;
namespace fs = std::filesystem;

namespace {

std::string config_path(const std::string& name) { return std::string(LEVY_SMILE_CONFIGS) + "/" + name + ".json"; }

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

std::vector<std::string> cells(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

struct CliRun {
    int exit_code = -1;
    std::string output;
};

CliRun run_cli(const std::string& args) {
    const std::string cmd = std::string(LEVY_SMILE_CLI) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    CliRun r;
    if (!pipe) return r;
    char buf[4096];
    while (const std::size_t n = fread(buf, 1, sizeof buf, pipe)) r.output.append(buf, n);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunConfig small_config(const std::string& name) {
    RunConfig c = load_config(config_path(name));
    c.engine.n_paths = 20000;
    c.market.tau_count = std::min(c.market.tau_count, 3);
    return c;
}

}  // namespace

TEST(Commands, PriceCsvShape) {
    const CommandResult r = cmd_price(small_config("kou"));
    const auto rows = lines(r.csv);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0], "tau,fourier_value,fourier_err,mc_value,mc_stderr");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto c = cells(rows[i]);
        ASSERT_EQ(c.size(), 5u);
        for (const auto& cell : c) EXPECT_FALSE(cell.empty());
    }
    EXPECT_GT(std::stod(cells(rows[1])[0]), std::stod(cells(rows[2])[0]));
    EXPECT_NE(r.summary.find("monte_carlo=yes"), std::string::npos);
}

TEST(Commands, PriceCgmyLeavesMonteCarloEmpty) {
    const auto rows = lines(cmd_price(small_config("cgmy")).csv);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto c = cells(rows[i]);
        ASSERT_EQ(c.size(), 5u);
        EXPECT_FALSE(c[1].empty());
        EXPECT_TRUE(c[3].empty());
        EXPECT_TRUE(c[4].empty());
    }
}

TEST(Commands, SlopeRowMatchesMoneyness) {
    const auto rows = lines(cmd_slope(small_config("kou")).csv);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0], "s0,strike,log_moneyness,slope_call,slope_call_err,slope_put,slope_put_err");
    const auto c = cells(rows[1]);
    ASSERT_EQ(c.size(), 7u);
    EXPECT_NEAR(std::stod(c[3]), 2.3560978798471379, 1e-9);
    EXPECT_TRUE(c[5].empty());
}

TEST(Commands, VerifySlopeRatioNearOne) {
    RunConfig c = small_config("kou");
    c.market.tau_max = 1e-3;
    c.market.tau_count = 3;  // down to 1e-5
    const auto rows = lines(cmd_verify_slope(c).csv);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0], "tau,excess,excess_over_tau,slope,ratio");
    EXPECT_NEAR(std::stod(cells(rows.back())[4]), 1.0, 0.02);
}

TEST(Commands, VerifySlopeRefusesZeroSlope) {
    EXPECT_THROW(cmd_verify_slope(small_config("kou_one_sided")), NotApplicable);
}

TEST(Commands, IvCurveGrowsDownTheGrid) {
    RunConfig c = small_config("kou");
    c.market.tau_max = 1e-2;
    c.market.tau_ratio = 100.0;
    c.market.tau_count = 3;  // 1e-2, 1e-4, 1e-6
    const auto rows = lines(cmd_iv_curve(c).csv);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0], "tau,sigma_measured,sigma_predicted,ratio");
    EXPECT_GT(std::stod(cells(rows[3])[1]), std::stod(cells(rows[1])[1]));
}

TEST(Commands, IvCurveLeavesPredictionEmptyWithoutSlope) {
    const auto rows = lines(cmd_iv_curve(small_config("kou_one_sided")).csv);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto c = cells(rows[i]);
        EXPECT_EQ(std::stod(c[1]), 0.0);
        EXPECT_TRUE(c[2].empty());
    }
}

TEST(Commands, RateWithinStatisticalError) {
    RunConfig c = load_config(config_path("kou_rate"));
    c.engine.n_paths = 1'000'000;
    const auto rows = lines(cmd_rate(c).csv);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0], "tau,mc_rate,mc_rate_stderr,integral,ratio");
    const auto v = cells(rows[1]);
    EXPECT_LE(std::abs(std::stod(v[1]) - std::stod(v[3])), 4.0 * std::stod(v[2]));
}

TEST(Commands, RateNeedsPayoff) { EXPECT_THROW(cmd_rate(small_config("kou")), ConfigError); }

TEST(Commands, ClassifyRows) {
    const auto kou = cells(lines(cmd_classify(small_config("kou")).csv)[1]);
    EXPECT_EQ(kou[0], "explosion");
    const auto bs = cells(lines(cmd_classify(small_config("black_scholes")).csv)[1]);
    EXPECT_EQ(bs[0], "black-scholes-finite");
    EXPECT_EQ(std::stod(bs[1]), 0.2);
    const auto one = cells(lines(cmd_classify(small_config("kou_one_sided")).csv)[1]);
    EXPECT_EQ(one[0], "degenerate-zero");
}

TEST(Commands, UnknownCommand) { EXPECT_THROW(run_command("smile", small_config("kou")), ConfigError); }

TEST(Commands, ExitCodeMapping) {
    EXPECT_EQ(exit_code_for(ConfigError("k", "m")), 2);
    EXPECT_EQ(exit_code_for(DomainError("m")), 2);
    EXPECT_EQ(exit_code_for(NumericFailure("m")), 3);
    EXPECT_EQ(exit_code_for(IntegrationFailure("m", 0.0, 1.0)), 3);
    EXPECT_EQ(exit_code_for(CapabilityError("m")), 4);
    EXPECT_EQ(exit_code_for(NotApplicable("m")), 4);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run_cli("slope --config " + config_path("kou")).exit_code, 0);
    EXPECT_EQ(run_cli("slope --config /nonexistent.json").exit_code, 2);
    EXPECT_EQ(run_cli("slope --config " + config_path("kou") + " --strike 100").exit_code, 2);
    EXPECT_EQ(run_cli("price --config " + config_path("kou") + " --tau-max 0").exit_code, 2);
    EXPECT_EQ(run_cli("frobnicate --config " + config_path("kou")).exit_code, 2);
    EXPECT_EQ(run_cli("slope").exit_code, 2);
    EXPECT_EQ(run_cli("verify-slope --config " + config_path("kou_one_sided")).exit_code, 4);
    EXPECT_EQ(run_cli("rate --config " + config_path("cgmy") + " --n-paths 1000").exit_code, 2);  // no payoff block
}

TEST(Cli, CapabilityRefusalExitsFour) {
    const fs::path dir = fs::temp_directory_path() / "levy_smile_cli_test";
    fs::create_directories(dir);
    const fs::path cfg = dir / "cgmy_rate.json";
    std::ofstream(cfg) << R"({"model": {"type": "cgmy", "C": 1, "G": 5, "M": 5, "Y": 0.5},
        "market": {"tau_max": 0.001, "tau_count": 1}, "engine": {"n_paths": 1000},
        "payoff": {"kind": "indicator", "a": 0.5, "b": 1}})";
    const CliRun r = run_cli("rate --config " + cfg.string());
    EXPECT_EQ(r.exit_code, 4) << r.output;
}

TEST(Cli, StdoutCarriesSummaryAndCsv) {
    const CliRun r = run_cli("slope --config " + config_path("kou"));
    const auto out = lines(r.output);
    ASSERT_GE(out.size(), 3u);
    EXPECT_EQ(out[0].rfind("# slope", 0), 0u);
    EXPECT_EQ(out[1], "s0,strike,log_moneyness,slope_call,slope_call_err,slope_put,slope_put_err");
}

TEST(Cli, EveryCommandIsByteDeterministic) {
    const fs::path dir = fs::temp_directory_path() / "levy_smile_cli_test";
    fs::create_directories(dir);
    const std::vector<std::pair<std::string, std::string>> runs{
        {"price", "kou --n-paths 50000"},       {"price", "cgmy --tau-count 3"},
        {"slope", "nig"},                       {"verify-slope", "merton --tau-count 3"},
        {"iv-curve", "variance_gamma --tau-count 3"}, {"rate", "kou_rate --n-paths 200000"},
        {"classify", "kou_one_sided"},
    };
    for (const auto& [command, rest] : runs) {
        const std::string model = rest.substr(0, rest.find(' '));
        const std::string extra = rest.find(' ') == std::string::npos ? "" : rest.substr(rest.find(' '));
        std::string outputs[2];
        for (int i = 0; i < 2; ++i) {
            const fs::path out = dir / (command + "_" + std::to_string(i) + ".csv");
            const CliRun r = run_cli(command + " --config " + config_path(model) + extra + " --out " + out.string());
            ASSERT_EQ(r.exit_code, 0) << command << ": " << r.output;
            outputs[i] = read_file(out);
        }
        EXPECT_FALSE(outputs[0].empty());
        EXPECT_EQ(outputs[0], outputs[1]) << command;
    }
}
