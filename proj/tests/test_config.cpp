#include <cmath>
#include <filesystem>
#include <string>

#include <gtest/gtest.h>

#include "levy_smile/config.hpp"
#include "levy_smile/errors.hpp"

using namespace levy;

namespace {

const std::string kKouModel =
    R"("model": {"type": "kou", "sigma": 0.1, "lambda": 1, "p": 0.5, "eta1": 10, "eta2": 5})";

std::string doc(const std::string& rest = "") { return "{" + kKouModel + (rest.empty() ? "" : ", " + rest) + "}"; }

// The key reported by the ConfigError a document raises, or "" when it parses.
std::string failing_key(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.key();
    }
    return "";
}

}  // namespace

TEST(Config, ParsesAllModelTypes) {
    EXPECT_EQ(model_name(parse_config(R"({"model": {"type": "black_scholes", "sigma": 0.2}})").model), "black_scholes");
    EXPECT_EQ(model_name(parse_config(doc()).model), "kou");
    EXPECT_EQ(model_name(parse_config(
                  R"({"model": {"type": "merton", "sigma": 0.1, "lambda": 0.5, "mu_j": 0, "delta_j": 0.3}})")
                  .model),
              "merton");
    EXPECT_EQ(model_name(parse_config(
                  R"({"model": {"type": "variance_gamma", "theta_vg": -0.14, "sigma_vg": 0.12, "kappa": 0.2}})")
                  .model),
              "variance_gamma");
    EXPECT_EQ(model_name(parse_config(R"({"model": {"type": "nig", "alpha": 15, "beta": -5, "delta": 0.5}})").model),
              "nig");
    EXPECT_EQ(model_name(parse_config(R"({"model": {"type": "cgmy", "C": 1, "G": 5, "M": 5, "Y": 0.5}})").model),
              "cgmy");
}

TEST(Config, DefaultsAndValues) {
    const RunConfig c = parse_config(doc(R"("market": {"s0": 50, "strike": 60}, "engine": {"seed": 99})"));
    EXPECT_EQ(c.market.s0, 50.0);
    EXPECT_EQ(c.market.strike, 60.0);
    EXPECT_EQ(c.engine.seed, 99u);
    EXPECT_EQ(c.engine.n_terms, 1 << 14);
    EXPECT_EQ(c.market.tau_count, 6);
    EXPECT_FALSE(c.payoff.has_value());
    const auto p = parse_config(doc(R"("payoff": {"kind": "indicator", "a": 0.5, "b": 1})")).payoff;
    ASSERT_TRUE(p.has_value());
    EXPECT_EQ(p->kind, PayoffDescriptor::Kind::indicator);
    EXPECT_EQ(p->b, 1.0);
}

TEST(Config, UnknownKeysRejected) {
    EXPECT_EQ(failing_key(doc(R"("extra": 1)")), "extra");
    EXPECT_EQ(failing_key(doc(R"("market": {"spot": 100})")), "market.spot");
    EXPECT_EQ(failing_key(doc(R"("engine": {"threads": 4})")), "engine.threads");
    EXPECT_EQ(failing_key(R"({"model": {"type": "kou", "sigma": 0.1, "lambda": 1, "p": 0.5, "eta1": 10, "eta2": 5, "eta3": 1}})"),
              "model.eta3");
    EXPECT_EQ(failing_key(R"({"model": {"type": "heston"}})"), "model.type");
    EXPECT_EQ(failing_key(doc(R"("payoff": {"kind": "digital"})")), "payoff.kind");
}

TEST(Config, MissingKeysRejected) {
    EXPECT_EQ(failing_key("{}"), "model");
    EXPECT_EQ(failing_key(R"({"model": {"sigma": 0.2}})"), "model.type");
    EXPECT_EQ(failing_key(R"({"model": {"type": "kou", "sigma": 0.1, "lambda": 1, "p": 0.5, "eta2": 5}})"), "model.eta1");
    EXPECT_EQ(failing_key(doc(R"("payoff": {"kind": "indicator", "a": 0.5})")), "payoff.b");
}

TEST(Config, WrongTypesRejected) {
    EXPECT_EQ(failing_key(doc(R"("market": {"s0": "100"})")), "market.s0");
    EXPECT_EQ(failing_key(doc(R"("market": {"tau_count": 2.5})")), "market.tau_count");
    EXPECT_EQ(failing_key(doc(R"("engine": {"seed": -1})")), "engine.seed");
    EXPECT_EQ(failing_key(doc(R"("market": [1, 2])")), "market");
    EXPECT_EQ(failing_key("[1, 2]"), "<document>");
    EXPECT_EQ(failing_key("{ not json"), "<document>");
}

TEST(Config, InvalidValuesRejectedAtParse) {
    EXPECT_EQ(failing_key(doc(R"("market": {"tau_max": 0})")), "market.tau_max");
    EXPECT_EQ(failing_key(doc(R"("market": {"tau_ratio": 1, "tau_count": 3})")), "market.tau_ratio");
    EXPECT_EQ(failing_key(doc(R"("market": {"s0": -1})")), "market.s0");
    EXPECT_EQ(failing_key(doc(R"("engine": {"n_terms": 7})")), "engine.n_terms");
    EXPECT_EQ(failing_key(R"({"model": {"type": "kou", "sigma": 0.1, "lambda": 1, "p": 0.5, "eta1": 0.5, "eta2": 5}})"),
              "model");
}

TEST(Config, GridStrictlyDecreasingAndPositive) {
    for (int count : {1, 2, 6, 40}) {
        for (double ratio : {1.5, 10.0}) {
            RunConfig c = parse_config(doc());
            c.market.tau_count = count;
            c.market.tau_ratio = ratio;
            const auto g = c.tau_grid();
            ASSERT_EQ(static_cast<int>(g.size()), count);
            EXPECT_EQ(g.front(), c.market.tau_max);
            for (std::size_t i = 1; i < g.size(); ++i) {
                EXPECT_LT(g[i], g[i - 1]);
                EXPECT_GT(g[i], 0.0);
            }
        }
    }
}

TEST(Config, GridUnderflowRejected) {
    RunConfig c = parse_config(doc());
    c.market.tau_ratio = 1e100;
    c.market.tau_count = 5;
    EXPECT_THROW(check_config(c, false), ConfigError);
}

TEST(Config, AtTheMoneyOnlyRejectedWhenRequired) {
    const RunConfig c = parse_config(doc(R"("market": {"s0": 100, "strike": 100})"));
    EXPECT_NO_THROW(check_config(c, false));
    EXPECT_THROW(check_config(c, true), ConfigError);
}

TEST(Config, OverridesReplaceFileValues) {
    RunConfig c = parse_config(doc());
    ConfigOverrides o;
    o.s0 = 90.0;
    o.tau_count = 3;
    o.seed = 5;
    o.out = "x.csv";
    apply_overrides(c, o);
    EXPECT_EQ(c.market.s0, 90.0);
    EXPECT_EQ(c.market.strike, 110.0);
    EXPECT_EQ(c.market.tau_count, 3);
    EXPECT_EQ(c.engine.seed, 5u);
    EXPECT_EQ(c.out, "x.csv");
}

TEST(Config, ShippedConfigsLoad) {
    for (const auto& entry : std::filesystem::directory_iterator(LEVY_SMILE_CONFIGS))
        EXPECT_NO_THROW(load_config(entry.path().string())) << entry.path();
    EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}
