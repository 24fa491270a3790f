#include "levy_smile/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "levy_smile/errors.hpp"

namespace levy {

namespace {

using nlohmann::json;

// Reads named fields out of one JSON object and rejects anything left over.
class Block {
public:
    Block(const json& j, std::string name) : j_(j), name_(std::move(name)) {
        if (!j_.is_object()) throw ConfigError(name_, fmt::format("'{}' must be an object", name_));
    }

    std::string key(const std::string& field) const { return name_ + "." + field; }

    bool has(const std::string& field) const { return j_.contains(field); }

    double number(const std::string& field) {
        seen_.insert(field);
        const json& v = j_.at(field);
        if (!v.is_number()) throw ConfigError(key(field), fmt::format("'{}' must be a number", key(field)));
        const double x = v.get<double>();
        if (!std::isfinite(x)) throw ConfigError(key(field), fmt::format("'{}' must be finite", key(field)));
        return x;
    }

    double required(const std::string& field) {
        if (!has(field)) throw ConfigError(key(field), fmt::format("missing '{}'", key(field)));
        return number(field);
    }

    void optional(const std::string& field, double& target) {
        if (has(field)) target = number(field);
    }

    template <class Int>
    void optional_integer(const std::string& field, Int& target) {
        if (!has(field)) return;
        seen_.insert(field);
        const json& v = j_.at(field);
        if (!v.is_number_integer())
            throw ConfigError(key(field), fmt::format("'{}' must be an integer", key(field)));
        if constexpr (std::is_unsigned_v<Int>) {
            if (v.is_number_unsigned()) {
                target = v.get<Int>();
                return;
            }
            if (v.get<std::int64_t>() < 0)
                throw ConfigError(key(field), fmt::format("'{}' must be nonnegative", key(field)));
        }
        target = static_cast<Int>(v.get<std::int64_t>());
    }

    std::string text(const std::string& field) {
        if (!has(field)) throw ConfigError(key(field), fmt::format("missing '{}'", key(field)));
        seen_.insert(field);
        const json& v = j_.at(field);
        if (!v.is_string()) throw ConfigError(key(field), fmt::format("'{}' must be a string", key(field)));
        return v.get<std::string>();
    }

    void reject_unknown() const {
        for (const auto& [field, value] : j_.items())
            if (!seen_.contains(field)) throw ConfigError(key(field), fmt::format("unknown key '{}'", key(field)));
    }

private:
    const json& j_;
    std::string name_;
    std::set<std::string> seen_;
};

ModelSpec parse_model(const json& j) {
    Block b(j, "model");
    const std::string type = b.text("type");
    ModelSpec model;
    if (type == "black_scholes") {
        model = BlackScholes{b.required("sigma")};
    } else if (type == "merton") {
        model = Merton{b.required("sigma"), b.required("lambda"), b.required("mu_j"), b.required("delta_j")};
    } else if (type == "kou") {
        model = Kou{b.required("sigma"), b.required("lambda"), b.required("p"), b.required("eta1"),
                    b.required("eta2")};
    } else if (type == "variance_gamma") {
        model = VarianceGamma{b.required("theta_vg"), b.required("sigma_vg"), b.required("kappa")};
    } else if (type == "nig") {
        model = Nig{b.required("alpha"), b.required("beta"), b.required("delta")};
    } else if (type == "cgmy") {
        model = Cgmy{b.required("C"), b.required("G"), b.required("M"), b.required("Y")};
    } else {
        throw ConfigError("model.type",
                          fmt::format("unknown model type '{}' (expected black_scholes, merton, kou, "
                                      "variance_gamma, nig or cgmy)",
                                      type));
    }
    b.reject_unknown();
    return model;
}

PayoffDescriptor parse_payoff(const json& j) {
    Block b(j, "payoff");
    PayoffDescriptor p;
    const std::string kind = b.text("kind");
    if (kind == "indicator") {
        p.kind = PayoffDescriptor::Kind::indicator;
        p.a = b.required("a");
        p.b = b.required("b");
    } else if (kind == "call") {
        p.kind = PayoffDescriptor::Kind::call;
    } else if (kind == "put") {
        p.kind = PayoffDescriptor::Kind::put;
    } else {
        throw ConfigError("payoff.kind", fmt::format("unknown payoff kind '{}' (expected indicator, call or put)", kind));
    }
    b.reject_unknown();
    return p;
}

}  // namespace

std::vector<double> RunConfig::tau_grid() const {
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(std::max(market.tau_count, 0)));
    for (int i = 0; i < market.tau_count; ++i) grid.push_back(market.tau_max / std::pow(market.tau_ratio, i));
    return grid;
}

RunConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<document>", fmt::format("malformed JSON: {}", e.what()));
    }
    if (!doc.is_object()) throw ConfigError("<document>", "configuration must be a JSON object");

    RunConfig cfg;
    for (const auto& [key, value] : doc.items()) {
        if (key != "model" && key != "market" && key != "engine" && key != "payoff")
            throw ConfigError(key, fmt::format("unknown key '{}'", key));
    }
    if (!doc.contains("model")) throw ConfigError("model", "missing 'model' block");
    cfg.model = parse_model(doc.at("model"));

    if (doc.contains("market")) {
        Block b(doc.at("market"), "market");
        b.optional("s0", cfg.market.s0);
        b.optional("strike", cfg.market.strike);
        b.optional("tau_max", cfg.market.tau_max);
        b.optional("tau_ratio", cfg.market.tau_ratio);
        b.optional_integer("tau_count", cfg.market.tau_count);
        b.optional("tau_ref", cfg.market.tau_ref);
        b.reject_unknown();
    }
    if (doc.contains("engine")) {
        Block b(doc.at("engine"), "engine");
        b.optional_integer("n_terms", cfg.engine.n_terms);
        b.optional("range_width", cfg.engine.range_width);
        b.optional_integer("n_paths", cfg.engine.n_paths);
        b.optional_integer("seed", cfg.engine.seed);
        b.reject_unknown();
    }
    if (doc.contains("payoff")) cfg.payoff = parse_payoff(doc.at("payoff"));
    check_config(cfg, false);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("--config", fmt::format("cannot open configuration file '{}'", path));
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void apply_overrides(RunConfig& c, const ConfigOverrides& o) {
    if (o.s0) c.market.s0 = *o.s0;
    if (o.strike) c.market.strike = *o.strike;
    if (o.tau_max) c.market.tau_max = *o.tau_max;
    if (o.tau_ratio) c.market.tau_ratio = *o.tau_ratio;
    if (o.tau_count) c.market.tau_count = *o.tau_count;
    if (o.n_terms) c.engine.n_terms = *o.n_terms;
    if (o.n_paths) c.engine.n_paths = *o.n_paths;
    if (o.seed) c.engine.seed = *o.seed;
    if (o.out) c.out = *o.out;
}

void check_config(const RunConfig& c, bool needs_off_money) {
    const auto violations = validate(c.model);
    if (!violations.empty()) {
        std::string msg = "invalid model parameters:";
        for (const auto& v : violations) msg += " " + v + ";";
        throw ConfigError("model", msg);
    }
    const MarketConfig& m = c.market;
    if (!(m.s0 > 0.0)) throw ConfigError("market.s0", "s0 must be positive");
    if (!(m.strike > 0.0)) throw ConfigError("market.strike", "strike must be positive");
    if (needs_off_money && m.strike == m.s0)
        throw ConfigError("market.strike", "strike equals s0: at-the-money strikes are excluded");
    if (!(m.tau_max > 0.0)) throw ConfigError("market.tau_max", "tau_max must be positive (tau = 0 is not a grid point)");
    if (m.tau_count < 1) throw ConfigError("market.tau_count", "tau_count must be at least 1");
    if (m.tau_count > 1 && !(m.tau_ratio > 1.0))
        throw ConfigError("market.tau_ratio", "tau_ratio must exceed 1 so the grid strictly decreases");
    for (double t : c.tau_grid())
        if (!(t > 0.0)) throw ConfigError("market.tau_ratio", "expiry grid underflows to zero");
    if (!(m.tau_ref > 0.0)) throw ConfigError("market.tau_ref", "tau_ref must be positive");
    const EngineConfig& e = c.engine;
    if (e.n_terms < 4 || e.n_terms % 2 != 0) throw ConfigError("engine.n_terms", "n_terms must be an even number >= 4");
    if (!(e.range_width > 0.0)) throw ConfigError("engine.range_width", "range_width must be positive");
    if (e.n_paths < 0) throw ConfigError("engine.n_paths", "n_paths must be nonnegative");
}

}  // namespace levy
