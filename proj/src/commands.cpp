#include "levy_smile/commands.hpp"

#include <cmath>
#include <optional>

#include <fmt/format.h>

#include "levy_smile/asymptotics.hpp"
#include "levy_smile/errors.hpp"
#include "levy_smile/implied_vol.hpp"
#include "levy_smile/monte_carlo.hpp"
#include "levy_smile/pricing.hpp"
#include "levy_smile/quadrature.hpp"

namespace levy {

namespace {

std::string num(double x) { return fmt::format("{:.17g}", x); }
std::string num(const std::optional<double>& x) { return x ? num(*x) : std::string(); }

CosSettings cos_settings(const RunConfig& c) {
    CosSettings s;
    s.n_terms = c.engine.n_terms;
    s.range_width = c.engine.range_width;
    return s;
}

std::string header_line(const RunConfig& c, std::string_view command) {
    return fmt::format("{} model={} s0={} strike={}", command, model_name(c.model), num(c.market.s0),
                       num(c.market.strike));
}

void add_row(std::string& csv, std::initializer_list<std::string> cells) {
    bool first = true;
    for (const auto& cell : cells) {
        if (!first) csv += ',';
        csv += cell;
        first = false;
    }
    csv += '\n';
}

Estimate relevant_slope(const RunConfig& c) { return slopes(c.model, c.market.s0, c.market.strike).relevant(); }

}  // namespace

CommandResult cmd_price(const RunConfig& c) {
    check_config(c, false);
    CommandResult r;
    r.csv = "tau,fourier_value,fourier_err,mc_value,mc_stderr\n";
    const bool with_mc = mc_supported(c.model) && c.engine.n_paths > 1;
    const auto grid = c.tau_grid();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double tau = grid[i];
        const PriceQuote f = price_call_fourier(c.model, c.market.s0, c.market.strike, tau, cos_settings(c));
        std::optional<double> mc_value;
        std::optional<double> mc_err;
        if (with_mc) {
            const PriceQuote m =
                price_call_mc(c.model, c.market.s0, c.market.strike, tau, c.engine.n_paths, c.engine.seed + i);
            mc_value = m.value;
            mc_err = m.err;
        }
        add_row(r.csv, {num(tau), num(f.value), num(f.err), num(mc_value), num(mc_err)});
    }
    r.summary = header_line(c, "price") + fmt::format(" rows={} monte_carlo={}\n", grid.size(),
                                                      with_mc ? "yes" : "no");
    return r;
}

CommandResult cmd_slope(const RunConfig& c) {
    check_config(c, true);
    const SlopeResult s = slopes(c.model, c.market.s0, c.market.strike);
    CommandResult r;
    r.csv = "s0,strike,log_moneyness,slope_call,slope_call_err,slope_put,slope_put_err\n";
    const auto value = [](const std::optional<Estimate>& e) { return e ? num(e->value) : std::string(); };
    const auto err = [](const std::optional<Estimate>& e) { return e ? num(e->err) : std::string(); };
    add_row(r.csv, {num(c.market.s0), num(c.market.strike), num(s.log_moneyness), value(s.call), err(s.call),
                    value(s.put), err(s.put)});
    r.summary = header_line(c, "slope") + fmt::format(" {}={} err={}\n", s.call ? "slope_call" : "slope_put",
                                                      num(s.relevant().value), num(s.relevant().err));
    return r;
}

CommandResult cmd_verify_slope(const RunConfig& c) {
    check_config(c, true);
    const Estimate slope = relevant_slope(c);
    if (!(slope.value > 0.0))
        throw NotApplicable(
            "the relevant slope is zero, so the excess is o(tau) and its small-expiry rate is not given by a slope");
    CommandResult r;
    r.csv = "tau,excess,excess_over_tau,slope,ratio\n";
    double last_ratio = 0.0;
    for (double tau : c.tau_grid()) {
        const double excess = excess_fourier(c.model, c.market.s0, c.market.strike, tau, cos_settings(c)).value;
        last_ratio = excess / (tau * slope.value);
        add_row(r.csv, {num(tau), num(excess), num(excess / tau), num(slope.value), num(last_ratio)});
    }
    r.summary = header_line(c, "verify-slope") + fmt::format(" slope={} final_ratio={}\n", num(slope.value),
                                                             num(last_ratio));
    return r;
}

CommandResult cmd_iv_curve(const RunConfig& c) {
    check_config(c, true);
    const Estimate slope = relevant_slope(c);
    CommandResult r;
    r.csv = "tau,sigma_measured,sigma_predicted,ratio\n";
    std::optional<double> last_ratio;
    for (double tau : c.tau_grid()) {
        const double excess = excess_fourier(c.model, c.market.s0, c.market.strike, tau, cos_settings(c)).value;
        const double measured =
            excess > 0.0 ? implied_vol_from_excess(excess, c.market.s0, c.market.strike, tau).sigma : 0.0;
        std::optional<double> predicted;
        if (slope.value > 0.0 && tau * slope.value < 1.0)
            predicted = predicted_iv_from_slope(slope.value, c.market.s0, c.market.strike, tau);
        std::optional<double> ratio;
        if (predicted) ratio = measured / *predicted;
        last_ratio = ratio;
        add_row(r.csv, {num(tau), num(measured), num(predicted), num(ratio)});
    }
    r.summary = header_line(c, "iv-curve") + fmt::format(" slope={} final_ratio={}\n", num(slope.value),
                                                         last_ratio ? num(*last_ratio) : std::string("n/a"));
    return r;
}

CommandResult cmd_rate(const RunConfig& c) {
    check_config(c, false);
    if (!c.payoff) throw ConfigError("payoff", "the rate command needs a 'payoff' block");
    if (c.engine.n_paths < 2) throw ConfigError("engine.n_paths", "the rate command needs n_paths >= 2");
    const PayoffDescriptor& p = *c.payoff;
    const double s0 = c.market.s0;
    const double strike = c.market.strike;

    std::function<double(double)> f;
    Estimate integral;
    std::string label;
    switch (p.kind) {
        case PayoffDescriptor::Kind::indicator:
            if (!(p.a < p.b)) throw ConfigError("payoff.b", "indicator needs a < b");
            if (p.a <= 0.0 && 0.0 <= p.b) throw ConfigError("payoff.a", "indicator interval must not contain 0");
            f = [a = p.a, b = p.b](double x) { return (a <= x && x <= b) ? 1.0 : 0.0; };
            integral = integrate_payoff(f, c.model, Interval{p.a, p.b});
            label = fmt::format("indicator[{},{}]", num(p.a), num(p.b));
            break;
        case PayoffDescriptor::Kind::call:
            if (!(strike > s0)) throw ConfigError("market.strike", "call payoff vanishes near 0 only for strike > s0");
            f = [s0, strike](double x) { return std::max(s0 * std::exp(x) - strike, 0.0); };
            integral = slope_call(c.model, s0, strike);
            label = "call";
            break;
        case PayoffDescriptor::Kind::put:
            if (!(strike < s0)) throw ConfigError("market.strike", "put payoff vanishes near 0 only for strike < s0");
            f = [s0, strike](double x) { return std::max(strike - s0 * std::exp(x), 0.0); };
            integral = slope_put(c.model, s0, strike);
            label = "put";
            break;
    }
    if (!(integral.value > 0.0))
        throw ConfigError("payoff", "payoff integrates to zero against the Levy measure; the rate ratio would be 0/0");

    CommandResult r;
    r.csv = "tau,mc_rate,mc_rate_stderr,integral,ratio\n";
    const auto grid = c.tau_grid();
    double last_ratio = 0.0;
    double last_z = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double tau = grid[i];
        const McEstimate e =
            mc_expectation(c.model, tau, f, c.engine.n_paths, c.engine.seed + i, Sampling::jump_stratified);
        const double rate = e.mean / tau;
        const double se = e.std_error / tau;
        last_ratio = rate / integral.value;
        last_z = se > 0.0 ? (rate - integral.value) / se : 0.0;
        add_row(r.csv, {num(tau), num(rate), num(se), num(integral.value), num(last_ratio)});
    }
    r.summary = header_line(c, "rate") + fmt::format(" payoff={} integral={} final_ratio={} final_z={:.3f}\n", label,
                                                     num(integral.value), num(last_ratio), last_z);
    return r;
}

CommandResult cmd_classify(const RunConfig& c) {
    check_config(c, true);
    const Regime g = classify(c.model, c.market.s0, c.market.strike, c.market.tau_ref);
    const RegimeEvidence& e = g.evidence;
    CommandResult r;
    r.csv = "regime,value,log_moneyness,gamma,sigma,slope,slope_err,activity,variation,support,drift_fv,tau_ref\n";
    add_row(r.csv, {std::string(to_string(g.tag)), num(g.value), num(e.log_moneyness), num(e.gamma), num(e.sigma),
                    e.slope ? num(e.slope->value) : std::string(), e.slope ? num(e.slope->err) : std::string(),
                    std::string(to_string(e.activity)), std::string(to_string(e.variation)),
                    std::string(to_string(e.support)), num(e.drift_fv), num(e.tau_ref)});
    r.summary = header_line(c, "classify") + " " + g.describe() + "\n";
    return r;
}

CommandResult run_command(std::string_view name, const RunConfig& config) {
    if (name == "price") return cmd_price(config);
    if (name == "slope") return cmd_slope(config);
    if (name == "iv-curve") return cmd_iv_curve(config);
    if (name == "verify-slope") return cmd_verify_slope(config);
    if (name == "rate") return cmd_rate(config);
    if (name == "classify") return cmd_classify(config);
    throw ConfigError("command", fmt::format("unknown command '{}'", name));
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return 2;
    if (dynamic_cast<const CapabilityError*>(&e)) return 4;
    if (dynamic_cast<const NotApplicable*>(&e)) return 4;
    if (dynamic_cast<const NumericFailure*>(&e)) return 3;
    if (dynamic_cast<const DomainError*>(&e)) return 2;
    return 3;
}

}  // namespace levy
