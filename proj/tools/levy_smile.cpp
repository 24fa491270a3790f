#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "levy_smile/commands.hpp"
#include "levy_smile/errors.hpp"

namespace {

template <class T>
void add_override(CLI::App& app, const std::string& flag, std::optional<T>& target, const std::string& help) {
    app.add_option_function<T>(flag, [&target](const T& v) { target = v; }, help);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Small-expiry option prices, slopes and implied volatilities under exponential Levy models"};
    std::string command;
    std::string config_path;
    levy::ConfigOverrides overrides;

    app.add_option("command", command, "price | slope | iv-curve | verify-slope | rate | classify")
        ->required()
        ->check(CLI::IsMember({"price", "slope", "iv-curve", "verify-slope", "rate", "classify"}));
    app.add_option("--config", config_path, "JSON configuration file")->required();
    add_override(app, "--s0", overrides.s0, "spot price");
    add_override(app, "--strike", overrides.strike, "strike");
    add_override(app, "--tau-max", overrides.tau_max, "largest expiry of the grid");
    add_override(app, "--tau-ratio", overrides.tau_ratio, "ratio between consecutive expiries");
    add_override(app, "--tau-count", overrides.tau_count, "number of expiries");
    add_override(app, "--n-terms", overrides.n_terms, "cosine expansion terms");
    add_override(app, "--n-paths", overrides.n_paths, "Monte-Carlo paths");
    add_override(app, "--seed", overrides.seed, "Monte-Carlo seed");
    add_override(app, "--out", overrides.out, "CSV output path (default: standard output)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        levy::RunConfig config = levy::load_config(config_path);
        levy::apply_overrides(config, overrides);
        const levy::CommandResult result = levy::run_command(command, config);
        if (config.out.empty()) {
            std::istringstream lines(result.summary);
            for (std::string line; std::getline(lines, line);) std::cout << "# " << line << '\n';
            std::cout << result.csv;
        } else {
            std::ofstream out(config.out, std::ios::binary);
            if (!out) throw levy::ConfigError("--out", "cannot open output file '" + config.out + "'");
            out << result.csv;
            std::cout << result.summary;
        }
        return 0;
    } catch (const levy::ConfigError& e) {
        std::cerr << "config error [" << e.key() << "]: " << e.what() << '\n';
        return levy::exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return levy::exit_code_for(e);
    }
}
