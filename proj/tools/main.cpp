// cascade: non-Markovian decay of a three-level ladder atom coupled to a
// structured photonic reservoir, by two independent routes (discretised
// integral equation with numerical inverse Laplace transform, and Lindblad
// dynamics with one or two auxiliary modes).
//
// Exit codes: 0 success, 2 configuration error, 3 solver error,
// 4 compare deviation above threshold.

#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "cascade/config.hpp"
#include "cascade/scenario.hpp"

namespace {

struct Options {
    std::string config_path;
    std::string output_override;
    std::string method_override;
    double threshold = 0.02;
    double budget_s = 600.0;
    unsigned threads = 0;
    bool seed_free = false;
};

class OutputFile {
  public:
    explicit OutputFile(const std::string& path) {
        if (path != "-") {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_)
                throw cascade::ConfigError("output: cannot open " + path);
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

  private:
    std::unique_ptr<std::ofstream> file_;
};

cascade::ScenarioConfig load(const Options& opt) {
    cascade::ScenarioConfig config = cascade::load_config(opt.config_path);
    if (!opt.output_override.empty()) config.output = opt.output_override;
    if (!opt.method_override.empty()) {
        if (opt.method_override == "integral")
            config.method = cascade::Method::Integral;
        else if (opt.method_override == "master")
            config.method = cascade::Method::Master;
        else
            throw cascade::ConfigError("--method must be integral or master");
        if (config.method == cascade::Method::Master &&
            config.model.type == cascade::ModelType::LorentzianSum)
            throw cascade::ConfigError(
                "--method master supports high_q and pbg models only");
    }
    return config;
}

int run_simulate(const Options& opt) {
    const auto config = load(opt);
    OutputFile out(config.output);
    cascade::run_simulation(config, out.stream(), {opt.threads});
    return 0;
}

int run_compare(const Options& opt) {
    const auto config = load(opt);
    const auto result = cascade::run_compare(config, opt.budget_s, {opt.threads});
    OutputFile out(config.output);
    cascade::write_compare_csv(result, out.stream());
    if (result.integral_skipped) return 0;
    std::cerr << "max |P2_integral - P2_master| = "
              << cascade::format_field(result.max_abs_deviation) << "\n";
    if (result.max_abs_deviation > opt.threshold) {
        std::cerr << "deviation exceeds threshold "
                  << cascade::format_field(opt.threshold) << "\n";
        return 4;
    }
    return 0;
}

int run_reconstruct(const Options& opt) {
    const auto config = load(opt);
    const auto result = cascade::run_reconstruct(config);
    OutputFile out(config.output);
    cascade::write_reconstruct_csv(result, out.stream());
    std::cerr << "max relative gap = "
              << cascade::format_field(result.max_relative_gap) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "cascade: decay of a three-level ladder atom in a structured "
        "photonic reservoir"};
    app.require_subcommand(1);

    Options opt;
    std::string mode;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config_path, "JSON scenario file")
            ->required();
        sub->add_option("--output", opt.output_override,
                        "CSV destination ('-' for stdout)");
        sub->add_option("--threads", opt.threads,
                        "contour worker threads (0 = hardware)");
        sub->add_flag("--seed-free", opt.seed_free,
                      "reserved; no randomness exists anywhere");
    };

    CLI::App* simulate = app.add_subcommand(
        "simulate", "run one trajectory with the configured method");
    add_common(simulate);
    simulate->add_option("--method", opt.method_override,
                         "integral or master (overrides config)");

    CLI::App* compare = app.add_subcommand(
        "compare", "run both routes and report the maximum deviation");
    add_common(compare);
    compare->add_option("--threshold", opt.threshold,
                        "max allowed |P2 integral - P2 master|");
    compare->add_option("--budget", opt.budget_s,
                        "wall-clock budget (s) before falling back to the "
                        "master route");

    CLI::App* reconstruct = app.add_subcommand(
        "reconstruct-reservoir",
        "emit closed-form and quasimode-network structure functions");
    add_common(reconstruct);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (opt.seed_free) {
        std::cerr << "error: --seed-free is reserved and rejected; every run "
                     "is already deterministic\n";
        return 2;
    }

    try {
        if (simulate->parsed()) return run_simulate(opt);
        if (compare->parsed()) return run_compare(opt);
        if (reconstruct->parsed()) return run_reconstruct(opt);
    } catch (const cascade::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
