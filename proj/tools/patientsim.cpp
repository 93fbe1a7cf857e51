// Command line front end: run a config file, reproduce a figure preset, or
// print the lower-bound instance pair.

#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "patient/distributions.hpp"
#include "patient/experiment.hpp"
#include "patient/format.hpp"
#include "patient/theory.hpp"

namespace fs = std::filesystem;
using namespace patient;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kRuntime = 2;

fs::path default_out_dir() {
    if (const char* env = std::getenv("PATIENT_OUT_DIR"); env && *env) return env;
    return "out";
}

void write_outputs(const fs::path& csv_path, const std::vector<ExperimentConfig>& configs,
                   const std::vector<std::string>& notes, bool gnuplot, unsigned threads) {
    const auto results = run_experiments(configs, threads);
    // everything is computed before the first byte is written
    const std::string csv = render_csv(results);
    const std::string meta = render_metadata(configs, notes);
    const std::string dat = gnuplot ? render_gnuplot(results) : std::string();

    write_file_atomically(csv_path, csv);
    auto meta_path = csv_path;
    meta_path += ".meta.json";
    write_file_atomically(meta_path, meta);
    if (gnuplot) {
        auto dat_path = csv_path;
        dat_path.replace_extension(".dat");
        write_file_atomically(dat_path, dat);
    }
    std::cout << "wrote " << csv_path.string() << " (" << results.size() << " row-group"
              << (results.size() == 1 ? "" : "s") << ")\n";
}

int print_lower_bound(Round horizon, double alpha) {
    const LowerBoundPair pair = make_lower_bound_pair(horizon, alpha);
    const double lhs = (0.5 + pair.q) * (1.0 - pair.p);
    const double rhs = 0.5 - pair.q;
    const double margin = assumption1_margin(pair.problem_b.arm(1).delay, alpha,
                                             std::max<Round>(horizon - 1, 1));
    std::cout << std::setprecision(17);
    std::cout << "T = " << horizon << "\n"
              << "alpha = " << format_number(alpha) << "\n"
              << "p = T^-alpha = " << format_number(pair.p) << "\n"
              << "q = p/(4-2p) = " << format_number(pair.q) << "\n"
              << "problem A: arm0 bernoulli(0.5) dirac(0); arm1 "
              << format_reward_law(pair.problem_a.arm(1).reward) << " "
              << format_delay_law(pair.problem_a.arm(1).delay) << "\n"
              << "problem B: arm0 bernoulli(0.5) dirac(0); arm1 "
              << format_reward_law(pair.problem_b.arm(1).reward) << " "
              << format_delay_law(pair.problem_b.arm(1).delay) << "\n"
              << "(1/2+q)(1-p) = " << format_number(lhs) << "\n"
              << "1/2-q        = " << format_number(rhs) << "\n"
              << "identity residual = " << format_number(lhs - rhs) << "\n"
              << "q >= p/4: " << (pair.q >= pair.p / 4.0 ? "yes" : "no") << "\n"
              << "tail bound margin of problem B arm1 on [1, T-1]: " << format_number(margin)
              << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Delayed-conversion bandit simulator"};
    app.require_subcommand(1);

    unsigned threads = 0;
    app.add_option("--threads", threads, "Worker threads for replications (0 = all cores)");

    auto* run = app.add_subcommand("run", "Run one experiment config file");
    std::string config_path;
    bool run_gnuplot = false;
    run->add_option("config", config_path, "Config file")->required();
    run->add_flag("--gnuplot", run_gnuplot, "Also write a gnuplot data file next to the CSV");

    auto* pre = app.add_subcommand("preset", "Reproduce a figure preset");
    std::string preset_name;
    double scale = 0.25;
    std::string out_dir;
    std::uint64_t seed = 1;
    bool pre_gnuplot = false;
    bool configs_only = false;
    pre->add_option("name", preset_name, "figure2 | figure3 | figure4 | figure5")->required();
    pre->add_option("--scale", scale, "Multiplier on run counts")->capture_default_str();
    pre->add_option("--out", out_dir, "Output directory (default $PATIENT_OUT_DIR or ./out)");
    pre->add_option("--seed", seed, "Master seed")->capture_default_str();
    pre->add_flag("--gnuplot", pre_gnuplot, "Also write a gnuplot data file");
    pre->add_flag("--configs-only", configs_only, "Write the preset's config files and stop");

    auto* lb = app.add_subcommand("lowerbound", "Print the indistinguishable instance pair");
    Round horizon = 0;
    double alpha = 0.0;
    lb->add_option("--T", horizon, "Horizon")->required()->check(CLI::Range(Round{2}, Round{1} << 40));
    lb->add_option("--alpha", alpha, "Tail exponent")->required()->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*run) {
            const ExperimentConfig config = load_config(config_path);
            fs::path csv = config.output.empty() ? default_out_dir() / (fs::path(config_path).stem().string() + ".csv")
                                                 : fs::path(config.output);
            write_outputs(csv, {config}, {}, run_gnuplot, threads);
            return kOk;
        }
        if (*pre) {
            const auto configs = preset(preset_name, scale, seed);
            const fs::path dir = out_dir.empty() ? default_out_dir() : fs::path(out_dir);
            if (configs_only) {
                for (std::size_t j = 0; j < configs.size(); ++j) {
                    write_file_atomically(dir / (preset_name + "_" + std::to_string(j) + ".cfg"),
                                          serialize_config(configs[j]));
                }
                std::cout << "wrote " << configs.size() << " config files to " << dir.string() << "\n";
                return kOk;
            }
            write_outputs(dir / (preset_name + ".csv"), configs, preset_notes(preset_name), pre_gnuplot,
                          threads);
            return kOk;
        }
        if (*lb) return print_lower_bound(horizon, alpha);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntime;
    }
    return kUsage;
}
