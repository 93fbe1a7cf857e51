#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "patient/distributions.hpp"
#include "patient/environment.hpp"
#include "patient/harness.hpp"
#include "patient/policies.hpp"

namespace patient {

inline constexpr std::string_view kArtifactVersion = "1.0.0";

/// A configuration problem, with the line and field it was found at when known.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, std::size_t line, const std::string& message);

    const std::string& field() const { return field_; }
    std::size_t line() const { return line_; }

private:
    std::string field_;
    std::size_t line_;
};

/// One Monte Carlo experiment: an instance, a policy, and how to replicate it.
///
/// Text form, one `key = value` per line, `#` starts a comment:
///
///     label = patient(alpha=0.3)
///     horizon = 3000
///     runs = 100
///     master_seed = 1
///     checkpoints = default            # or a comma separated list of rounds
///     output = out/run.csv
///     arm = bernoulli(0.5) pareto(1)   # reward law, delay law; one line per arm
///     arm = bernoulli(0.55) pareto(0.3)
///     policy = patient                 # patient | adapt | ducb | ucb | uniform
///     policy.alpha = 0.3
///     policy.alpha_schedule = false
///     policy.bias = true
///     policy.c = 1
///     policy.alpha_floor = 0.2
///     policy.mu_floor = 0.5
///     policy.window = 50
///     policy.cdf = pareto(0.7)         # ducb only
///     note = free text
///
/// Reward laws: bernoulli(mu), point(v). Delay laws: dirac(d), pareto(alpha),
/// twopoint(p,d0,d1), geometric(q).
struct ExperimentConfig {
    std::string label;
    std::vector<Arm> arms;
    PolicySpec policy;
    Round horizon = 1;
    std::size_t runs = 1;
    std::uint64_t master_seed = 0;
    std::vector<Round> checkpoints;  ///< empty means default checkpoints
    std::string output;
    std::string note;

    BanditInstance instance() const { return BanditInstance(arms, horizon); }
};

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

std::string format_reward_law(const RewardLaw& law);
std::string format_delay_law(const DelayLaw& law);
RewardLaw parse_reward_law(std::string_view text);
DelayLaw parse_delay_law(std::string_view text);

/// Throws ConfigError carrying the offending line and field.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const ExperimentConfig& config);

/// Configs behind one of the reproduced figures: figure2 (regret at T against
/// the tail exponent handed to the policy), figure3 (regret against the gap for
/// several tail indices), figure4 and figure5 (delay-aware UCB against the
/// censored baseline with homogeneous and heterogeneous delays). Run counts are
/// multiplied by `scale` and rounded, with a minimum of one.
std::vector<ExperimentConfig> preset(std::string_view name, double scale, std::uint64_t master_seed);
std::vector<std::string> preset_names();
/// Remarks stored in the metadata sidecar of a preset.
std::vector<std::string> preset_notes(std::string_view name);

struct ExperimentResult {
    std::string label;
    MonteCarloResult result;
};

std::vector<ExperimentResult> run_experiments(const std::vector<ExperimentConfig>& configs,
                                              unsigned threads);

/// Header `policy,run_count,round,mean_regret,stderr`, one row-group per result.
std::string render_csv(const std::vector<ExperimentResult>& results);
/// Whitespace separated blocks, two blank lines between groups.
std::string render_gnuplot(const std::vector<ExperimentResult>& results);
/// JSON metadata: config echo, master seed, artifact version, notes.
std::string render_metadata(const std::vector<ExperimentConfig>& configs,
                            const std::vector<std::string>& notes);

/// Writes through a temporary file and a rename, so a failed write leaves no
/// partial file at `path`.
void write_file_atomically(const std::filesystem::path& path, std::string_view contents);

}  // namespace patient
