#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "patient/environment.hpp"
#include "patient/policies.hpp"

namespace patient {

/// About `count` geometrically spaced rounds in [1, T], deduplicated, always
/// ending with T.
std::vector<Round> default_checkpoints(Round horizon, std::size_t count = 100);

struct RegretTrace {
    std::vector<Round> checkpoints;
    /// Cumulative pseudo-regret after the pull of each checkpoint round.
    std::vector<double> regret;
    std::vector<std::int64_t> final_pulls;
    /// Policy diagnostic at each checkpoint; empty when the policy has none.
    std::vector<double> diagnostics;
};

/// Plays one episode. Per round: arrivals are delivered, the policy selects,
/// the environment draws reward then delay from the single per-run stream.
RegretTrace run_episode(const BanditInstance& instance, Policy& policy, std::uint64_t seed,
                        std::span<const Round> checkpoints, const PullSampler& sampler = {});

/// Same, and also hands back the environment for inspection.
RegretTrace run_episode(Environment& env, Policy& policy, std::uint64_t seed,
                        std::span<const Round> checkpoints);

using PolicyFactory = std::function<std::unique_ptr<Policy>()>;

struct MonteCarloOptions {
    std::size_t runs = 1;
    std::uint64_t master_seed = 0;
    std::vector<Round> checkpoints;  ///< empty means default_checkpoints(T)
    unsigned threads = 1;            ///< 0 means hardware concurrency
};

struct MonteCarloResult {
    std::vector<Round> checkpoints;
    std::vector<double> mean;
    std::vector<double> std_error;
    std::vector<double> final_regret;  ///< one per run, in run-index order
    std::size_t runs = 0;
    std::uint64_t master_seed = 0;
};

/// Run i is seeded with split_seed(master_seed, i); aggregation is in run
/// order, so the result does not depend on the thread count.
MonteCarloResult monte_carlo(const BanditInstance& instance, const PolicyFactory& make,
                             const MonteCarloOptions& options);
MonteCarloResult monte_carlo(const BanditInstance& instance, const PolicySpec& spec,
                             const MonteCarloOptions& options);

}  // namespace patient
