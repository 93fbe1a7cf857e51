#include "patient/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

namespace patient {

std::vector<Round> default_checkpoints(Round horizon, std::size_t count) {
    if (horizon < 1) throw std::invalid_argument("default_checkpoints: horizon must be positive");
    std::vector<Round> out;
    if (count > 1) {
        const double top = std::log(static_cast<double>(horizon));
        for (std::size_t j = 0; j < count; ++j) {
            const double x = top * static_cast<double>(j) / static_cast<double>(count - 1);
            out.push_back(std::clamp<Round>(std::llround(std::exp(x)), 1, horizon));
        }
    }
    out.push_back(horizon);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

void check_checkpoints(std::span<const Round> checkpoints, Round horizon) {
    for (std::size_t j = 0; j < checkpoints.size(); ++j) {
        if (checkpoints[j] < 1 || checkpoints[j] > horizon) {
            throw std::invalid_argument("checkpoint " + std::to_string(checkpoints[j]) +
                                        " outside [1, " + std::to_string(horizon) + "]");
        }
        if (j > 0 && checkpoints[j] <= checkpoints[j - 1]) {
            throw std::invalid_argument("checkpoints must be strictly increasing");
        }
    }
}

}  // namespace

RegretTrace run_episode(Environment& env, Policy& policy, std::uint64_t seed,
                        std::span<const Round> checkpoints) {
    const BanditInstance& instance = env.instance();
    const auto k = instance.num_arms();
    const Round horizon = instance.horizon();
    check_checkpoints(checkpoints, horizon);
    policy.reset(k, horizon);

    RegretTrace trace;
    trace.checkpoints.assign(checkpoints.begin(), checkpoints.end());
    trace.regret.reserve(checkpoints.size());

    Rng rng(seed);
    std::size_t next = 0;
    while (!env.finished()) {
        const Round t = env.round();
        std::size_t arm = 0;
        {
            const auto view = env.observe();
            arm = policy.select(view, rng);
        }
        if (arm >= k) {
            throw std::runtime_error("policy " + policy.name() + " selected arm " +
                                     std::to_string(arm) + " at round " + std::to_string(t) +
                                     " but K=" + std::to_string(k));
        }
        env.pull(arm, rng);
        if (next < checkpoints.size() && checkpoints[next] == t) {
            trace.regret.push_back(env.pseudo_regret(t));
            if (auto d = policy.diagnostic()) trace.diagnostics.push_back(*d);
            ++next;
        }
    }
    trace.final_pulls.resize(k);
    for (std::size_t i = 0; i < k; ++i) trace.final_pulls[i] = env.pull_count_at(i, horizon);
    return trace;
}

RegretTrace run_episode(const BanditInstance& instance, Policy& policy, std::uint64_t seed,
                        std::span<const Round> checkpoints, const PullSampler& sampler) {
    Environment env(instance, sampler);
    return run_episode(env, policy, seed, checkpoints);
}

MonteCarloResult monte_carlo(const BanditInstance& instance, const PolicyFactory& make,
                             const MonteCarloOptions& options) {
    if (options.runs < 1) throw std::invalid_argument("monte_carlo: runs must be >= 1");
    std::vector<Round> checkpoints = options.checkpoints.empty()
                                         ? default_checkpoints(instance.horizon())
                                         : options.checkpoints;
    check_checkpoints(checkpoints, instance.horizon());

    const std::size_t runs = options.runs;
    std::vector<std::vector<double>> per_run(runs);

    std::atomic<std::size_t> cursor{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = cursor++; i < runs; i = cursor++) {
            try {
                auto policy = make();
                per_run[i] = run_episode(instance, *policy, split_seed(options.master_seed, i),
                                         checkpoints)
                                 .regret;
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                cursor = runs;
            }
        }
    };

    unsigned threads = options.threads == 0 ? std::max(1U, std::thread::hardware_concurrency())
                                            : options.threads;
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, runs));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned j = 0; j < threads; ++j) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    MonteCarloResult result;
    result.checkpoints = checkpoints;
    result.runs = runs;
    result.master_seed = options.master_seed;
    result.mean.assign(checkpoints.size(), 0.0);
    result.std_error.assign(checkpoints.size(), 0.0);
    result.final_regret.reserve(runs);
    const double n = static_cast<double>(runs);
    for (std::size_t j = 0; j < checkpoints.size(); ++j) {
        double sum = 0.0;
        for (const auto& r : per_run) sum += r[j];
        const double mean = sum / n;
        double ss = 0.0;
        for (const auto& r : per_run) ss += (r[j] - mean) * (r[j] - mean);
        result.mean[j] = mean;
        result.std_error[j] = runs > 1 ? std::sqrt(ss / (n - 1.0)) / std::sqrt(n) : 0.0;
    }
    for (const auto& r : per_run) result.final_regret.push_back(r.back());
    return result;
}

MonteCarloResult monte_carlo(const BanditInstance& instance, const PolicySpec& spec,
                             const MonteCarloOptions& options) {
    // surface configuration errors before any run starts
    (void)make_policy(spec, instance.num_arms(), instance.horizon());
    return monte_carlo(
        instance, [&] { return make_policy(spec, instance.num_arms(), instance.horizon()); },
        options);
}

}  // namespace patient
