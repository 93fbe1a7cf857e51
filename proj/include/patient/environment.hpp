#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "patient/distributions.hpp"
#include "patient/random.hpp"

namespace patient {

using Round = std::int64_t;

/// Arrival round of a conversion that lands after the horizon.
inline constexpr Round kCensored = std::numeric_limits<Round>::max();

struct Arm {
    RewardLaw reward;
    DelayLaw delay;
};

/// K arms (reward law, delay law) played for a known horizon T >= K.
class BanditInstance {
public:
    BanditInstance(std::vector<Arm> arms, Round horizon);

    std::size_t num_arms() const { return arms_.size(); }
    Round horizon() const { return horizon_; }
    const std::vector<Arm>& arms() const { return arms_; }
    const Arm& arm(std::size_t i) const { return arms_.at(i); }

    double mean(std::size_t i) const { return means_.at(i); }
    double best_mean() const { return best_mean_; }
    double gap(std::size_t i) const { return best_mean_ - means_.at(i); }
    const std::vector<double>& means() const { return means_; }
    std::vector<double> gaps() const;

private:
    std::vector<Arm> arms_;
    Round horizon_;
    std::vector<double> means_;
    double best_mean_ = 0.0;
};

struct PullRecord {
    std::size_t arm;
    Round round;
    double reward;
    Delay delay;
    /// round + max(delay, 1), or kCensored when that exceeds the horizon.
    Round arrival_round;

    bool censored() const { return arrival_round == kCensored; }
};

struct PullOutcome {
    double reward;
    Delay delay;
};

/// Draws the (reward, delay) pair of one pull. The default sampler draws the
/// reward first, then the delay, from the arm's laws.
using PullSampler = std::function<PullOutcome(std::size_t arm, Rng& rng)>;

struct WindowSum {
    std::int64_t count = 0;
    double sum = 0.0;
    /// Set when the window is at least the current round and nothing can be
    /// observed through it.
    bool empty = false;
};

/// Everything a learner may legally see when deciding at round `round()`.
/// A reward that has not arrived yet and a zero reward are indistinguishable.
class ObservationView {
public:
    virtual ~ObservationView() = default;

    virtual Round round() const = 0;
    virtual Round horizon() const = 0;
    virtual std::size_t num_arms() const = 0;
    /// Pulls of `arm` at rounds < round().
    virtual std::int64_t pull_count(std::size_t arm) const = 0;
    /// Sum of rewards of `arm` whose arrival round is <= round().
    virtual double arrived_sum(std::size_t arm) const = 0;
    /// Over pulls of `arm` at rounds s <= round() - window: their count and the
    /// sum of reward * 1{delay <= window}.
    virtual WindowSum windowed(std::size_t arm, Delay window) const = 0;
};

inline WindowSum windowed(const ObservationView& view, std::size_t arm, Delay window) {
    return view.windowed(arm, window);
}

class EpisodeComplete : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Runs the delayed-conversion protocol over one episode. Round numbering
/// starts at 1; arrivals scheduled for a round are delivered when the
/// environment advances into it, before the learner observes.
class Environment {
public:
    explicit Environment(BanditInstance instance, PullSampler sampler = {});

    const BanditInstance& instance() const { return instance_; }
    /// The round about to be played.
    Round round() const { return round_; }
    bool finished() const { return round_ > instance_.horizon(); }

    /// Plays `arm` in the current round and advances to the next one.
    void pull(std::size_t arm, Rng& rng);

    class View;
    /// View at the current round. Invalidated by the next pull().
    View observe() const;

    const std::vector<PullRecord>& records() const { return records_; }
    /// Pulls of `arm` at rounds <= t.
    std::int64_t pull_count_at(std::size_t arm, Round t) const;
    /// Sum over arms of gap * pulls up to round t, with the true gaps.
    double pseudo_regret(Round t) const;

private:
    struct ArmLog {
        std::vector<Round> rounds;
        std::vector<Delay> delays;
        std::vector<double> rewards;
    };

    struct Arrival {
        std::size_t arm;
        double reward;
    };

    void check_arm(std::size_t arm) const;

    BanditInstance instance_;
    PullSampler sampler_;
    Round round_ = 1;
    std::vector<PullRecord> records_;
    std::vector<ArmLog> logs_;
    std::vector<double> arrived_;
    std::vector<std::vector<Arrival>> calendar_;
};

class Environment::View final : public ObservationView {
public:
    explicit View(const Environment& env) : env_(&env), round_(env.round_) {}

    Round round() const override { return round_; }
    Round horizon() const override { return env_->instance_.horizon(); }
    std::size_t num_arms() const override { return env_->instance_.num_arms(); }
    std::int64_t pull_count(std::size_t arm) const override;
    double arrived_sum(std::size_t arm) const override;
    WindowSum windowed(std::size_t arm, Delay window) const override;

private:
    void check_fresh() const;

    const Environment* env_;
    Round round_;
};

}  // namespace patient
