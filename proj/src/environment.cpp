#include "patient/environment.hpp"

#include <algorithm>
#include <string>

namespace patient {

BanditInstance::BanditInstance(std::vector<Arm> arms, Round horizon)
    : arms_(std::move(arms)), horizon_(horizon) {
    if (arms_.empty()) throw std::invalid_argument("bandit instance needs at least one arm");
    if (horizon_ < static_cast<Round>(arms_.size())) {
        throw std::invalid_argument("horizon T=" + std::to_string(horizon_) +
                                    " is smaller than the number of arms K=" +
                                    std::to_string(arms_.size()));
    }
    means_.reserve(arms_.size());
    for (const auto& a : arms_) means_.push_back(a.reward.mean());
    best_mean_ = *std::max_element(means_.begin(), means_.end());
}

std::vector<double> BanditInstance::gaps() const {
    std::vector<double> out;
    out.reserve(means_.size());
    for (double m : means_) out.push_back(best_mean_ - m);
    return out;
}

Environment::Environment(BanditInstance instance, PullSampler sampler)
    : instance_(std::move(instance)), sampler_(std::move(sampler)) {
    const auto k = instance_.num_arms();
    logs_.resize(k);
    arrived_.assign(k, 0.0);
    calendar_.resize(static_cast<std::size_t>(instance_.horizon()) + 2);
    records_.reserve(static_cast<std::size_t>(instance_.horizon()));
}

void Environment::check_arm(std::size_t arm) const {
    if (arm >= instance_.num_arms()) {
        throw std::out_of_range("arm index " + std::to_string(arm) + " out of range for K=" +
                                std::to_string(instance_.num_arms()));
    }
}

void Environment::pull(std::size_t arm, Rng& rng) {
    if (finished()) {
        throw EpisodeComplete("pull at round " + std::to_string(round_) + " past horizon " +
                              std::to_string(instance_.horizon()));
    }
    check_arm(arm);

    PullOutcome out;
    if (sampler_) {
        out = sampler_(arm, rng);
    } else {
        const Arm& a = instance_.arm(arm);
        out.reward = a.reward.sample(rng);
        out.delay = a.delay.sample(rng);
    }
    const Round horizon = instance_.horizon();
    // delay-0 conversions are first visible in the next round
    const Delay wait = std::max<Delay>(out.delay, 1);
    const Round arrival = wait > horizon - round_ ? kCensored : round_ + wait;

    records_.push_back(PullRecord{arm, round_, out.reward, out.delay, arrival});
    auto& log = logs_[arm];
    log.rounds.push_back(round_);
    log.delays.push_back(out.delay);
    log.rewards.push_back(out.reward);
    if (arrival != kCensored) {
        calendar_[static_cast<std::size_t>(arrival)].push_back(Arrival{arm, out.reward});
    }

    ++round_;
    if (round_ <= horizon) {
        auto& bucket = calendar_[static_cast<std::size_t>(round_)];
        for (const auto& a : bucket) arrived_[a.arm] += a.reward;
        bucket.clear();
        bucket.shrink_to_fit();
    }
}

Environment::View Environment::observe() const { return View(*this); }

std::int64_t Environment::pull_count_at(std::size_t arm, Round t) const {
    check_arm(arm);
    const auto& rounds = logs_[arm].rounds;
    return std::upper_bound(rounds.begin(), rounds.end(), t) - rounds.begin();
}

double Environment::pseudo_regret(Round t) const {
    if (t >= round_) t = round_ - 1;
    double total = 0.0;
    for (std::size_t i = 0; i < instance_.num_arms(); ++i) {
        total += instance_.gap(i) * static_cast<double>(pull_count_at(i, t));
    }
    return total;
}

void Environment::View::check_fresh() const {
    if (env_->round_ != round_) {
        throw std::logic_error("observation view from round " + std::to_string(round_) +
                               " used at round " + std::to_string(env_->round_));
    }
}

std::int64_t Environment::View::pull_count(std::size_t arm) const {
    check_fresh();
    env_->check_arm(arm);
    return static_cast<std::int64_t>(env_->logs_[arm].rounds.size());
}

double Environment::View::arrived_sum(std::size_t arm) const {
    check_fresh();
    env_->check_arm(arm);
    return env_->arrived_[arm];
}

WindowSum Environment::View::windowed(std::size_t arm, Delay window) const {
    check_fresh();
    env_->check_arm(arm);
    if (window < 0) throw std::invalid_argument("window must be nonnegative");
    if (window >= round_) return WindowSum{0, 0.0, true};

    const auto& log = env_->logs_[arm];
    const Round last = round_ - window;
    const auto n = static_cast<std::size_t>(
        std::upper_bound(log.rounds.begin(), log.rounds.end(), last) - log.rounds.begin());
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (log.delays[j] <= window) sum += log.rewards[j];
    }
    return WindowSum{static_cast<std::int64_t>(n), sum, false};
}

}  // namespace patient
