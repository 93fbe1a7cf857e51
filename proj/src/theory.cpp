#include "patient/theory.hpp"

#include <cmath>
#include <stdexcept>

namespace patient {

namespace {

BanditInstance two_arm(RewardLaw second_reward, DelayLaw second_delay, Round horizon) {
    return BanditInstance({Arm{RewardLaw::bernoulli(0.5), DelayLaw::dirac(0)},
                           Arm{second_reward, second_delay}},
                          horizon);
}

}  // namespace

LowerBoundPair make_lower_bound_pair(Round horizon, double alpha) {
    if (horizon < 2) throw std::invalid_argument("lower bound pair needs T >= 2");
    if (!(alpha > 0.0)) throw std::invalid_argument("lower bound pair needs alpha > 0");

    const double p = std::pow(static_cast<double>(horizon), -alpha);
    const double q = p / (4.0 - 2.0 * p);
    return LowerBoundPair{
        alpha,
        horizon,
        p,
        q,
        two_arm(RewardLaw::bernoulli(0.5 - q), DelayLaw::dirac(0), horizon),
        two_arm(RewardLaw::bernoulli(0.5 + q), DelayLaw::two_point(p, 0, horizon), horizon),
    };
}

double observable_mean(const BanditInstance& problem, std::size_t arm, Delay u) {
    if (u < 1) throw std::invalid_argument("observable_mean: waiting time must be >= 1");
    const Arm& a = problem.arm(arm);
    return a.delay.cdf(u) * a.reward.mean();
}

PullSampler coupled_sampler(const LowerBoundPair& pair, Problem which) {
    const double visible = 0.5 - pair.q;
    const double p = pair.p;
    const Delay late = pair.horizon;
    // P(C = 0, D = 0 | U >= 1/2 - q) in problem B
    const double quiet_share = (0.5 - pair.q) * (1.0 - p) / (0.5 + pair.q);
    const RewardLaw fair = RewardLaw::bernoulli(0.5);
    const DelayLaw none = DelayLaw::dirac(0);

    return [=](std::size_t arm, Rng& rng) -> PullOutcome {
        if (arm == 0) {
            const double reward = fair.sample(rng);
            return PullOutcome{reward, none.sample(rng)};
        }
        const double u = uniform01(rng);
        (void)uniform01(rng);  // keep two draws per pull, as the default sampler does
        if (u < visible) return PullOutcome{1.0, 0};
        if (which == Problem::a) return PullOutcome{0.0, 0};
        const double v = (u - visible) / (1.0 - visible);
        if (v < p) return PullOutcome{1.0, late};
        if (v < p + quiet_share) return PullOutcome{0.0, 0};
        return PullOutcome{0.0, late};
    };
}

}  // namespace patient
