#pragma once

#include <cstddef>

#include "patient/distributions.hpp"
#include "patient/environment.hpp"

namespace patient {

/// Two-armed instances that no learner can tell apart before the horizon.
///
/// Arm 0 is Bernoulli(1/2) with no delay in both. Arm 1 is Bernoulli(1/2 - q)
/// with no delay in problem A, and Bernoulli(1/2 + q) whose conversion is
/// pushed to the horizon with probability p in problem B, where p = T^-alpha
/// and q = p / (4 - 2p). Arm 1's observable mean is 1/2 - q in both.
struct LowerBoundPair {
    double alpha;
    Round horizon;
    double p;
    double q;
    BanditInstance problem_a;
    BanditInstance problem_b;
};

LowerBoundPair make_lower_bound_pair(Round horizon, double alpha);

/// tau_arm(u) * mu_arm, the expected observation of a pull after waiting u.
double observable_mean(const BanditInstance& problem, std::size_t arm, Delay u);

enum class Problem { a, b };

/// Sampler for one side of the pair. Run with identically seeded streams, the
/// two sides produce the same observation stream up to the horizon: arm 1's
/// conversion is visible iff a shared uniform falls below 1/2 - q. Each side
/// keeps its own marginal reward and delay laws.
PullSampler coupled_sampler(const LowerBoundPair& pair, Problem which);

}  // namespace patient
