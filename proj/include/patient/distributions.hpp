#pragma once

#include <cstdint>
#include <variant>

#include "patient/random.hpp"

namespace patient {

using Delay = std::int64_t;

/// Largest delay a sampler returns. Heavy Pareto draws beyond it are clamped;
/// any horizon this library simulates is many orders of magnitude smaller.
inline constexpr Delay kMaxDelay = Delay{1} << 62;

struct Bernoulli {
    double mu;
};

struct PointMass {
    double value;
};

/// Reward distribution with support in [0, 1].
class RewardLaw {
public:
    using Kind = std::variant<Bernoulli, PointMass>;

    static RewardLaw bernoulli(double mu);
    static RewardLaw point_mass(double value);

    double mean() const;
    /// Consumes exactly one draw from `rng`.
    double sample(Rng& rng) const;

    const Kind& kind() const { return kind_; }

    friend bool operator==(const RewardLaw& a, const RewardLaw& b);

private:
    explicit RewardLaw(Kind kind) : kind_(kind) {}
    Kind kind_;
};

struct Dirac {
    Delay d;
};

/// D = ceil(Z) with Z Pareto type I, scale 1, tail index alpha, so that
/// P(D > m) = m^-alpha exactly for every integer m >= 1.
struct ParetoCeil {
    double alpha;
};

/// (1 - p) delta_{d0} + p delta_{d1}.
struct TwoPointMass {
    double p;
    Delay d0;
    Delay d1;
};

/// Number of failures before the first success, success probability q.
struct Geometric {
    double q;
};

/// Delay distribution on the nonnegative integers with a closed-form CDF.
class DelayLaw {
public:
    using Kind = std::variant<Dirac, ParetoCeil, TwoPointMass, Geometric>;

    static DelayLaw dirac(Delay d);
    static DelayLaw pareto_ceil(double alpha);
    static DelayLaw two_point(double p, Delay d0, Delay d1);
    static DelayLaw geometric(double q);

    /// P(D <= m). Zero for m < 0.
    double cdf(Delay m) const;
    /// P(D > m), evaluated directly rather than as 1 - cdf(m).
    double tail(Delay m) const;
    /// Consumes exactly one draw from `rng`.
    Delay sample(Rng& rng) const;

    const Kind& kind() const { return kind_; }

    friend bool operator==(const DelayLaw& a, const DelayLaw& b);

private:
    explicit DelayLaw(Kind kind) : kind_(kind) {}
    Kind kind_;
};

inline double sample_reward(const RewardLaw& law, Rng& rng) { return law.sample(rng); }
inline Delay sample_delay(const DelayLaw& law, Rng& rng) { return law.sample(rng); }
inline double delay_cdf(const DelayLaw& law, Delay m) { return law.cdf(m); }

/// min over 1 <= m <= m_max of m^-alpha - P(D > m). Nonnegative iff the
/// polynomial tail bound with exponent alpha holds on [1, m_max].
double assumption1_margin(const DelayLaw& law, double alpha, Delay m_max);

}  // namespace patient
