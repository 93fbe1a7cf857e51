#include "patient/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace patient {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool is_probability(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

}  // namespace

RewardLaw RewardLaw::bernoulli(double mu) {
    if (!is_probability(mu)) {
        throw std::invalid_argument("bernoulli: mean must lie in [0, 1], got " + std::to_string(mu));
    }
    return RewardLaw(Bernoulli{mu});
}

RewardLaw RewardLaw::point_mass(double value) {
    if (!is_probability(value)) {
        throw std::invalid_argument("point: value must lie in [0, 1], got " + std::to_string(value));
    }
    return RewardLaw(PointMass{value});
}

double RewardLaw::mean() const {
    return std::visit(overloaded{[](const Bernoulli& b) { return b.mu; },
                                 [](const PointMass& p) { return p.value; }},
                      kind_);
}

double RewardLaw::sample(Rng& rng) const {
    const double u = uniform01(rng);
    return std::visit(overloaded{[u](const Bernoulli& b) { return u < b.mu ? 1.0 : 0.0; },
                                 [](const PointMass& p) { return p.value; }},
                      kind_);
}

bool operator==(const RewardLaw& a, const RewardLaw& b) {
    if (a.kind_.index() != b.kind_.index()) return false;
    return a.mean() == b.mean();
}

DelayLaw DelayLaw::dirac(Delay d) {
    if (d < 0) throw std::invalid_argument("dirac: delay must be nonnegative");
    return DelayLaw(Dirac{d});
}

DelayLaw DelayLaw::pareto_ceil(double alpha) {
    if (!std::isfinite(alpha) || alpha <= 0.0) {
        throw std::invalid_argument("pareto: tail index must be positive, got " + std::to_string(alpha));
    }
    return DelayLaw(ParetoCeil{alpha});
}

DelayLaw DelayLaw::two_point(double p, Delay d0, Delay d1) {
    if (!is_probability(p)) throw std::invalid_argument("twopoint: p must lie in [0, 1]");
    if (d0 < 0 || d1 < 0) throw std::invalid_argument("twopoint: delays must be nonnegative");
    return DelayLaw(TwoPointMass{p, d0, d1});
}

DelayLaw DelayLaw::geometric(double q) {
    if (!is_probability(q) || q == 0.0) throw std::invalid_argument("geometric: q must lie in (0, 1]");
    return DelayLaw(Geometric{q});
}

double DelayLaw::tail(Delay m) const {
    if (m < 0) return 1.0;
    return std::visit(
        overloaded{
            [m](const Dirac& d) { return d.d > m ? 1.0 : 0.0; },
            [m](const ParetoCeil& p) {
                return m == 0 ? 1.0 : std::pow(static_cast<double>(m), -p.alpha);
            },
            [m](const TwoPointMass& t) {
                return (t.d0 > m ? 1.0 - t.p : 0.0) + (t.d1 > m ? t.p : 0.0);
            },
            [m](const Geometric& g) {
                if (g.q == 1.0) return 0.0;
                // (1 - q)^(m + 1) via exp/log1p to stay accurate for small q
                return std::exp(static_cast<double>(m + 1) * std::log1p(-g.q));
            }},
        kind_);
}

double DelayLaw::cdf(Delay m) const {
    if (m < 0) return 0.0;
    return std::visit(
        overloaded{
            [m](const Dirac& d) { return d.d <= m ? 1.0 : 0.0; },
            [m](const ParetoCeil& p) {
                return m == 0 ? 0.0 : 1.0 - std::pow(static_cast<double>(m), -p.alpha);
            },
            [m](const TwoPointMass& t) {
                return (t.d0 <= m ? 1.0 - t.p : 0.0) + (t.d1 <= m ? t.p : 0.0);
            },
            [m](const Geometric& g) {
                if (g.q == 1.0) return 1.0;
                return -std::expm1(static_cast<double>(m + 1) * std::log1p(-g.q));
            }},
        kind_);
}

Delay DelayLaw::sample(Rng& rng) const {
    const double u = uniform_open_closed(rng);
    auto clamp_to_delay = [](double x) {
        if (!(x < static_cast<double>(kMaxDelay))) return kMaxDelay;
        return static_cast<Delay>(x);
    };
    return std::visit(
        overloaded{
            [](const Dirac& d) { return d.d; },
            [&](const ParetoCeil& p) { return clamp_to_delay(std::ceil(std::pow(u, -1.0 / p.alpha))); },
            [u](const TwoPointMass& t) { return u <= t.p ? t.d1 : t.d0; },
            [&](const Geometric& g) {
                if (g.q == 1.0) return Delay{0};
                return clamp_to_delay(std::floor(std::log(u) / std::log1p(-g.q)));
            }},
        kind_);
}

bool operator==(const DelayLaw& a, const DelayLaw& b) {
    if (a.kind_.index() != b.kind_.index()) return false;
    return std::visit(
        overloaded{
            [&](const Dirac& d) { return d.d == std::get<Dirac>(b.kind_).d; },
            [&](const ParetoCeil& p) { return p.alpha == std::get<ParetoCeil>(b.kind_).alpha; },
            [&](const TwoPointMass& t) {
                const auto& o = std::get<TwoPointMass>(b.kind_);
                return t.p == o.p && t.d0 == o.d0 && t.d1 == o.d1;
            },
            [&](const Geometric& g) { return g.q == std::get<Geometric>(b.kind_).q; }},
        a.kind_);
}

double assumption1_margin(const DelayLaw& law, double alpha, Delay m_max) {
    if (m_max < 1) throw std::invalid_argument("assumption1_margin: m_max must be >= 1");
    double worst = std::numeric_limits<double>::infinity();
    for (Delay m = 1; m <= m_max; ++m) {
        worst = std::min(worst, std::pow(static_cast<double>(m), -alpha) - law.tail(m));
    }
    return worst;
}

}  // namespace patient
