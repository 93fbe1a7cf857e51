#include <doctest.h>

#include <cmath>
#include <vector>

#include "patient/harness.hpp"
#include "patient/policies.hpp"
#include "patient/theory.hpp"

using namespace patient;

TEST_CASE("pair parameters") {
    const auto small = make_lower_bound_pair(16, 0.5);
    CHECK(small.p == 0.25);
    CHECK(small.q == doctest::Approx(1.0 / 14.0).epsilon(1e-14));
    CHECK((0.5 + small.q) * (1.0 - small.p) == doctest::Approx(3.0 / 7.0).epsilon(1e-14));

    const auto hundred = make_lower_bound_pair(100, 1.0);
    CHECK(hundred.p == doctest::Approx(0.01).epsilon(1e-14));
    CHECK(hundred.q == doctest::Approx(0.002512562814070352).epsilon(1e-12));

    const auto flat = make_lower_bound_pair(1000, 50.0);
    CHECK(flat.p < 1e-100);
    CHECK(flat.problem_a.mean(1) == doctest::Approx(flat.problem_b.mean(1)));

    CHECK_THROWS(make_lower_bound_pair(1, 0.5));
    CHECK_THROWS(make_lower_bound_pair(10, 0.0));
}

TEST_CASE("pair laws") {
    const auto pair = make_lower_bound_pair(50, 0.4);
    for (const auto* problem : {&pair.problem_a, &pair.problem_b}) {
        CHECK(problem->arm(0).reward == RewardLaw::bernoulli(0.5));
        CHECK(problem->arm(0).delay == DelayLaw::dirac(0));
    }
    CHECK(pair.problem_a.arm(1).reward == RewardLaw::bernoulli(0.5 - pair.q));
    CHECK(pair.problem_a.arm(1).delay == DelayLaw::dirac(0));
    CHECK(pair.problem_b.arm(1).reward == RewardLaw::bernoulli(0.5 + pair.q));
    CHECK(pair.problem_b.arm(1).delay == DelayLaw::two_point(pair.p, 0, 50));
    CHECK(assumption1_margin(pair.problem_b.arm(1).delay, 0.4, 49) >= 0.0);
}

TEST_CASE("identity and q >= p/4 over a parameter sweep") {
    for (Round t : {2, 3, 10, 100, 1000, 100000}) {
        for (double alpha : {0.01, 0.1, 0.3, 0.5, 1.0, 2.0, 10.0}) {
            const auto pair = make_lower_bound_pair(t, alpha);
            REQUIRE(std::abs((0.5 + pair.q) * (1.0 - pair.p) - (0.5 - pair.q)) <= 1e-12);
            REQUIRE(pair.q >= pair.p / 4.0);
            REQUIRE(assumption1_margin(pair.problem_b.arm(1).delay, alpha, t - 1) >= 0.0);
        }
    }
    for (double p = 1e-6; p <= 1.0; p += 1e-3) REQUIRE(p / (4.0 - 2.0 * p) >= p / 4.0);
}

TEST_CASE("observable means agree strictly before the horizon") {
    const auto pair = make_lower_bound_pair(200, 0.3);
    for (Delay u = 1; u < 200; ++u) {
        REQUIRE(std::abs(observable_mean(pair.problem_a, 1, u) - observable_mean(pair.problem_b, 1, u)) <=
                1e-12);
        REQUIRE(observable_mean(pair.problem_a, 1, u) == doctest::Approx(0.5 - pair.q));
    }
    CHECK(observable_mean(pair.problem_b, 1, 200) == doctest::Approx(0.5 + pair.q));
    CHECK(observable_mean(pair.problem_b, 1, 500) == doctest::Approx(0.5 + pair.q));
    CHECK_THROWS(observable_mean(pair.problem_a, 1, 0));
}

TEST_CASE("coupled samplers keep each side's marginals") {
    const auto pair = make_lower_bound_pair(10, 0.5);  // p ~ 0.316, q ~ 0.0933
    constexpr int n = 400'000;
    const double tol = 4.0 * 0.5 / std::sqrt(static_cast<double>(n));
    for (Problem which : {Problem::a, Problem::b}) {
        const auto sampler = coupled_sampler(pair, which);
        const BanditInstance& inst = which == Problem::a ? pair.problem_a : pair.problem_b;
        const auto& arm = inst.arm(1);
        Rng rng(17);
        double reward = 0.0, late = 0.0, joint = 0.0;
        for (int j = 0; j < n; ++j) {
            const auto out = sampler(1, rng);
            reward += out.reward;
            const bool is_late = out.delay > 0;
            late += is_late ? 1.0 : 0.0;
            joint += is_late ? out.reward : 0.0;
        }
        const double p_late = 1.0 - arm.delay.cdf(0);
        CHECK(std::abs(reward / n - arm.reward.mean()) <= tol);
        CHECK(std::abs(late / n - p_late) <= tol);
        CHECK(std::abs(joint / n - p_late * arm.reward.mean()) <= tol);
    }
}

TEST_CASE("coupled environments produce identical pull sequences") {
    const auto pair = make_lower_bound_pair(300, 0.5);
    const auto checkpoints = default_checkpoints(300, 20);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        for (PolicyKind kind : {PolicyKind::patient, PolicyKind::ucb, PolicyKind::adapt}) {
            PolicySpec spec;
            spec.kind = kind;
            auto pa = make_policy(spec, 2, 300);
            auto pb = make_policy(spec, 2, 300);
            Environment ea(pair.problem_a, coupled_sampler(pair, Problem::a));
            Environment eb(pair.problem_b, coupled_sampler(pair, Problem::b));
            (void)run_episode(ea, *pa, seed, checkpoints);
            (void)run_episode(eb, *pb, seed, checkpoints);
            REQUIRE(ea.records().size() == eb.records().size());
            for (std::size_t j = 0; j < ea.records().size(); ++j) {
                REQUIRE(ea.records()[j].arm == eb.records()[j].arm);
            }
        }
    }
}
