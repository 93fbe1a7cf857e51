#include <doctest.h>

#include <cmath>
#include <vector>

#include "patient/harness.hpp"

using namespace patient;

namespace {

BanditInstance gap_instance(Round horizon) {
    return BanditInstance({Arm{RewardLaw::bernoulli(0.7), DelayLaw::pareto_ceil(0.5)},
                           Arm{RewardLaw::bernoulli(0.5), DelayLaw::pareto_ceil(0.5)}},
                          horizon);
}

PolicySpec spec_of(PolicyKind kind) {
    PolicySpec s;
    s.kind = kind;
    if (kind == PolicyKind::ducb) s.assumed_cdf = DelayLaw::pareto_ceil(0.5);
    return s;
}

/// Always answers an arm that does not exist.
struct RogueBandit final : Policy {
    void reset(std::size_t, Round) override {}
    std::size_t select(const ObservationView& view, Rng&) override { return view.num_arms(); }
    std::string name() const override { return "rogue"; }
};

}  // namespace

TEST_CASE("default checkpoints") {
    const auto c = default_checkpoints(3000);
    CHECK(c.front() == 1);
    CHECK(c.back() == 3000);
    CHECK(c.size() <= 100);
    CHECK(c.size() > 50);
    for (std::size_t j = 1; j < c.size(); ++j) REQUIRE(c[j] > c[j - 1]);
    CHECK(default_checkpoints(1) == std::vector<Round>{1});
    CHECK(default_checkpoints(10, 1) == std::vector<Round>{10});
}

TEST_CASE("single-arm episodes have no regret") {
    const BanditInstance one({Arm{RewardLaw::bernoulli(0.3), DelayLaw::pareto_ceil(0.2)}}, 200);
    for (auto kind : {PolicyKind::patient, PolicyKind::adapt, PolicyKind::ducb, PolicyKind::ucb,
                      PolicyKind::uniform}) {
        auto p = make_policy(spec_of(kind), 1, 200);
        const auto cps = default_checkpoints(200, 10);
        const auto trace = run_episode(one, *p, 3, cps);
        for (double r : trace.regret) CHECK(r == 0.0);
        CHECK(trace.final_pulls == std::vector<std::int64_t>{200});
    }
}

TEST_CASE("traces are monotone, bounded and conserve pulls") {
    const auto inst = gap_instance(800);
    const auto cps = default_checkpoints(800, 40);
    for (auto kind : {PolicyKind::patient, PolicyKind::adapt, PolicyKind::ducb, PolicyKind::ucb,
                      PolicyKind::uniform}) {
        for (std::uint64_t seed = 1; seed <= 4; ++seed) {
            auto p = make_policy(spec_of(kind), 2, 800);
            Environment env(inst);
            const auto trace = run_episode(env, *p, seed, cps);
            REQUIRE(trace.regret.size() == cps.size());
            for (std::size_t j = 0; j < cps.size(); ++j) {
                if (j > 0) REQUIRE(trace.regret[j] >= trace.regret[j - 1]);
                REQUIRE(env.pull_count_at(0, cps[j]) + env.pull_count_at(1, cps[j]) == cps[j]);
                // recompute from the raw records
                double regret = 0.0;
                for (const auto& r : env.records()) {
                    if (r.round <= cps[j]) regret += inst.gap(r.arm);
                }
                REQUIRE(trace.regret[j] == doctest::Approx(regret));
            }
            CHECK(trace.regret.back() <= 800 * 0.2 + 1e-9);
            CHECK(trace.final_pulls[0] + trace.final_pulls[1] == 800);
            if (kind == PolicyKind::adapt) {
                CHECK(trace.diagnostics.size() == cps.size());
            } else {
                CHECK(trace.diagnostics.empty());
            }
        }
    }
}

TEST_CASE("same seed, same trace") {
    const auto inst = gap_instance(500);
    const auto cps = default_checkpoints(500);
    for (auto kind : {PolicyKind::patient, PolicyKind::adapt, PolicyKind::uniform}) {
        auto p1 = make_policy(spec_of(kind), 2, 500);
        auto p2 = make_policy(spec_of(kind), 2, 500);
        const auto a = run_episode(inst, *p1, 77, cps);
        const auto b = run_episode(inst, *p2, 77, cps);
        CHECK(a.regret == b.regret);
        CHECK(a.final_pulls == b.final_pulls);
        CHECK(a.diagnostics == b.diagnostics);
    }
}

TEST_CASE("bad arms and bad checkpoints are rejected") {
    RogueBandit rogue;
    const std::vector<Round> none;
    CHECK_THROWS_AS(run_episode(gap_instance(10), rogue, 1, none), std::runtime_error);
    auto p = make_policy(PolicySpec{}, 2, 10);
    CHECK_THROWS(run_episode(gap_instance(10), *p, 1, std::vector<Round>{0, 5}));
    CHECK_THROWS(run_episode(gap_instance(10), *p, 1, std::vector<Round>{5, 5}));
    CHECK_THROWS(run_episode(gap_instance(10), *p, 1, std::vector<Round>{11}));
    MonteCarloOptions o;
    o.runs = 0;
    CHECK_THROWS(monte_carlo(gap_instance(10), PolicySpec{}, o));
}

TEST_CASE("uniform play on a 0.2 gap costs 100 over 1000 rounds") {
    const BanditInstance inst({Arm{RewardLaw::bernoulli(0.5), DelayLaw::dirac(0)},
                               Arm{RewardLaw::bernoulli(0.3), DelayLaw::dirac(0)}},
                              1000);
    MonteCarloOptions o;
    o.runs = 500;
    o.master_seed = 11;
    o.checkpoints = {1000};
    const auto r = monte_carlo(inst, spec_of(PolicyKind::uniform), o);
    CHECK(std::abs(r.mean[0] - 100.0) <= 3.0 * r.std_error[0]);
    CHECK(r.runs == 500);
    CHECK(r.final_regret.size() == 500);
}

TEST_CASE("one run has zero standard error") {
    const auto inst = gap_instance(300);
    MonteCarloOptions o;
    o.runs = 1;
    o.master_seed = 4;
    const auto r = monte_carlo(inst, spec_of(PolicyKind::patient), o);
    auto p = make_policy(spec_of(PolicyKind::patient), 2, 300);
    const auto trace = run_episode(inst, *p, split_seed(4, 0), r.checkpoints);
    CHECK(r.mean == trace.regret);
    for (double se : r.std_error) CHECK(se == 0.0);
}

TEST_CASE("thread count does not change results") {
    const auto inst = gap_instance(600);
    for (auto kind : {PolicyKind::patient, PolicyKind::adapt, PolicyKind::uniform}) {
        MonteCarloOptions o;
        o.runs = 37;
        o.master_seed = 2024;
        o.threads = 1;
        const auto serial = monte_carlo(inst, spec_of(kind), o);
        o.threads = 4;
        const auto parallel = monte_carlo(inst, spec_of(kind), o);
        CHECK(serial.mean == parallel.mean);
        CHECK(serial.std_error == parallel.std_error);
        CHECK(serial.final_regret == parallel.final_regret);
    }
}

TEST_CASE("runs are bound to their index, not to the schedule") {
    const auto inst = gap_instance(300);
    MonteCarloOptions o;
    o.runs = 12;
    o.master_seed = 9;
    const auto full = monte_carlo(inst, spec_of(PolicyKind::uniform), o);
    o.runs = 6;
    const auto half = monte_carlo(inst, spec_of(PolicyKind::uniform), o);
    for (std::size_t i = 0; i < 6; ++i) CHECK(full.final_regret[i] == half.final_regret[i]);
}

TEST_CASE("doubling the runs shrinks the standard error by about sqrt(2)") {
    const BanditInstance inst({Arm{RewardLaw::bernoulli(0.5), DelayLaw::dirac(0)},
                               Arm{RewardLaw::bernoulli(0.3), DelayLaw::dirac(0)}},
                              1000);
    MonteCarloOptions o;
    o.master_seed = 5;
    o.checkpoints = {1000};
    o.runs = 400;
    const auto small = monte_carlo(inst, spec_of(PolicyKind::uniform), o);
    o.runs = 800;
    o.master_seed = 6;
    const auto large = monte_carlo(inst, spec_of(PolicyKind::uniform), o);
    const double ratio = small.std_error[0] / large.std_error[0];
    CHECK(ratio >= 1.2);
    CHECK(ratio <= 1.7);
}
