#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "patient/distributions.hpp"
#include "patient/environment.hpp"
#include "patient/estimators.hpp"
#include "patient/random.hpp"

namespace patient {

/// A learner. select() may consult only the view and its own state.
class Policy {
public:
    virtual ~Policy() = default;

    /// Clears all per-episode state. Throws if the policy was configured for a
    /// different (K, T).
    virtual void reset(std::size_t num_arms, Round horizon) = 0;
    virtual std::size_t select(const ObservationView& view, Rng& rng) = 0;
    virtual std::string name() const = 0;
    /// Per-round diagnostic value, if the policy has one (the tail-index lower
    /// bound for the adaptive policy).
    virtual std::optional<double> diagnostic() const { return std::nullopt; }
};

/// First maximum wins.
std::size_t argmax_lowest(std::span<const double> values);

/// Delay-corrected UCB with a fixed or scheduled tail exponent. With
/// `with_bias == false` the 2 n^-(alpha ^ 1/2) term is dropped, which makes it
/// the plain Hoeffding UCB.
class PatientBandits final : public Policy {
public:
    explicit PatientBandits(UcbParams params, bool with_bias = true);

    void reset(std::size_t num_arms, Round horizon) override;
    std::size_t select(const ObservationView& view, Rng& rng) override;
    std::string name() const override;

    const UcbParams& params() const { return params_; }
    std::span<const double> indices() const { return indices_; }

private:
    UcbParams params_;
    bool with_bias_;
    std::vector<double> indices_;
};

/// UCB whose tail exponent is re-estimated every round from the most pulled
/// arm, after pulling every arm twice.
class AdaptPatientBandits final : public Policy {
public:
    explicit AdaptPatientBandits(AdaptParams params);

    void reset(std::size_t num_arms, Round horizon) override;
    std::size_t select(const ObservationView& view, Rng& rng) override;
    std::string name() const override;
    std::optional<double> diagnostic() const override { return alpha_bar_; }

    const AdaptParams& params() const { return params_; }
    double current_alpha_bar() const { return alpha_bar_; }

private:
    AdaptParams params_;
    double delta_;
    double alpha_bar_ = 0.5;
    std::vector<double> indices_;
};

/// Censored UCB baseline that waits `window` rounds per observation and
/// rescales by an assumed delay CDF. Round-robin until round window + K.
class DelayedUcb final : public Policy {
public:
    DelayedUcb(Delay window, DelayLaw assumed_cdf);

    void reset(std::size_t num_arms, Round horizon) override;
    std::size_t select(const ObservationView& view, Rng& rng) override;
    std::string name() const override;

    Delay window() const { return window_; }
    double assumed_tau() const { return tau_; }
    std::span<const double> indices() const { return indices_; }

private:
    Delay window_;
    DelayLaw assumed_cdf_;
    double tau_;
    std::vector<double> indices_;
};

/// Hoeffding UCB on the censored means, ignoring delays.
class VanillaUcb final : public Policy {
public:
    VanillaUcb(std::size_t num_arms, Round horizon);

    void reset(std::size_t num_arms, Round horizon) override;
    std::size_t select(const ObservationView& view, Rng& rng) override;
    std::string name() const override { return "ucb"; }
    std::span<const double> indices() const { return indices_; }

private:
    std::size_t num_arms_;
    Round horizon_;
    double delta_;
    std::vector<double> indices_;
};

class UniformRandom final : public Policy {
public:
    void reset(std::size_t, Round) override {}
    std::size_t select(const ObservationView& view, Rng& rng) override;
    std::string name() const override { return "uniform"; }
};

enum class PolicyKind { patient, adapt, ducb, ucb, uniform };

std::string_view policy_tag(PolicyKind kind);
/// Throws std::invalid_argument on an unknown tag.
PolicyKind parse_policy_tag(std::string_view tag);

/// Declarative policy description, resolved against (K, T) by make_policy.
struct PolicySpec {
    PolicyKind kind = PolicyKind::patient;
    // patient
    double alpha = 0.5;
    bool alpha_schedule = false;
    bool bias = true;
    // adapt
    double c = 1.0;
    double alpha_floor = 0.2;
    double mu_floor = 0.5;
    // ducb
    Delay window = 50;
    std::optional<DelayLaw> assumed_cdf;

    friend bool operator==(const PolicySpec&, const PolicySpec&) = default;
};

std::unique_ptr<Policy> make_policy(const PolicySpec& spec, std::size_t num_arms, Round horizon);

}  // namespace patient
