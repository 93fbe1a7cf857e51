#include "patient/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "patient/format.hpp"

namespace patient {

namespace {

void require_shape(std::size_t expected_k, Round expected_t, std::size_t k, Round t,
                   const std::string& who) {
    if (expected_k != k || expected_t != t) {
        throw std::invalid_argument(who + " configured for K=" + std::to_string(expected_k) +
                                    ", T=" + std::to_string(expected_t) + " but reset with K=" +
                                    std::to_string(k) + ", T=" + std::to_string(t));
    }
}

/// Lowest-index arm with fewer than `times` pulls, if any.
std::optional<std::size_t> initialization_arm(const ObservationView& view, std::int64_t times) {
    std::optional<std::size_t> best;
    std::int64_t fewest = times;
    for (std::size_t i = 0; i < view.num_arms(); ++i) {
        const auto n = view.pull_count(i);
        if (n < fewest) {
            fewest = n;
            best = i;
        }
    }
    return best;
}

}  // namespace

std::size_t argmax_lowest(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("argmax over no arms");
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[best]) best = i;
    }
    return best;
}

// PatientBandits

PatientBandits::PatientBandits(UcbParams params, bool with_bias)
    : params_(params), with_bias_(with_bias) {}

void PatientBandits::reset(std::size_t num_arms, Round horizon) {
    require_shape(params_.num_arms(), params_.horizon(), num_arms, horizon, "patient");
    indices_.assign(num_arms, 0.0);
}

std::size_t PatientBandits::select(const ObservationView& view, Rng&) {
    if (auto arm = initialization_arm(view, 1)) return *arm;

    const Round t = view.round();
    const double alpha = params_.alpha_at(t);
    indices_.resize(view.num_arms());
    for (std::size_t i = 0; i < view.num_arms(); ++i) {
        const auto n = view.pull_count(i);
        double index = mu_hat(view.arrived_sum(i), n) + deviation_term(n, params_.delta());
        if (with_bias_) index += bias_term(n, alpha);
        indices_[i] = index;
    }
    return argmax_lowest(indices_);
}

std::string PatientBandits::name() const {
    std::string out = "patient(";
    out += params_.is_schedule() ? std::string("alpha=schedule") : "alpha=" + format_number(params_.alpha());
    if (!with_bias_) out += ";bias=off";
    return out + ")";
}

// AdaptPatientBandits

AdaptPatientBandits::AdaptPatientBandits(AdaptParams params) : params_(params) {
    params_.validate();
    delta_ = default_delta(params_.num_arms, params_.horizon);
}

void AdaptPatientBandits::reset(std::size_t num_arms, Round horizon) {
    require_shape(params_.num_arms, params_.horizon, num_arms, horizon, "adapt");
    alpha_bar_ = 0.5;
    indices_.assign(num_arms, 0.0);
}

std::size_t AdaptPatientBandits::select(const ObservationView& view, Rng&) {
    if (auto arm = initialization_arm(view, 2)) return *arm;

    const std::size_t k = view.num_arms();
    std::size_t leader = 0;
    for (std::size_t i = 1; i < k; ++i) {
        if (view.pull_count(i) > view.pull_count(leader)) leader = i;
    }
    const auto leader_pulls = view.pull_count(leader);
    const WindowPair windows = window_pair(leader_pulls, params_);
    const WindowSum wide = view.windowed(leader, windows.long_window);
    const WindowSum narrow = view.windowed(leader, windows.short_window);

    double diff = 0.0;
    if (wide.count > 0 && narrow.count > 0) {
        diff = wide.sum / static_cast<double>(wide.count) -
               narrow.sum / static_cast<double>(narrow.count);
    }
    alpha_bar_ = alpha_bar(alpha_hat(diff, leader_pulls), leader_pulls, params_, delta_);

    indices_.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        const auto n = view.pull_count(i);
        indices_[i] = mu_hat(view.arrived_sum(i), n) + deviation_term(n, delta_) +
                      bias_term(n, alpha_bar_);
    }
    return argmax_lowest(indices_);
}

std::string AdaptPatientBandits::name() const {
    return "adapt(c=" + format_number(params_.c) + ";alpha_floor=" +
           format_number(params_.alpha_floor) + ";mu_floor=" + format_number(params_.mu_floor) + ")";
}

// DelayedUcb

DelayedUcb::DelayedUcb(Delay window, DelayLaw assumed_cdf)
    : window_(window), assumed_cdf_(assumed_cdf), tau_(assumed_cdf.cdf(window)) {
    if (window < 1) throw std::invalid_argument("ducb: window m must be at least 1");
    if (!(tau_ > 0.0)) {
        throw std::invalid_argument("ducb: assumed CDF is zero at m=" + std::to_string(window));
    }
}

void DelayedUcb::reset(std::size_t num_arms, Round) { indices_.assign(num_arms, 0.0); }

std::size_t DelayedUcb::select(const ObservationView& view, Rng&) {
    const Round t = view.round();
    const auto k = static_cast<Round>(view.num_arms());
    if (t < window_ + k) return static_cast<std::size_t>(t % k);

    const double log_t = std::log(static_cast<double>(t));
    indices_.resize(view.num_arms());
    for (std::size_t i = 0; i < view.num_arms(); ++i) {
        const WindowSum w = view.windowed(i, window_);
        if (w.count == 0) {
            indices_[i] = std::numeric_limits<double>::infinity();
            continue;
        }
        const double scaled = tau_ * static_cast<double>(w.count);
        indices_[i] = w.sum / scaled + std::sqrt(2.0 * log_t / scaled);
    }
    return argmax_lowest(indices_);
}

std::string DelayedUcb::name() const { return "ducb(m=" + std::to_string(window_) + ")"; }

// VanillaUcb

VanillaUcb::VanillaUcb(std::size_t num_arms, Round horizon)
    : num_arms_(num_arms), horizon_(horizon), delta_(default_delta(num_arms, horizon)) {}

void VanillaUcb::reset(std::size_t num_arms, Round horizon) {
    require_shape(num_arms_, horizon_, num_arms, horizon, "ucb");
    indices_.assign(num_arms, 0.0);
}

std::size_t VanillaUcb::select(const ObservationView& view, Rng&) {
    if (auto arm = initialization_arm(view, 1)) return *arm;
    indices_.resize(view.num_arms());
    for (std::size_t i = 0; i < view.num_arms(); ++i) {
        const auto n = view.pull_count(i);
        indices_[i] = mu_hat(view.arrived_sum(i), n) + deviation_term(n, delta_);
    }
    return argmax_lowest(indices_);
}

// UniformRandom

std::size_t UniformRandom::select(const ObservationView& view, Rng& rng) {
    const auto k = view.num_arms();
    const auto arm = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(k));
    return std::min(arm, k - 1);
}

// factory

std::string_view policy_tag(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::patient: return "patient";
        case PolicyKind::adapt: return "adapt";
        case PolicyKind::ducb: return "ducb";
        case PolicyKind::ucb: return "ucb";
        case PolicyKind::uniform: return "uniform";
    }
    return "?";
}

PolicyKind parse_policy_tag(std::string_view tag) {
    for (auto kind : {PolicyKind::patient, PolicyKind::adapt, PolicyKind::ducb, PolicyKind::ucb,
                      PolicyKind::uniform}) {
        if (policy_tag(kind) == tag) return kind;
    }
    throw std::invalid_argument("unknown policy tag '" + std::string(tag) +
                                "' (expected patient|adapt|ducb|ucb|uniform)");
}

std::unique_ptr<Policy> make_policy(const PolicySpec& spec, std::size_t num_arms, Round horizon) {
    std::unique_ptr<Policy> policy;
    switch (spec.kind) {
        case PolicyKind::patient: {
            auto params = spec.alpha_schedule ? UcbParams::schedule(num_arms, horizon)
                                              : UcbParams::fixed(spec.alpha, num_arms, horizon);
            policy = std::make_unique<PatientBandits>(params, spec.bias);
            break;
        }
        case PolicyKind::adapt:
            policy = std::make_unique<AdaptPatientBandits>(
                AdaptParams{spec.c, spec.alpha_floor, spec.mu_floor, num_arms, horizon});
            break;
        case PolicyKind::ducb:
            if (!spec.assumed_cdf) throw std::invalid_argument("ducb: missing assumed delay CDF");
            policy = std::make_unique<DelayedUcb>(spec.window, *spec.assumed_cdf);
            break;
        case PolicyKind::ucb:
            policy = std::make_unique<VanillaUcb>(num_arms, horizon);
            break;
        case PolicyKind::uniform:
            policy = std::make_unique<UniformRandom>();
            break;
    }
    policy->reset(num_arms, horizon);
    return policy;
}

}  // namespace patient
