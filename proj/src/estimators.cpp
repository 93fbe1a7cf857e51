#include "patient/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace patient {

double default_delta(std::size_t num_arms, Round horizon) {
    const double t = static_cast<double>(horizon);
    return 1.0 / (static_cast<double>(num_arms) * t * t * t);
}

UcbParams::UcbParams(double alpha, bool schedule, std::size_t num_arms, Round horizon)
    : alpha_(alpha),
      schedule_(schedule),
      num_arms_(num_arms),
      horizon_(horizon),
      delta_(default_delta(num_arms, horizon)) {
    if (num_arms == 0) throw std::invalid_argument("UcbParams: K must be positive");
    if (horizon < 1) throw std::invalid_argument("UcbParams: T must be positive");
}

UcbParams UcbParams::fixed(double alpha, std::size_t num_arms, Round horizon) {
    if (!(alpha > 0.0)) {
        throw std::invalid_argument("UcbParams: alpha must be positive, got " + std::to_string(alpha));
    }
    return UcbParams(alpha, false, num_arms, horizon);
}

UcbParams UcbParams::schedule(std::size_t num_arms, Round horizon) {
    return UcbParams(0.0, true, num_arms, horizon);
}

UcbParams UcbParams::with_delta(double delta) const {
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("UcbParams: delta must lie in (0, 1), got " + std::to_string(delta));
    }
    UcbParams copy = *this;
    copy.delta_ = delta;
    return copy;
}

double UcbParams::alpha_at(Round t) const {
    if (!schedule_) return alpha_;
    if (t <= 1) return std::numeric_limits<double>::infinity();
    const double lt = std::log(static_cast<double>(t));
    return std::max(std::log(lt), 1e-6) / lt;
}

void AdaptParams::validate() const {
    if (!(c > 0.0 && c <= 1.0)) throw std::invalid_argument("AdaptParams: c must lie in (0, 1]");
    if (!(alpha_floor > 0.0)) throw std::invalid_argument("AdaptParams: alpha_floor must be positive");
    if (!(mu_floor > 0.0)) throw std::invalid_argument("AdaptParams: mu_floor must be positive");
    if (num_arms == 0) throw std::invalid_argument("AdaptParams: K must be positive");
    if (horizon < 1) throw std::invalid_argument("AdaptParams: T must be positive");
}

double mu_hat(double sum_arrived, std::int64_t pulls) {
    if (pulls <= 0) throw std::domain_error("mu_hat: arm has not been pulled");
    return sum_arrived / static_cast<double>(pulls);
}

double deviation_term(std::int64_t pulls, double delta) {
    return std::sqrt(2.0 * std::log(2.0 / delta) / static_cast<double>(pulls));
}

double bias_term(std::int64_t pulls, double alpha) {
    return 2.0 * std::pow(static_cast<double>(pulls), -std::min(alpha, 0.5));
}

double confidence_radius(std::int64_t pulls, double alpha, double delta) {
    if (pulls <= 0) throw std::domain_error("confidence_radius: pulls must be positive");
    return deviation_term(pulls, delta) + bias_term(pulls, alpha);
}

double confidence_radius(std::int64_t pulls, const UcbParams& params, Round t) {
    return confidence_radius(pulls, params.alpha_at(t), params.delta());
}

BiasCheck bias_bound_oracle(std::span<const Round> pull_rounds, Round t, const DelayLaw& law,
                            double mu, double alpha) {
    if (pull_rounds.empty()) throw std::invalid_argument("bias_bound_oracle: empty pull schedule");
    double missing = 0.0;
    for (Round s : pull_rounds) {
        if (s < 1 || s > t) throw std::invalid_argument("bias_bound_oracle: pull round outside [1, t]");
        missing += law.tail(t - s);
    }
    const auto n = static_cast<std::int64_t>(pull_rounds.size());
    return BiasCheck{mu * missing / static_cast<double>(n), bias_term(n, alpha)};
}

double alpha_hat(double diff, std::int64_t pulls_of_leader) {
    if (pulls_of_leader < 2) {
        throw std::domain_error("alpha_hat: leader needs at least 2 pulls, has " +
                                std::to_string(pulls_of_leader));
    }
    if (!(diff > 0.0)) return 0.5;
    return std::min(-std::log(diff) / std::log(static_cast<double>(pulls_of_leader)), 0.5);
}

double alpha_bar(double ahat, std::int64_t pulls_of_leader, const AdaptParams& params,
                 double delta) {
    if (pulls_of_leader < 2) throw std::domain_error("alpha_bar: leader needs at least 2 pulls");
    const double width = 16.0 * std::sqrt(std::log(2.0 / delta)) / (params.c * params.mu_floor);
    const double correction = std::log(width) / std::log(static_cast<double>(pulls_of_leader));
    return std::max(ahat - correction, 0.0);
}

WindowPair window_pair(std::int64_t pulls_of_leader, const AdaptParams& params) {
    if (pulls_of_leader < 2) throw std::domain_error("window_pair: leader needs at least 2 pulls");
    const Delay long_window = pulls_of_leader / 2;
    const double factor = std::pow(params.c / 2.0, 1.0 / params.alpha_floor);
    const auto scaled = static_cast<Delay>(std::floor(factor * static_cast<double>(long_window)));
    return WindowPair{long_window, std::clamp<Delay>(scaled, 1, long_window)};
}

}  // namespace patient
