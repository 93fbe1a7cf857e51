#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "patient/distributions.hpp"
#include "patient/environment.hpp"

namespace patient {

/// (K T^3)^-1, the confidence level the UCB policies use unless told otherwise.
double default_delta(std::size_t num_arms, Round horizon);

/// Tail exponent and confidence level of the delay-corrected UCB.
///
/// The exponent is either a fixed input or the slowly vanishing schedule
/// alpha_t = ln(ln t) / ln t, with ln(ln t) clamped below at 1e-6.
class UcbParams {
public:
    static UcbParams fixed(double alpha, std::size_t num_arms, Round horizon);
    static UcbParams schedule(std::size_t num_arms, Round horizon);

    UcbParams with_delta(double delta) const;

    double alpha_at(Round t) const;
    bool is_schedule() const { return schedule_; }
    double alpha() const { return alpha_; }
    double delta() const { return delta_; }
    std::size_t num_arms() const { return num_arms_; }
    Round horizon() const { return horizon_; }

private:
    UcbParams(double alpha, bool schedule, std::size_t num_arms, Round horizon);

    double alpha_;
    bool schedule_;
    std::size_t num_arms_;
    Round horizon_;
    double delta_;
};

/// Tail-regularity constants of the adaptive policy: c in (0, 1], a lower
/// bound on the tail index, and a lower bound on the arm means.
struct AdaptParams {
    double c = 1.0;
    double alpha_floor = 0.2;
    double mu_floor = 0.5;
    std::size_t num_arms = 2;
    Round horizon = 2;

    void validate() const;
};

/// Censored sample mean: arrived reward divided by pulls.
double mu_hat(double sum_arrived, std::int64_t pulls);

/// Hoeffding deviation term sqrt(2 ln(2/delta) / n).
double deviation_term(std::int64_t pulls, double delta);
/// Delay bias term 2 n^-(alpha ^ 1/2).
double bias_term(std::int64_t pulls, double alpha);

/// Half-width of the high-probability interval around mu_hat:
/// deviation_term + bias_term.
double confidence_radius(std::int64_t pulls, double alpha, double delta);
double confidence_radius(std::int64_t pulls, const UcbParams& params, Round t = 0);

struct BiasCheck {
    double exact;
    double bound;
};

/// Exact bias (mu/n) sum_s P(D > t - s) of the censored mean for a given pull
/// schedule, next to the closed-form bound 2 n^-(alpha ^ 1/2).
BiasCheck bias_bound_oracle(std::span<const Round> pull_rounds, Round t, const DelayLaw& law,
                            double mu, double alpha);

/// Tail-index estimate min(-ln(diff) / ln(n), 1/2) from the difference of two
/// waited means of the leader. Returns 1/2 when diff <= 0.
double alpha_hat(double diff, std::int64_t pulls_of_leader);

/// Lower confidence bound on the tail index, clipped at 0.
double alpha_bar(double ahat, std::int64_t pulls_of_leader, const AdaptParams& params,
                 double delta);

struct WindowPair {
    Delay long_window;
    Delay short_window;
};

/// Long window floor(n/2) and short window floor((c/2)^(1/alpha_floor) * long),
/// the latter clamped to at least 1.
WindowPair window_pair(std::int64_t pulls_of_leader, const AdaptParams& params);

}  // namespace patient
