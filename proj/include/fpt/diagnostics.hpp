#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "fpt/boundaries.hpp"
#include "fpt/increments.hpp"
#include "json.hpp"

namespace fpt {

enum class Classification { converges, diverges, inconclusive };

const char* to_string(Classification c);

// Partial sums of a non-negative-term series plus a finite-horizon verdict.
struct ConditionVerdict {
    std::vector<std::pair<std::size_t, double>> partial_sums;  // (N, S_N) at decade checkpoints
    Classification classification = Classification::inconclusive;
    bool horizon_limited = false;

    double final_sum() const { return partial_sums.empty() ? 0.0 : partial_sums.back().second; }
    nlohmann::json to_json() const;
};

// Decade-trend classification: converges when the last decade increment is
// negligible or decade increments decay geometrically (ratio <= 0.55);
// diverges when they fail to shrink (ratio >= 0.68); else inconclusive.
Classification classify_decades(const std::vector<std::pair<std::size_t, double>>& partial_sums);

// L_n^2(eps) = B_n^{-2} sum_{k<=n} E[X_k^2; |X_k| > eps B_n], exact for
// discrete laws; in [0, 1].
double lindeberg_fraction(const IncrementSchedule& schedule, std::size_t n, double eps);

// lambda_n = min{eps > 0 : L_n(eps) <= eps}, by scanning the jump points of
// the step function L_n.
double lambda_n(const IncrementSchedule& schedule, std::size_t n);

// sum_k E min{|X_k|^alpha/(eps B_n)^alpha, X_k^2/(eps B_n)^2}, alpha > 2.
double truncated_lindeberg(const IncrementSchedule& schedule, std::size_t n, double alpha,
                           double eps);

// sum_n B_n^{-1} E[-X_n; -X_n > eps B_n]
ConditionVerdict series_lind_plus(const IncrementSchedule& schedule, double eps, std::size_t N);

// sum_n sigma_n^2 B_n^{-3} (gbar - gbar_n)   with gbar = sup over the horizon
ConditionVerdict series_sum_minus(const IncrementSchedule& schedule, const Boundary& boundary,
                                  std::size_t N);

// sum_n sigma_n^2 B_n^{-3} (glow_1 - glow_n)
ConditionVerdict series_sum_plus(const IncrementSchedule& schedule, const Boundary& boundary,
                                 std::size_t N);

// sum_n B_n^{-1} E[-X_n; -X_n > h_n + g_{n-1} - glow_n]  and
// sum_n sigma_n^2 h_n / B_n^3, for a positive non-decreasing sequence h.
// Convention: g_0 := glow_1, so H_1 = h_1.
std::pair<ConditionVerdict, ConditionVerdict> series_h_conditions(
    const IncrementSchedule& schedule, const Boundary& boundary,
    const std::function<double(std::size_t)>& h, std::size_t N);

// sum_k B_k^{-1} E[-X_{k+1}; -X_{k+1} > B_k / log^{1+gamma}(B_k^2)]
ConditionVerdict corollary_gamma_check(const IncrementSchedule& schedule, double gamma,
                                       std::size_t N);

struct FGammaResult {
    double value = 0.0;
    bool divergent = false;  // indicator never switches off over the last decade
};

// Partial sum of sum_k (a_k/B_k) 1{x > B_k/(a_k log^{1+gamma} B_k)}.
FGammaResult weighted_f_gamma(const WeightedRademacher& schedule, double gamma, double x,
                              std::size_t N);

}  // namespace fpt
