#include "fpt/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "fpt/rng.hpp"

namespace fpt {

const char* to_string(Classification c) {
    switch (c) {
        case Classification::converges: return "converges";
        case Classification::diverges: return "diverges";
        default: return "inconclusive";
    }
}

nlohmann::json ConditionVerdict::to_json() const {
    nlohmann::json sums = nlohmann::json::array();
    for (const auto& [n, s] : partial_sums) sums.push_back({n, s});
    return {{"partial_sums", sums},
            {"final_sum", final_sum()},
            {"classification", to_string(classification)},
            {"horizon_limited", horizon_limited}};
}

Classification classify_decades(const std::vector<std::pair<std::size_t, double>>& partial_sums) {
    const std::size_t m = partial_sums.size();
    if (m < 2) return Classification::inconclusive;
    const double s_last = partial_sums[m - 1].second;
    const double d_last = s_last - partial_sums[m - 2].second;
    if (d_last < 1e-6 * (s_last + 1.0)) return Classification::converges;
    if (m < 3) return Classification::inconclusive;
    const double d_prev = partial_sums[m - 2].second - partial_sums[m - 3].second;
    if (!(d_prev > 0.0)) return Classification::inconclusive;
    const double ratio = d_last / d_prev;
    if (ratio <= 0.55) return Classification::converges;
    if (ratio >= 0.68) return Classification::diverges;
    return Classification::inconclusive;
}

namespace {

std::vector<std::size_t> decade_checkpoints(std::size_t N) {
    std::vector<std::size_t> cps;
    for (std::size_t v = N; v >= 1; v /= 10) {
        cps.push_back(v);
        if (v < 10) break;
    }
    std::sort(cps.begin(), cps.end());
    cps.erase(std::unique(cps.begin(), cps.end()), cps.end());
    return cps;
}

template <class TermFn>
ConditionVerdict accumulate_series(std::size_t N, TermFn&& term, bool horizon_limited) {
    if (N < 1) throw std::invalid_argument("series horizon N must be >= 1");
    const std::vector<std::size_t> cps = decade_checkpoints(N);
    ConditionVerdict v;
    v.horizon_limited = horizon_limited;
    KahanSum s;
    std::size_t ci = 0;
    for (std::size_t n = 1; n <= N; ++n) {
        s.add(term(n));
        if (ci < cps.size() && cps[ci] == n) {
            v.partial_sums.emplace_back(n, s.value());
            ++ci;
        }
    }
    v.classification = classify_decades(v.partial_sums);
    return v;
}

std::size_t clamp_to_horizon(const IncrementSchedule& schedule, std::size_t N, bool& limited) {
    if (N > schedule.horizon()) {
        limited = true;
        return schedule.horizon();
    }
    return N;
}

}  // namespace

double lindeberg_fraction(const IncrementSchedule& schedule, std::size_t n, double eps) {
    if (n < 1) throw std::invalid_argument("lindeberg_fraction: n must be >= 1");
    if (!(eps > 0.0)) throw std::invalid_argument("lindeberg_fraction: eps must be positive");
    const double b2 = schedule.cum_var(n);
    if (!(b2 > 0.0)) return 0.0;
    const double t = eps * std::sqrt(b2);
    KahanSum s;
    for (std::size_t k = 1; k <= n; ++k) s.add(schedule.tail_second_moment(k, t));
    return s.value() / b2;
}

double lambda_n(const IncrementSchedule& schedule, std::size_t n) {
    if (n < 1) throw std::invalid_argument("lambda_n: n must be >= 1");
    const double b2 = schedule.cum_var(n);
    if (!(b2 > 0.0)) return 0.0;
    const double bn = std::sqrt(b2);
    const auto L = [&](double eps) { return std::sqrt(lindeberg_fraction(schedule, n, eps)); };

    std::vector<double> jumps;
    bool discrete = true;
    for (std::size_t k = 1; k <= n && discrete; ++k) {
        const auto law = schedule.law_at(k);
        if (!law) {
            discrete = false;
            break;
        }
        for (const Atom& a : law->atoms())
            if (a.value != 0.0) jumps.push_back(std::abs(a.value) / bn);
    }

    if (!discrete) {
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            (L(mid) <= mid ? hi : lo) = mid;
        }
        return hi;
    }

    if (jumps.empty()) return 0.0;
    std::sort(jumps.begin(), jumps.end());
    jumps.erase(std::unique(jumps.begin(), jumps.end()), jumps.end());

    // L is a right-continuous non-increasing step function with jumps at these
    // points, so the first index with L(t_i) <= t_i exists and is monotone.
    std::size_t lo = 0, hi = jumps.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (L(jumps[mid]) <= jumps[mid])
            hi = mid;
        else
            lo = mid + 1;
    }
    const double right = jumps[lo];
    const double left = lo == 0 ? 0.0 : jumps[lo - 1];
    const double flat = L(0.5 * (left + right));  // flat value on (left, right)
    if (flat > left && flat < right) return flat;
    return right;
}

double truncated_lindeberg(const IncrementSchedule& schedule, std::size_t n, double alpha,
                           double eps) {
    if (!(alpha > 2.0)) throw std::invalid_argument("truncated_lindeberg: alpha must exceed 2");
    if (!(eps > 0.0)) throw std::invalid_argument("truncated_lindeberg: eps must be positive");
    if (n < 1) throw std::invalid_argument("truncated_lindeberg: n must be >= 1");
    const double s = eps * std::sqrt(schedule.cum_var(n));
    KahanSum sum;
    for (std::size_t k = 1; k <= n; ++k) sum.add(schedule.min_tail_moment(k, alpha, s));
    return sum.value();
}

ConditionVerdict series_lind_plus(const IncrementSchedule& schedule, double eps, std::size_t N) {
    if (!(eps > 0.0)) throw std::invalid_argument("series_lind_plus: eps must be positive");
    bool limited = false;
    N = clamp_to_horizon(schedule, N, limited);
    return accumulate_series(
        N,
        [&](std::size_t n) {
            const double bn = std::sqrt(schedule.cum_var(n));
            if (!(bn > 0.0)) return 0.0;
            return schedule.neg_tail_first_moment(n, eps * bn) / bn;
        },
        limited);
}

ConditionVerdict series_sum_minus(const IncrementSchedule& schedule, const Boundary& boundary,
                                  std::size_t N) {
    bool limited = false;
    N = clamp_to_horizon(schedule, N, limited);
    if (boundary.tail_sup() == Boundary::TailSup::infinite)
        throw std::domain_error("boundary tail supremum is infinite: condition inapplicable");
    const Envelopes env = compute_envelopes(boundary, N);
    const double gbar = env.upper_at(1);
    ConditionVerdict v = accumulate_series(
        N,
        [&](std::size_t n) {
            const double b = std::sqrt(schedule.cum_var(n));
            if (!(b > 0.0)) return 0.0;
            return schedule.sigma2_at(n) / (b * b * b) * (gbar - env.upper_at(n));
        },
        limited || env.horizon_limited);
    return v;
}

ConditionVerdict series_sum_plus(const IncrementSchedule& schedule, const Boundary& boundary,
                                 std::size_t N) {
    bool limited = false;
    N = clamp_to_horizon(schedule, N, limited);
    const Envelopes env = compute_envelopes(boundary, N);
    const double g1 = env.lower_at(1);
    return accumulate_series(
        N,
        [&](std::size_t n) {
            const double b = std::sqrt(schedule.cum_var(n));
            if (!(b > 0.0)) return 0.0;
            return schedule.sigma2_at(n) / (b * b * b) * (g1 - env.lower_at(n));
        },
        limited);
}

std::pair<ConditionVerdict, ConditionVerdict> series_h_conditions(
    const IncrementSchedule& schedule, const Boundary& boundary,
    const std::function<double(std::size_t)>& h, std::size_t N) {
    bool limited = false;
    N = clamp_to_horizon(schedule, N, limited);
    double prev_h = 0.0;
    for (std::size_t n = 1; n <= N; ++n) {
        const double hn = h(n);
        if (!(hn > 0.0) || hn < prev_h)
            throw std::invalid_argument("h must be positive and non-decreasing");
        prev_h = hn;
    }
    const Envelopes env = compute_envelopes(boundary, N);
    // Convention: g_0 := the running minimum at 1, so H_1 = h_1.
    ConditionVerdict hlind = accumulate_series(
        N,
        [&](std::size_t n) {
            const double bn = std::sqrt(schedule.cum_var(n));
            if (!(bn > 0.0)) return 0.0;
            const double g_prev = n == 1 ? env.lower_at(1) : boundary.g_at(n - 1);
            const double H = h(n) + g_prev - env.lower_at(n);
            return schedule.neg_tail_first_moment(n, H) / bn;
        },
        limited);
    ConditionVerdict hsum = accumulate_series(
        N,
        [&](std::size_t n) {
            const double b = std::sqrt(schedule.cum_var(n));
            if (!(b > 0.0)) return 0.0;
            return schedule.sigma2_at(n) * h(n) / (b * b * b);
        },
        limited);
    return {std::move(hlind), std::move(hsum)};
}

ConditionVerdict corollary_gamma_check(const IncrementSchedule& schedule, double gamma,
                                       std::size_t N) {
    if (!(gamma > 0.0)) throw std::invalid_argument("corollary_gamma_check: gamma must be positive");
    bool limited = false;
    if (N + 1 > schedule.horizon()) {
        limited = true;
        N = schedule.horizon() > 1 ? schedule.horizon() - 1 : 1;
    }
    return accumulate_series(
        N,
        [&](std::size_t k) {
            const double b2 = schedule.cum_var(k);
            if (!(b2 > 0.0)) return 0.0;
            const double l = std::log(b2);
            if (l <= 0.0) return 0.0;  // threshold undefined below B_k^2 = 1
            const double bk = std::sqrt(b2);
            const double thr = bk / std::pow(l, 1.0 + gamma);
            return schedule.neg_tail_first_moment(k + 1, thr) / bk;
        },
        limited);
}

FGammaResult weighted_f_gamma(const WeightedRademacher& schedule, double gamma, double x,
                              std::size_t N) {
    if (!(x > 0.0)) throw std::invalid_argument("weighted_f_gamma: x must be positive");
    if (!(gamma > 0.0)) throw std::invalid_argument("weighted_f_gamma: gamma must be positive");
    bool limited = false;
    N = clamp_to_horizon(schedule, N, limited);
    (void)limited;

    const double log_x = std::log(x);
    KahanSum sum;
    bool any_in_last_decade = false;
    bool all_on_last_decade = true;
    const std::size_t decade_start = N / 10 + 1;
    for (std::size_t k = 1; k <= N; ++k) {
        const double log_b = 0.5 * schedule.log_cum_var_at(k);
        bool on = false;
        if (log_b > 0.0) {
            // x > B_k / (a_k log^{1+gamma} B_k), compared in log scale
            const double log_thr =
                log_b - schedule.log_weight(k) - (1.0 + gamma) * std::log(log_b);
            on = log_x > log_thr;
            if (on) sum.add(std::exp(schedule.log_weight(k) - log_b));
        }
        if (k >= decade_start) {
            any_in_last_decade = true;
            all_on_last_decade = all_on_last_decade && on;
        }
    }
    FGammaResult res;
    res.value = sum.value();
    res.divergent = any_in_last_decade && all_on_last_decade;
    return res;
}

}  // namespace fpt
