#include "fpt/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <thread>

#include "fpt/rng.hpp"

namespace fpt {

void run_batches(std::size_t n_batches, int threads, const std::function<void(std::size_t)>& f) {
    unsigned n_threads = threads > 0 ? static_cast<unsigned>(threads)
                                     : std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min<unsigned>(n_threads, n_batches == 0 ? 1 : static_cast<unsigned>(
                                                  std::min<std::size_t>(n_batches, 1u << 10)));
    if (n_threads <= 1) {
        for (std::size_t b = 0; b < n_batches; ++b) f(b);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t b = next.fetch_add(1);
                if (b >= n_batches) return;
                f(b);
            }
        });
    for (auto& th : pool) th.join();
}

namespace {

struct BatchLayout {
    std::size_t n_batches;
    std::size_t batch_size;
    std::size_t total;

    std::size_t begin(std::size_t b) const { return b * batch_size; }
    std::size_t end(std::size_t b) const { return std::min(total, (b + 1) * batch_size); }
};

BatchLayout layout(const McConfig& cfg) {
    if (cfg.replications == 0) throw std::invalid_argument("replications must be positive");
    const std::size_t bs = std::max<std::size_t>(1, cfg.batch_size);
    return {(cfg.replications + bs - 1) / bs, bs, cfg.replications};
}

// One path up to n against precomputed boundary values; returns true on
// survival (S_k > g_k for every k <= n) and leaves S_n in s_out.
template <class StepFn>
bool walk_path(std::size_t n, const std::vector<double>& g, StepFn&& step, Rng& rng,
               double& s_out) {
    double s = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        s += step(k, rng);
        if (s <= g[k - 1]) return false;
    }
    s_out = s;
    return true;
}

struct HalfTime {
    std::size_t k_half;  // largest k with B_k^2 <= B_n^2 / 2
    double frac;         // variance-time weight toward k_half + 1
};

HalfTime half_time(const std::vector<double>& cum_var, std::size_t n) {
    const double target = cum_var[n] / 2.0;
    std::size_t k = 0;
    while (k + 1 <= n && cum_var[k + 1] <= target) ++k;
    double frac = 0.0;
    if (k < n) {
        const double dv = cum_var[k + 1] - cum_var[k];
        frac = dv > 0.0 ? (target - cum_var[k]) / dv : 0.0;
    }
    return {k, frac};
}

template <class StepFn>
ConditionalSample conditional_sample_impl(std::size_t n, const std::vector<double>& g,
                                          const std::vector<double>& cum_var, StepFn&& step,
                                          const McConfig& cfg) {
    const double b_n = std::sqrt(cum_var[n]);
    const HalfTime ht = half_time(cum_var, n);
    const double g_n = g[n - 1];

    const BatchLayout bl = layout(cfg);
    struct Batch {
        std::vector<double> endpoint, mid, late;
    };
    std::vector<Batch> batches(bl.n_batches);

    run_batches(bl.n_batches, cfg.threads, [&](std::size_t b) {
        Batch& out = batches[b];
        for (std::size_t path = bl.begin(b); path < bl.end(b); ++path) {
            Rng rng = path_rng(cfg.seed, cfg.stream_id, path);
            double s = 0.0, s_half_lo = 0.0, s_half_hi = 0.0, late_min = 0.0;
            bool alive = true;
            for (std::size_t k = 1; k <= n; ++k) {
                s += step(k, rng);
                if (s <= g[k - 1]) {
                    alive = false;
                    break;
                }
                if (k == ht.k_half) s_half_lo = s;
                if (k == ht.k_half + 1) {
                    s_half_hi = s;
                    late_min = s;
                } else if (k > ht.k_half + 1) {
                    late_min = std::min(late_min, s);
                }
            }
            if (!alive) continue;
            const double mid =
                ht.k_half >= n ? s : s_half_lo + ht.frac * (s_half_hi - s_half_lo);
            out.endpoint.push_back((s - g_n) / b_n);
            out.mid.push_back(mid / b_n);
            out.late.push_back(std::min(mid, ht.k_half >= n ? s : late_min) / b_n);
        }
    });

    ConditionalSample res;
    res.attempts = bl.total;
    res.b_n = b_n;
    for (const Batch& b : batches) {
        res.endpoint.insert(res.endpoint.end(), b.endpoint.begin(), b.endpoint.end());
        res.mid_value.insert(res.mid_value.end(), b.mid.begin(), b.mid.end());
        res.late_min.insert(res.late_min.end(), b.late.begin(), b.late.end());
    }
    if (res.endpoint.empty())
        throw InsufficientSurvivors("no surviving paths in the rejection sample", 0);
    return res;
}

std::vector<double> boundary_values(const Boundary& boundary, std::size_t n) {
    std::vector<double> g(n);
    for (std::size_t k = 1; k <= n; ++k) g[k - 1] = boundary.g_at(k);
    return g;
}

std::vector<double> cum_var_values(const IncrementSchedule& schedule, std::size_t n) {
    std::vector<double> v(n + 1);
    for (std::size_t k = 0; k <= n; ++k) v[k] = schedule.cum_var(k);
    return v;
}

}  // namespace

McEstimate estimate_survival(const IncrementSchedule& schedule, const Boundary& boundary,
                             std::size_t n, const McConfig& cfg) {
    if (n < 1 || n > schedule.horizon())
        throw std::invalid_argument("estimate_survival: n outside the schedule horizon");
    const std::vector<double> g = boundary_values(boundary, n);
    const BatchLayout bl = layout(cfg);
    std::vector<std::size_t> survivors(bl.n_batches, 0);

    run_batches(bl.n_batches, cfg.threads, [&](std::size_t b) {
        std::size_t alive = 0;
        for (std::size_t path = bl.begin(b); path < bl.end(b); ++path) {
            Rng rng = path_rng(cfg.seed, cfg.stream_id, path);
            double sn;
            if (walk_path(n, g, [&](std::size_t k, Rng& r) { return schedule.sample(k, r); },
                          rng, sn))
                ++alive;
        }
        survivors[b] = alive;
    });

    std::size_t alive = 0;
    for (std::size_t s : survivors) alive += s;
    McEstimate e;
    e.replications = bl.total;
    e.survivors = alive;
    const double p = static_cast<double>(alive) / static_cast<double>(bl.total);
    e.mean = p;
    e.std_error = std::sqrt(std::max(0.0, p * (1.0 - p) / static_cast<double>(bl.total)));
    return e;
}

ConditionalSample conditional_endpoint_sample(const IncrementSchedule& schedule,
                                              const Boundary& boundary, std::size_t n,
                                              const McConfig& cfg) {
    if (n < 1 || n > schedule.horizon())
        throw std::invalid_argument("conditional sample: n outside the schedule horizon");
    return conditional_sample_impl(
        n, boundary_values(boundary, n), cum_var_values(schedule, n),
        [&](std::size_t k, Rng& r) { return schedule.sample(k, r); }, cfg);
}

ConditionalSample simulate_meander_oracle(std::size_t steps, const McConfig& cfg) {
    if (steps < 1) throw std::invalid_argument("meander oracle needs steps >= 1");
    std::vector<double> g(steps, 0.0);
    std::vector<double> cum_var(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) cum_var[k] = static_cast<double>(k);
    return conditional_sample_impl(steps, g, cum_var,
                                   [](std::size_t, Rng& r) { return r.normal(); }, cfg);
}

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
    if (sample.empty()) throw std::invalid_argument("KS statistic of an empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
        d = std::max(d, std::abs(static_cast<double>(i) / n - f));
    }
    return d;
}

double meander_ks(const ConditionalSample& sample) {
    return ks_statistic(sample.endpoint,
                        [](double v) { return v <= 0.0 ? 0.0 : -std::expm1(-0.5 * v * v); });
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("KS statistic of an empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

void write_sample_csv(const std::vector<double>& values, std::ostream& out) {
    out << "value\n";
    out.precision(17);
    for (double v : values) out << v << '\n';
}

nlohmann::json estimate_to_json(const McEstimate& e) {
    return {{"mean", e.mean},
            {"std_error", e.std_error},
            {"replications", e.replications},
            {"survivors", e.survivors}};
}

}  // namespace fpt
