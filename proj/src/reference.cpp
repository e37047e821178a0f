#include "fpt/reference.hpp"

#include <cmath>

#include "fpt/rng.hpp"

namespace fpt {

double normal_pdf(double x) {
    return 0.3989422804014326779399461 * std::exp(-0.5 * x * x);
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x * 0.7071067811865475244008444);
}

double psi(double y) { return std::erf(y * 0.7071067811865475244008444); }

double bm_constant_survival(double x, double t) {
    if (x < 0.0) throw std::invalid_argument("bm_constant_survival: x must be >= 0");
    if (!(t > 0.0)) throw std::invalid_argument("bm_constant_survival: t must be positive");
    return psi(x / std::sqrt(t));
}

double meander_endpoint_cdf(double v) {
    if (v < 0.0) throw std::invalid_argument("meander_endpoint_cdf: v must be >= 0");
    return -std::expm1(-0.5 * v * v);
}

McEstimate bm_moving_boundary_mc(const std::function<double(double)>& g, double t, double step,
                                 const McConfig& cfg) {
    if (!(g(0.0) < 0.0)) throw std::invalid_argument("boundary must start strictly below 0");
    if (!(step > 0.0) || !(t > 0.0))
        throw std::invalid_argument("t and step must be positive");

    const std::size_t n_steps = static_cast<std::size_t>(std::ceil(t / step - 1e-12));
    std::vector<double> g_grid(n_steps + 1);
    for (std::size_t i = 0; i <= n_steps; ++i)
        g_grid[i] = g(std::min(t, static_cast<double>(i) * step));

    const std::size_t bs = std::max<std::size_t>(1, cfg.batch_size);
    const std::size_t n_batches = (cfg.replications + bs - 1) / bs;
    std::vector<double> surv_weight(n_batches, 0.0), surv_weight2(n_batches, 0.0);

    run_batches(n_batches, cfg.threads, [&](std::size_t b) {
        KahanSum w_sum, w2_sum;
        const std::size_t lo = b * bs, hi = std::min(cfg.replications, (b + 1) * bs);
        for (std::size_t path = lo; path < hi; ++path) {
            Rng rng = path_rng(cfg.seed, cfg.stream_id, path);
            double w = 1.0, s = 0.0;
            for (std::size_t i = 1; i <= n_steps; ++i) {
                const double dt = std::min(step, t - static_cast<double>(i - 1) * step);
                const double s_next = s + std::sqrt(dt) * rng.normal();
                if (s_next <= g_grid[i]) {
                    w = 0.0;
                    break;
                }
                // Brownian-bridge crossing probability against the boundary
                // frozen at its left-endpoint value within the step.
                const double d1 = s - g_grid[i - 1];
                const double d2 = s_next - g_grid[i - 1];
                if (d1 > 0.0 && d2 > 0.0) w *= 1.0 - std::exp(-2.0 * d1 * d2 / dt);
                s = s_next;
            }
            w_sum.add(w);
            w2_sum.add(w * w);
        }
        surv_weight[b] = w_sum.value();
        surv_weight2[b] = w2_sum.value();
    });

    KahanSum w_all, w2_all;
    for (std::size_t b = 0; b < n_batches; ++b) {
        w_all.add(surv_weight[b]);
        w2_all.add(surv_weight2[b]);
    }
    const double n = static_cast<double>(cfg.replications);
    McEstimate e;
    e.replications = cfg.replications;
    e.mean = w_all.value() / n;
    const double var = std::max(0.0, w2_all.value() / n - e.mean * e.mean);
    e.std_error = std::sqrt(var / n);
    e.survivors = static_cast<std::size_t>(std::llround(w_all.value()));
    return e;
}

}  // namespace fpt
