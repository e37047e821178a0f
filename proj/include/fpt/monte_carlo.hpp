#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "fpt/boundaries.hpp"
#include "fpt/increments.hpp"
#include "json.hpp"

namespace fpt {

struct McConfig {
    std::uint64_t seed = 0;
    std::size_t replications = 100'000;
    std::size_t batch_size = 16'384;
    std::uint64_t stream_id = 0;
    int threads = 0;  // 0 = hardware concurrency
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t replications = 0;
    std::size_t survivors = 0;
};

class InsufficientSurvivors : public std::runtime_error {
public:
    InsufficientSurvivors(const std::string& what, std::size_t n)
        : std::runtime_error(what), survivors(n) {}
    std::size_t survivors;
};

// Rejection sample of surviving paths.  endpoint = (S_n - g_n)/B_n; the two
// broken-line functionals are taken in variance time per (T4.0.scaled):
// mid_value = s_n(1/2), late_min = min over t in [1/2, 1] of s_n(t).
struct ConditionalSample {
    std::vector<double> endpoint;
    std::vector<double> mid_value;
    std::vector<double> late_min;
    std::size_t attempts = 0;
    double b_n = 0.0;
};

McEstimate estimate_survival(const IncrementSchedule& schedule, const Boundary& boundary,
                             std::size_t n, const McConfig& cfg);

ConditionalSample conditional_endpoint_sample(const IncrementSchedule& schedule,
                                              const Boundary& boundary, std::size_t n,
                                              const McConfig& cfg);

// Fine standard-Gaussian walk conditioned to stay strictly positive; the
// desk-scale stand-in for the Brownian meander.
ConditionalSample simulate_meander_oracle(std::size_t steps, const McConfig& cfg);

// One-sample KS statistic against an arbitrary continuous CDF.
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);

// KS statistic of the endpoint sample against the Rayleigh CDF 1 - e^{-v^2/2}.
double meander_ks(const ConditionalSample& sample);

double ks_two_sample(std::vector<double> a, std::vector<double> b);

void write_sample_csv(const std::vector<double>& values, std::ostream& out);
nlohmann::json estimate_to_json(const McEstimate& e);

// Deterministic batch runner shared by the MC front ends: calls f(batch_index)
// for 0..n_batches-1 from a thread pool; f must write only batch-local state.
void run_batches(std::size_t n_batches, int threads, const std::function<void(std::size_t)>& f);

}  // namespace fpt
