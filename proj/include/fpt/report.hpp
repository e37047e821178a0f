#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fpt/diagnostics.hpp"
#include "fpt/exact.hpp"
#include "fpt/monte_carlo.hpp"
#include "json.hpp"

namespace fpt {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Engine { exact, mc, both, none };

struct DiagnosticsSpec {
    std::vector<double> lind_plus_eps;
    bool sum_series = false;
    std::vector<double> gamma;  // corollary_gamma checks
    std::optional<double> h_constant;  // h_n = c for the (hLind)/(hSum) pair
    std::size_t series_N = 100'000;
};

struct ExperimentConfig {
    nlohmann::json schedule_spec;
    nlohmann::json boundary_spec;
    std::size_t n_max = 1000;
    Engine engine = Engine::exact;
    McConfig mc;
    DiagnosticsSpec diagnostics;
    std::string out_dir = "out";

    static ExperimentConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

struct Theorem2Row {
    std::size_t n = 0;
    double b_n = 0.0;
    double survival = 0.0;
    double survival_se = 0.0;  // 0 for exact rows
    double ez_star = 0.0;
    double ez_star_se = 0.0;
    bool ez_star_estimated = false;
    double r = 0.0;           // B_n * survival / ez_star
    double alpha_star = 0.0;  // |r - sqrt(2/pi)|
    double lambda = 0.0;
    double log_ratio = 0.0;  // log survival / log B_n
};

struct Theorem2Report {
    std::vector<Theorem2Row> rows;

    UgCurve ug_curve(const IncrementSchedule& schedule) const;
    nlohmann::json to_json() const;
};

// Reporting grid: geometric {ceil(n_max 2^-j)} plus all n <= 32, sorted unique.
std::vector<std::size_t> report_grid(std::size_t n_max);

Theorem2Report theorem2_report_exact(const ExactResult& result, const IncrementSchedule& schedule,
                                     const std::vector<std::size_t>& grid);

// MC rows; ez_star recovered as survival * conditional mean overshoot via the
// rejection sample, flagged estimated, with delta-method standard errors.
Theorem2Report theorem2_report_mc(const IncrementSchedule& schedule, const Boundary& boundary,
                                  const std::vector<std::size_t>& grid, const McConfig& cfg);

void write_theorem2_csv(const Theorem2Report& report, std::ostream& out);

// Orchestrate a full run per config; writes CSV/JSON artifacts atomically under
// config.out_dir.  Returns the process exit code (0 ok, 2 config, 3 budget).
int run_experiment(const ExperimentConfig& config, std::ostream& log);

SchedulePtr build_schedule(const nlohmann::json& spec, std::size_t n_max);
BoundaryPtr build_boundary(const nlohmann::json& spec, SchedulePtr schedule);

}  // namespace fpt
