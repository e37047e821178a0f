#include "fpt/report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "fpt/reference.hpp"
#include "fpt/rng.hpp"

namespace fpt {

namespace {

constexpr double kSqrt2OverPi = 0.79788456080286535587989211986876;

std::string engine_name(Engine e) {
    switch (e) {
        case Engine::exact: return "exact";
        case Engine::mc: return "mc";
        case Engine::both: return "both";
        default: return "none";
    }
}

Engine engine_from_name(const std::string& s) {
    if (s == "exact") return Engine::exact;
    if (s == "mc") return Engine::mc;
    if (s == "both") return Engine::both;
    if (s == "none") return Engine::none;
    throw ConfigError("unknown engine: " + s);
}

template <class Fn>
auto config_guard(const char* what, Fn&& fn) {
    try {
        return fn();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string(what) + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string(what) + ": " + e.what());
    }
}

}  // namespace

SchedulePtr schedule_from_json(const nlohmann::json& j, std::size_t n_max) {
    return config_guard("schedule spec", [&]() -> SchedulePtr {
        const std::string family = j.at("family").get<std::string>();
        if (family == "ssrw") return make_ssrw(n_max);
        if (family == "weighted_power")
            return make_power_weighted(j.at("p").get<double>(), n_max);
        if (family == "weighted")
            return make_weighted_rademacher(j.at("weights").get<std::vector<double>>());
        if (family == "weibullian") return make_weibullian(j.at("alpha").get<double>(), n_max);
        if (family == "four_point") {
            const double grid = j.value("grid_step", 0.0);
            return grid > 0.0 ? SchedulePtr(make_four_point_lattice(n_max, grid))
                              : SchedulePtr(make_four_point(n_max));
        }
        if (family == "truncated_pareto")
            return make_truncated_pareto(j.at("p").get<double>(), j.value("grid_step", 0.0),
                                         n_max);
        if (family == "csv") {
            std::ifstream in(j.at("path").get<std::string>());
            if (!in) throw std::invalid_argument("cannot open schedule CSV");
            return schedule_from_csv(in);
        }
        throw std::invalid_argument("unknown schedule family: " + family);
    });
}

BoundaryPtr boundary_from_json(const nlohmann::json& j, SchedulePtr schedule) {
    return config_guard("boundary spec", [&]() -> BoundaryPtr {
        const std::string family = j.at("family").get<std::string>();
        if (family == "constant") return make_constant_boundary(j.at("x").get<double>());
        if (family == "log_damped")
            return make_log_damped_boundary(j.at("c").get<double>(), j.at("gamma").get<double>(),
                                            std::move(schedule));
        if (family == "table")
            return make_table_boundary(j.at("values").get<std::vector<double>>());
        if (family == "csv") {
            std::ifstream in(j.at("path").get<std::string>());
            if (!in) throw std::invalid_argument("cannot open boundary CSV");
            return boundary_from_csv(in);
        }
        throw std::invalid_argument("unknown boundary family: " + family);
    });
}

SchedulePtr build_schedule(const nlohmann::json& spec, std::size_t n_max) {
    return schedule_from_json(spec, n_max);
}

BoundaryPtr build_boundary(const nlohmann::json& spec, SchedulePtr schedule) {
    return boundary_from_json(spec, std::move(schedule));
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    return config_guard("config", [&] {
        ExperimentConfig c;
        c.schedule_spec = j.at("schedule");
        c.boundary_spec = j.value("boundary", nlohmann::json{{"family", "constant"}, {"x", 0.0}});
        c.n_max = j.value("n_max", std::size_t{1000});
        if (c.n_max < 1) throw std::invalid_argument("n_max must be >= 1");
        c.engine = engine_from_name(j.value("engine", std::string("exact")));
        if (j.contains("mc")) {
            const auto& m = j.at("mc");
            c.mc.seed = m.value("seed", std::uint64_t{0});
            c.mc.replications = m.value("replications", std::size_t{100'000});
            c.mc.batch_size = m.value("batch_size", std::size_t{16'384});
            c.mc.stream_id = m.value("stream_id", std::uint64_t{0});
            c.mc.threads = m.value("threads", 0);
        }
        if (j.contains("diagnostics")) {
            const auto& d = j.at("diagnostics");
            c.diagnostics.lind_plus_eps = d.value("lind_plus_eps", std::vector<double>{});
            c.diagnostics.sum_series = d.value("sum_series", false);
            c.diagnostics.gamma = d.value("gamma", std::vector<double>{});
            if (d.contains("h_constant"))
                c.diagnostics.h_constant = d.at("h_constant").get<double>();
            c.diagnostics.series_N = d.value("series_N", std::size_t{100'000});
        }
        c.out_dir = j.value("out_dir", std::string("out"));
        return c;
    });
}

nlohmann::json ExperimentConfig::to_json() const {
    nlohmann::json d = {{"lind_plus_eps", diagnostics.lind_plus_eps},
                        {"sum_series", diagnostics.sum_series},
                        {"gamma", diagnostics.gamma},
                        {"series_N", diagnostics.series_N}};
    if (diagnostics.h_constant) d["h_constant"] = *diagnostics.h_constant;
    return {{"schedule", schedule_spec},
            {"boundary", boundary_spec},
            {"n_max", n_max},
            {"engine", engine_name(engine)},
            {"mc",
             {{"seed", mc.seed},
              {"replications", mc.replications},
              {"batch_size", mc.batch_size},
              {"stream_id", mc.stream_id},
              {"threads", mc.threads}}},
            {"diagnostics", d},
            {"out_dir", out_dir}};
}

std::vector<std::size_t> report_grid(std::size_t n_max) {
    std::vector<std::size_t> grid;
    for (std::size_t n = 1; n <= std::min<std::size_t>(32, n_max); ++n) grid.push_back(n);
    double v = static_cast<double>(n_max);
    while (v > 32.0) {
        grid.push_back(static_cast<std::size_t>(std::ceil(v)));
        v /= 2.0;
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

namespace {

void finish_row(Theorem2Row& row, const IncrementSchedule& schedule) {
    row.lambda = lambda_n(schedule, row.n);
    if (row.ez_star > 0.0) {
        row.r = row.b_n * row.survival / row.ez_star;
        row.alpha_star = std::abs(row.r - kSqrt2OverPi);
    }
    const double log_b = std::log(row.b_n);
    row.log_ratio =
        log_b > 0.0 && row.survival > 0.0 ? std::log(row.survival) / log_b : 0.0;
}

}  // namespace

Theorem2Report theorem2_report_exact(const ExactResult& result, const IncrementSchedule& schedule,
                                     const std::vector<std::size_t>& grid) {
    Theorem2Report rep;
    for (std::size_t n : grid) {
        Theorem2Row row;
        row.n = n;
        row.b_n = std::sqrt(schedule.cum_var(n));
        row.survival = result.survival_at(n);
        row.ez_star = result.ez_star_at(n);
        finish_row(row, schedule);
        rep.rows.push_back(row);
    }
    return rep;
}

Theorem2Report theorem2_report_mc(const IncrementSchedule& schedule, const Boundary& boundary,
                                  const std::vector<std::size_t>& grid, const McConfig& cfg) {
    Theorem2Report rep;
    for (std::size_t n : grid) {
        McConfig point = cfg;
        point.stream_id = mix64(cfg.stream_id ^ (0x9e3779b97f4a7c15ULL * n));

        Theorem2Row row;
        row.n = n;
        row.b_n = std::sqrt(schedule.cum_var(n));
        try {
            const ConditionalSample cs = conditional_endpoint_sample(schedule, boundary, n, point);
            const double total = static_cast<double>(cs.attempts);
            const double p = static_cast<double>(cs.endpoint.size()) / total;
            row.survival = p;
            row.survival_se = std::sqrt(std::max(0.0, p * (1.0 - p) / total));

            KahanSum m1, m2;
            for (double v : cs.endpoint) {
                m1.add(v);
                m2.add(v * v);
            }
            const double k = static_cast<double>(cs.endpoint.size());
            const double mean = m1.value() / k;                        // (S_n - g_n)/B_n mean
            const double var = std::max(0.0, m2.value() / k - mean * mean);
            const double mean_se = std::sqrt(var / k);

            // U_g via survival * conditional mean overshoot, delta-method SE.
            row.ez_star = p * mean * row.b_n;
            row.ez_star_se = row.b_n * std::sqrt(mean * mean * row.survival_se * row.survival_se +
                                                 p * p * mean_se * mean_se);
            row.ez_star_estimated = true;
        } catch (const InsufficientSurvivors&) {
            row.survival = 0.0;
            row.ez_star_estimated = true;
        }
        finish_row(row, schedule);
        rep.rows.push_back(row);
    }
    return rep;
}

UgCurve Theorem2Report::ug_curve(const IncrementSchedule& schedule) const {
    UgCurve curve;
    for (const Theorem2Row& row : rows) {
        const double b2 = schedule.cum_var(row.n);
        if (!curve.knots.empty() && !(b2 > curve.knots.back().first)) continue;
        curve.knots.emplace_back(b2, row.ez_star);
    }
    return curve;
}

nlohmann::json Theorem2Report::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const Theorem2Row& r : rows)
        arr.push_back({{"n", r.n},
                       {"b_n", r.b_n},
                       {"survival", r.survival},
                       {"survival_se", r.survival_se},
                       {"ez_star", r.ez_star},
                       {"ez_star_se", r.ez_star_se},
                       {"ez_star_estimated", r.ez_star_estimated},
                       {"r", r.r},
                       {"alpha_star", r.alpha_star},
                       {"lambda", r.lambda},
                       {"log_ratio", r.log_ratio}});
    return {{"rows", arr}};
}

void write_theorem2_csv(const Theorem2Report& report, std::ostream& out) {
    out << "n,b_n,survival,survival_se,ez_star,ez_star_se,ez_star_estimated,r,alpha_star,lambda,"
           "log_ratio\n";
    out.precision(17);
    for (const Theorem2Row& r : report.rows)
        out << r.n << ',' << r.b_n << ',' << r.survival << ',' << r.survival_se << ','
            << r.ez_star << ',' << r.ez_star_se << ',' << (r.ez_star_estimated ? 1 : 0) << ','
            << r.r << ',' << r.alpha_star << ',' << r.lambda << ',' << r.log_ratio << '\n';
}

namespace {

struct Artifact {
    std::string name;
    std::string content;
};

void flush_artifacts(const std::string& out_dir, const std::vector<Artifact>& artifacts) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    for (const Artifact& a : artifacts) {
        const fs::path final_path = fs::path(out_dir) / a.name;
        const fs::path tmp_path = fs::path(out_dir) / (a.name + ".tmp");
        {
            std::ofstream out(tmp_path, std::ios::binary | std::ios::trunc);
            if (!out) throw std::runtime_error("cannot write " + tmp_path.string());
            out << a.content;
        }
        fs::rename(tmp_path, final_path);
    }
}

bool wants_diagnostics(const DiagnosticsSpec& d) {
    return !d.lind_plus_eps.empty() || d.sum_series || !d.gamma.empty() ||
           d.h_constant.has_value();
}

nlohmann::json run_diagnostics(const IncrementSchedule& schedule, const Boundary& boundary,
                               const DiagnosticsSpec& spec, std::ostream& log) {
    nlohmann::json out;
    auto report = [&](const std::string& name, const ConditionVerdict& v) {
        out[name] = v.to_json();
        log << "condition " << name << ": " << to_string(v.classification)
            << " (partial sum " << v.final_sum() << " at N=" << v.partial_sums.back().first
            << ")\n";
    };
    for (double eps : spec.lind_plus_eps) {
        std::ostringstream name;
        name << "lind_plus_eps_" << eps;
        report(name.str(), series_lind_plus(schedule, eps, spec.series_N));
    }
    if (spec.sum_series) {
        try {
            report("sum_minus", series_sum_minus(schedule, boundary, spec.series_N));
        } catch (const std::domain_error& e) {
            out["sum_minus"] = {{"classification", "inapplicable"}, {"reason", e.what()}};
            log << "condition sum_minus: inapplicable (" << e.what() << ")\n";
        }
        report("sum_plus", series_sum_plus(schedule, boundary, spec.series_N));
    }
    for (double g : spec.gamma) {
        std::ostringstream name;
        name << "lind_plus_gamma_" << g;
        report(name.str(), corollary_gamma_check(schedule, g, spec.series_N));
    }
    if (spec.h_constant) {
        const double c = *spec.h_constant;
        auto [hlind, hsum] = series_h_conditions(
            schedule, boundary, [c](std::size_t) { return c; }, spec.series_N);
        report("h_lind", hlind);
        report("h_sum", hsum);
    }
    return out;
}

}  // namespace

int run_experiment(const ExperimentConfig& config, std::ostream& log) {
    try {
        const bool diag = wants_diagnostics(config.diagnostics);
        std::size_t horizon = config.n_max;
        if (diag) horizon = std::max(horizon, config.diagnostics.series_N + 1);

        const SchedulePtr schedule = build_schedule(config.schedule_spec, horizon);
        const BoundaryPtr boundary = build_boundary(config.boundary_spec, schedule);

        const std::size_t n_max = std::min(config.n_max, schedule->horizon());
        if (!feasibility_check(*schedule, *boundary, n_max))
            throw ConfigError("boundary is unreachable: survival has probability zero");
        if (boundary_scale_warning(*boundary, *schedule, n_max))
            log << "warning: |g_n|/B_n exceeds 0.5 somewhere on the horizon\n";

        std::vector<Artifact> artifacts;
        nlohmann::json summary;
        summary["config"] = config.to_json();
        const std::vector<std::size_t> grid = report_grid(n_max);

        if (config.engine == Engine::exact || config.engine == Engine::both) {
            EvolveOptions opts;
            opts.snapshots = grid;
            const ExactResult res = evolve(*schedule, *boundary, n_max, opts);
            const Theorem2Report rep = theorem2_report_exact(res, *schedule, grid);
            {
                std::ostringstream csv;
                write_exact_csv(res, *schedule, *boundary, csv);
                artifacts.push_back({"exact.csv", csv.str()});
            }
            {
                std::ostringstream csv;
                write_theorem2_csv(rep, csv);
                artifacts.push_back({"theorem2_exact.csv", csv.str()});
            }
            summary["exact"] = rep.to_json();
            const Theorem2Row& last = rep.rows.back();
            log << "theorem2 exact: n=" << last.n << " r=" << last.r
                << " alpha_star=" << last.alpha_star << " lambda=" << last.lambda << "\n";
            log << "conservation residual at n=" << n_max << ": "
                << std::abs(res.survival_at(n_max) + res.absorbed_mass_at(n_max) - 1.0) << "\n";
        }

        if (config.engine == Engine::mc || config.engine == Engine::both) {
            const Theorem2Report rep = theorem2_report_mc(*schedule, *boundary, grid, config.mc);
            std::ostringstream csv;
            write_theorem2_csv(rep, csv);
            artifacts.push_back({"theorem2_mc.csv", csv.str()});
            summary["mc"] = rep.to_json();
            const Theorem2Row& last = rep.rows.back();
            log << "theorem2 mc: n=" << last.n << " survival=" << last.survival << " +- "
                << last.survival_se << " r=" << last.r << "\n";
        }

        if (diag) {
            const nlohmann::json verdicts =
                run_diagnostics(*schedule, *boundary, config.diagnostics, log);
            artifacts.push_back({"diagnostics.json", verdicts.dump(2) + "\n"});
            summary["diagnostics"] = verdicts;
        }

        artifacts.push_back({"config.json", config.to_json().dump(2) + "\n"});
        artifacts.push_back({"report.json", summary.dump(2) + "\n"});
        flush_artifacts(config.out_dir, artifacts);
        log << "wrote " << artifacts.size() << " artifacts to " << config.out_dir << "\n";
        return 0;
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << "\n";
        return 2;
    } catch (const BudgetExceeded& e) {
        log << "budget exceeded at n=" << e.n_reached << ": " << e.what() << "\n";
        return 3;
    }
}

}  // namespace fpt
