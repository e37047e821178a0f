#include "fpt/boundaries.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <sstream>

namespace fpt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class ConstantBoundary : public Boundary {
public:
    explicit ConstantBoundary(double x) : x_(x) {}
    double g_at(std::size_t) const override { return x_; }
    std::string family() const override { return "constant"; }
    TailSup tail_sup() const override { return TailSup::finite; }
    bool eventually_nonincreasing() const override { return true; }
    nlohmann::json to_json() const override { return {{"family", "constant"}, {"x", x_}}; }

private:
    double x_;
};

class LogDampedBoundary : public Boundary {
public:
    LogDampedBoundary(double c, double gamma, SchedulePtr schedule)
        : c_(c), gamma_(gamma), schedule_(std::move(schedule)) {
        if (!(gamma_ > 0.0)) throw std::invalid_argument("log-damped boundary needs gamma > 0");
        if (!schedule_) throw std::invalid_argument("log-damped boundary needs a schedule");
    }

    double g_at(std::size_t n) const override {
        const double b2 = schedule_->cum_var(n);
        const double b = std::sqrt(b2);
        const double l = std::max(std::log(b2), 1.0);
        return c_ * b / std::pow(l, 1.0 + gamma_);
    }
    std::string family() const override { return "log_damped"; }
    TailSup tail_sup() const override {
        return c_ > 0.0 ? TailSup::infinite : TailSup::finite;
    }
    bool eventually_nonincreasing() const override { return c_ <= 0.0; }
    nlohmann::json to_json() const override {
        return {{"family", "log_damped"}, {"c", c_}, {"gamma", gamma_}};
    }

private:
    double c_;
    double gamma_;
    SchedulePtr schedule_;
};

class TableBoundary : public Boundary {
public:
    explicit TableBoundary(std::vector<double> values) : values_(std::move(values)) {
        if (values_.empty()) throw std::invalid_argument("boundary table must be non-empty");
    }
    double g_at(std::size_t n) const override {
        if (n < 1 || n > values_.size()) throw std::out_of_range("boundary table index");
        return values_[n - 1];
    }
    std::string family() const override { return "table"; }
    nlohmann::json to_json() const override {
        return {{"family", "table"}, {"values", values_}};
    }

private:
    std::vector<double> values_;
};

}  // namespace

BoundaryPtr make_constant_boundary(double x) { return std::make_shared<ConstantBoundary>(x); }

BoundaryPtr make_log_damped_boundary(double c, double gamma, SchedulePtr schedule) {
    return std::make_shared<LogDampedBoundary>(c, gamma, std::move(schedule));
}

BoundaryPtr make_table_boundary(std::vector<double> values) {
    return std::make_shared<TableBoundary>(std::move(values));
}

BoundaryPtr boundary_from_csv(std::istream& in) {
    std::vector<std::pair<std::size_t, double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string f0, f1;
        if (!std::getline(ls, f0, ',') || !std::getline(ls, f1))
            throw std::invalid_argument("boundary CSV rows must be n,g_n");
        if (f0 == "n") continue;
        rows.emplace_back(std::stoul(f0), std::stod(f1));
    }
    if (rows.empty()) throw std::invalid_argument("empty boundary table");
    std::sort(rows.begin(), rows.end());
    std::vector<double> values;
    values.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].first != i + 1)
            throw std::invalid_argument("boundary CSV indices must cover 1..N");
        values.push_back(rows[i].second);
    }
    return make_table_boundary(std::move(values));
}

Envelopes compute_envelopes(const Boundary& boundary, std::size_t horizon) {
    if (horizon < 1) throw std::invalid_argument("envelope horizon must be >= 1");
    Envelopes env;
    env.lower.resize(horizon);
    env.upper.resize(horizon);
    env.gmax.resize(horizon);

    double run_min = kInf, run_absmax = 0.0;
    for (std::size_t n = 1; n <= horizon; ++n) {
        const double g = boundary.g_at(n);
        run_min = std::min(run_min, g);
        run_absmax = std::max(run_absmax, std::abs(g));
        env.lower[n - 1] = run_min;
        env.gmax[n - 1] = run_absmax;
    }

    if (boundary.tail_sup() == Boundary::TailSup::infinite) {
        std::fill(env.upper.begin(), env.upper.end(), kInf);
        env.horizon_limited = false;
    } else {
        double run_sup = -kInf;
        for (std::size_t n = horizon; n >= 1; --n) {
            run_sup = std::max(run_sup, boundary.g_at(n));
            env.upper[n - 1] = run_sup;
        }
        env.horizon_limited = !(boundary.eventually_nonincreasing() ||
                                boundary.tail_sup() == Boundary::TailSup::finite);
    }
    return env;
}

bool boundary_scale_warning(const Boundary& boundary, const IncrementSchedule& schedule,
                            std::size_t horizon) {
    for (std::size_t n = 1; n <= horizon; ++n) {
        const double b = std::sqrt(schedule.cum_var(n));
        if (b > 0.0 && std::abs(boundary.g_at(n)) / b > 0.5) return true;
    }
    return false;
}

bool is_nonincreasing(const Boundary& boundary, std::size_t from, std::size_t horizon) {
    for (std::size_t n = std::max<std::size_t>(from, 1); n + 1 <= horizon; ++n)
        if (boundary.g_at(n + 1) > boundary.g_at(n)) return false;
    return true;
}

double ug_interpolate(std::span<const std::pair<double, double>> knots, double t) {
    if (knots.empty()) throw std::invalid_argument("ug_interpolate needs knots");
    for (std::size_t i = 0; i + 1 < knots.size(); ++i)
        if (!(knots[i + 1].first > knots[i].first))
            throw std::invalid_argument("knot abscissae must be strictly increasing");
    if (t < 0.0 || t > knots.back().first)
        throw std::out_of_range("ug_interpolate: t outside [0, last knot]");
    if (t <= knots.front().first) return knots.front().second;  // flat head extension
    const auto it = std::upper_bound(
        knots.begin(), knots.end(), t,
        [](double x, const std::pair<double, double>& k) { return x < k.first; });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    if (t == lo.first) return lo.second;
    const double w = (t - lo.first) / (hi.first - lo.first);
    return lo.second + w * (hi.second - lo.second);
}

}  // namespace fpt
