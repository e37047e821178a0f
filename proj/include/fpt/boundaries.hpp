#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fpt/increments.hpp"
#include "json.hpp"

namespace fpt {

// Deterministic moving boundary g_n, n = 1..horizon of the consumer.
class Boundary {
public:
    enum class TailSup { finite, infinite, unknown };

    virtual ~Boundary() = default;

    virtual double g_at(std::size_t n) const = 0;
    virtual std::string family() const = 0;
    virtual nlohmann::json to_json() const = 0;

    // Whether sup_{k>=n} g_k is knowably finite beyond any horizon.
    virtual TailSup tail_sup() const { return TailSup::unknown; }
    virtual bool eventually_nonincreasing() const { return false; }
};

using BoundaryPtr = std::shared_ptr<const Boundary>;

BoundaryPtr make_constant_boundary(double x);
// g_n = c * B_n / log^{1+gamma}(B_n^2); the log is clamped below at 1 so small
// n stay defined.
BoundaryPtr make_log_damped_boundary(double c, double gamma, SchedulePtr schedule);
BoundaryPtr make_table_boundary(std::vector<double> values);  // values[0] = g_1

BoundaryPtr boundary_from_csv(std::istream& in);  // rows n,g_n
BoundaryPtr boundary_from_json(const nlohmann::json& j, SchedulePtr schedule);

// Running envelopes over 1..horizon:
//   lower(n) = min_{k<=n} g_k,  upper(n) = sup_{n<=k<=horizon} g_k,
//   gmax(n) = max_{k<=n} |g_k|.
// upper is horizon-limited unless the family pins the tail sup.
struct Envelopes {
    std::vector<double> lower;  // index n-1
    std::vector<double> upper;
    std::vector<double> gmax;
    bool horizon_limited = true;

    double lower_at(std::size_t n) const { return lower.at(n - 1); }
    double upper_at(std::size_t n) const { return upper.at(n - 1); }
    double gmax_at(std::size_t n) const { return gmax.at(n - 1); }
};

Envelopes compute_envelopes(const Boundary& boundary, std::size_t horizon);

// Heuristic o(B_n) screen: true when max_n |g_n|/B_n exceeds 0.5 over the
// horizon.  A warning, never an error.
bool boundary_scale_warning(const Boundary& boundary, const IncrementSchedule& schedule,
                            std::size_t horizon);

bool is_nonincreasing(const Boundary& boundary, std::size_t from, std::size_t horizon);

// Piecewise-linear interpolation through (B_k^2, U_g(B_k^2)) knots.
double ug_interpolate(std::span<const std::pair<double, double>> knots, double t);

struct UgCurve {
    std::vector<std::pair<double, double>> knots;  // abscissae strictly increasing

    double eval(double t) const { return ug_interpolate(knots, t); }
};

}  // namespace fpt
