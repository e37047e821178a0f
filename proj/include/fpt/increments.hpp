#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fpt/rng.hpp"
#include "json.hpp"

namespace fpt {

struct Atom {
    double value;
    double prob;
};

// Finite zero-or-nonzero-mean discrete law; atoms strictly increasing,
// probabilities positive and summing to one.
class DiscreteDistribution {
public:
    static DiscreteDistribution from_atoms(std::vector<Atom> atoms);

    const std::vector<Atom>& atoms() const { return atoms_; }

    double mean() const;
    double second_moment() const;
    double essup() const { return atoms_.back().value; }

    // E[X^2; |X| > t]
    double tail_second_moment(double t) const;
    // E[-X; -X > t]
    double neg_tail_first_moment(double t) const;

    double sample(Rng& rng) const;

private:
    std::vector<Atom> atoms_;
    std::vector<double> cdf_;
};

class Boundary;  // boundaries.hpp

// The law of the k-th increment for k = 1..horizon, with exact moment
// bookkeeping in both plain and log scale.  Immutable after construction.
class IncrementSchedule {
public:
    virtual ~IncrementSchedule() = default;

    virtual std::size_t horizon() const = 0;

    // nullopt for sample-only indices (e.g. continuous truncated-Pareto draws).
    virtual std::optional<DiscreteDistribution> law_at(std::size_t k) const = 0;

    virtual double sample(std::size_t k, Rng& rng) const = 0;

    virtual double sigma2_at(std::size_t k) const;
    double cum_var(std::size_t n) const;      // B_n^2
    double log_cum_var(std::size_t n) const;  // log B_n^2

    virtual double essup_at(std::size_t k) const = 0;

    // Common span h such that every atom of every law lies on h*Z.
    virtual std::optional<double> lattice_span() const = 0;

    // Exact tail moments; defaults go through law_at.
    virtual double tail_second_moment(std::size_t k, double t) const;  // E[X_k^2; |X_k| > t]
    virtual double neg_tail_first_moment(std::size_t k, double t) const;  // E[-X_k; -X_k > t]
    // E min{|X_k|^alpha / s^alpha, X_k^2 / s^2} for alpha > 2, s > 0.
    virtual double min_tail_moment(std::size_t k, double alpha, double s) const;

    virtual nlohmann::json to_json() const = 0;

protected:
    void init_variance_tables(const std::vector<double>& sigma2);       // sigma2[k-1] = sigma_k^2
    void init_variance_tables_log(const std::vector<double>& log_sigma2);
    void check_index(std::size_t k) const;

    std::vector<double> cum_var_;      // cum_var_[n], n = 0..horizon
    std::vector<double> log_cum_var_;  // log of the same (-inf at 0)
    std::vector<double> sigma2_;       // sigma2_[k-1]
};

using SchedulePtr = std::shared_ptr<const IncrementSchedule>;

// X_k = a_k * xi_k with xi = +-1 equiprobable.  Weights kept in log scale so
// Weibullian growth does not overflow the variance bookkeeping.
class WeightedRademacher : public IncrementSchedule {
public:
    // Plain weights.
    explicit WeightedRademacher(std::vector<double> weights);
    // Log weights (weight itself may overflow a double).
    WeightedRademacher(std::vector<double> log_weights, bool sample_only);

    std::size_t horizon() const override { return log_weight_.size(); }
    std::optional<DiscreteDistribution> law_at(std::size_t k) const override;
    double sample(std::size_t k, Rng& rng) const override;
    double essup_at(std::size_t k) const override { return weight(k); }
    std::optional<double> lattice_span() const override { return span_; }
    double tail_second_moment(std::size_t k, double t) const override;
    double neg_tail_first_moment(std::size_t k, double t) const override;
    nlohmann::json to_json() const override;

    double weight(std::size_t k) const;
    double log_weight(std::size_t k) const;
    double log_cum_var_at(std::size_t n) const { return log_cum_var(n); }

    void set_family_json(nlohmann::json j) { family_json_ = std::move(j); }

private:
    void finish_init();

    std::vector<double> log_weight_;
    std::optional<double> span_;
    bool sample_only_ = false;
    nlohmann::json family_json_;
};

// Symmetric four-valued increments: +-sqrt(n) with p_n = 1/(n log(2+n)),
// +-a_n with the complementary mass, unit variance at every n.
class FourPointSchedule : public IncrementSchedule {
public:
    // grid_step > 0 projects every atom onto grid_step*Z with a mean-preserving
    // two-point split; required for the exact engine, refused for grid_step = 0.
    explicit FourPointSchedule(std::size_t n_max, double grid_step = 0.0);

    std::size_t horizon() const override { return n_max_; }
    std::optional<DiscreteDistribution> law_at(std::size_t k) const override;
    double sample(std::size_t k, Rng& rng) const override;
    double sigma2_at(std::size_t k) const override;
    double essup_at(std::size_t k) const override;
    std::optional<double> lattice_span() const override;
    double tail_second_moment(std::size_t k, double t) const override;
    double neg_tail_first_moment(std::size_t k, double t) const override;
    nlohmann::json to_json() const override;

    static double p_n(std::size_t n);
    static double a_n(std::size_t n);

private:
    std::size_t n_max_;
    double grid_step_;
    std::vector<DiscreteDistribution> laws_;  // only when grid_step > 0
};

// X_n = xi_n 1{|xi_n| <= c_n}, xi with density |x|^-3 on |x| >= 1 and
// c_n = sqrt(n) log^p(n+2).  Continuous sampler plus an optional lattice
// discretization by exact cell integration.
class TruncatedParetoSchedule : public IncrementSchedule {
public:
    TruncatedParetoSchedule(double p, double grid_step, std::size_t n_max);

    std::size_t horizon() const override { return n_max_; }
    std::optional<DiscreteDistribution> law_at(std::size_t k) const override;
    double sample(std::size_t k, Rng& rng) const override;
    double essup_at(std::size_t k) const override;
    std::optional<double> lattice_span() const override;
    double tail_second_moment(std::size_t k, double t) const override;
    double neg_tail_first_moment(std::size_t k, double t) const override;
    double min_tail_moment(std::size_t k, double alpha, double s) const override;
    nlohmann::json to_json() const override;

    double truncation_level(std::size_t k) const;

private:
    double p_;
    double grid_step_;
    std::size_t n_max_;
    std::vector<DiscreteDistribution> laws_;  // only when grid_step > 0
};

// Arbitrary per-index discrete laws (CSV rows k,value,prob).
class TabulatedSchedule : public IncrementSchedule {
public:
    explicit TabulatedSchedule(std::vector<DiscreteDistribution> laws);

    std::size_t horizon() const override { return laws_.size(); }
    std::optional<DiscreteDistribution> law_at(std::size_t k) const override;
    double sample(std::size_t k, Rng& rng) const override;
    double essup_at(std::size_t k) const override;
    std::optional<double> lattice_span() const override { return span_; }
    nlohmann::json to_json() const override;

private:
    std::vector<DiscreteDistribution> laws_;
    std::optional<double> span_;
};

std::shared_ptr<const WeightedRademacher> make_weighted_rademacher(std::vector<double> weights);
std::shared_ptr<const WeightedRademacher> make_ssrw(std::size_t n_max);
std::shared_ptr<const WeightedRademacher> make_power_weighted(double p, std::size_t n_max);
std::shared_ptr<const WeightedRademacher> make_weibullian(double alpha, std::size_t n_max);
std::shared_ptr<const FourPointSchedule> make_four_point(std::size_t n_max);
std::shared_ptr<const FourPointSchedule> make_four_point_lattice(std::size_t n_max, double grid_step);
std::shared_ptr<const TruncatedParetoSchedule> make_truncated_pareto(double p, double grid_step,
                                                                     std::size_t n_max);

std::shared_ptr<const TabulatedSchedule> schedule_from_csv(std::istream& in);
SchedulePtr schedule_from_json(const nlohmann::json& j, std::size_t n_max);

// True iff the running sum of essential suprema exceeds g_m for every m <= n,
// i.e. the survival event has positive probability up to n.
bool feasibility_check(const IncrementSchedule& schedule, const Boundary& boundary, std::size_t n);

// Shared approximate-gcd helper for lattice detection (0 means no usable span).
double common_span(const std::vector<double>& values);

}  // namespace fpt
