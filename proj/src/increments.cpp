#include "fpt/increments.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <sstream>

#include "fpt/boundaries.hpp"

namespace fpt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_add_exp(double a, double b) {
    if (a == -kInf) return b;
    if (b == -kInf) return a;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(std::min(a, b) - m));
}

double real_gcd(double a, double b, double tol) {
    while (b > tol) {
        const double r = std::fmod(a, b);
        a = b;
        b = (r > b - tol) ? 0.0 : r;  // residue indistinguishable from b
    }
    return a;
}

}  // namespace

// ---------------------------------------------------------------------------
// DiscreteDistribution

DiscreteDistribution DiscreteDistribution::from_atoms(std::vector<Atom> atoms) {
    if (atoms.empty()) throw std::invalid_argument("discrete law needs at least one atom");
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& a, const Atom& b) { return a.value < b.value; });

    DiscreteDistribution d;
    for (const Atom& a : atoms) {
        if (!(a.prob > 0.0)) throw std::invalid_argument("atom probability must be positive");
        if (!std::isfinite(a.value)) throw std::invalid_argument("atom value must be finite");
        if (!d.atoms_.empty() &&
            std::abs(a.value - d.atoms_.back().value) <=
                1e-12 * std::max(1.0, std::abs(a.value))) {
            d.atoms_.back().prob += a.prob;  // merge duplicates
        } else {
            d.atoms_.push_back(a);
        }
    }

    KahanSum total;
    for (const Atom& a : d.atoms_) total.add(a.prob);
    if (std::abs(total.value() - 1.0) > 1e-12)
        throw std::invalid_argument("atom probabilities must sum to 1");

    d.cdf_.reserve(d.atoms_.size());
    KahanSum run;
    for (const Atom& a : d.atoms_) {
        run.add(a.prob);
        d.cdf_.push_back(run.value());
    }
    d.cdf_.back() = 1.0;
    return d;
}

double DiscreteDistribution::mean() const {
    KahanSum s;
    for (const Atom& a : atoms_) s.add(a.value * a.prob);
    return s.value();
}

double DiscreteDistribution::second_moment() const {
    KahanSum s;
    for (const Atom& a : atoms_) s.add(a.value * a.value * a.prob);
    return s.value();
}

double DiscreteDistribution::tail_second_moment(double t) const {
    KahanSum s;
    for (const Atom& a : atoms_)
        if (std::abs(a.value) > t) s.add(a.value * a.value * a.prob);
    return s.value();
}

double DiscreteDistribution::neg_tail_first_moment(double t) const {
    KahanSum s;
    for (const Atom& a : atoms_)
        if (-a.value > t) s.add(-a.value * a.prob);
    return s.value();
}

double DiscreteDistribution::sample(Rng& rng) const {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const std::size_t i = std::min<std::size_t>(it - cdf_.begin(), atoms_.size() - 1);
    return atoms_[i].value;
}

// ---------------------------------------------------------------------------
// IncrementSchedule base

void IncrementSchedule::check_index(std::size_t k) const {
    if (k < 1 || k > horizon()) throw std::out_of_range("increment index out of range");
}

void IncrementSchedule::init_variance_tables(const std::vector<double>& sigma2) {
    sigma2_ = sigma2;
    cum_var_.assign(sigma2.size() + 1, 0.0);
    log_cum_var_.assign(sigma2.size() + 1, -kInf);
    for (std::size_t k = 1; k <= sigma2.size(); ++k) {
        cum_var_[k] = cum_var_[k - 1] + sigma2[k - 1];
        log_cum_var_[k] =
            log_add_exp(log_cum_var_[k - 1], sigma2[k - 1] > 0 ? std::log(sigma2[k - 1]) : -kInf);
    }
}

void IncrementSchedule::init_variance_tables_log(const std::vector<double>& log_sigma2) {
    sigma2_.resize(log_sigma2.size());
    for (std::size_t i = 0; i < log_sigma2.size(); ++i) sigma2_[i] = std::exp(log_sigma2[i]);
    cum_var_.assign(log_sigma2.size() + 1, 0.0);
    log_cum_var_.assign(log_sigma2.size() + 1, -kInf);
    for (std::size_t k = 1; k <= log_sigma2.size(); ++k) {
        log_cum_var_[k] = log_add_exp(log_cum_var_[k - 1], log_sigma2[k - 1]);
        cum_var_[k] = std::exp(log_cum_var_[k]);
    }
}

double IncrementSchedule::sigma2_at(std::size_t k) const {
    check_index(k);
    return sigma2_[k - 1];
}

double IncrementSchedule::cum_var(std::size_t n) const {
    if (n > horizon()) throw std::out_of_range("cum_var index out of range");
    return cum_var_[n];
}

double IncrementSchedule::log_cum_var(std::size_t n) const {
    if (n > horizon()) throw std::out_of_range("log_cum_var index out of range");
    return log_cum_var_[n];
}

double IncrementSchedule::tail_second_moment(std::size_t k, double t) const {
    const auto law = law_at(k);
    if (!law) throw std::logic_error("tail_second_moment: no discrete law at this index");
    return law->tail_second_moment(t);
}

double IncrementSchedule::neg_tail_first_moment(std::size_t k, double t) const {
    const auto law = law_at(k);
    if (!law) throw std::logic_error("neg_tail_first_moment: no discrete law at this index");
    return law->neg_tail_first_moment(t);
}

double IncrementSchedule::min_tail_moment(std::size_t k, double alpha, double s) const {
    const auto law = law_at(k);
    if (!law) throw std::logic_error("min_tail_moment: no discrete law at this index");
    KahanSum sum;
    for (const Atom& a : law->atoms()) {
        const double r = std::abs(a.value) / s;
        sum.add(a.prob * std::min(std::pow(r, alpha), r * r));
    }
    return sum.value();
}

// ---------------------------------------------------------------------------
// WeightedRademacher

WeightedRademacher::WeightedRademacher(std::vector<double> weights) {
    if (weights.empty()) throw std::invalid_argument("weight sequence must be non-empty");
    std::vector<double> sigma2(weights.size());
    log_weight_.resize(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (!(weights[i] > 0.0) || !std::isfinite(weights[i]))
            throw std::invalid_argument("weights must be positive and finite");
        log_weight_[i] = std::log(weights[i]);
        sigma2[i] = weights[i] * weights[i];
    }
    init_variance_tables(sigma2);
    const double span = common_span(weights);
    if (span > 0.0) span_ = span;
    finish_init();
}

WeightedRademacher::WeightedRademacher(std::vector<double> log_weights, bool sample_only)
    : log_weight_(std::move(log_weights)), sample_only_(sample_only) {
    if (log_weight_.empty()) throw std::invalid_argument("weight sequence must be non-empty");
    std::vector<double> log_sigma2(log_weight_.size());
    for (std::size_t i = 0; i < log_weight_.size(); ++i) log_sigma2[i] = 2.0 * log_weight_[i];
    init_variance_tables_log(log_sigma2);
    if (!sample_only_) {
        std::vector<double> w(log_weight_.size());
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::exp(log_weight_[i]);
        const double span = common_span(w);
        if (span > 0.0) span_ = span;
    }
    finish_init();
}

void WeightedRademacher::finish_init() {
    if (family_json_.is_null()) {
        nlohmann::json w = nlohmann::json::array();
        for (double lw : log_weight_) w.push_back(std::exp(lw));
        family_json_ = {{"family", "weighted"}, {"weights", w}};
    }
}

double WeightedRademacher::log_weight(std::size_t k) const {
    check_index(k);
    return log_weight_[k - 1];
}

double WeightedRademacher::weight(std::size_t k) const { return std::exp(log_weight(k)); }

std::optional<DiscreteDistribution> WeightedRademacher::law_at(std::size_t k) const {
    const double a = weight(k);
    if (!std::isfinite(a)) return std::nullopt;
    return DiscreteDistribution::from_atoms({{-a, 0.5}, {a, 0.5}});
}

double WeightedRademacher::sample(std::size_t k, Rng& rng) const {
    const double a = weight(k);
    return rng.coin() ? a : -a;
}

double WeightedRademacher::tail_second_moment(std::size_t k, double t) const {
    const double a = weight(k);
    return a > t ? a * a : 0.0;
}

double WeightedRademacher::neg_tail_first_moment(std::size_t k, double t) const {
    const double a = weight(k);
    return a > t ? 0.5 * a : 0.0;
}

nlohmann::json WeightedRademacher::to_json() const { return family_json_; }

std::shared_ptr<const WeightedRademacher> make_weighted_rademacher(std::vector<double> weights) {
    return std::make_shared<WeightedRademacher>(std::move(weights));
}

std::shared_ptr<const WeightedRademacher> make_ssrw(std::size_t n_max) {
    auto s = std::make_shared<WeightedRademacher>(std::vector<double>(n_max, 1.0));
    s->set_family_json({{"family", "ssrw"}});
    return s;
}

std::shared_ptr<const WeightedRademacher> make_power_weighted(double p, std::size_t n_max) {
    std::vector<double> w(n_max);
    for (std::size_t k = 1; k <= n_max; ++k) w[k - 1] = std::pow(static_cast<double>(k), p);
    auto s = std::make_shared<WeightedRademacher>(std::move(w));
    s->set_family_json({{"family", "weighted_power"}, {"p", p}});
    return s;
}

std::shared_ptr<const WeightedRademacher> make_weibullian(double alpha, std::size_t n_max) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("weibullian alpha must lie in (0,1)");
    std::vector<double> lw(n_max);
    for (std::size_t k = 1; k <= n_max; ++k) lw[k - 1] = std::pow(static_cast<double>(k), alpha);
    auto s = std::make_shared<WeightedRademacher>(std::move(lw), /*sample_only=*/true);
    s->set_family_json({{"family", "weibullian"}, {"alpha", alpha}});
    return s;
}

// ---------------------------------------------------------------------------
// FourPointSchedule

double FourPointSchedule::p_n(std::size_t n) {
    return 1.0 / (static_cast<double>(n) * std::log(2.0 + static_cast<double>(n)));
}

double FourPointSchedule::a_n(std::size_t n) {
    const double p = p_n(n);
    return std::sqrt((1.0 - static_cast<double>(n) * p) / (1.0 - p));
}

FourPointSchedule::FourPointSchedule(std::size_t n_max, double grid_step)
    : n_max_(n_max), grid_step_(grid_step) {
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    if (grid_step < 0.0) throw std::invalid_argument("grid_step must be >= 0");

    std::vector<double> sigma2(n_max, 1.0);
    if (grid_step_ > 0.0) {
        laws_.reserve(n_max);
        for (std::size_t n = 1; n <= n_max; ++n) {
            const double p = p_n(n);
            // Mean-preserving split of each positive atom onto the grid; the
            // negative side is an exact mirror, so the law stays centred.
            std::map<long long, double> pos;
            auto split = [&](double v, double q) {
                const double x = v / grid_step_;
                const long long l = static_cast<long long>(std::floor(x));
                const double frac = x - static_cast<double>(l);
                if (1.0 - frac > 0.0) pos[l] += q * (1.0 - frac);
                if (frac > 0.0) pos[l + 1] += q * frac;
            };
            split(a_n(n), 0.5 * (1.0 - p));
            split(std::sqrt(static_cast<double>(n)), 0.5 * p);

            std::map<long long, double> all;
            for (const auto& [idx, q] : pos) {
                all[idx] += q;
                all[-idx] += q;
            }
            std::vector<Atom> atoms;
            for (const auto& [idx, q] : all)
                if (q > 0.0) atoms.push_back({static_cast<double>(idx) * grid_step_, q});
            laws_.push_back(DiscreteDistribution::from_atoms(std::move(atoms)));
            sigma2[n - 1] = laws_.back().second_moment();
        }
    }
    init_variance_tables(sigma2);
}

std::optional<DiscreteDistribution> FourPointSchedule::law_at(std::size_t k) const {
    check_index(k);
    if (grid_step_ > 0.0) return laws_[k - 1];
    const double p = p_n(k);
    const double a = a_n(k);
    const double r = std::sqrt(static_cast<double>(k));
    return DiscreteDistribution::from_atoms(
        {{-r, 0.5 * p}, {-a, 0.5 * (1.0 - p)}, {a, 0.5 * (1.0 - p)}, {r, 0.5 * p}});
}

double FourPointSchedule::sigma2_at(std::size_t k) const {
    check_index(k);
    return grid_step_ > 0.0 ? sigma2_[k - 1] : 1.0;
}

double FourPointSchedule::essup_at(std::size_t k) const {
    check_index(k);
    if (grid_step_ > 0.0) return laws_[k - 1].essup();
    return std::sqrt(static_cast<double>(k));
}

std::optional<double> FourPointSchedule::lattice_span() const {
    if (grid_step_ > 0.0) return grid_step_;
    return std::nullopt;
}

double FourPointSchedule::sample(std::size_t k, Rng& rng) const {
    check_index(k);
    if (grid_step_ > 0.0) return laws_[k - 1].sample(rng);
    const double p = p_n(k);
    const double u = rng.uniform();
    if (u < 0.5 * p) return -std::sqrt(static_cast<double>(k));
    if (u < p) return std::sqrt(static_cast<double>(k));
    const double a = a_n(k);
    return (u < p + 0.5 * (1.0 - p)) ? -a : a;
}

double FourPointSchedule::tail_second_moment(std::size_t k, double t) const {
    check_index(k);
    if (grid_step_ > 0.0) return laws_[k - 1].tail_second_moment(t);
    const double p = p_n(k);
    const double a = a_n(k);
    double s = 0.0;
    if (std::sqrt(static_cast<double>(k)) > t) s += static_cast<double>(k) * p;
    if (a > t) s += a * a * (1.0 - p);
    return s;
}

double FourPointSchedule::neg_tail_first_moment(std::size_t k, double t) const {
    check_index(k);
    if (grid_step_ > 0.0) return laws_[k - 1].neg_tail_first_moment(t);
    const double p = p_n(k);
    const double a = a_n(k);
    const double r = std::sqrt(static_cast<double>(k));
    double s = 0.0;
    if (r > t) s += r * 0.5 * p;
    if (a > t) s += a * 0.5 * (1.0 - p);
    return s;
}

nlohmann::json FourPointSchedule::to_json() const {
    return {{"family", "four_point"}, {"grid_step", grid_step_}};
}

std::shared_ptr<const FourPointSchedule> make_four_point(std::size_t n_max) {
    return std::make_shared<FourPointSchedule>(n_max, 0.0);
}

std::shared_ptr<const FourPointSchedule> make_four_point_lattice(std::size_t n_max,
                                                                 double grid_step) {
    if (!(grid_step > 0.0)) throw std::invalid_argument("grid_step must be positive");
    return std::make_shared<FourPointSchedule>(n_max, grid_step);
}

// ---------------------------------------------------------------------------
// TruncatedParetoSchedule

TruncatedParetoSchedule::TruncatedParetoSchedule(double p, double grid_step, std::size_t n_max)
    : p_(p), grid_step_(grid_step), n_max_(n_max) {
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    if (grid_step < 0.0) throw std::invalid_argument("grid_step must be >= 0");

    std::vector<double> sigma2(n_max);
    for (std::size_t n = 1; n <= n_max; ++n) {
        const double c = truncation_level(n);
        sigma2[n - 1] = (c > 1.0) ? 2.0 * std::log(c) : 0.0;
    }

    if (grid_step_ > 0.0) {
        const double h = grid_step_;
        laws_.reserve(n_max);
        for (std::size_t n = 1; n <= n_max; ++n) {
            const double c = truncation_level(n);
            if (c <= 1.0) {
                // Fully truncated: the increment is identically zero.
                laws_.push_back(DiscreteDistribution::from_atoms({{0.0, 1.0}}));
                continue;
            }
            std::map<long long, double> mass;
            mass[0] = 1.0 / (c * c);  // truncated tail collapses to 0
            const long long m_lo = static_cast<long long>(std::floor((1.0 - h / 2) / h)) - 1;
            const long long m_hi = static_cast<long long>(std::ceil((c + h / 2) / h)) + 1;
            for (long long m = std::max<long long>(m_lo, 0); m <= m_hi; ++m) {
                const double a = std::max(1.0, static_cast<double>(m) * h - h / 2);
                const double b = std::min(c, static_cast<double>(m) * h + h / 2);
                if (b <= a) continue;
                const double cell = 0.5 * (1.0 / (a * a) - 1.0 / (b * b));
                if (cell <= 0.0) continue;
                mass[m] += cell;
                mass[-m] += cell;
            }
            std::vector<Atom> atoms;
            for (const auto& [idx, q] : mass)
                if (q > 0.0) atoms.push_back({static_cast<double>(idx) * h, q});
            if (atoms.size() < 2)
                throw std::invalid_argument("grid_step too coarse for the truncated-Pareto law");
            auto law = DiscreteDistribution::from_atoms(std::move(atoms));

            // Remove any floating-point mean residual by shifting mass between
            // the innermost opposite-sign atoms.
            const double mu = law.mean();
            if (std::abs(mu) > 1e-15) {
                std::vector<Atom> adj = law.atoms();
                double vplus = 0.0;
                std::size_t iplus = 0, iminus = 0;
                for (std::size_t i = 0; i < adj.size(); ++i)
                    if (adj[i].value > 0.0) {
                        iplus = i;
                        vplus = adj[i].value;
                        break;
                    }
                for (std::size_t i = adj.size(); i-- > 0;)
                    if (adj[i].value < 0.0) {
                        iminus = i;
                        break;
                    }
                const double delta = mu / (2.0 * vplus);
                adj[iplus].prob -= delta;
                adj[iminus].prob += delta;
                law = DiscreteDistribution::from_atoms(std::move(adj));
            }
            laws_.push_back(std::move(law));
            sigma2[n - 1] = laws_.back().second_moment();
        }
    }
    init_variance_tables(sigma2);
}

double TruncatedParetoSchedule::truncation_level(std::size_t k) const {
    return std::sqrt(static_cast<double>(k)) * std::pow(std::log(static_cast<double>(k) + 2.0), p_);
}

std::optional<DiscreteDistribution> TruncatedParetoSchedule::law_at(std::size_t k) const {
    check_index(k);
    if (grid_step_ > 0.0) return laws_[k - 1];
    return std::nullopt;
}

double TruncatedParetoSchedule::sample(std::size_t k, Rng& rng) const {
    check_index(k);
    const double c = truncation_level(k);
    const bool neg = rng.coin();
    const double mag = 1.0 / std::sqrt(rng.uniform_pos());  // P(|xi| > x) = x^-2
    if (mag > c) return 0.0;
    return neg ? -mag : mag;
}

double TruncatedParetoSchedule::essup_at(std::size_t k) const {
    const double c = truncation_level(k);
    return c > 1.0 ? c : 0.0;
}

std::optional<double> TruncatedParetoSchedule::lattice_span() const {
    if (grid_step_ > 0.0) return grid_step_;
    return std::nullopt;
}

double TruncatedParetoSchedule::tail_second_moment(std::size_t k, double t) const {
    const double c = truncation_level(k);
    if (c <= 1.0) return 0.0;
    const double s = std::max(t, 1.0);
    if (s >= c) return 0.0;
    return 2.0 * std::log(c / s);
}

double TruncatedParetoSchedule::neg_tail_first_moment(std::size_t k, double t) const {
    const double c = truncation_level(k);
    if (c <= 1.0) return 0.0;
    const double s = std::max(t, 1.0);
    if (s >= c) return 0.0;
    return 1.0 / s - 1.0 / c;
}

double TruncatedParetoSchedule::min_tail_moment(std::size_t k, double alpha, double s) const {
    const double c = truncation_level(k);
    if (c <= 1.0) return 0.0;
    // min picks the alpha-branch below s and the quadratic branch above it.
    const double m = std::min(std::max(s, 1.0), c);
    double total = 0.0;
    if (m > 1.0)  // integral of 2 x^{alpha-3} / s^alpha over [1, m]
        total += 2.0 / std::pow(s, alpha) * (std::pow(m, alpha - 2.0) - 1.0) / (alpha - 2.0);
    if (c > m)  // integral of 2 x^{-1} / s^2 over [m, c]
        total += 2.0 / (s * s) * std::log(c / m);
    return total;
}

nlohmann::json TruncatedParetoSchedule::to_json() const {
    return {{"family", "truncated_pareto"}, {"p", p_}, {"grid_step", grid_step_}};
}

std::shared_ptr<const TruncatedParetoSchedule> make_truncated_pareto(double p, double grid_step,
                                                                     std::size_t n_max) {
    return std::make_shared<TruncatedParetoSchedule>(p, grid_step, n_max);
}

// ---------------------------------------------------------------------------
// TabulatedSchedule

TabulatedSchedule::TabulatedSchedule(std::vector<DiscreteDistribution> laws)
    : laws_(std::move(laws)) {
    if (laws_.empty()) throw std::invalid_argument("schedule needs at least one law");
    std::vector<double> sigma2(laws_.size());
    std::vector<double> all_values;
    for (std::size_t i = 0; i < laws_.size(); ++i) {
        if (std::abs(laws_[i].mean()) > 1e-12)
            throw std::invalid_argument("increment laws must have zero mean");
        sigma2[i] = laws_[i].second_moment();
        for (const Atom& a : laws_[i].atoms())
            if (a.value != 0.0) all_values.push_back(std::abs(a.value));
    }
    init_variance_tables(sigma2);
    const double span = common_span(all_values);
    if (span > 0.0) span_ = span;
}

std::optional<DiscreteDistribution> TabulatedSchedule::law_at(std::size_t k) const {
    check_index(k);
    return laws_[k - 1];
}

double TabulatedSchedule::sample(std::size_t k, Rng& rng) const {
    check_index(k);
    return laws_[k - 1].sample(rng);
}

double TabulatedSchedule::essup_at(std::size_t k) const {
    check_index(k);
    return laws_[k - 1].essup();
}

nlohmann::json TabulatedSchedule::to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t k = 1; k <= laws_.size(); ++k)
        for (const Atom& a : laws_[k - 1].atoms())
            rows.push_back({{"k", k}, {"value", a.value}, {"prob", a.prob}});
    return {{"family", "tabulated"}, {"rows", rows}};
}

std::shared_ptr<const TabulatedSchedule> schedule_from_csv(std::istream& in) {
    std::map<std::size_t, std::vector<Atom>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string f0, f1, f2;
        if (!std::getline(ls, f0, ',') || !std::getline(ls, f1, ',') || !std::getline(ls, f2))
            throw std::invalid_argument("schedule CSV rows must be k,value,prob");
        if (f0 == "k") continue;  // header
        const std::size_t k = std::stoul(f0);
        rows[k].push_back({std::stod(f1), std::stod(f2)});
    }
    if (rows.empty()) throw std::invalid_argument("empty schedule CSV");
    std::vector<DiscreteDistribution> laws;
    std::size_t expect = 1;
    for (auto& [k, atoms] : rows) {
        if (k != expect++) throw std::invalid_argument("schedule CSV indices must cover 1..K");
        laws.push_back(DiscreteDistribution::from_atoms(std::move(atoms)));
    }
    return std::make_shared<TabulatedSchedule>(std::move(laws));
}

// ---------------------------------------------------------------------------

double common_span(const std::vector<double>& values) {
    if (values.empty()) return 0.0;
    double vmax = 0.0;
    for (double v : values) vmax = std::max(vmax, std::abs(v));
    if (vmax == 0.0) return 0.0;
    const double tol = 1e-9 * vmax;
    double g = std::abs(values[0]);
    for (double v : values) {
        g = real_gcd(std::max(g, std::abs(v)), std::min(g, std::abs(v)), tol);
        if (g <= tol) return 0.0;
    }
    for (double v : values) {
        const double q = std::abs(v) / g;
        if (std::abs(q - std::round(q)) > 1e-6) return 0.0;
    }
    return g;
}

bool feasibility_check(const IncrementSchedule& schedule, const Boundary& boundary,
                       std::size_t n) {
    if (n < 1) throw std::invalid_argument("feasibility horizon must be >= 1");
    double run = 0.0;
    for (std::size_t m = 1; m <= n; ++m) {
        run += schedule.essup_at(m);
        if (std::isinf(run)) return true;  // unbounded reach from here on
        if (!(run > boundary.g_at(m))) return false;
    }
    return true;
}

}  // namespace fpt
