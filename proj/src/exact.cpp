#include "fpt/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <set>

#include "fpt/rng.hpp"

namespace fpt {

namespace {

constexpr double kFlush = 1e-300;  // masses below this are dropped as lost

long long kill_index(double g, double span) {
    return static_cast<long long>(std::floor(g / span + 1e-9));
}

}  // namespace

double LatticeDistribution::total_mass() const {
    KahanSum s;
    for (double m : masses) s.add(m);
    return s.value();
}

double LatticeDistribution::mean() const {
    KahanSum s;
    for (std::size_t i = 0; i < masses.size(); ++i) s.add(masses[i] * value(i));
    return s.value();
}

double LatticeDistribution::tail_above(double x) const {
    KahanSum s;
    for (std::size_t i = masses.size(); i-- > 0;) {
        if (value(i) > x)
            s.add(masses[i]);
        else
            break;
    }
    return s.value();
}

double LatticeDistribution::positive_part_mean(double shift) const {
    KahanSum s;
    for (std::size_t i = 0; i < masses.size(); ++i) {
        const double d = value(i) - shift;
        if (d > 0.0) s.add(masses[i] * d);
    }
    return s.value();
}

const LatticeDistribution& ExactResult::law_at(std::size_t n) const {
    const auto it = laws.find(n);
    if (it == laws.end())
        throw std::out_of_range("no law snapshot was kept at the requested step");
    return it->second;
}

namespace {

struct Offsets {
    std::vector<long long> idx;
    std::vector<double> prob;
};

Offsets lattice_offsets(const DiscreteDistribution& law, double span) {
    Offsets o;
    for (const Atom& a : law.atoms()) {
        const long long q = static_cast<long long>(std::llround(a.value / span));
        if (std::abs(a.value - static_cast<double>(q) * span) >
            1e-9 * std::max(1.0, std::abs(a.value)))
            throw IncompatibleLattice("atom value off the schedule lattice");
        o.idx.push_back(q);
        o.prob.push_back(a.prob);
    }
    return o;
}

// Shared state evolution: convolve, optionally kill, trim, flush.
struct DpState {
    std::vector<double> mass{1.0};
    long long lo = 0;
    double lost = 0.0;

    void step(const Offsets& off, std::size_t max_states, std::size_t n) {
        const long long omin = *std::min_element(off.idx.begin(), off.idx.end());
        const long long omax = *std::max_element(off.idx.begin(), off.idx.end());
        const std::size_t out_size = mass.size() + static_cast<std::size_t>(omax - omin);
        if (out_size > max_states)
            throw BudgetExceeded("lattice state width exceeds the configured budget", n);
        std::vector<double> out(out_size, 0.0);
        for (std::size_t i = 0; i < mass.size(); ++i) {
            const double m = mass[i];
            if (m == 0.0) continue;
            for (std::size_t j = 0; j < off.idx.size(); ++j)
                out[i + static_cast<std::size_t>(off.idx[j] - omin)] += m * off.prob[j];
        }
        mass.swap(out);
        lo += omin;
    }

    void trim_and_flush() {
        for (double& m : mass)
            if (m != 0.0 && m < kFlush) {
                lost += m;
                m = 0.0;
            }
        std::size_t first = 0, last = mass.size();
        while (first < last && mass[first] == 0.0) ++first;
        while (last > first && mass[last - 1] == 0.0) --last;
        if (first > 0 || last < mass.size()) {
            mass = std::vector<double>(mass.begin() + static_cast<std::ptrdiff_t>(first),
                                       mass.begin() + static_cast<std::ptrdiff_t>(last));
            lo += static_cast<long long>(first);
        }
        if (mass.empty()) {
            mass = {0.0};
        }
    }
};

}  // namespace

ExactResult evolve(const IncrementSchedule& schedule, const Boundary& boundary, std::size_t n_max,
                   const EvolveOptions& options) {
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    const auto span_opt = schedule.lattice_span();
    if (!span_opt) throw IncompatibleLattice("schedule is not lattice-capable");
    const double span = *span_opt;

    std::set<std::size_t> snaps(options.snapshots.begin(), options.snapshots.end());
    snaps.insert(n_max);

    ExactResult res;
    res.span = span;
    res.survival.reserve(n_max);

    DpState st;
    KahanSum absorbed_mass, absorbed_neg_s;

    for (std::size_t n = 1; n <= n_max; ++n) {
        const auto law = schedule.law_at(n);
        if (!law) throw IncompatibleLattice("schedule has no discrete law at step " +
                                            std::to_string(n));
        st.step(lattice_offsets(*law, span), options.max_states, n);

        const double gn = boundary.g_at(n);
        const long long kidx = kill_index(gn, span);
        KahanSum killed, killed_s;
        const long long hi = st.lo + static_cast<long long>(st.mass.size()) - 1;
        for (long long idx = st.lo; idx <= std::min(kidx, hi); ++idx) {
            double& m = st.mass[static_cast<std::size_t>(idx - st.lo)];
            if (m == 0.0) continue;
            killed.add(m);
            killed_s.add(m * (static_cast<double>(idx) * span));
            m = 0.0;
        }
        absorbed_mass.add(killed.value());
        absorbed_neg_s.add(-killed_s.value());

        st.trim_and_flush();

        KahanSum surv, ez;
        for (std::size_t i = 0; i < st.mass.size(); ++i) {
            surv.add(st.mass[i]);
            ez.add(st.mass[i] *
                   (static_cast<double>(st.lo + static_cast<long long>(i)) * span - gn));
        }

        res.survival.push_back(surv.value());
        res.ez_star.push_back(ez.value());
        res.absorbed_mass.push_back(absorbed_mass.value());
        res.absorbed_neg_s.push_back(absorbed_neg_s.value());
        res.g.push_back(gn);
        res.g_snapped.push_back(static_cast<double>(kidx) * span);

        if (snaps.count(n))
            res.laws.emplace(n, LatticeDistribution{span, st.lo, st.mass});
    }
    res.lost_mass = st.lost;
    return res;
}

std::map<std::size_t, LatticeDistribution> evolve_free(const IncrementSchedule& schedule,
                                                       std::size_t n_max,
                                                       std::vector<std::size_t> snapshots,
                                                       std::size_t max_states) {
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    const auto span_opt = schedule.lattice_span();
    if (!span_opt) throw IncompatibleLattice("schedule is not lattice-capable");
    const double span = *span_opt;

    std::set<std::size_t> snaps(snapshots.begin(), snapshots.end());
    snaps.insert(n_max);

    std::map<std::size_t, LatticeDistribution> out;
    DpState st;
    for (std::size_t n = 1; n <= n_max; ++n) {
        const auto law = schedule.law_at(n);
        if (!law) throw IncompatibleLattice("schedule has no discrete law at step " +
                                            std::to_string(n));
        st.step(lattice_offsets(*law, span), max_states, n);
        st.trim_and_flush();
        if (snaps.count(n)) out.emplace(n, LatticeDistribution{span, st.lo, st.mass});
    }
    return out;
}

double check_martingale_identity(const ExactResult& result, const Boundary& boundary,
                                 std::size_t n) {
    const double gn = boundary.g_at(n);
    const double rhs = result.absorbed_neg_s_at(n) - gn * result.survival_at(n);
    return std::abs(result.ez_star_at(n) - rhs);
}

bool check_domination(const ExactResult& result,
                      const std::map<std::size_t, LatticeDistribution>& free_laws,
                      std::size_t n) {
    const double surv = result.survival_at(n);
    if (!(surv > 0.0))
        throw std::domain_error("domination check undefined: no surviving mass");
    const LatticeDistribution& cond = result.law_at(n);
    const LatticeDistribution& free = free_laws.at(n);
    if (std::abs(cond.span - free.span) > 1e-12 * cond.span)
        throw IncompatibleLattice("conditional and free laws use different spans");

    const long long lo = std::min(cond.min_index, free.min_index);
    const long long hi =
        std::max(cond.min_index + static_cast<long long>(cond.masses.size()),
                 free.min_index + static_cast<long long>(free.masses.size())) -
        1;

    double cond_tail = 0.0, free_tail = 0.0;
    auto mass_at = [](const LatticeDistribution& d, long long idx) {
        const long long off = idx - d.min_index;
        if (off < 0 || off >= static_cast<long long>(d.masses.size())) return 0.0;
        return d.masses[static_cast<std::size_t>(off)];
    };
    // Walk downward accumulating tails P(. > idx*span): compare before adding
    // the mass at idx (tail is strictly-above).
    for (long long idx = hi; idx >= lo; --idx) {
        if (cond_tail / surv < free_tail - 1e-12) return false;
        cond_tail += mass_at(cond, idx);
        free_tail += mass_at(free, idx);
    }
    return cond_tail / surv >= free_tail - 1e-12;
}

bool check_up7(const ExactResult& result,
               const std::map<std::size_t, LatticeDistribution>& free_laws, std::size_t n) {
    const double gn = result.g.at(n - 1);
    const double ez_plus = free_laws.at(n).positive_part_mean(gn);
    return ez_plus * result.survival_at(n) <= result.ez_star_at(n) + 1e-12;
}

bool submartingale_check(const ExactResult& result, const Boundary& boundary, std::size_t from) {
    if (from < 1) throw std::invalid_argument("submartingale_check: from must be >= 1");
    for (std::size_t n = from; n + 1 <= result.n_max(); ++n)
        if (boundary.g_at(n + 1) > boundary.g_at(n))
            throw std::logic_error("submartingale_check requires a non-increasing boundary");
    for (std::size_t n = from; n + 1 <= result.n_max(); ++n)
        if (result.ez_star_at(n + 1) < result.ez_star_at(n) - 1e-12) return false;
    return true;
}

double ssrw_survival_oracle(std::size_t m) {
    if (m < 1) throw std::invalid_argument("ssrw_survival_oracle: m must be >= 1");
    // P(T_0 > 2m) = (1/2) C(2m,m) 2^{-2m} = (1/2) prod_{j<=m} (2j-1)/(2j)
    double prod = 1.0;
    for (std::size_t j = 1; j <= m; ++j)
        prod *= (2.0 * static_cast<double>(j) - 1.0) / (2.0 * static_cast<double>(j));
    return 0.5 * prod;
}

void write_exact_csv(const ExactResult& result, const IncrementSchedule& schedule,
                     const Boundary& boundary, std::ostream& out) {
    out << "n,B_n2,survival,ez_star,absorbed_neg_s,m1_residual\n";
    out.precision(17);
    for (std::size_t n = 1; n <= result.n_max(); ++n) {
        out << n << ',' << schedule.cum_var(n) << ',' << result.survival_at(n) << ','
            << result.ez_star_at(n) << ',' << result.absorbed_neg_s_at(n) << ','
            << check_martingale_identity(result, boundary, n) << '\n';
    }
}

}  // namespace fpt
