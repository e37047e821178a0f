#pragma once

// Shared helpers for the unit and acceptance suites: a brute-force path
// enumeration oracle and generators for random small lattice instances.

#include <cmath>
#include <memory>
#include <vector>

#include "fpt/boundaries.hpp"
#include "fpt/increments.hpp"
#include "fpt/rng.hpp"

namespace fpt::testutil {

struct EnumResult {
    double survival = 0.0;
    double ez_star = 0.0;
    double absorbed_mass = 0.0;
    double absorbed_neg_s = 0.0;
};

// Exhaustive path enumeration; exponential in n, intended for n <= 8.
inline EnumResult enumerate_walk(const IncrementSchedule& schedule, const Boundary& boundary,
                                 std::size_t n) {
    EnumResult res;
    const double g_n = boundary.g_at(n);
    struct Frame {
        double s;
        double p;
    };
    std::vector<Frame> level{{0.0, 1.0}};
    for (std::size_t k = 1; k <= n; ++k) {
        const auto law = schedule.law_at(k);
        const double g_k = boundary.g_at(k);
        std::vector<Frame> next;
        next.reserve(level.size() * law->atoms().size());
        for (const Frame& f : level) {
            for (const Atom& a : law->atoms()) {
                const double s = f.s + a.value;
                const double p = f.p * a.prob;
                if (s <= g_k) {
                    res.absorbed_mass += p;
                    res.absorbed_neg_s += -s * p;
                } else if (k == n) {
                    res.survival += p;
                    res.ez_star += (s - g_n) * p;
                } else {
                    next.push_back({s, p});
                }
            }
        }
        level.swap(next);
    }
    return res;
}

// Random zero-mean lattice law with 2 or 3 atoms on span*Z.
inline DiscreteDistribution random_lattice_law(Rng& rng, double span) {
    for (;;) {
        const bool three = rng.coin();
        const long long i = -(1 + static_cast<long long>(rng.next_u64() % 3));
        const long long j = 1 + static_cast<long long>(rng.next_u64() % 3);
        const double vi = static_cast<double>(i) * span;
        const double vj = static_cast<double>(j) * span;
        if (!three) {
            const double p = vj / (vj - vi);  // zero mean
            if (p <= 0.0 || p >= 1.0) continue;
            return DiscreteDistribution::from_atoms({{vi, p}, {vj, 1.0 - p}});
        }
        const double q = 0.1 + 0.5 * rng.uniform();  // mass at zero
        const double rest = 1.0 - q;
        const double pi = rest * vj / (vj - vi);
        const double pj = rest - pi;
        if (pi <= 1e-3 || pj <= 1e-3) continue;
        return DiscreteDistribution::from_atoms({{vi, pi}, {0.0, q}, {vj, pj}});
    }
}

inline std::shared_ptr<const TabulatedSchedule> random_lattice_schedule(Rng& rng, std::size_t n,
                                                                        double span) {
    std::vector<DiscreteDistribution> laws;
    laws.reserve(n);
    for (std::size_t k = 0; k < n; ++k) laws.push_back(random_lattice_law(rng, span));
    return std::make_shared<TabulatedSchedule>(std::move(laws));
}

// Random integer-valued boundary on the same lattice, biased non-positive so
// survival usually stays positive.
inline BoundaryPtr random_integer_boundary(Rng& rng, std::size_t n, double span) {
    std::vector<double> g(n);
    for (std::size_t k = 0; k < n; ++k)
        g[k] = span * static_cast<double>(static_cast<long long>(rng.next_u64() % 4) - 3);
    return make_table_boundary(std::move(g));
}

}  // namespace fpt::testutil
