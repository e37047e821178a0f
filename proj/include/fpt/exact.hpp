#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <vector>

#include "fpt/boundaries.hpp"
#include "fpt/increments.hpp"

namespace fpt {

// Sub-probability law on span*Z: masses[i] sits at span*(min_index + i).
struct LatticeDistribution {
    double span = 1.0;
    long long min_index = 0;
    std::vector<double> masses;

    double value(std::size_t i) const { return span * static_cast<double>(min_index + static_cast<long long>(i)); }
    double total_mass() const;
    double mean() const;
    // P(V > x)
    double tail_above(double x) const;
    // E (V - shift)^+
    double positive_part_mean(double shift) const;
};

class IncompatibleLattice : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(const std::string& what, std::size_t n)
        : std::runtime_error(what), n_reached(n) {}
    std::size_t n_reached;
};

struct EvolveOptions {
    std::size_t max_states = 20'000'000;
    // n values at which the surviving (resp. free) law is retained; the final n
    // is always kept.
    std::vector<std::size_t> snapshots;
};

// Per-step output of the killed forward DP.
struct ExactResult {
    double span = 1.0;
    std::vector<double> survival;        // P(T_g > n), index n-1
    std::vector<double> ez_star;         // E[S_n - g_n; T_g > n]
    std::vector<double> absorbed_mass;   // P(T_g <= n)
    std::vector<double> absorbed_neg_s;  // E[-S_{T_g}; T_g <= n]
    std::vector<double> g;               // boundary as used in identities
    std::vector<double> g_snapped;       // lattice-floored kill level
    double lost_mass = 0.0;              // flushed sub-1e-300 mass
    std::map<std::size_t, LatticeDistribution> laws;  // surviving laws at snapshots

    std::size_t n_max() const { return survival.size(); }
    double survival_at(std::size_t n) const { return survival.at(n - 1); }
    double ez_star_at(std::size_t n) const { return ez_star.at(n - 1); }
    double absorbed_mass_at(std::size_t n) const { return absorbed_mass.at(n - 1); }
    double absorbed_neg_s_at(std::size_t n) const { return absorbed_neg_s.at(n - 1); }
    const LatticeDistribution& law_at(std::size_t n) const;
};

// Evolve the sub-probability law of the surviving walk, killing mass at
// S_n <= g_n after each convolution step.
ExactResult evolve(const IncrementSchedule& schedule, const Boundary& boundary, std::size_t n_max,
                   const EvolveOptions& options = {});

// Unconditioned law of S_n at the requested snapshot indices.
std::map<std::size_t, LatticeDistribution> evolve_free(const IncrementSchedule& schedule,
                                                       std::size_t n_max,
                                                       std::vector<std::size_t> snapshots = {},
                                                       std::size_t max_states = 20'000'000);

// |E Z*_n - (E[-S_{T_g}; T_g<=n] - g_n P(T_g>n))|, the optional-stopping residual.
double check_martingale_identity(const ExactResult& result, const Boundary& boundary, std::size_t n);

// Pointwise stochastic domination of the free law by the conditioned one.
bool check_domination(const ExactResult& result,
                      const std::map<std::size_t, LatticeDistribution>& free_laws, std::size_t n);

// E(S_n - g_n)^+ P(T_g > n) <= E Z*_n.
bool check_up7(const ExactResult& result,
               const std::map<std::size_t, LatticeDistribution>& free_laws, std::size_t n);

// E Z*_n non-decreasing from `from` on; requires the boundary non-increasing there.
bool submartingale_check(const ExactResult& result, const Boundary& boundary, std::size_t from);

// P(T_0 > 2m) = (1/2) C(2m,m) 2^{-2m} for the simple symmetric walk.
double ssrw_survival_oracle(std::size_t m);

// Columns: n, B_n2, survival, ez_star, absorbed_neg_s, m1_residual.
void write_exact_csv(const ExactResult& result, const IncrementSchedule& schedule,
                     const Boundary& boundary, std::ostream& out);

}  // namespace fpt
