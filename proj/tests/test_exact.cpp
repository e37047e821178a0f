#include <cmath>
#include <sstream>

#include "doctest.h"
#include "fpt/exact.hpp"
#include "test_util.hpp"

using namespace fpt;

TEST_CASE("ssrw survival against the closed-form oracle") {
    CHECK(ssrw_survival_oracle(1) == doctest::Approx(0.25));
    CHECK(ssrw_survival_oracle(2) == doctest::Approx(3.0 / 16.0));

    auto s = make_ssrw(40);
    auto b = make_constant_boundary(0.0);
    const ExactResult res = evolve(*s, *b, 40);
    for (std::size_t m = 1; m <= 20; ++m)
        CHECK(std::abs(res.survival_at(2 * m) - ssrw_survival_oracle(m)) < 1e-12);
}

TEST_CASE("ssrw overshoot expectation is exactly one half") {
    auto s = make_ssrw(40);
    const ExactResult res = evolve(*s, *make_constant_boundary(0.0), 40);
    for (std::size_t n = 1; n <= 40; ++n)
        CHECK(res.ez_star_at(n) == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("free evolution") {
    auto s = make_ssrw(4);
    auto laws = evolve_free(*s, 2);
    const LatticeDistribution& l2 = laws.at(2);
    CHECK(l2.total_mass() == doctest::Approx(1.0));
    CHECK(l2.span == 1.0);
    CHECK(l2.min_index == -2);
    CHECK(l2.masses.size() == 5);
    CHECK(l2.masses[0] == doctest::Approx(0.25));
    CHECK(l2.masses[2] == doctest::Approx(0.5));
    CHECK(l2.masses[4] == doctest::Approx(0.25));

    auto fp = make_four_point_lattice(1, 0.5);
    auto f1 = evolve_free(*fp, 1);
    CHECK(f1.at(1).total_mass() == doctest::Approx(1.0));
    CHECK(f1.at(1).tail_above(0.0) == doctest::Approx(0.5));
}

TEST_CASE("martingale identity") {
    auto s = make_ssrw(10);
    SUBCASE("zero boundary") {
        const ExactResult res = evolve(*s, *make_constant_boundary(0.0), 10);
        for (std::size_t n = 1; n <= 10; ++n)
            CHECK(check_martingale_identity(res, *make_constant_boundary(0.0), n) < 1e-12);
    }
    SUBCASE("boundary at -1, one step") {
        auto b = make_constant_boundary(-1.0);
        const ExactResult res = evolve(*s, *b, 1);
        CHECK(res.ez_star_at(1) == doctest::Approx(1.0));
        CHECK(res.survival_at(1) == doctest::Approx(0.5));
        CHECK(res.absorbed_neg_s_at(1) == doctest::Approx(0.5));
        CHECK(check_martingale_identity(res, *b, 1) < 1e-14);
    }
}

TEST_CASE("domination and up7 inequalities") {
    auto s = make_ssrw(6);
    auto b = make_constant_boundary(0.0);
    EvolveOptions opts;
    opts.snapshots = {2, 4, 6};
    const ExactResult res = evolve(*s, *b, 6, opts);
    auto free = evolve_free(*s, 6, {2, 4, 6});
    for (std::size_t n : {std::size_t{2}, std::size_t{4}, std::size_t{6}}) {
        CHECK(check_domination(res, free, n));
        CHECK(check_up7(res, free, n));
    }
    // n=2 conditional law is a point mass at 2
    const LatticeDistribution& cond = res.law_at(2);
    CHECK(cond.total_mass() == doctest::Approx(0.25));
    CHECK(cond.mean() == doctest::Approx(0.5));  // 2 * 0.25

    // E S_2^+ = 1/2 so (Up7) is strict: 1/2 * 1/4 <= 1/2
    CHECK(free.at(2).positive_part_mean(0.0) == doctest::Approx(0.5));

    SUBCASE("four point lattice instance") {
        auto fp = make_four_point_lattice(4, 1.0 / 32.0);
        EvolveOptions o;
        o.snapshots = {3, 4};
        const ExactResult r2 = evolve(*fp, *b, 4, o);
        auto fl = evolve_free(*fp, 4, {3, 4});
        CHECK(check_domination(r2, fl, 3));
        CHECK(check_up7(r2, fl, 4));
        auto bm1 = make_constant_boundary(-1.0);
        const ExactResult r3 = evolve(*fp, *bm1, 4, o);
        auto fl2 = evolve_free(*fp, 4, {4});
        CHECK(check_up7(r3, fl2, 4));
    }
}

TEST_CASE("domination throws without surviving mass") {
    auto s = make_ssrw(2);
    const ExactResult res = evolve(*s, *make_constant_boundary(5.0), 2);
    CHECK(res.survival_at(1) == 0.0);
    auto free = evolve_free(*s, 2);
    CHECK_THROWS_AS(check_domination(res, free, 2), std::domain_error);
}

TEST_CASE("submartingale check") {
    auto s = make_ssrw(50);
    SUBCASE("constant boundaries") {
        for (double x : {0.0, -1.0, -3.0}) {
            auto b = make_constant_boundary(x);
            CHECK(submartingale_check(evolve(*s, *b, 50), *b, 1));
        }
    }
    SUBCASE("strictly decreasing boundary") {
        std::vector<double> g(50);
        for (std::size_t n = 1; n <= 50; ++n) g[n - 1] = -static_cast<double>(n) / 100.0;
        auto b = make_table_boundary(g);
        CHECK(submartingale_check(evolve(*s, *b, 50), *b, 1));
    }
    SUBCASE("increasing boundary violates the precondition") {
        auto b = make_table_boundary({-2.0, -1.0, 0.0});
        const ExactResult res = evolve(*s, *b, 3);
        CHECK_THROWS_AS(submartingale_check(res, *b, 1), std::logic_error);
    }
}

TEST_CASE("conservation of mass") {
    auto s = make_ssrw(40);
    const ExactResult res = evolve(*s, *make_constant_boundary(0.0), 40);
    for (std::size_t n = 1; n <= 40; ++n) {
        CHECK(std::abs(res.survival_at(n) + res.absorbed_mass_at(n) - 1.0) < 1e-12);
        if (n > 1) CHECK(res.survival_at(n) <= res.survival_at(n - 1) + 1e-15);
    }
    CHECK(res.lost_mass < 1e-12);
}

TEST_CASE("off-lattice boundary snaps to the lattice floor") {
    auto s = make_ssrw(4);
    auto b = make_constant_boundary(-0.5);
    const ExactResult res = evolve(*s, *b, 4);
    CHECK(res.g_snapped.front() == doctest::Approx(-1.0));
    // killing at <= -1 equals the integer boundary -1
    auto bi = make_constant_boundary(-1.0);
    const ExactResult ri = evolve(*s, *bi, 4);
    for (std::size_t n = 1; n <= 4; ++n)
        CHECK(res.survival_at(n) == doctest::Approx(ri.survival_at(n)));
}

TEST_CASE("budget exceeded carries the step reached") {
    auto s = make_ssrw(100);
    EvolveOptions opts;
    opts.max_states = 10;
    try {
        evolve(*s, *make_constant_boundary(0.0), 100, opts);
        FAIL("expected BudgetExceeded");
    } catch (const BudgetExceeded& e) {
        CHECK(e.n_reached > 1);
        CHECK(e.n_reached <= 10);
    }
}

TEST_CASE("non-lattice schedules are refused") {
    auto s = make_four_point(5);
    CHECK_THROWS_AS(evolve(*s, *make_constant_boundary(0.0), 5), IncompatibleLattice);
    auto w = make_weibullian(0.5, 5);
    CHECK_THROWS_AS(evolve(*w, *make_constant_boundary(0.0), 5), IncompatibleLattice);
}

TEST_CASE("evolve matches exhaustive enumeration on random instances") {
    Rng rng(77);
    for (int rep = 0; rep < 50; ++rep) {
        const double span = rng.coin() ? 1.0 : 0.5;
        const std::size_t n = 3 + rng.next_u64() % 6;  // 3..8
        auto s = fpt::testutil::random_lattice_schedule(rng, n, span);
        auto b = fpt::testutil::random_integer_boundary(rng, n, span);
        const auto oracle = fpt::testutil::enumerate_walk(*s, *b, n);
        const ExactResult res = evolve(*s, *b, n);
        CHECK(std::abs(res.survival_at(n) - oracle.survival) < 1e-12);
        CHECK(std::abs(res.ez_star_at(n) - oracle.ez_star) < 1e-12);
        CHECK(std::abs(res.absorbed_neg_s_at(n) - oracle.absorbed_neg_s) < 1e-12);
        CHECK(check_martingale_identity(res, *b, n) < 1e-12);
    }
}

TEST_CASE("exact csv export") {
    auto s = make_ssrw(4);
    auto b = make_constant_boundary(0.0);
    const ExactResult res = evolve(*s, *b, 4);
    std::ostringstream out;
    write_exact_csv(res, *s, *b, out);
    const std::string text = out.str();
    CHECK(text.rfind("n,B_n2,survival,ez_star,absorbed_neg_s,m1_residual\n", 0) == 0);
    CHECK(text.find("\n4,") != std::string::npos);
}
