#include <cmath>
#include <sstream>

#include "doctest.h"
#include "fpt/increments.hpp"
#include "test_util.hpp"

using namespace fpt;

TEST_CASE("discrete distribution construction and moments") {
    auto d = DiscreteDistribution::from_atoms({{1.0, 0.25}, {-1.0, 0.5}, {3.0, 0.25}});
    CHECK(d.atoms().size() == 3);
    CHECK(d.atoms()[0].value == -1.0);
    CHECK(d.mean() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(d.second_moment() == doctest::Approx(0.5 + 0.25 + 2.25));
    CHECK(d.essup() == 3.0);
    CHECK(d.tail_second_moment(1.0) == doctest::Approx(2.25));
    CHECK(d.tail_second_moment(0.5) == doctest::Approx(3.0));
    CHECK(d.neg_tail_first_moment(0.5) == doctest::Approx(0.5));
    CHECK(d.neg_tail_first_moment(1.0) == 0.0);

    CHECK_THROWS_AS(DiscreteDistribution::from_atoms({{0.0, 0.5}}), std::invalid_argument);
    CHECK_THROWS_AS(DiscreteDistribution::from_atoms({{0.0, 0.5}, {1.0, 0.6}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(DiscreteDistribution::from_atoms({{0.0, -0.5}, {1.0, 1.5}}),
                    std::invalid_argument);
}

TEST_CASE("duplicate atoms merge") {
    auto d = DiscreteDistribution::from_atoms({{1.0, 0.25}, {1.0, 0.25}, {-1.0, 0.5}});
    CHECK(d.atoms().size() == 2);
    CHECK(d.atoms()[1].prob == doctest::Approx(0.5));
}

TEST_CASE("weighted rademacher basics") {
    auto unit = make_weighted_rademacher({1.0, 1.0, 1.0});
    auto law = unit->law_at(3);
    REQUIRE(law.has_value());
    CHECK(law->atoms()[0].value == -1.0);
    CHECK(law->atoms()[1].value == 1.0);
    CHECK(law->atoms()[0].prob == 0.5);
    CHECK(unit->cum_var(3) == doctest::Approx(3.0));

    auto lin = make_weighted_rademacher({1.0, 2.0, 3.0});
    CHECK(lin->cum_var(3) == doctest::Approx(14.0));
    CHECK(lin->sigma2_at(2) == doctest::Approx(4.0));
    CHECK(lin->essup_at(2) == doctest::Approx(2.0));
    REQUIRE(lin->lattice_span().has_value());
    CHECK(*lin->lattice_span() == doctest::Approx(1.0));

    CHECK(lin->tail_second_moment(3, 2.5) == doctest::Approx(9.0));
    CHECK(lin->tail_second_moment(3, 3.5) == 0.0);
    CHECK(lin->neg_tail_first_moment(3, 2.5) == doctest::Approx(1.5));

    CHECK_THROWS_AS(make_weighted_rademacher({1.0, -1.0}), std::invalid_argument);
    CHECK_THROWS_AS(make_weighted_rademacher({}), std::invalid_argument);
}

TEST_CASE("weighted rademacher irrational weights have no lattice") {
    auto s = make_weighted_rademacher({1.0, std::sqrt(2.0)});
    CHECK_FALSE(s->lattice_span().has_value());
}

TEST_CASE("cum_var increments equal sigma2") {
    auto s = make_power_weighted(1.0, 20);
    for (std::size_t n = 1; n <= 20; ++n)
        CHECK(s->cum_var(n) - s->cum_var(n - 1) == doctest::Approx(s->sigma2_at(n)).epsilon(1e-13));
    CHECK(s->cum_var(0) == 0.0);
}

TEST_CASE("four point schedule") {
    auto s = make_four_point(100);
    SUBCASE("degenerate law at n=1") {
        auto law = s->law_at(1);
        REQUIRE(law.has_value());
        CHECK(law->atoms().size() == 2);
        CHECK(law->atoms()[0].value == doctest::Approx(-1.0));
        CHECK(law->atoms()[0].prob == doctest::Approx(0.5));
    }
    SUBCASE("zero mean and unit variance at every n") {
        for (std::size_t n = 1; n <= 100; ++n) {
            auto law = s->law_at(n);
            CHECK(std::abs(law->mean()) < 1e-12);
            CHECK(law->second_moment() == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(s->sigma2_at(n) == 1.0);
        }
        CHECK(s->cum_var(100) == doctest::Approx(100.0));
    }
    SUBCASE("essup and lattice") {
        CHECK(s->essup_at(49) == doctest::Approx(7.0));
        CHECK_FALSE(s->lattice_span().has_value());
    }
}

TEST_CASE("four point lattice projection preserves mean and near-unit variance") {
    auto s = make_four_point_lattice(50, 1.0 / 64.0);
    REQUIRE(s->lattice_span().has_value());
    CHECK(*s->lattice_span() == doctest::Approx(1.0 / 64.0));
    for (std::size_t n = 1; n <= 50; ++n) {
        auto law = s->law_at(n);
        REQUIRE(law.has_value());
        CHECK(std::abs(law->mean()) < 1e-12);
        CHECK(law->second_moment() == doctest::Approx(1.0).epsilon(2e-3));
        CHECK(s->sigma2_at(n) == doctest::Approx(law->second_moment()).epsilon(1e-12));
    }
}

TEST_CASE("weibullian schedule") {
    CHECK_THROWS_AS(make_weibullian(0.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(make_weibullian(1.0, 10), std::invalid_argument);

    auto s = make_weibullian(0.5, 10);
    CHECK(std::exp(s->log_weight(1)) == doctest::Approx(std::exp(1.0)));
    CHECK_FALSE(s->lattice_span().has_value());

    auto t = make_weibullian(0.3, 30);
    double direct = 0.0;
    for (std::size_t k = 1; k <= 30; ++k)
        direct += std::exp(2.0 * std::pow(static_cast<double>(k), 0.3));
    CHECK(t->log_cum_var(30) == doctest::Approx(std::log(direct)).epsilon(1e-10));
}

TEST_CASE("weibullian variance asymptotics") {
    const double alpha = 0.4;
    auto s = make_weibullian(alpha, 2000);
    const double n = 2000.0;
    const double predicted =
        std::log(std::pow(n, 1.0 - alpha) / (2.0 * alpha)) + 2.0 * std::pow(n, alpha);
    CHECK(s->log_cum_var(2000) == doctest::Approx(predicted).epsilon(0.01));
}

TEST_CASE("truncated pareto schedule") {
    auto s = make_truncated_pareto(0.0, 0.0, 10);
    CHECK(s->truncation_level(2) == doctest::Approx(std::sqrt(2.0)));
    CHECK(s->essup_at(2) == doctest::Approx(std::sqrt(2.0)));
    CHECK_FALSE(s->law_at(2).has_value());
    CHECK_FALSE(s->lattice_span().has_value());
    CHECK(s->sigma2_at(9) == doctest::Approx(2.0 * std::log(s->truncation_level(9))));

    SUBCASE("closed-form tails") {
        const double c = s->truncation_level(9);
        CHECK(s->tail_second_moment(9, 1.5) == doctest::Approx(2.0 * std::log(c / 1.5)));
        CHECK(s->tail_second_moment(9, c + 1.0) == 0.0);
        CHECK(s->neg_tail_first_moment(9, 1.5) == doctest::Approx(1.0 / 1.5 - 1.0 / c));
    }

    SUBCASE("lattice discretization is centred and mass-exact") {
        auto g = make_truncated_pareto(0.0, 0.125, 12);
        for (std::size_t n = 1; n <= 12; ++n) {
            auto law = g->law_at(n);
            REQUIRE(law.has_value());
            CHECK(std::abs(law->mean()) < 1e-13);
            double total = 0.0;
            for (const Atom& a : law->atoms()) total += a.prob;
            CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        }
        CHECK(*g->lattice_span() == doctest::Approx(0.125));
    }

    SUBCASE("coarse grid is refused") {
        CHECK_THROWS_AS(make_truncated_pareto(0.0, 50.0, 5), std::invalid_argument);
    }

    SUBCASE("B_n^2 ~ n log n") {
        auto big = make_truncated_pareto(0.0, 0.0, 200000);
        const double n = 200000.0;
        // sum of log k = n log n - n + O(log n)
        CHECK(big->cum_var(200000) == doctest::Approx(n * (std::log(n) - 1.0)).epsilon(0.01));
    }
}

TEST_CASE("truncated pareto sampler matches the tail law") {
    auto s = make_truncated_pareto(0.0, 0.0, 100);
    Rng rng(123);
    const double c = s->truncation_level(100);
    std::size_t beyond2 = 0, zeros = 0;
    const std::size_t reps = 200000;
    for (std::size_t i = 0; i < reps; ++i) {
        const double x = s->sample(100, rng);
        CHECK(std::abs(x) <= c);
        if (std::abs(x) > 2.0) ++beyond2;
        if (x == 0.0) ++zeros;
    }
    // P(|X| > 2) = 1/4 - 1/c^2, P(X = 0) = 1/c^2
    const double p2 = 0.25 - 1.0 / (c * c);
    CHECK(static_cast<double>(beyond2) / reps == doctest::Approx(p2).epsilon(0.03));
    CHECK(static_cast<double>(zeros) / reps ==
          doctest::Approx(1.0 / (c * c)).epsilon(0.25));
}

TEST_CASE("sampling reproduces the mean within 4 standard errors") {
    auto check_schedule = [](const IncrementSchedule& s, std::size_t k, std::uint64_t seed) {
        Rng rng(seed);
        const std::size_t reps = 1000000;
        KahanSum sum;
        for (std::size_t i = 0; i < reps; ++i) sum.add(s.sample(k, rng));
        const double se = std::sqrt(s.sigma2_at(k) / static_cast<double>(reps));
        CHECK(std::abs(sum.value() / static_cast<double>(reps)) < 4.0 * se);
    };
    check_schedule(*make_ssrw(5), 3, 11);
    check_schedule(*make_four_point(50), 50, 12);
    check_schedule(*make_truncated_pareto(0.5, 0.0, 50), 50, 13);
    check_schedule(*make_four_point_lattice(20, 0.25), 20, 14);
}

TEST_CASE("schedule CSV round trip") {
    std::istringstream in(
        "k,value,prob\n"
        "1,-1,0.5\n"
        "1,1,0.5\n"
        "2,-2,0.5\n"
        "2,2,0.5\n");
    auto s = schedule_from_csv(in);
    CHECK(s->horizon() == 2);
    CHECK(s->cum_var(2) == doctest::Approx(5.0));
    REQUIRE(s->lattice_span().has_value());
    CHECK(*s->lattice_span() == doctest::Approx(1.0));

    std::istringstream gap("1,-1,0.5\n1,1,0.5\n3,-1,0.5\n3,1,0.5\n");
    CHECK_THROWS_AS(schedule_from_csv(gap), std::invalid_argument);

    std::istringstream biased("1,-1,0.25\n1,1,0.75\n");
    CHECK_THROWS_AS(schedule_from_csv(biased), std::invalid_argument);
}

TEST_CASE("feasibility check") {
    auto ssrw = make_ssrw(5);
    CHECK(feasibility_check(*ssrw, *make_constant_boundary(0.0), 5));
    CHECK_FALSE(feasibility_check(*ssrw, *make_constant_boundary(10.0), 5));
    auto fp = make_four_point(20);
    CHECK(feasibility_check(*fp, *make_constant_boundary(-1.0), 20));
}

TEST_CASE("common span detection") {
    CHECK(common_span({1.0, 2.0, 3.0}) == doctest::Approx(1.0));
    CHECK(common_span({0.5, 1.5}) == doctest::Approx(0.5));
    CHECK(common_span({1.0, std::sqrt(2.0)}) == 0.0);
}

TEST_CASE("random schedules satisfy moment invariants") {
    Rng rng(2024);
    for (int rep = 0; rep < 50; ++rep) {
        const double span = rng.coin() ? 1.0 : 0.5;
        auto s = fpt::testutil::random_lattice_schedule(rng, 6, span);
        for (std::size_t k = 1; k <= 6; ++k) {
            auto law = s->law_at(k);
            CHECK(std::abs(law->mean()) < 1e-12);
            CHECK(std::abs(law->second_moment() - s->sigma2_at(k)) < 1e-10);
        }
        REQUIRE(s->lattice_span().has_value());
    }
}
