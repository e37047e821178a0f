#include <cmath>
#include <sstream>

#include "doctest.h"
#include "fpt/boundaries.hpp"
#include "fpt/increments.hpp"

using namespace fpt;

TEST_CASE("constant boundary") {
    auto b = make_constant_boundary(-2.0);
    CHECK(b->g_at(1) == -2.0);
    CHECK(b->g_at(1000) == -2.0);
    CHECK(b->family() == "constant");
    CHECK(b->tail_sup() == Boundary::TailSup::finite);
    CHECK(b->eventually_nonincreasing());
}

TEST_CASE("log damped boundary on ssrw") {
    auto s = make_ssrw(1000);
    auto b = make_log_damped_boundary(1.0, 1.0, s);
    // g_n = sqrt(n)/log^2(n) once log(n) > 1
    const double n = 100.0;
    CHECK(b->g_at(100) == doctest::Approx(std::sqrt(n) / std::pow(std::log(n), 2.0)));
    CHECK(b->tail_sup() == Boundary::TailSup::infinite);
    CHECK_FALSE(b->eventually_nonincreasing());

    auto neg = make_log_damped_boundary(-1.0, 1.0, s);
    CHECK(neg->tail_sup() == Boundary::TailSup::finite);
    CHECK(neg->eventually_nonincreasing());

    CHECK_THROWS_AS(make_log_damped_boundary(1.0, 0.0, s), std::invalid_argument);
    CHECK_THROWS_AS(make_log_damped_boundary(1.0, 1.0, nullptr), std::invalid_argument);
}

TEST_CASE("table boundary and csv") {
    auto b = make_table_boundary({1.0, -1.0, 0.0, 0.0});
    CHECK(b->g_at(2) == -1.0);
    CHECK_THROWS_AS(b->g_at(5), std::out_of_range);
    CHECK_THROWS_AS(make_table_boundary({}), std::invalid_argument);

    std::istringstream in("n,g_n\n1,0.5\n2,-0.5\n");
    auto c = boundary_from_csv(in);
    CHECK(c->g_at(1) == 0.5);
    CHECK(c->g_at(2) == -0.5);

    std::istringstream gap("1,0.5\n3,-0.5\n");
    CHECK_THROWS_AS(boundary_from_csv(gap), std::invalid_argument);
}

TEST_CASE("envelopes") {
    SUBCASE("constant") {
        auto env = compute_envelopes(*make_constant_boundary(-3.0), 10);
        for (std::size_t n = 1; n <= 10; ++n) {
            CHECK(env.lower_at(n) == -3.0);
            CHECK(env.upper_at(n) == -3.0);
            CHECK(env.gmax_at(n) == 3.0);
        }
        CHECK_FALSE(env.horizon_limited);
    }
    SUBCASE("spec table") {
        auto env = compute_envelopes(*make_table_boundary({1.0, -1.0, 0.0, 0.0}), 4);
        CHECK(env.lower_at(3) == -1.0);
        CHECK(env.gmax_at(3) == 1.0);
        CHECK(env.upper_at(1) == 1.0);
        CHECK(env.upper_at(2) == 0.0);
        CHECK(env.horizon_limited);
    }
    SUBCASE("monotone structure") {
        auto env = compute_envelopes(*make_table_boundary({0.0, 2.0, -1.0, 1.0, -2.0}), 5);
        for (std::size_t n = 1; n < 5; ++n) {
            CHECK(env.lower_at(n + 1) <= env.lower_at(n));
            CHECK(env.upper_at(n + 1) <= env.upper_at(n));
            CHECK(env.gmax_at(n + 1) >= env.gmax_at(n));
        }
    }
    SUBCASE("infinite tail sup fills upper with infinity") {
        auto s = make_ssrw(100);
        auto env = compute_envelopes(*make_log_damped_boundary(1.0, 1.0, s), 100);
        CHECK(std::isinf(env.upper_at(1)));
        CHECK_FALSE(env.horizon_limited);
    }
}

TEST_CASE("boundary scale warning") {
    auto s = make_ssrw(100);
    CHECK_FALSE(boundary_scale_warning(*make_constant_boundary(0.0), *s, 100));
    CHECK(boundary_scale_warning(*make_constant_boundary(-2.0), *s, 100));  // |g|/B_1 = 2
    CHECK_FALSE(boundary_scale_warning(*make_constant_boundary(-0.25), *s, 100));
}

TEST_CASE("is_nonincreasing") {
    CHECK(is_nonincreasing(*make_constant_boundary(1.0), 1, 10));
    CHECK_FALSE(is_nonincreasing(*make_table_boundary({0.0, 1.0}), 1, 2));
    CHECK(is_nonincreasing(*make_table_boundary({0.0, 1.0, 0.5, 0.25}), 2, 4));
}

TEST_CASE("ug interpolation") {
    std::vector<std::pair<double, double>> knots{{1.0, 0.4}, {2.0, 0.6}};
    CHECK(ug_interpolate(knots, 1.5) == doctest::Approx(0.5));
    CHECK(ug_interpolate(knots, 1.0) == 0.4);
    CHECK(ug_interpolate(knots, 2.0) == 0.6);
    CHECK(ug_interpolate(knots, 0.5) == 0.4);  // flat extension below the first knot
    CHECK_THROWS_AS(ug_interpolate(knots, 2.5), std::out_of_range);
    CHECK_THROWS_AS(ug_interpolate(knots, -0.1), std::out_of_range);

    std::vector<std::pair<double, double>> flat{{1.0, 0.7}, {3.0, 0.7}};
    CHECK(ug_interpolate(flat, 2.0) == doctest::Approx(0.7));

    std::vector<std::pair<double, double>> bad{{2.0, 0.1}, {1.0, 0.2}};
    CHECK_THROWS_AS(ug_interpolate(bad, 1.5), std::invalid_argument);

    UgCurve curve{{{1.0, 0.4}, {2.0, 0.6}, {4.0, 0.6}}};
    CHECK(curve.eval(3.0) == doctest::Approx(0.6));
    CHECK(curve.eval(4.0) == 0.6);
}

TEST_CASE("interpolation is monotone between ordered knots") {
    std::vector<std::pair<double, double>> knots{{1.0, 0.1}, {2.0, 0.3}, {5.0, 0.9}};
    double prev = 0.0;
    for (double t = 0.0; t <= 5.0; t += 0.1) {
        const double v = ug_interpolate(knots, t);
        CHECK(v >= prev - 1e-15);
        prev = v;
    }
}
