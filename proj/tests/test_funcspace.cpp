#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "addfunc/assumptions.hpp"
#include "addfunc/errors.hpp"
#include "addfunc/expression.hpp"
#include "addfunc/functional.hpp"

using namespace addfunc;

TEST_CASE("builtin functionals") {
    const auto sq = builtin_functional("square");
    CHECK(sq(2.0) == 4.0);
    CHECK(sq.value_at_zero() == 0.0);
    CHECK(sq.is_even());

    const std::vector<double> one{1.0};
    const auto ab = builtin_functional("abs_pow", one);
    CHECK(ab(-3.0) == 3.0);
    CHECK(ab.is_even());

    const auto ent = builtin_functional("neg_t_log");
    CHECK(ent.value_at_zero() == 0.0);
    CHECK(ent(0.0) == 0.0);
    CHECK(ent(1.0) == 0.0);
    CHECK(std::fabs(ent(1e-12)) < 1e-10);
    CHECK_FALSE(ent.is_even());

    const auto id = builtin_functional("identity");
    CHECK(id(-1.5) == -1.5);
    CHECK_FALSE(id.is_even());
}

TEST_CASE("builtin functional errors") {
    const std::vector<double> bad{0.0};
    CHECK_THROWS_AS(builtin_functional("abs_pow", bad), PreconditionError);
    CHECK_THROWS_AS(builtin_functional("abs_pow"), PreconditionError);
    CHECK_THROWS_AS(builtin_functional("cosh"), PreconditionError);
}

TEST_CASE("even functionals are symmetric on a probe grid") {
    for (const char* spec : {"abs_pow:0.5", "abs_pow:1", "abs_pow:2.5", "square"}) {
        const auto F = parse_functional(spec);
        REQUIRE(F.is_even());
        for (int i = 0; i <= 200; ++i) {
            const double t = -5.0 + 0.05 * i;
            const double a = F(t), b = F(-t);
            CHECK(std::fabs(a - b) <= 1e-12 * std::max(1.0, std::fabs(a)));
        }
    }
}

TEST_CASE("expression grammar") {
    CHECK(Expression::parse("1 + 2 * t")(3.0) == 7.0);
    CHECK(Expression::parse("2^3^2")(0.0) == 512.0);
    CHECK(Expression::parse("-t^2")(3.0) == -9.0);
    CHECK(Expression::parse("abs(t) - log(exp(t))")(-2.0) == doctest::Approx(4.0));
    CHECK(Expression::parse("(t + 1) / 2")(3.0) == 2.0);
    CHECK(Expression::parse("1e-3 * t")(1000.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(Expression::parse("t +"), PreconditionError);
    CHECK_THROWS_AS(Expression::parse("sin(t)"), PreconditionError);
    CHECK_THROWS_AS(Expression::parse("x"), PreconditionError);
    CHECK_THROWS_AS(Expression::parse("(t"), PreconditionError);
}

TEST_CASE("parsed functional specs") {
    const double f0 = 1.0;
    const auto F = parse_functional("expr:exp(t)", &f0);
    CHECK(F(0.0) == 1.0);
    CHECK(F.value_at_zero() == 1.0);
    CHECK_THROWS_AS(parse_functional("expr:exp(t)"), PreconditionError);
    CHECK(parse_functional("abs_pow:0.5")(4.0) == doctest::Approx(2.0));
}

TEST_CASE("centering and shifting") {
    const auto F = builtin_functional("square").shifted(-1.0);
    CHECK(F.value_at_zero() == -1.0);
    CHECK(F(2.0) == 3.0);
    const auto G = F.centered();
    CHECK(G.value_at_zero() == 0.0);
    CHECK(G(2.0) == 4.0);
    CHECK(builtin_functional("square").centered_sup_norm(2.0) == doctest::Approx(4.0));
}

TEST_CASE("parameter space") {
    CHECK_THROWS_AS(ParameterSpace::make(10, 11, 1.0), PreconditionError);
    CHECK_THROWS_AS(ParameterSpace::make(10, 3, 0.0), PreconditionError);
    CHECK_THROWS_AS(ParameterSpace::make(0, 0, 1.0), PreconditionError);
    const auto sp = ParameterSpace::make(4, 2, 1.0);
    CHECK(sp.contains(std::vector<double>{1.0, 0.0, -1.0, 0.0}));
    CHECK_FALSE(sp.contains(std::vector<double>{1.0, 0.5, -1.0, 0.0}));
    CHECK_FALSE(sp.contains(std::vector<double>{1.5, 0.0, 0.0, 0.0}));
    CHECK_FALSE(sp.contains(std::vector<double>{0.0, 0.0, 0.0}));
}

TEST_CASE("make_theta") {
    const auto sp = ParameterSpace::make(10, 3, 2.0);
    const auto first = make_theta(sp, Placement::first_coords, ThetaValues::at(1.5), 0);
    CHECK(first == std::vector<double>{1.5, 1.5, 1.5, 0, 0, 0, 0, 0, 0, 0});

    const auto none = make_theta(ParameterSpace::make(10, 0, 2.0), Placement::first_coords,
                                 ThetaValues::at(1.0), 0);
    CHECK(none == std::vector<double>(10, 0.0));

    const auto r1 = make_theta(sp, Placement::random, ThetaValues::at(2.0), 7);
    const auto r2 = make_theta(sp, Placement::random, ThetaValues::at(2.0), 7);
    CHECK(r1 == r2);
    CHECK(std::count(r1.begin(), r1.end(), 2.0) == 3);

    CHECK_THROWS_AS(make_theta(sp, Placement::first_coords, ThetaValues::at(2.5), 0), PreconditionError);
    CHECK_THROWS_AS(make_theta(sp, Placement::first_coords, ThetaValues::spread({1, 1, 1, 1}), 0),
                    PreconditionError);
}

TEST_CASE("make_theta output always lies in the parameter space") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const int d = 1 + static_cast<int>(seed % 17);
        const int s = static_cast<int>(seed % static_cast<std::uint64_t>(d + 1));
        const auto sp = ParameterSpace::make(d, s, 3.0);
        std::vector<double> vals;
        for (int j = 0; j < s; ++j) vals.push_back(-3.0 + 0.37 * j);
        for (double& v : vals) v = std::clamp(v, -3.0, 3.0);
        const auto th = make_theta(sp, Placement::random,
                                   s > 0 ? ThetaValues::spread(vals) : ThetaValues::at(0.0), seed);
        CHECK(sp.contains(th));
    }
}

TEST_CASE("additive value") {
    const std::vector<double> th{1.0, -2.0, 0.0};
    CHECK(additive_value(builtin_functional("square"), th) == 5.0);
}

TEST_CASE("assumption probes") {
    const std::vector<double> one{1.0};
    const auto absF = builtin_functional("abs_pow", one);

    const auto rep = probe_assumptions(absF, 100, 100, 8);
    CHECK(rep.range_expanded);
    CHECK(rep.grid.size() == 8);
    CHECK(rep.eps2_hat > 0.0);
    CHECK_FALSE(rep.a2_violated);
    CHECK(std::isfinite(rep.eps1_hat));
    CHECK(rep.a3_ratio_max >= 1.0);
    CHECK(rep.a3_ratio_max < 3.0);

    const auto sq = probe_assumptions(builtin_functional("square"), 100, 100, 8);
    CHECK(sq.a2_violated);
    for (const auto& p : sq.grid)
        if (p.K >= 2) CHECK(p.delta == 0.0);

    CHECK_THROWS_AS(probe_assumptions(absF, 10, 100, 8), PreconditionError);
    CHECK_THROWS_AS(probe_assumptions(absF, 100, 100, 3), PreconditionError);
}

TEST_CASE("enlarging the probe grid never decreases a3_ratio_max") {
    const std::vector<double> half{0.5};
    const auto F = builtin_functional("abs_pow", half);
    double prev = 0.0;
    for (int n : {4, 5, 8, 12}) {
        const auto rep = probe_assumptions(F, 400, 10000, n);
        CHECK(rep.a3_ratio_max >= prev);
        prev = rep.a3_ratio_max;
    }
}

TEST_CASE("growth exponent of |t|^gamma is small") {
    for (double g : {0.5, 1.0}) {
        const std::vector<double> p{g};
        const auto F = builtin_functional("abs_pow", p);
        for (auto [s, d] : {std::pair{100, 100}, std::pair{400, 10000}}) {
            const auto rep = probe_assumptions(F, s, d, 8);
            double min_m2 = 1e300;
            for (const auto& q : rep.grid) min_m2 = std::min(min_m2, q.M * q.M);
            CHECK(rep.eps1_hat < 0.25);
            CHECK(rep.eps1_hat <= g / (2.0 * min_m2) + 0.05);
        }
    }
}
