#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "addfunc/chebyshev.hpp"
#include "addfunc/errors.hpp"
#include "addfunc/polyapprox.hpp"

using namespace addfunc;

namespace {

MarginalFunctional abs_pow(double g) {
    const std::vector<double> p{g};
    return builtin_functional("abs_pow", p);
}

double tol_for(int K) { return K <= 20 ? 1e-9 : 1e-6; }

// Checks the equioscillation witness directly against F - P.
void check_witness(const MarginalFunctional& F, const PolyApprox& p) {
    REQUIRE(p.converged);
    REQUIRE(p.alternation_points.size() >= static_cast<std::size_t>(p.degree + 2));
    const double tol = tol_for(p.degree);
    // Below this level the error curve is rounding noise.
    const double floor = 1e-13 * (1.0 + std::fabs(F(p.a)) + std::fabs(F(p.b))) * (p.degree + 1);
    double prev_x = -INFINITY, prev_e = 0.0;
    for (double x : p.alternation_points) {
        CHECK(x >= p.a);
        CHECK(x <= p.b);
        CHECK(x > prev_x);
        const double e = F(x) - p(x);
        CHECK(std::fabs(e) >= p.delta * (1.0 - 10 * tol) - floor);
        CHECK(std::fabs(e) <= p.delta * (1.0 + 10 * tol) + floor);
        if (prev_e != 0.0 && p.delta > 100 * floor) CHECK(e * prev_e < 0.0);
        prev_x = x;
        prev_e = e;
    }
}

double poly_monomial(const std::vector<double>& c, double x) {
    double acc = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * x + c[k];
    return acc;
}

}  // namespace

TEST_CASE("chebyshev helpers") {
    const std::vector<double> c{0.5, -1.0, 0.25, 2.0};
    for (double x : {-2.0, -0.3, 0.0, 1.7, 3.0}) {
        const auto mono = cheb::to_monomial(c, -2.0, 3.0);
        std::vector<double> m(mono.begin(), mono.end());
        CHECK(poly_monomial(m, x) == doctest::Approx(cheb::clenshaw(c, cheb::to_unit(x, -2.0, 3.0))));
    }
    const auto lob = cheb::lobatto_points(5, -1.0, 1.0);
    CHECK(lob.front() == -1.0);
    CHECK(lob.back() == 1.0);
    CHECK(lob[2] == 0.0);
    const auto uni = cheb::uniform_points(5, -1.0, 1.0);
    CHECK(uni == std::vector<double>{-1.0, -0.5, 0.0, 0.5, 1.0});
}

TEST_CASE("best approximations of |t| on [-1, 1]") {
    const auto F = abs_pow(1.0);
    const auto p1 = remez(F, 1, -1.0, 1.0);
    CHECK(p1.delta == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(p1.coeffs[0] == doctest::Approx(0.5));
    CHECK(std::fabs(p1.coeffs[1]) < 1e-12);
    check_witness(F, p1);
    REQUIRE(p1.alternation_points.size() == 3);
    CHECK(p1.alternation_points[0] == -1.0);
    CHECK(std::fabs(p1.alternation_points[1]) < 1e-9);
    CHECK(p1.alternation_points[2] == 1.0);

    const auto p2 = remez(F, 2, -1.0, 1.0);
    CHECK(p2.delta == doctest::Approx(0.125).epsilon(1e-9));
    CHECK(p2.coeffs[0] == doctest::Approx(0.125));
    CHECK(std::fabs(p2.coeffs[1]) < 1e-12);
    CHECK(p2.coeffs[2] == doctest::Approx(1.0));
    check_witness(F, p2);
    const std::vector<double> expect{-1.0, -0.5, 0.0, 0.5, 1.0};
    REQUIRE(p2.alternation_points.size() == expect.size());
    for (std::size_t i = 0; i < expect.size(); ++i)
        CHECK(p2.alternation_points[i] == doctest::Approx(expect[i]).epsilon(1e-6));
}

TEST_CASE("grid LP oracle") {
    const auto F = abs_pow(1.0);
    // Closed form for K = 1: the best line is the constant a minimising
    // max(a, 1 - a), i.e. a = 1/2.
    const auto q = grid_lp_approx(F, 1, -1.0, 1.0, 2001);
    CHECK(std::fabs(q.delta - 0.5) < 1e-6);
    CHECK(q.coeffs[0] == doctest::Approx(0.5).epsilon(1e-6));
    const auto q2 = grid_lp_approx(F, 2, -1.0, 1.0, 2001);
    CHECK(std::fabs(q2.delta - 0.125) < 1e-6);

    const auto id = builtin_functional("identity");
    CHECK(grid_lp_approx(id, 1, -3.0, 2.0, 200).delta < 1e-12);
    CHECK(remez(id, 1, -3.0, 2.0).delta == 0.0);

    const auto h = abs_pow(0.5);
    const double r = remez(h, 8, -1.0, 1.0).delta;
    const double l = grid_lp_approx(h, 8, -1.0, 1.0, 4001).delta;
    CHECK(std::fabs(r - l) <= 1e-4 * r);

    CHECK_THROWS_AS(grid_lp_approx(F, 5, -1.0, 1.0, 69), PreconditionError);
}

TEST_CASE("polynomials are reproduced exactly") {
    const auto sq = builtin_functional("square");
    for (double M : {0.5, 1.0, 3.0}) {
        const auto p = remez(sq, 2, -M, M);
        CHECK(p.delta == 0.0);
        CHECK(std::fabs(p.coeffs[0]) < 1e-12);
        CHECK(std::fabs(p.coeffs[1]) < 1e-12);
        CHECK(p.coeffs[2] == doctest::Approx(1.0));
    }
}

TEST_CASE("remez agrees with the grid LP") {
    for (const auto& F : {abs_pow(1.0), abs_pow(0.5)}) {
        for (int K : {1, 3, 6, 10, 15, 20, 30}) {
            const double r = remez(F, K, -1.0, 1.0).delta;
            const double l = grid_lp_approx(F, K, -1.0, 1.0, 4001).delta;
            CHECK(std::fabs(r - l) <= std::max(1e-6, 1e-3 * r));
        }
    }
}

TEST_CASE("equioscillation and evenness") {
    const double f0 = 1.0;
    const std::vector<MarginalFunctional> fs{
        abs_pow(1.0), abs_pow(0.5), abs_pow(1.5), builtin_functional("neg_t_log"),
        parse_functional("expr:exp(t)", &f0)};
    for (const auto& F : fs) {
        for (int K : {0, 1, 2, 5, 9, 16, 25}) {
            for (double M : {0.7, 2.0}) {
                const auto p = remez(F, K, -M, M);
                CAPTURE(F.label());
                CAPTURE(K);
                CAPTURE(M);
                REQUIRE(p.coeffs.size() == static_cast<std::size_t>(K + 1));
                CHECK(p.delta >= 0.0);
                check_witness(F, p);
                if (F.is_even())
                    for (std::size_t k = 1; k < p.coeffs.size(); k += 2) CHECK(p.coeffs[k] == 0.0);
            }
        }
    }
}

TEST_CASE("asymmetric interval") {
    const auto F = builtin_functional("neg_t_log");
    const auto p = remez(F, 6, 0.0, 2.0);
    check_witness(F, p);
    const double l = grid_lp_approx(F, 6, 0.0, 2.0, 4001).delta;
    CHECK(std::fabs(p.delta - l) <= std::max(1e-6, 1e-3 * p.delta));
}

TEST_CASE("best constant is the mid-range") {
    const double f0 = 1.0;
    for (const auto& F : {abs_pow(0.5), builtin_functional("neg_t_log"), parse_functional("expr:exp(t)", &f0)}) {
        for (double M : {0.5, 1.0, 3.0}) {
            double lo = INFINITY, hi = -INFINITY;
            for (int i = 0; i <= 100000; ++i) {
                const double v = F(-M + 2.0 * M * i / 100000);
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            CHECK(remez(F, 0, -M, M).delta == doctest::Approx((hi - lo) / 2).epsilon(1e-8));
        }
    }
}

TEST_CASE("delta curve") {
    const auto F = abs_pow(1.0);
    const auto c = delta_curve(F, {1, 2}, 1.0);
    REQUIRE(c.size() == 2);
    CHECK(c[0].first == 1);
    CHECK(c[0].second == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(c[1].second == doctest::Approx(0.125).epsilon(1e-9));

    const auto z = delta_curve(builtin_functional("square"), {2, 3}, 1.0);
    CHECK(z[0].second == 0.0);
    CHECK(z[1].second == 0.0);

    CHECK_THROWS_AS(delta_curve(F, {}, 1.0), PreconditionError);
    CHECK_THROWS_AS(delta_curve(F, {3, 2}, 1.0), PreconditionError);
}

TEST_CASE("delta is non-increasing in K") {
    for (const auto& F : {abs_pow(1.0), abs_pow(0.5), builtin_functional("neg_t_log")}) {
        std::vector<int> ks;
        for (int K = 0; K <= 30; ++K) ks.push_back(K);
        const auto c = delta_curve(F, ks, 1.5);
        for (std::size_t i = 1; i < c.size(); ++i)
            CHECK(c[i].second <= c[i - 1].second * (1.0 + 1e-6));
    }
}

TEST_CASE("homogeneity of |t|^gamma") {
    for (double g : {0.5, 1.0, 1.5}) {
        const auto F = abs_pow(g);
        for (int K : {2, 5, 12}) {
            const double base = best_approx_error(F, K, 1.3);
            for (double c : {0.5, 2.0})
                CHECK(best_approx_error(F, K, c * 1.3) ==
                      doctest::Approx(std::pow(c, g) * base).epsilon(1e-8));
        }
    }
}

TEST_CASE("coefficient growth bound") {
    double worst = 0.0;
    for (const auto& F : {abs_pow(1.0), abs_pow(0.5), builtin_functional("neg_t_log")}) {
        for (int K : {1, 4, 10, 20, 30}) {
            for (double M : {0.5, 1.0, 2.0, 4.0}) {
                const auto p = remez(F, K, -M, M);
                const double norm = F.centered_sup_norm(M);
                for (int k = 0; k <= K; ++k) {
                    const double r = std::fabs(p.coeffs[static_cast<std::size_t>(k)]) * std::pow(M, k) /
                                     (norm * std::pow(1.0 + std::sqrt(2.0), K));
                    worst = std::max(worst, r);
                }
            }
        }
    }
    CHECK(worst <= 100.0);
}

TEST_CASE("failure modes") {
    const auto F = abs_pow(1.0);
    CHECK_THROWS_AS(remez(F, 2, 1.0, 1.0), PreconditionError);
    CHECK_THROWS_AS(remez(F, -1, -1.0, 1.0), PreconditionError);

    const double f0 = 0.0;
    const auto bad = parse_functional("expr:log(t)", &f0);
    CHECK_THROWS_AS(remez(bad, 2, -1.0, 1.0), NumericalError);

    RemezOptions opt;
    opt.max_iter = 1;
    const auto p = remez(abs_pow(0.5), 12, -1.0, 1.0, opt);
    CHECK_FALSE(p.converged);
    CHECK(p.coeffs.size() == 13);
    CHECK(p.delta > 0.0);
}

TEST_CASE("remez is deterministic") {
    const auto F = abs_pow(0.5);
    const auto a = remez(F, 17, -2.0, 2.0);
    const auto b = remez(F, 17, -2.0, 2.0);
    CHECK(a.coeffs == b.coeffs);
    CHECK(a.delta == b.delta);
    CHECK(a.alternation_points == b.alternation_points);
}
