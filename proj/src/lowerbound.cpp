#include "addfunc/lowerbound.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "addfunc/chebyshev.hpp"
#include "addfunc/errors.hpp"
#include "addfunc/polyapprox.hpp"
#include "dual_lp.hpp"

namespace addfunc {

namespace {

DiscreteMeasure support(const std::vector<double>& grid, const std::vector<double>& w) {
    DiscreteMeasure m;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (w[i] > 0.0) {
            m.atoms.push_back(grid[i]);
            m.weights.push_back(w[i]);
        }
    }
    return m;
}

void clip_and_normalize(std::vector<double>& w) {
    long double total = 0.0L;
    for (double& v : w) {
        v = std::max(v, 0.0);
        total += v;
    }
    if (total <= 0.0L) throw NumericalError("prior pair has an empty side");
    for (double& v : w) v = static_cast<double>(v / total);
}

}  // namespace

DiscreteMeasure PriorPair::nu0() const { return support(grid, w0); }
DiscreteMeasure PriorPair::nu1() const { return support(grid, w1); }

double PriorPair::max_moment_mismatch() const {
    std::vector<long double> pw(grid.size(), 1.0L);
    double worst = 0.0;
    long double scale = 1.0L;
    for (int k = 0; k <= K; ++k) {
        long double acc = 0.0L;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            acc += pw[i] * (static_cast<long double>(w0[i]) - w1[i]);
            pw[i] *= grid[i];
        }
        worst = std::max(worst, static_cast<double>(std::fabs(acc) / scale));
        scale *= M;
    }
    return worst;
}

PriorPair build_prior_pair(const MarginalFunctional& F, int K, double M, int n_grid) {
    require(M > 0.0, "M > 0");
    require(K >= 0, "K >= 0");
    if (n_grid == 0) n_grid = std::max(10 * (K + 2) + 1, 4001);
    require(n_grid >= 10 * (K + 2), "n_grid >= 10*(K+2)");
    if (n_grid % 2 == 0) ++n_grid;  // keep 0 on the grid

    PriorPair pair;
    pair.K = K;
    pair.M = M;
    pair.delta_ref = best_approx_error(F, K, M);
    require(pair.delta_ref > 0.0, "delta_{K,M} > 0 (F is a polynomial of degree <= K on [-M, M])");

    pair.grid = cheb::lobatto_points(n_grid, -M, M);
    const auto res = detail::minimax_dual(F, K, -M, M, pair.grid);
    const std::size_t n = pair.grid.size();
    pair.w0.resize(n);
    pair.w1.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        pair.w0[i] = res.x(static_cast<Eigen::Index>(i));
        pair.w1[i] = res.x(static_cast<Eigen::Index>(n + i));
    }
    clip_and_normalize(pair.w0);
    clip_and_normalize(pair.w1);

    long double i0 = 0.0L, i1 = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        const long double f = F(pair.grid[i]);
        i0 += pair.w0[i] * f;
        i1 += pair.w1[i] * f;
    }
    if (i0 < i1) {
        std::swap(pair.w0, pair.w1);
        std::swap(i0, i1);
    }
    pair.gap = static_cast<double>(i0 - i1);
    return pair;
}

Chi2Series chi2_series(const DiscreteMeasure& nu0, const DiscreteMeasure& nu1, int K_trunc) {
    require(K_trunc >= 1, "K_trunc >= 1");
    require(nu0.atoms.size() == nu0.weights.size() && nu1.atoms.size() == nu1.weights.size(),
            "matching atom and weight lists");

    // Running x^k / sqrt(k!) per atom; the k-th term is (sum_i w_i r_i)^2.
    std::vector<long double> r0(nu0.atoms.size(), 1.0L), r1(nu1.atoms.size(), 1.0L);
    double M = 0.0;
    for (double x : nu0.atoms) M = std::max(M, std::fabs(x));
    for (double x : nu1.atoms) M = std::max(M, std::fabs(x));

    long double series = 0.0L;
    for (int k = 0; k <= K_trunc; ++k) {
        long double diff = 0.0L;
        for (std::size_t i = 0; i < r1.size(); ++i) diff += nu1.weights[i] * r1[i];
        for (std::size_t i = 0; i < r0.size(); ++i) diff -= nu0.weights[i] * r0[i];
        series += diff * diff;
        const long double s = std::sqrt(static_cast<long double>(k + 1));
        for (std::size_t i = 0; i < r1.size(); ++i) r1[i] *= nu1.atoms[i] / s;
        for (std::size_t i = 0; i < r0.size(); ++i) r0[i] *= nu0.atoms[i] / s;
    }

    Chi2Series out;
    out.series = static_cast<double>(series);
    const double ratio = std::numbers::e * M * M / K_trunc;
    if (ratio >= 1.0) {
        out.tail_divergent = true;
    } else {
        long double tail = 0.0L;
        for (int k = K_trunc + 1; k < K_trunc + 10000; ++k) {
            const long double term = std::pow(static_cast<long double>(std::numbers::e) * M * M / k, k);
            tail += term;
            if (term < 1e-30L * tail || term == 0.0L) break;
        }
        out.tail = static_cast<double>(4.0L * tail);
    }
    out.value = out.series + out.tail;
    return out;
}

Chi2Series chi2_series(const PriorPair& pair, int K_trunc) {
    require(K_trunc >= pair.K + 1, "K_trunc >= K+1");
    return chi2_series(pair.nu0(), pair.nu1(), K_trunc);
}

double g_function(double x) {
    require(x > 1.0, "x > 1");
    const double lx = std::log(x);
    return std::log(x / lx) / lx;
}

int certificate_degree(int d, int s, double M) {
    const double ls = std::log(static_cast<double>(s) * s / d);
    const double e = std::numbers::e;
    return std::max(1, static_cast<int>(std::floor(e * e * ls / std::log(e * ls / (M * M)))));
}

LowerBoundCertificate certificate(const MarginalFunctional& F, int d, int s, double M, int n_grid) {
    require(d >= 1 && s >= 1, "d >= 1 and s >= 1");
    require(s <= d, "s <= d");
    require(static_cast<double>(s) * s > d, "s^2 > d");
    const double ls = std::log(static_cast<double>(s) * s / d);
    require(M > 0.0, "M > 0");
    require(M <= std::sqrt(ls) * (1.0 + 1e-12), "M <= sqrt(log(s^2/d))");

    LowerBoundCertificate c;
    c.d = d;
    c.s = s;
    c.M = M;
    c.K = certificate_degree(d, s, M);
    const MarginalFunctional G = F.centered();
    c.pair = build_prior_pair(G, c.K, M, n_grid);
    c.delta_ref = c.pair.delta_ref;
    c.sup_norm = G.centered_sup_norm(M);

    const double e = std::numbers::e;
    const double sd = static_cast<double>(s);
    const double dd = static_cast<double>(d);
    c.separation = sd * c.delta_ref;
    c.chi2_bound = std::expm1((2.0 * sd * sd / dd) * std::pow(e * M * M / c.K, c.K));
    const auto series = chi2_series(c.pair, std::max(c.K + 1, 2 * c.K + 40));
    c.chi2_series = series.series;
    c.chi2_product = std::expm1(dd * std::log1p(sd * sd / (2.0 * dd * dd) * series.series));
    const double tail = std::exp(-sd / 16.0);
    c.tail_terms = 2.0 * tail;
    c.tv_bound = std::sqrt(c.chi2_bound / 2.0) + c.tail_terms;

    // Cantelli bounds with v_0, v_1 <= sqrt(d) |F - F(0)|_inf; the second one
    // needs the midpoint plus 3 v_0 to sit s delta / 3 below m_1.
    const double v2 = dd * c.sup_norm * c.sup_norm;
    c.mass_term0 = 0.1 + tail;
    const double sep2 = c.separation * c.separation;
    if (18.0 * std::sqrt(v2) <= c.separation)
        c.mass_term1 = 9.0 * v2 / (9.0 * v2 + sep2) + tail;
    else
        c.mass_term1 = 1.0;
    c.V = c.tv_bound + c.mass_term0 + c.mass_term1;
    c.valid = c.V < 1.0;
    c.rate = sep2 / 4.0;
    c.g_value = g_function(e * ls / (M * M));
    c.g_ok = c.g_value > 0.5;
    return c;
}

}  // namespace addfunc
