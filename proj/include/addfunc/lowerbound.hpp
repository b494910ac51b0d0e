#pragma once

#include <utility>
#include <vector>

#include "addfunc/functional.hpp"

namespace addfunc {

struct DiscreteMeasure {
    std::vector<double> atoms;
    std::vector<double> weights;
};

/// Two probability measures on [-M, M] with equal moments of order 0..K and
/// maximal separation of their F-integrals. Orientation: the integral of F
/// against nu0 is the larger one, so gap >= 0.
struct PriorPair {
    std::vector<double> grid;
    std::vector<double> w0;
    std::vector<double> w1;
    int K = 0;
    double M = 0.0;
    double gap = 0.0;        // int F dnu0 - int F dnu1 (= 2 delta on the grid)
    double delta_ref = 0.0;  // delta_{K,M} from remez

    DiscreteMeasure nu0() const;  // support of w0 only
    DiscreteMeasure nu1() const;
    /// max_k |sum_i grid_i^k (w0_i - w1_i)| / M^k over k = 0..K.
    double max_moment_mismatch() const;
};

/// Solves the moment-matching LP on an odd Chebyshev-Lobatto grid of
/// `n_grid` points (0 selects max(10(K+2)+1, 4001)). Requires M > 0,
/// K >= 0, n_grid >= 10(K+2) and delta_{K,M} > 0.
PriorPair build_prior_pair(const MarginalFunctional& F, int K, double M, int n_grid = 0);

struct Chi2Series {
    double value = 0.0;   // series + tail
    double series = 0.0;  // sum_{k <= K_trunc} (m_k(nu1) - m_k(nu0))^2 / k!
    double tail = 0.0;    // 4 sum_{k > K_trunc} (e M^2 / k)^k, M = largest |atom|
    bool tail_divergent = false;  // e M^2 / K_trunc >= 1, no tail bound added
};

/// Moment series of int (phi_1 - phi_0)^2 / phi for the Gaussian location
/// mixtures of nu0 and nu1. Requires K_trunc >= 1.
Chi2Series chi2_series(const DiscreteMeasure& nu0, const DiscreteMeasure& nu1, int K_trunc);

/// Same for a prior pair; requires K_trunc >= K + 1.
Chi2Series chi2_series(const PriorPair& pair, int K_trunc);

/// g(x) = log(x / log x) / log x, for x > 1.
double g_function(double x);

/// Degree used by the lower bound: max(1, floor(e^2 l / log(e l / M^2))), l = log(s^2/d).
int certificate_degree(int d, int s, double M);

struct LowerBoundCertificate {
    int K = 0;
    int d = 0;
    int s = 0;
    double M = 0.0;
    double delta_ref = 0.0;
    double sup_norm = 0.0;       // |F - F(0)| on [-M, M]
    double separation = 0.0;     // s * delta_ref
    double chi2_bound = 0.0;     // exp[(2 s^2 / d)(e M^2 / K)^K] - 1
    double chi2_series = 0.0;    // computed moment series of the prior pair
    double chi2_product = 0.0;   // (1 + s^2/(2 d^2) * series)^d - 1
    double tail_terms = 0.0;     // 2 exp(-s/16)
    double tv_bound = 0.0;       // sqrt(chi2_bound / 2) + tail_terms
    double mass_term0 = 0.0;     // 1/10 + exp(-s/16)
    double mass_term1 = 0.0;     // 9 v^2 / (9 v^2 + s^2 delta^2) + exp(-s/16), or 1
    double V = 0.0;              // tv_bound + mass_term0 + mass_term1
    double rate = 0.0;           // s^2 delta^2 / 4
    bool valid = false;          // V < 1
    double g_value = 0.0;        // g(e log(s^2/d) / M^2)
    bool g_ok = false;           // g_value > 0.5
    PriorPair pair;
};

/// Requires s <= d, s^2 > d, 0 < M <= sqrt(log(s^2/d)) and delta_{K,M} > 0.
LowerBoundCertificate certificate(const MarginalFunctional& F, int d, int s, double M,
                                  int n_grid = 0);

struct RateResult {
    double value = 0.0;  // s^2 max_k delta^2
    int argmax_k = 0;
    bool degenerate = false;  // every delta vanished
    std::vector<std::pair<int, double>> points;  // (k, s^2 delta_k^2)
};

/// s^2 max over k in [s, d] of delta^2_{max(1, floor(log(s^2/k))), sqrt(log(s^2/k))},
/// with k sampled geometrically on at most `max_points` integers (s and d
/// always included). Requires s^2 >= 2d and s <= d.
RateResult rate_expression(const MarginalFunctional& F, int d, int s, int max_points = 64);

}  // namespace addfunc
