#pragma once

#include <vector>

#include "addfunc/functional.hpp"

namespace addfunc {

struct ProbePoint {
    double M = 0.0;
    int K = 0;              // max(1, floor(M^2))
    double sup_norm = 0.0;  // |F - F(0)| on [-M, M]
    double delta = 0.0;     // delta_{K,M}
};

/// Measured surrogates for the growth and approximability conditions on F.
///
/// eps1_hat is the least-squares slope of log |F - F(0)|_inf against M^2,
/// eps2_hat the slope of log(1 / delta_{M^2,M}) against M^2, and a3_ratio_max
/// the largest ratio delta_{K',M'} / delta_{K,M} (or its inverse) over +-10%
/// perturbations of (K, M). Thresholds are left to the caller.
struct AssumptionReport {
    double eps1_hat = 0.0;
    double eps2_hat = 0.0;
    double a3_ratio_max = 1.0;
    std::vector<ProbePoint> grid;
    double M_lo = 0.0;
    double M_hi = 0.0;
    bool a2_violated = false;     // delta vanished somewhere, so delta^{-1} is unbounded
    bool range_expanded = false;  // M_lo == M_hi (s = d); probed [M_hi/2, M_hi] instead
};

/// Probes over M in [sqrt(2 log(s^2/d)), sqrt(2 log d)] on `grid_size` points.
/// The probe points are nested in grid_size, so a larger grid contains every
/// point of a smaller one. Requires s^2 > d, s <= d, grid_size >= 4.
AssumptionReport probe_assumptions(const MarginalFunctional& F, int s, int d, int grid_size);

}  // namespace addfunc
