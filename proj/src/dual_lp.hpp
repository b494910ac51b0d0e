#pragma once

#include <vector>

#include "addfunc/functional.hpp"
#include "addfunc/lp.hpp"

namespace addfunc::detail {

// Dual of the discrete minimax problem  min_P max_i |F(x_i) - P(x_i)|:
// maximise sum_i F(x_i)(p_i - q_i) over p, q >= 0 with
// sum_i T_j(u_i)(p_i - q_i) = 0 for j <= K and sum_i (p_i + q_i) = 1.
// The optimal multipliers of the moment rows are the Chebyshev coefficients
// of the minimax polynomial, the objective is delta, and p, q (each of mass
// 1/2) are the positive and negative parts of the extremal signed measure.
// x = (p, q) in the result.
lp::Result minimax_dual(const MarginalFunctional& F, int K, double a, double b,
                        const std::vector<double>& grid);

}  // namespace addfunc::detail
