#pragma once

#include <utility>
#include <vector>

#include "addfunc/functional.hpp"

namespace addfunc {

/// Degree-K best uniform approximation of F on [a, b].
struct PolyApprox {
    int degree = 0;
    double a = -1.0;
    double b = 1.0;
    std::vector<double> coeffs;              // monomial a_0 .. a_K in x
    std::vector<double> cheb;                // Chebyshev coefficients in to_unit(x, a, b)
    double delta = 0.0;                      // sup |F - P| on [a, b]
    std::vector<double> alternation_points;  // equioscillation witness
    int iterations = 0;
    bool converged = false;

    /// P(x), evaluated stably in the Chebyshev form.
    double operator()(double x) const;
};

struct RemezOptions {
    double tol = 0.0;       // <= 0 selects 1e-9 (K <= 20) or 1e-6 (K > 20)
    int max_iter = 100;
    int scan_per_gap = 32;  // dense-scan samples between consecutive reference points
};

/// Best approximation by the multi-point Remez exchange.
///
/// Starts from the Chebyshev extrema of T_{K+1}, solves for the levelled
/// polynomial in the Chebyshev basis, relocates the error extrema by a
/// dense scan plus golden-section refinement, and exchanges all reference
/// points at once. Returns converged = false with the best iterate if the
/// relative spread of |F - P| over the reference never drops below `tol`.
/// Throws NumericalError if F evaluates to a non-finite value.
PolyApprox remez(const MarginalFunctional& F, int K, double a, double b,
                 const RemezOptions& opt = {});

/// Discretised oracle: minimises max_i |F(x_i) - P(x_i)| over `n_grid`
/// equally spaced points with a linear program. Independent of remez.
PolyApprox grid_lp_approx(const MarginalFunctional& F, int K, double a, double b, int n_grid);

/// (K, delta_{K,M}) for each K in `K_list` (nonempty, increasing).
std::vector<std::pair<int, double>> delta_curve(const MarginalFunctional& F,
                                                const std::vector<int>& K_list, double M);

/// Shorthand for remez(F, K, -M, M).delta.
double best_approx_error(const MarginalFunctional& F, int K, double M);

}  // namespace addfunc
