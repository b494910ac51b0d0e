#include <algorithm>
#include <cmath>

#include "addfunc/chebyshev.hpp"
#include "addfunc/errors.hpp"
#include "addfunc/polyapprox.hpp"
#include "dual_lp.hpp"

namespace addfunc {

lp::Result detail::minimax_dual(const MarginalFunctional& F, int K, double a, double b,
                                const std::vector<double>& grid) {
    const Eigen::Index n = static_cast<Eigen::Index>(grid.size());
    const Eigen::Index m = K + 2;
    Eigen::MatrixXd A(m, 2 * n);
    Eigen::VectorXd c(2 * n);
    std::vector<double> t(static_cast<std::size_t>(K + 1));
    for (Eigen::Index i = 0; i < n; ++i) {
        const double x = grid[static_cast<std::size_t>(i)];
        const double fx = F(x);
        if (!std::isfinite(fx))
            throw NumericalError("functional '" + F.label() + "' is not finite on the grid");
        cheb::basis(cheb::to_unit(x, a, b), t);
        for (int j = 0; j <= K; ++j) {
            A(j, i) = t[static_cast<std::size_t>(j)];
            A(j, n + i) = -t[static_cast<std::size_t>(j)];
        }
        A(K + 1, i) = 1.0;
        A(K + 1, n + i) = 1.0;
        c(i) = fx;
        c(n + i) = -fx;
    }
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    rhs(K + 1) = 1.0;

    auto res = lp::maximize(A, rhs, c);
    if (res.status != lp::Status::optimal)
        throw NumericalError("minimax LP failed (status " +
                             std::to_string(static_cast<int>(res.status)) + ")");
    return res;
}

PolyApprox grid_lp_approx(const MarginalFunctional& F, int K, double a, double b, int n_grid) {
    require(a < b, "a < b");
    require(K >= 0, "K >= 0");
    require(n_grid >= 10 * (K + 2), "n_grid >= 10*(K+2)");

    const auto x = cheb::uniform_points(n_grid, a, b);
    const auto res = detail::minimax_dual(F, K, a, b, x);
    const Eigen::Index n = n_grid;

    PolyApprox out;
    out.degree = K;
    out.a = a;
    out.b = b;
    out.cheb.assign(res.duals.data(), res.duals.data() + K + 1);
    const auto mono = cheb::to_monomial(out.cheb, a, b);
    out.coeffs.assign(mono.begin(), mono.end());
    out.delta = std::max(res.objective, 0.0);
    for (Eigen::Index i = 0; i < n; ++i)
        if (res.x(i) > 1e-12 || res.x(n + i) > 1e-12)
            out.alternation_points.push_back(x[static_cast<std::size_t>(i)]);
    out.iterations = res.iterations;
    out.converged = true;
    return out;
}

}  // namespace addfunc
