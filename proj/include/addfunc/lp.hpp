#pragma once

#include <Eigen/Dense>
#include <vector>

namespace addfunc::lp {

enum class Status { optimal, infeasible, unbounded, iteration_limit };

struct Result {
    Status status = Status::iteration_limit;
    double objective = 0.0;
    Eigen::VectorXd x;      // primal solution
    Eigen::VectorXd duals;  // y with A^T y >= c at optimum
    int iterations = 0;
};

struct Options {
    double optimality_tol = 1e-11;  // on reduced costs, after scaling c to unit max norm
    double pivot_tol = 1e-10;
    int max_iterations = 0;         // 0: 50 * (rows + cols)
    int degenerate_streak = 50;     // switch to Bland's rule after this many stalled pivots
};

/// maximize c^T x subject to A x = b, x >= 0.
///
/// Dense two-phase revised simplex. The basis is refactored from scratch at
/// every iteration, which at the sizes used here (tens of rows, thousands of
/// columns) costs less than the pricing pass and avoids drift.
Result maximize(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                const Options& opt = {});

}  // namespace addfunc::lp
