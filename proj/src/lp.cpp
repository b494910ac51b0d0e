#include "addfunc/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace addfunc::lp {

namespace {

struct Tableau {
    Eigen::MatrixXd A;          // rows x (cols + rows): originals then artificials
    Eigen::VectorXd b;
    std::vector<int> basis;     // column index per row
    std::vector<char> in_basis;
    std::vector<char> allowed;  // may enter the basis
    int iterations = 0;
};

enum class Outcome { optimal, unbounded, limit };

Outcome run(Tableau& t, const Eigen::VectorXd& cost, const Options& opt, int max_iter,
            Eigen::VectorXd& y_out) {
    const Eigen::Index m = t.A.rows();
    const Eigen::Index ncol = t.A.cols();
    bool bland = false;
    int stalled = 0;
    Eigen::MatrixXd B(m, m);
    Eigen::VectorXd cB(m);
    for (;;) {
        for (Eigen::Index i = 0; i < m; ++i) {
            B.col(i) = t.A.col(t.basis[i]);
            cB(i) = cost(t.basis[i]);
        }
        const Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
        const Eigen::VectorXd xB = lu.solve(t.b);
        const Eigen::VectorXd y = Eigen::PartialPivLU<Eigen::MatrixXd>(B.transpose()).solve(cB);
        y_out = y;

        const Eigen::VectorXd reduced = cost - t.A.transpose() * y;
        Eigen::Index enter = -1;
        double best = opt.optimality_tol;
        for (Eigen::Index j = 0; j < ncol; ++j) {
            if (t.in_basis[j] || !t.allowed[j]) continue;
            if (reduced(j) > best) {
                enter = j;
                if (bland) break;
                best = reduced(j);
            }
        }
        if (enter < 0) return Outcome::optimal;
        if (t.iterations >= max_iter) return Outcome::limit;

        const Eigen::VectorXd dir = lu.solve(t.A.col(enter));
        Eigen::Index leave = -1;
        double step = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < m; ++i) {
            if (dir(i) <= opt.pivot_tol) continue;
            const double ratio = std::max(xB(i), 0.0) / dir(i);
            const bool tie = leave >= 0 && std::fabs(ratio - step) <= 1e-12 * (1.0 + step);
            if (leave < 0 || ratio < step - 1e-12 * (1.0 + step) ||
                (tie && (bland ? t.basis[i] < t.basis[leave] : dir(i) > dir(leave)))) {
                leave = i;
                step = ratio;
            }
        }
        if (leave < 0) return Outcome::unbounded;

        if (step <= 1e-14) {
            if (++stalled >= opt.degenerate_streak) bland = true;
        } else {
            stalled = 0;
            bland = false;
        }
        t.in_basis[t.basis[leave]] = 0;
        t.basis[leave] = static_cast<int>(enter);
        t.in_basis[enter] = 1;
        ++t.iterations;
    }
}

}  // namespace

Result maximize(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                const Options& opt) {
    const Eigen::Index m0 = A.rows();
    const Eigen::Index n = A.cols();
    Result res;
    const int max_iter = opt.max_iterations > 0 ? opt.max_iterations
                                                : static_cast<int>(50 * (m0 + n));

    // Rows with b < 0 are negated so the artificial basis starts feasible.
    Eigen::VectorXd sign = Eigen::VectorXd::Ones(m0);
    for (Eigen::Index i = 0; i < m0; ++i)
        if (b(i) < 0.0) sign(i) = -1.0;

    Tableau t;
    t.A.resize(m0, n + m0);
    t.A.leftCols(n) = sign.asDiagonal() * A;
    t.A.rightCols(m0).setIdentity();
    t.b = sign.asDiagonal() * b;
    t.basis.resize(static_cast<std::size_t>(m0));
    t.in_basis.assign(static_cast<std::size_t>(n + m0), 0);
    t.allowed.assign(static_cast<std::size_t>(n + m0), 1);
    for (Eigen::Index i = 0; i < m0; ++i) {
        t.basis[static_cast<std::size_t>(i)] = static_cast<int>(n + i);
        t.in_basis[static_cast<std::size_t>(n + i)] = 1;
    }

    // Phase I: maximize -sum(artificials).
    Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(n + m0);
    phase1.tail(m0).setConstant(-1.0);
    Eigen::VectorXd y;
    if (run(t, phase1, opt, max_iter, y) == Outcome::limit) {
        res.status = Status::iteration_limit;
        res.iterations = t.iterations;
        return res;
    }
    double infeas = 0.0;
    {
        Eigen::MatrixXd B(m0, m0);
        for (Eigen::Index i = 0; i < m0; ++i) B.col(i) = t.A.col(t.basis[i]);
        const Eigen::VectorXd xB = B.partialPivLu().solve(t.b);
        for (Eigen::Index i = 0; i < m0; ++i)
            if (t.basis[i] >= n) infeas += std::fabs(xB(i));
    }
    if (infeas > 1e-9 * (1.0 + t.b.lpNorm<Eigen::Infinity>())) {
        res.status = Status::infeasible;
        res.iterations = t.iterations;
        return res;
    }

    // Pivot remaining (zero-level) artificials out; rows where that is
    // impossible are linearly dependent and get dropped.
    std::vector<Eigen::Index> keep_rows;
    for (Eigen::Index i = 0; i < m0; ++i) {
        if (t.basis[i] < n) continue;
        Eigen::MatrixXd B(m0, m0);
        for (Eigen::Index k = 0; k < m0; ++k) B.col(k) = t.A.col(t.basis[k]);
        const Eigen::PartialPivLU<Eigen::MatrixXd> lut(B.transpose());
        Eigen::VectorXd e = Eigen::VectorXd::Zero(m0);
        e(i) = 1.0;
        const Eigen::VectorXd row = t.A.leftCols(n).transpose() * lut.solve(e);
        Eigen::Index j_best = -1;
        double v_best = 1e-9;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (t.in_basis[j]) continue;
            if (std::fabs(row(j)) > v_best) {
                v_best = std::fabs(row(j));
                j_best = j;
            }
        }
        if (j_best >= 0) {
            t.in_basis[t.basis[i]] = 0;
            t.basis[i] = static_cast<int>(j_best);
            t.in_basis[j_best] = 1;
        }
    }
    for (Eigen::Index i = 0; i < m0; ++i)
        if (t.basis[i] < n) keep_rows.push_back(i);

    if (static_cast<Eigen::Index>(keep_rows.size()) < m0) {
        Tableau r;
        const auto m = static_cast<Eigen::Index>(keep_rows.size());
        r.A.resize(m, n + m0);
        r.b.resize(m);
        for (Eigen::Index k = 0; k < m; ++k) {
            r.A.row(k) = t.A.row(keep_rows[k]);
            r.b(k) = t.b(keep_rows[k]);
            r.basis.push_back(t.basis[keep_rows[k]]);
        }
        r.in_basis.assign(static_cast<std::size_t>(n + m0), 0);
        for (int j : r.basis) r.in_basis[j] = 1;
        r.iterations = t.iterations;
        t = std::move(r);
    }
    t.allowed.assign(static_cast<std::size_t>(n + m0), 0);
    std::fill(t.allowed.begin(), t.allowed.begin() + n, 1);

    // Phase II on the scaled objective.
    const double cscale = std::max(c.lpNorm<Eigen::Infinity>(), 1e-300);
    Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(n + m0);
    phase2.head(n) = c / cscale;
    const Outcome out = run(t, phase2, opt, max_iter, y);
    res.iterations = t.iterations;
    if (out == Outcome::unbounded) {
        res.status = Status::unbounded;
        return res;
    }
    if (out == Outcome::limit) {
        res.status = Status::iteration_limit;
        return res;
    }

    const Eigen::Index m = t.A.rows();
    Eigen::MatrixXd B(m, m);
    for (Eigen::Index i = 0; i < m; ++i) B.col(i) = t.A.col(t.basis[i]);
    const Eigen::VectorXd xB = B.partialPivLu().solve(t.b);
    res.x = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < m; ++i) res.x(t.basis[i]) = std::max(xB(i), 0.0);
    res.objective = c.dot(res.x);

    res.duals = Eigen::VectorXd::Zero(m0);
    const bool dropped = m < m0;
    for (Eigen::Index k = 0; k < m; ++k) {
        const Eigen::Index row = dropped ? keep_rows[k] : k;
        res.duals(row) = y(k) * cscale * sign(row);
    }
    res.status = Status::optimal;
    return res;
}

}  // namespace addfunc::lp
