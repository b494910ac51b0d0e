#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "addfunc/chebyshev.hpp"
#include "addfunc/errors.hpp"
#include "addfunc/polyapprox.hpp"

namespace addfunc {

namespace {

struct Extremum {
    double x;
    double e;
};

class ErrorFunction {
public:
    ErrorFunction(const MarginalFunctional& F, const std::vector<double>& c, double a, double b)
        : F_(F), c_(c), a_(a), b_(b) {}

    double operator()(double x) const {
        const double fx = F_(x);
        if (!std::isfinite(fx)) {
            throw NumericalError("functional '" + F_.label() + "' is not finite at t = " +
                                 std::to_string(x));
        }
        return fx - cheb::clenshaw(c_, cheb::to_unit(x, a_, b_));
    }

private:
    const MarginalFunctional& F_;
    const std::vector<double>& c_;
    double a_, b_;
};

// Maximises g on [lo, hi]; g is only assumed unimodal on the bracket.
template <class G>
Extremum golden_max(const G& g, double lo, double hi) {
    constexpr double r = 0.6180339887498949;
    double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
    double g1 = g(x1), g2 = g(x2);
    for (int it = 0; it < 200; ++it) {
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * (std::fabs(lo) + std::fabs(hi)) +
                           std::numeric_limits<double>::denorm_min())
            break;
        if (g1 >= g2) {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - r * (hi - lo);
            g1 = g(x1);
        } else {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + r * (hi - lo);
            g2 = g(x2);
        }
    }
    return g1 >= g2 ? Extremum{x1, g1} : Extremum{x2, g2};
}

std::vector<double> scan_grid(const std::vector<double>& refs, double a, double b,
                              const std::vector<double>& kinks, int per_gap) {
    std::vector<double> knots = refs;
    knots.push_back(a);
    knots.push_back(b);
    for (double k : kinks)
        if (k > a && k < b) knots.push_back(k);
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

    std::vector<double> grid;
    grid.reserve(knots.size() * static_cast<std::size_t>(per_gap));
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const double lo = knots[i], hi = knots[i + 1];
        for (int j = 0; j < per_gap; ++j) grid.push_back(lo + (hi - lo) * j / per_gap);
    }
    grid.push_back(knots.back());
    return grid;
}

// Local extrema of |e| on the grid, each refined by golden-section search on
// both neighbouring cells (the grid point itself is kept if it wins, which is
// what happens at kinks and endpoints).
std::vector<Extremum> local_extrema(const ErrorFunction& err, const std::vector<double>& grid,
                                    double& fmax) {
    const std::size_t n = grid.size();
    std::vector<double> e(n);
    for (std::size_t j = 0; j < n; ++j) e[j] = err(grid[j]);
    std::vector<Extremum> out;
    fmax = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double s = e[j] >= 0.0 ? 1.0 : -1.0;
        const bool left = j == 0 || s * e[j] >= s * e[j - 1];
        const bool right = j + 1 == n || s * e[j] >= s * e[j + 1];
        if (!left || !right) continue;
        auto g = [&](double x) { return s * err(x); };
        Extremum best{grid[j], s * e[j]};
        if (j > 0) {
            const auto c = golden_max(g, grid[j - 1], grid[j]);
            if (c.e > best.e) best = c;
        }
        if (j + 1 < n) {
            const auto c = golden_max(g, grid[j], grid[j + 1]);
            if (c.e > best.e) best = c;
        }
        best.e *= s;
        if (!out.empty() && best.x <= out.back().x) {
            if (std::fabs(best.e) > std::fabs(out.back().e)) out.back() = best;
            continue;
        }
        out.push_back(best);
    }
    for (const auto& x : out) fmax = std::max(fmax, std::fabs(x.e));
    return out;
}

// Collapses runs of equal sign to their largest member.
std::vector<Extremum> alternating(const std::vector<Extremum>& ext) {
    std::vector<Extremum> out;
    for (const auto& p : ext) {
        if (!out.empty() && ((p.e >= 0.0) == (out.back().e >= 0.0))) {
            if (std::fabs(p.e) > std::fabs(out.back().e)) out.back() = p;
        } else {
            out.push_back(p);
        }
    }
    return out;
}

// Levelled polynomial through the reference: sum_j c_j T_j(u_i) + (-1)^i E = F(x_i).
std::vector<double> solve_reference(const MarginalFunctional& F, const std::vector<double>& refs,
                                    int K, double a, double b, double& level) {
    const int n = K + 2;
    Eigen::MatrixXd A(n, n);
    Eigen::VectorXd rhs(n);
    std::vector<double> t(static_cast<std::size_t>(K + 1));
    for (int i = 0; i < n; ++i) {
        cheb::basis(cheb::to_unit(refs[static_cast<std::size_t>(i)], a, b), t);
        for (int j = 0; j <= K; ++j) A(i, j) = t[static_cast<std::size_t>(j)];
        A(i, K + 1) = (i % 2 == 0) ? 1.0 : -1.0;
        rhs(i) = F(refs[static_cast<std::size_t>(i)]);
        if (!std::isfinite(rhs(i)))
            throw NumericalError("functional '" + F.label() + "' is not finite at t = " +
                                 std::to_string(refs[static_cast<std::size_t>(i)]));
    }
    const Eigen::VectorXd sol = A.fullPivLu().solve(rhs);
    level = std::fabs(sol(K + 1));
    return std::vector<double>(sol.data(), sol.data() + K + 1);
}

// K+2 consecutive alternating extrema around the global maximum, choosing
// the window with the largest minimum.
std::vector<Extremum> pick_window(const std::vector<Extremum>& alt, std::size_t n) {
    std::size_t imax = 0;
    for (std::size_t i = 1; i < alt.size(); ++i)
        if (std::fabs(alt[i].e) > std::fabs(alt[imax].e)) imax = i;
    const std::size_t first = imax + 1 >= n ? imax + 1 - n : 0;
    const std::size_t last = std::min(imax, alt.size() - n);
    std::size_t best = first;
    double best_min = -1.0;
    for (std::size_t st = first; st <= last; ++st) {
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t i = st; i < st + n; ++i) m = std::min(m, std::fabs(alt[i].e));
        if (m > best_min) {
            best_min = m;
            best = st;
        }
    }
    return {alt.begin() + static_cast<std::ptrdiff_t>(best),
            alt.begin() + static_cast<std::ptrdiff_t>(best + n)};
}

// Error levels this close are indistinguishable in double precision.
double rounding_floor(double fnorm, int K) {
    return 64.0 * (K + 1) * std::numeric_limits<double>::epsilon() * (1.0 + fnorm);
}

struct CoreResult {
    std::vector<double> cheb;
    std::vector<double> refs;
    double emax = 0.0;
    double fnorm = 0.0;
    bool zero = false;
    bool converged = false;
    int iterations = 0;
};

CoreResult remez_core(const MarginalFunctional& F, int K, double a, double b, double tol,
                      const RemezOptions& opt) {
    std::vector<double> refs(static_cast<std::size_t>(K + 2));
    for (int i = 0; i <= K + 1; ++i)
        refs[static_cast<std::size_t>(i)] =
            cheb::from_unit(-std::cos(std::numbers::pi * i / (K + 1)), a, b);
    refs.front() = a;
    refs.back() = b;

    CoreResult best;
    best.emax = std::numeric_limits<double>::infinity();
    bool restarted = false;
    for (int it = 1; it <= opt.max_iter; ++it) {
        double level = 0.0;
        const auto c = solve_reference(F, refs, K, a, b, level);
        const ErrorFunction err(F, c, a, b);
        const auto grid = scan_grid(refs, a, b, F.kinks(), opt.scan_per_gap);
        double emax = 0.0;
        const auto ext = local_extrema(err, grid, emax);

        double fnorm = 0.0;
        for (double x : grid) fnorm = std::max(fnorm, std::fabs(F(x)));

        best.fnorm = std::max(best.fnorm, fnorm);
        if (emax < best.emax) {
            best.cheb = c;
            best.refs = refs;
            best.emax = emax;
        }
        best.iterations = it;
        if (emax <= 1e-13 * (1.0 + fnorm)) {
            best.cheb = c;
            best.refs = refs;
            best.emax = 0.0;
            best.zero = true;
            best.converged = true;
            return best;
        }

        auto alt = alternating(ext);
        if (alt.size() < static_cast<std::size_t>(K + 2)) {
            // A reference symmetric about a symmetry of F can force a zero
            // levelled error; retry once from the extrema of T_{K+2} minus
            // the right endpoint.
            if (restarted) break;
            restarted = true;
            for (int i = 0; i <= K + 1; ++i)
                refs[static_cast<std::size_t>(i)] =
                    cheb::from_unit(-std::cos(std::numbers::pi * i / (K + 2)), a, b);
            continue;
        }
        alt = pick_window(alt, static_cast<std::size_t>(K + 2));
        double emin = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < alt.size(); ++i) {
            refs[i] = alt[i].x;
            emin = std::min(emin, std::fabs(alt[i].e));
        }
        // Both the levelled error and the smallest alternating extremum
        // bound delta from below.
        if (emax - std::max(emin, level) <= tol * emax + rounding_floor(fnorm, K)) {
            best.cheb = c;
            best.refs = refs;
            best.emax = emax;
            best.converged = true;
            return best;
        }
    }
    return best;
}

}  // namespace

double PolyApprox::operator()(double x) const {
    return cheb::clenshaw(cheb, cheb::to_unit(x, a, b));
}

PolyApprox remez(const MarginalFunctional& F, int K, double a, double b, const RemezOptions& opt) {
    require(a < b, "a < b");
    require(K >= 0, "K >= 0");
    const double tol = opt.tol > 0.0 ? opt.tol : (K <= 20 ? 1e-9 : 1e-6);
    const bool symmetric_even = F.is_even() && a == -b;

    // An even F on a symmetric interval has an even best approximation, so
    // for odd K it coincides with the degree K-1 one.
    // It is then the best approximation of F(sqrt(u)) of degree floor(K/2)
    // in u = t^2 on [0, b^2], and T_j(2x^2 - 1) = T_{2j}(x) maps the
    // coefficients back.
    CoreResult core;
    std::vector<double> cheb_t(static_cast<std::size_t>(K + 1), 0.0);
    if (symmetric_even) {
        std::vector<double> ukinks;
        for (double k : F.kinks())
            if (k > 0.0 && k < b) ukinks.push_back(k * k);
        const MarginalFunctional G([&F](double u) { return F(std::sqrt(std::max(u, 0.0))); },
                                   F.label(), F.value_at_zero(), false, F.params(), ukinks);
        core = remez_core(G, K / 2, 0.0, b * b, tol, opt);
        for (std::size_t j = 0; j < core.cheb.size(); ++j) cheb_t[2 * j] = core.cheb[j];
        std::vector<double> refs;
        for (double u : core.refs) {
            const double t = std::sqrt(std::max(u, 0.0));
            refs.push_back(t);
            if (t > 0.0) refs.push_back(-t);
        }
        std::sort(refs.begin(), refs.end());
        core.refs = std::move(refs);
    } else {
        core = remez_core(F, K, a, b, tol, opt);
        for (std::size_t j = 0; j < core.cheb.size(); ++j) cheb_t[j] = core.cheb[j];
    }

    PolyApprox out;
    out.degree = K;
    out.a = a;
    out.b = b;
    out.iterations = core.iterations;
    out.converged = core.converged;
    out.cheb = std::move(cheb_t);
    if (symmetric_even)
        for (std::size_t j = 1; j < out.cheb.size(); j += 2) out.cheb[j] = 0.0;
    const auto mono = cheb::to_monomial(out.cheb, a, b);
    out.coeffs.assign(mono.begin(), mono.end());
    if (symmetric_even)
        for (std::size_t j = 1; j < out.coeffs.size(); j += 2) out.coeffs[j] = 0.0;

    if (core.zero) {
        out.delta = 0.0;
        out.alternation_points = core.refs;
        return out;
    }

    // Final sup norm and equioscillation witness for the returned polynomial.
    const ErrorFunction err(F, out.cheb, a, b);
    const auto grid = scan_grid(core.refs, a, b, F.kinks(), opt.scan_per_gap);
    double emax = 0.0;
    const auto ext = local_extrema(err, grid, emax);
    out.delta = emax;
    std::vector<Extremum> near;
    for (const auto& p : ext)
        if (std::fabs(p.e) >= emax * (1.0 - tol) - rounding_floor(core.fnorm, K)) near.push_back(p);
    const auto alt = alternating(near);
    for (const auto& p : alt) out.alternation_points.push_back(p.x);
    if (alt.size() < static_cast<std::size_t>(K + 2)) out.converged = false;
    return out;
}

double best_approx_error(const MarginalFunctional& F, int K, double M) {
    return remez(F, K, -M, M).delta;
}

std::vector<std::pair<int, double>> delta_curve(const MarginalFunctional& F,
                                                const std::vector<int>& K_list, double M) {
    require(!K_list.empty(), "a nonempty degree list");
    require(M > 0.0, "M > 0");
    for (std::size_t i = 1; i < K_list.size(); ++i)
        require(K_list[i] > K_list[i - 1], "an increasing degree list");
    std::vector<std::pair<int, double>> out;
    out.reserve(K_list.size());
    for (int K : K_list) {
        const auto p = remez(F, K, -M, M);
        if (!p.converged)
            throw NumericalError("remez did not converge for K = " + std::to_string(K));
        out.emplace_back(K, p.delta);
    }
    return out;
}

}  // namespace addfunc
