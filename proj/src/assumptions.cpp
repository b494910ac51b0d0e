#include "addfunc/assumptions.hpp"

#include <algorithm>
#include <cmath>

#include "addfunc/errors.hpp"
#include "addfunc/polyapprox.hpp"

namespace addfunc {

namespace {

// 0, 1, then the base-2 van der Corput sequence 1/2, 1/4, 3/4, 1/8, ...
std::vector<double> nested_fractions(int n) {
    std::vector<double> u{0.0, 1.0};
    for (unsigned i = 1; static_cast<int>(u.size()) < n; ++i) {
        double v = 0.0, base = 0.5;
        for (unsigned k = i; k != 0; k >>= 1, base *= 0.5)
            if (k & 1U) v += base;
        u.push_back(v);
    }
    u.resize(static_cast<std::size_t>(n));
    std::sort(u.begin(), u.end());
    return u;
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxx > 0.0 ? sxy / sxx : 0.0;
}

int degree_for(double M) { return std::max(1, static_cast<int>(std::floor(M * M))); }

}  // namespace

AssumptionReport probe_assumptions(const MarginalFunctional& F, int s, int d, int grid_size) {
    require(d >= 1 && s >= 1, "d >= 1 and s >= 1");
    require(static_cast<double>(s) * s > d, "s^2 > d");
    require(s <= d, "s <= d");
    require(grid_size >= 4, "grid_size >= 4");

    AssumptionReport rep;
    rep.M_lo = std::sqrt(2.0 * std::log(static_cast<double>(s) * s / d));
    rep.M_hi = std::sqrt(2.0 * std::log(static_cast<double>(d)));
    if (!(rep.M_lo < rep.M_hi)) {
        rep.M_lo = 0.5 * rep.M_hi;
        rep.range_expanded = true;
    }

    const MarginalFunctional G = F.centered();
    std::vector<double> x1, y1, x2, y2;
    for (double u : nested_fractions(grid_size)) {
        ProbePoint p;
        p.M = rep.M_lo + u * (rep.M_hi - rep.M_lo);
        p.K = degree_for(p.M);
        p.sup_norm = G.centered_sup_norm(p.M);
        p.delta = best_approx_error(G, p.K, p.M);
        rep.grid.push_back(p);
        const double m2 = p.M * p.M;
        if (p.sup_norm > 0.0) {
            x1.push_back(m2);
            y1.push_back(std::log(p.sup_norm));
        }
        if (p.delta > 0.0) {
            x2.push_back(m2);
            y2.push_back(-std::log(p.delta));
        } else {
            rep.a2_violated = true;
        }

        if (p.delta <= 0.0) continue;
        for (double fk : {0.9, 1.0, 1.1}) {
            const int K2 = std::max(1, static_cast<int>(std::lround(fk * p.K)));
            for (double fm : {0.9, 1.0, 1.1}) {
                if (K2 == p.K && fm == 1.0) continue;
                const double d2 = best_approx_error(G, K2, fm * p.M);
                if (d2 <= 0.0) continue;
                const double r = d2 / p.delta;
                rep.a3_ratio_max = std::max({rep.a3_ratio_max, r, 1.0 / r});
            }
        }
    }
    rep.eps1_hat = x1.size() >= 2 ? slope(x1, y1) : 0.0;
    if (x2.size() >= 2) rep.eps2_hat = slope(x2, y2);
    else rep.a2_violated = true;
    return rep;
}

}  // namespace addfunc
