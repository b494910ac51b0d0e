#include <algorithm>
#include <cmath>

#include "addfunc/errors.hpp"
#include "addfunc/lowerbound.hpp"
#include "addfunc/polyapprox.hpp"

namespace addfunc {

RateResult rate_expression(const MarginalFunctional& F, int d, int s, int max_points) {
    require(s >= 1, "s >= 1");
    require(s <= d, "s <= d");
    require(static_cast<double>(s) * s >= 2.0 * d, "s^2 >= 2d");
    require(max_points >= 2, "max_points >= 2");

    std::vector<int> ks;
    const double ratio = static_cast<double>(d) / s;
    for (int j = 0; j < max_points; ++j) {
        const double k = s * std::pow(ratio, static_cast<double>(j) / (max_points - 1));
        ks.push_back(std::clamp(static_cast<int>(std::lround(k)), s, d));
    }
    ks.push_back(s);
    ks.push_back(d);
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

    RateResult out;
    out.degenerate = true;
    const double s2 = static_cast<double>(s) * s;
    for (int k : ks) {
        const double l = std::log(s2 / k);
        const int K = std::max(1, static_cast<int>(std::floor(l)));
        const double delta = best_approx_error(F, K, std::sqrt(l));
        const double v = s2 * delta * delta;
        if (delta > 0.0) out.degenerate = false;
        out.points.emplace_back(k, v);
        if (out.argmax_k == 0 || v > out.value) {
            out.value = v;
            out.argmax_k = k;
        }
    }
    return out;
}

}  // namespace addfunc
