#include "addfunc/chebyshev.hpp"

#include <cmath>
#include <numbers>

namespace addfunc::cheb {

double clenshaw(std::span<const double> c, double u) {
    if (c.empty()) return 0.0;
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t j = c.size() - 1; j >= 1; --j) {
        const double b0 = c[j] + 2.0 * u * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    return c[0] + u * b1 - b2;
}

void basis(double u, std::span<double> out) {
    if (out.empty()) return;
    out[0] = 1.0;
    if (out.size() > 1) out[1] = u;
    for (std::size_t j = 2; j < out.size(); ++j) out[j] = 2.0 * u * out[j - 1] - out[j - 2];
}

std::vector<long double> to_monomial(std::span<const double> c, double a, double b) {
    const std::size_t n = c.size();
    // Power-basis coefficients of sum c_j T_j(u), built from T recurrences.
    std::vector<long double> in_u(n, 0.0L);
    std::vector<long double> tm2(n, 0.0L), tm1(n, 0.0L), tj(n, 0.0L);
    for (std::size_t j = 0; j < n; ++j) {
        std::fill(tj.begin(), tj.end(), 0.0L);
        if (j == 0) tj[0] = 1.0L;
        else if (j == 1) tj[1] = 1.0L;
        else
            for (std::size_t k = 0; k < n; ++k)
                tj[k] = (k > 0 ? 2.0L * tm1[k - 1] : 0.0L) - tm2[k];
        for (std::size_t k = 0; k <= j; ++k) in_u[k] += static_cast<long double>(c[j]) * tj[k];
        tm2 = tm1;
        tm1 = tj;
    }
    // Substitute u = alpha x + beta by Horner composition.
    const long double alpha = 2.0L / (static_cast<long double>(b) - a);
    const long double beta = -(static_cast<long double>(a) + b) / (static_cast<long double>(b) - a);
    std::vector<long double> out(n, 0.0L);
    for (std::size_t j = n; j-- > 0;) {
        // out <- out * (alpha x + beta) + in_u[j]
        for (std::size_t k = n - 1; k >= 1; --k) out[k] = out[k] * beta + out[k - 1] * alpha;
        out[0] = out[0] * beta + in_u[j];
    }
    return out;
}

std::vector<double> lobatto_points(int n, double a, double b) {
    std::vector<double> x(static_cast<std::size_t>(n));
    if (n == 1) {
        x[0] = 0.5 * (a + b);
        return x;
    }
    for (int i = 0; i < n; ++i) {
        // sin form is symmetric and exact at the midpoint.
        const double u = std::sin(std::numbers::pi * (2.0 * i - (n - 1)) / (2.0 * (n - 1)));
        x[static_cast<std::size_t>(i)] = from_unit(u, a, b);
    }
    x.front() = a;
    x.back() = b;
    return x;
}

std::vector<double> uniform_points(int n, double a, double b) {
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        // Symmetric formula so that mirrored points agree bit-for-bit on [-M, M].
        const double u = (2.0 * i - (n - 1)) / static_cast<double>(n - 1);
        x[static_cast<std::size_t>(i)] = from_unit(u, a, b);
    }
    x.front() = a;
    x.back() = b;
    return x;
}

}  // namespace addfunc::cheb
