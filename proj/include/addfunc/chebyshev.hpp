#pragma once

#include <span>
#include <vector>

namespace addfunc::cheb {

/// Affine map [a, b] -> [-1, 1].
inline double to_unit(double x, double a, double b) { return (2.0 * x - a - b) / (b - a); }
inline double from_unit(double u, double a, double b) { return 0.5 * (a + b) + 0.5 * (b - a) * u; }

/// sum_j c_j T_j(u) by Clenshaw's recurrence.
double clenshaw(std::span<const double> c, double u);

/// T_0(u) ... T_K(u).
void basis(double u, std::span<double> out);

/// Monomial coefficients (in x) of sum_j c_j T_j(to_unit(x, a, b)).
std::vector<long double> to_monomial(std::span<const double> c, double a, double b);

/// Chebyshev-Lobatto points on [a, b] in increasing order.
std::vector<double> lobatto_points(int n, double a, double b);

/// n equally spaced points on [a, b], endpoints included.
std::vector<double> uniform_points(int n, double a, double b);

}  // namespace addfunc::cheb
