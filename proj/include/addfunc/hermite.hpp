#pragma once

#include <functional>
#include <span>
#include <vector>

#include "addfunc/errors.hpp"

namespace addfunc {

// Probabilists' Hermite polynomials: H_0 = 1, H_1 = x,
// H_{k+1}(x) = x H_k(x) - k H_{k-1}(x). For X ~ N(theta, 1), E H_k(X) = theta^k.

inline constexpr int kMaxHermiteDegree = 200;

/// Thrown when |H_k(x)| leaves the double range; carries the first such k.
class HermiteOverflow : public NumericalError {
public:
    explicit HermiteOverflow(int degree);
    int degree() const { return degree_; }

private:
    int degree_;
};

struct HermiteEval {
    int max_degree = 0;
    std::vector<double> values;  // H_0(x) .. H_K(x)
};

/// All H_k(x), k <= K, by the three-term recurrence in extended precision.
/// Requires 0 <= K <= kMaxHermiteDegree.
HermiteEval hermite_all(double x, int K);

/// sigma^k H_k(x / sigma); has mean theta^k under N(theta, sigma^2).
double variance_scaled_hermite(double x, int k, double sigma);

/// Gauss-Hermite rule for E f(Z), Z ~ N(0,1): sum_i w_i f(x_i), exact for
/// polynomials of degree <= 2n - 1. Nodes come from the Golub-Welsch
/// eigenproblem, polished by Newton steps; weights from the Christoffel
/// function. Rules are built once per n and cached.
struct GaussHermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussHermiteRule& gauss_hermite(int n);

/// E f(theta + sigma Z) by an n-point rule.
double normal_expectation(const std::function<double(double)>& f, double theta, double sigma,
                          int n);

/// E H_k(X), X ~ N(theta, 1), by quadrature. Requires n_quad >= 2k + 2.
double hermite_moment_check(double theta, int k, int n_quad);

/// E H_k(X)^2, X ~ N(theta, 1), by quadrature. Requires n_quad >= k + 1.
double hermite_second_moment(double theta, int k, int n_quad);

/// u -> sum_{k >= first} a_k sigma^k H_k(u / sigma).
///
/// With first = 1 (multi-scale estimator) the mean under N(theta, sigma^2) is
/// P(theta) - a_0; with first = 0 (simplified estimator) it is P(theta).
class HermiteSeries {
public:
    HermiteSeries() = default;
    HermiteSeries(std::vector<double> coeffs, bool include_constant, double sigma = 1.0);

    double operator()(double u) const;
    /// Expectation under N(theta, sigma^2), i.e. sum_{k >= first} a_k theta^k.
    double mean(double theta) const;

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    int first() const { return first_; }
    double sigma() const { return sigma_; }
    const std::vector<double>& coeffs() const { return coeffs_; }

private:
    std::vector<double> coeffs_;
    int first_ = 1;
    double sigma_ = 1.0;
};

/// Hermite-substituted form of the monomial polynomial `coeffs`.
HermiteSeries hermitize(std::span<const double> coeffs, bool include_constant, double sigma = 1.0);

}  // namespace addfunc
