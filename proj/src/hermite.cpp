#include "addfunc/hermite.hpp"

#include <Eigen/Eigenvalues>
#include <cfloat>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace addfunc {

HermiteOverflow::HermiteOverflow(int degree)
    : NumericalError("Hermite polynomial overflow at degree " + std::to_string(degree)),
      degree_(degree) {}

HermiteEval hermite_all(double x, int K) {
    require(K >= 0, "K >= 0");
    require(K <= kMaxHermiteDegree, "K <= 200");
    HermiteEval out;
    out.max_degree = K;
    out.values.resize(static_cast<std::size_t>(K + 1));
    long double hm1 = 0.0L, h = 1.0L;
    const long double xl = x;
    for (int k = 0; k <= K; ++k) {
        if (!(std::fabs(h) <= static_cast<long double>(DBL_MAX))) throw HermiteOverflow(k);
        out.values[static_cast<std::size_t>(k)] = static_cast<double>(h);
        const long double next = xl * h - static_cast<long double>(k) * hm1;
        hm1 = h;
        h = next;
    }
    return out;
}

double variance_scaled_hermite(double x, int k, double sigma) {
    require(sigma > 0.0, "sigma > 0");
    require(k >= 0 && k <= kMaxHermiteDegree, "0 <= k <= 200");
    const long double s2 = static_cast<long double>(sigma) * sigma;
    long double gm1 = 0.0L, g = 1.0L;
    for (int j = 0; j < k; ++j) {
        const long double next = x * g - s2 * j * gm1;
        gm1 = g;
        g = next;
        if (!(std::fabs(g) <= static_cast<long double>(DBL_MAX))) throw HermiteOverflow(j + 1);
    }
    return static_cast<double>(g);
}

namespace {

// Orthonormal h_k = H_k / sqrt(k!) and the derivative of h_n at x.
void orthonormal(long double x, int n, long double& hn, long double& dhn, long double& sumsq) {
    long double hm1 = 0.0L, h = 1.0L;
    sumsq = 0.0L;
    for (int k = 0; k < n; ++k) {
        sumsq += h * h;
        const long double next = (x * h - std::sqrt(static_cast<long double>(k)) * hm1) /
                                 std::sqrt(static_cast<long double>(k + 1));
        hm1 = h;
        h = next;
    }
    hn = h;
    dhn = std::sqrt(static_cast<long double>(n)) * hm1;
}

std::unique_ptr<GaussHermiteRule> build_rule(int n) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) J(k, k - 1) = J(k - 1, k) = std::sqrt(static_cast<double>(k));
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(J, Eigen::EigenvaluesOnly);

    auto rule = std::make_unique<GaussHermiteRule>();
    rule->nodes.resize(static_cast<std::size_t>(n));
    rule->weights.resize(static_cast<std::size_t>(n));
    long double total = 0.0L;
    for (int i = 0; i < n; ++i) {
        long double x = eig.eigenvalues()(i);
        long double hn, dhn, sumsq;
        for (int it = 0; it < 3; ++it) {
            orthonormal(x, n, hn, dhn, sumsq);
            if (dhn != 0.0L) x -= hn / dhn;
        }
        orthonormal(x, n, hn, dhn, sumsq);
        rule->nodes[static_cast<std::size_t>(i)] = static_cast<double>(x);
        rule->weights[static_cast<std::size_t>(i)] = static_cast<double>(1.0L / sumsq);
        total += 1.0L / sumsq;
    }
    // Enforce the exact symmetry of the rule.
    for (int i = 0; i < n / 2; ++i) {
        auto& lo = rule->nodes[static_cast<std::size_t>(i)];
        auto& hi = rule->nodes[static_cast<std::size_t>(n - 1 - i)];
        const double x = 0.5 * (hi - lo);
        lo = -x;
        hi = x;
        auto& wl = rule->weights[static_cast<std::size_t>(i)];
        auto& wh = rule->weights[static_cast<std::size_t>(n - 1 - i)];
        wl = wh = 0.5 * (wl + wh);
    }
    if (n % 2 == 1) rule->nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    for (auto& w : rule->weights) w = static_cast<double>(w / total);
    return rule;
}

}  // namespace

const GaussHermiteRule& gauss_hermite(int n) {
    require(n >= 1, "n >= 1 quadrature nodes");
    static std::mutex mu;
    static std::map<int, std::unique_ptr<GaussHermiteRule>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[n];
    if (!slot) slot = build_rule(n);
    return *slot;
}

double normal_expectation(const std::function<double(double)>& f, double theta, double sigma,
                          int n) {
    const auto& rule = gauss_hermite(n);
    long double acc = 0.0L;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        acc += static_cast<long double>(rule.weights[i]) * f(theta + sigma * rule.nodes[i]);
    return static_cast<double>(acc);
}

namespace {

long double hermite_value(long double x, int k) {
    long double hm1 = 0.0L, h = 1.0L;
    for (int j = 0; j < k; ++j) {
        const long double next = x * h - j * hm1;
        hm1 = h;
        h = next;
    }
    return h;
}

}  // namespace

double hermite_moment_check(double theta, int k, int n_quad) {
    require(k >= 0 && k <= kMaxHermiteDegree, "0 <= k <= 200");
    require(n_quad >= 2 * k + 2, "n_quad >= 2k+2");
    const auto& rule = gauss_hermite(n_quad);
    long double acc = 0.0L;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        acc += rule.weights[i] * hermite_value(static_cast<long double>(theta) + rule.nodes[i], k);
    return static_cast<double>(acc);
}

double hermite_second_moment(double theta, int k, int n_quad) {
    require(k >= 0 && k <= kMaxHermiteDegree, "0 <= k <= 200");
    require(n_quad >= k + 1, "n_quad >= k+1");
    const auto& rule = gauss_hermite(n_quad);
    long double acc = 0.0L;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const long double h = hermite_value(static_cast<long double>(theta) + rule.nodes[i], k);
        acc += rule.weights[i] * h * h;
    }
    return static_cast<double>(acc);
}

HermiteSeries::HermiteSeries(std::vector<double> coeffs, bool include_constant, double sigma)
    : coeffs_(std::move(coeffs)), first_(include_constant ? 0 : 1), sigma_(sigma) {
    require(!coeffs_.empty(), "nonempty coefficient list");
    require(sigma > 0.0, "sigma > 0");
    require(degree() <= kMaxHermiteDegree, "degree <= 200");
}

double HermiteSeries::operator()(double u) const {
    const long double s2 = static_cast<long double>(sigma_) * sigma_;
    const long double x = u;
    long double gm1 = 0.0L, g = 1.0L, acc = 0.0L;
    const int K = degree();
    for (int k = 0; k <= K; ++k) {
        if (k >= first_) acc += coeffs_[static_cast<std::size_t>(k)] * g;
        const long double next = x * g - s2 * k * gm1;
        gm1 = g;
        g = next;
    }
    return static_cast<double>(acc);
}

double HermiteSeries::mean(double theta) const {
    long double acc = 0.0L;
    for (int k = degree(); k >= first_; --k) acc = acc * theta + coeffs_[static_cast<std::size_t>(k)];
    if (first_ == 1) acc *= theta;
    return static_cast<double>(acc);
}

HermiteSeries hermitize(std::span<const double> coeffs, bool include_constant, double sigma) {
    return HermiteSeries(std::vector<double>(coeffs.begin(), coeffs.end()), include_constant, sigma);
}

}  // namespace addfunc
