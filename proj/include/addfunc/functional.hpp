#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace addfunc {

/// The scalar map F whose coordinatewise sum is estimated.
///
/// Instances are immutable. `value_at_zero` is always supplied by whoever
/// constructs the functional; it is never inferred by evaluating near 0.
/// `kinks` lists points where F is not differentiable; the approximation
/// routines evaluate the error there explicitly instead of relying on a scan.
class MarginalFunctional {
public:
    using Eval = std::function<double(double)>;

    MarginalFunctional(Eval eval, std::string label, double value_at_zero, bool is_even,
                       std::vector<double> params = {}, std::vector<double> kinks = {});

    double operator()(double t) const { return eval_(t); }

    const std::string& label() const { return label_; }
    double value_at_zero() const { return value_at_zero_; }
    bool is_even() const { return is_even_; }
    const std::vector<double>& params() const { return params_; }
    const std::vector<double>& kinks() const { return kinks_; }

    /// F - F(0). Same label suffixed with "-F(0)" when F(0) != 0.
    MarginalFunctional centered() const;

    /// F + kappa.
    MarginalFunctional shifted(double kappa) const;

    /// sup |F - F(0)| over [-M, M], from a dense scan plus the kinks and endpoints.
    double centered_sup_norm(double M) const;

private:
    Eval eval_;
    std::string label_;
    double value_at_zero_;
    bool is_even_;
    std::vector<double> params_;
    std::vector<double> kinks_;
};

/// Built-in functionals: "abs_pow" (|t|^gamma, params = {gamma}), "square",
/// "identity" and "neg_t_log" (-t log|t|, continuous extension 0 at t = 0).
MarginalFunctional builtin_functional(const std::string& name, std::span<const double> params = {});

/// Functional from an arithmetic expression in `t` (see Expression).
MarginalFunctional expression_functional(const std::string& text, double value_at_zero,
                                         bool is_even = false);

/// Parses "name", "name:p1,p2" or "expr:<expression>" (the latter requires
/// `value_at_zero`).
MarginalFunctional parse_functional(const std::string& spec, const double* value_at_zero = nullptr);

/// Theta_{s,M} = { theta in R^d : |theta|_0 <= s, |theta|_inf <= M }.
struct ParameterSpace {
    int d = 1;
    int s = 1;
    double M = 1.0;

    /// Validates 0 <= s <= d, d >= 1, M > 0.
    static ParameterSpace make(int d, int s, double M);

    bool contains(std::span<const double> theta) const;
};

enum class Placement { first_coords, random };

/// Magnitudes for the nonzero coordinates: either every one of the s slots at
/// the same value, or an explicit list (one value per placed coordinate).
struct ThetaValues {
    bool all_at = true;
    std::vector<double> values;

    static ThetaValues at(double v) { return {true, {v}}; }
    static ThetaValues spread(std::vector<double> v) { return {false, std::move(v)}; }
};

/// Builds a member of Theta_{s,M}; deterministic given `seed`.
std::vector<double> make_theta(const ParameterSpace& space, Placement placement,
                               const ThetaValues& values, std::uint64_t seed = 0);

/// sum_i F(theta_i).
double additive_value(const MarginalFunctional& F, std::span<const double> theta);

}  // namespace addfunc
