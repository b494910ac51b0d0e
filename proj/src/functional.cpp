#include "addfunc/functional.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "addfunc/errors.hpp"
#include "addfunc/expression.hpp"
#include "addfunc/rng.hpp"
#include "addfunc/summation.hpp"

namespace addfunc {

MarginalFunctional::MarginalFunctional(Eval eval, std::string label, double value_at_zero,
                                       bool is_even, std::vector<double> params,
                                       std::vector<double> kinks)
    : eval_(std::move(eval)),
      label_(std::move(label)),
      value_at_zero_(value_at_zero),
      is_even_(is_even),
      params_(std::move(params)),
      kinks_(std::move(kinks)) {
    if (!eval_) throw PreconditionError("functional: empty evaluation callback");
    std::sort(kinks_.begin(), kinks_.end());
}

MarginalFunctional MarginalFunctional::centered() const {
    if (value_at_zero_ == 0.0) return *this;
    return shifted(-value_at_zero_);
}

MarginalFunctional MarginalFunctional::shifted(double kappa) const {
    if (kappa == 0.0) return *this;
    auto inner = eval_;
    const double f0 = value_at_zero_ + kappa;
    std::string label = label_;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%+.17g", kappa);
    label += buf;
    return MarginalFunctional([inner, kappa](double t) { return inner(t) + kappa; }, label, f0,
                              is_even_, params_, kinks_);
}

double MarginalFunctional::centered_sup_norm(double M) const {
    constexpr int n = 4001;
    double best = 0.0;
    auto visit = [&](double t) { best = std::max(best, std::fabs(eval_(t) - value_at_zero_)); };
    for (int i = 0; i < n; ++i) visit(-M + 2.0 * M * i / (n - 1));
    for (double k : kinks_)
        if (std::fabs(k) <= M) visit(k);
    return best;
}

MarginalFunctional builtin_functional(const std::string& name, std::span<const double> params) {
    std::vector<double> p(params.begin(), params.end());
    if (name == "abs_pow") {
        require(p.size() == 1, "abs_pow takes exactly one parameter gamma");
        const double gamma = p[0];
        require(gamma > 0.0, "gamma > 0 for abs_pow");
        char label[64];
        std::snprintf(label, sizeof label, "abs_pow:%.17g", gamma);
        return MarginalFunctional([gamma](double t) { return std::pow(std::fabs(t), gamma); },
                                  label, 0.0, true, p, {0.0});
    }
    require(p.empty(), "no parameters for functional '" + name + "'");
    if (name == "square")
        return MarginalFunctional([](double t) { return t * t; }, "square", 0.0, true);
    if (name == "identity")
        return MarginalFunctional([](double t) { return t; }, "identity", 0.0, false);
    if (name == "neg_t_log")
        return MarginalFunctional(
            [](double t) { return t == 0.0 ? 0.0 : -t * std::log(std::fabs(t)); }, "neg_t_log",
            0.0, false, {}, {0.0});
    throw PreconditionError("unknown functional '" + name +
                            "' (expected abs_pow, square, identity, neg_t_log or expr:...)");
}

MarginalFunctional expression_functional(const std::string& text, double value_at_zero,
                                         bool is_even) {
    const Expression e = Expression::parse(text);
    return MarginalFunctional([e](double t) { return e(t); }, "expr:" + text, value_at_zero,
                              is_even);
}

MarginalFunctional parse_functional(const std::string& spec, const double* value_at_zero) {
    if (spec.rfind("expr:", 0) == 0) {
        require(value_at_zero != nullptr, "value_at_zero for an expression functional");
        return expression_functional(spec.substr(5), *value_at_zero);
    }
    const auto colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    std::vector<double> params;
    if (colon != std::string::npos) {
        std::string rest = spec.substr(colon + 1);
        std::size_t pos = 0;
        while (pos <= rest.size()) {
            const auto comma = rest.find(',', pos);
            const std::string tok = rest.substr(pos, comma == std::string::npos ? std::string::npos
                                                                                 : comma - pos);
            char* end = nullptr;
            const double v = std::strtod(tok.c_str(), &end);
            if (tok.empty() || *end != '\0')
                throw PreconditionError("functional parameter '" + tok + "' is not a number");
            params.push_back(v);
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
    }
    return builtin_functional(name, params);
}

ParameterSpace ParameterSpace::make(int d, int s, double M) {
    require(d >= 1, "d >= 1");
    require(s >= 0, "s >= 0");
    require(s <= d, "s <= d");
    require(M > 0.0, "M > 0");
    return {d, s, M};
}

bool ParameterSpace::contains(std::span<const double> theta) const {
    if (theta.size() != static_cast<std::size_t>(d)) return false;
    int nnz = 0;
    for (double v : theta) {
        if (!(std::fabs(v) <= M)) return false;
        if (v != 0.0) ++nnz;
    }
    return nnz <= s;
}

std::vector<double> make_theta(const ParameterSpace& space, Placement placement,
                               const ThetaValues& values, std::uint64_t seed) {
    const std::size_t count = values.all_at ? static_cast<std::size_t>(space.s) : values.values.size();
    require(count <= static_cast<std::size_t>(space.s), "number of placed values <= s");
    require(!values.values.empty() || count == 0, "at least one value");
    for (double v : values.values)
        require(std::fabs(v) <= space.M, "|value| <= M");

    std::vector<std::size_t> idx(static_cast<std::size_t>(space.d));
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    if (placement == Placement::random) {
        // Partial Fisher-Yates: the first `count` slots become the support.
        for (std::size_t j = 0; j < count; ++j) {
            const double u = rng::uniform(seed, rng::Stream::placement, 0, j);
            const std::size_t k = j + static_cast<std::size_t>(u * static_cast<double>(idx.size() - j));
            std::swap(idx[j], idx[std::min(k, idx.size() - 1)]);
        }
    }
    std::vector<double> theta(static_cast<std::size_t>(space.d), 0.0);
    for (std::size_t j = 0; j < count; ++j)
        theta[idx[j]] = values.all_at ? values.values.front() : values.values[j];
    return theta;
}

double additive_value(const MarginalFunctional& F, std::span<const double> theta) {
    CompensatedSum sum;
    for (double t : theta) sum += F(t);
    return sum.value();
}

}  // namespace addfunc
