#include "addfunc/estimator.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "addfunc/errors.hpp"
#include "addfunc/rng.hpp"
#include "addfunc/summation.hpp"

namespace addfunc {

const char* to_string(NoiseMode m) {
    switch (m) {
        case NoiseMode::oracle_pairs: return "oracle";
        case NoiseMode::duplicate: return "duplicate";
        case NoiseMode::raw: return "raw";
    }
    return "?";
}

NoiseMode parse_noise_mode(const std::string& text) {
    if (text == "oracle" || text == "oracle_pairs") return NoiseMode::oracle_pairs;
    if (text == "duplicate") return NoiseMode::duplicate;
    if (text == "raw") return NoiseMode::raw;
    throw PreconditionError("requires noise mode in {oracle, duplicate, raw}, got '" + text + "'");
}

int LevelSchedule::select(double v) const {
    const double a = std::fabs(v);
    for (int l = 0; l <= L; ++l)
        if (a <= levels[static_cast<std::size_t>(l)].t) return l;
    return L + 1;
}

namespace {

int level_degree(double c, double M) {
    return std::max(1, static_cast<int>(std::floor(c * M * M / 8.0)));
}

}  // namespace

LevelSchedule build_schedule(int d, int s, double c) {
    require(d >= 1, "d >= 1");
    require(s <= d, "s <= d");
    require(2.0 * std::sqrt(static_cast<double>(d)) <= s,
            "2*sqrt(d) <= s (use the simplified estimator for sparser signals)");
    require(c > 0.0, "c > 0");

    LevelSchedule sch;
    sch.c = c;
    sch.s = s;
    sch.d = d;
    const double log_d = std::log(static_cast<double>(d));
    const double ls = std::log(static_cast<double>(s) * s / d);
    const double bound = std::sqrt(log_d / ls);
    sch.L = -1;
    while (std::ldexp(1.0, sch.L + 1) < bound) ++sch.L;

    for (int l = 0; l <= sch.L; ++l) {
        Level lv;
        lv.l = l;
        lv.M = std::ldexp(std::sqrt(2.0 * ls), l);
        lv.K = level_degree(c, lv.M);
        lv.t = lv.M / 2.0;
        sch.levels.push_back(lv);
    }
    sch.top.l = sch.L + 1;
    sch.top.M = std::sqrt(2.0 * log_d);
    sch.top.K = level_degree(c, sch.top.M);
    sch.top.t = std::numeric_limits<double>::infinity();
    return sch;
}

std::pair<std::vector<double>, std::vector<double>> duplicate_samples(std::span<const double> y,
                                                                      std::uint64_t seed) {
    std::vector<double> y1(y.size()), y2(y.size());
    for (std::size_t i = 0; i < y.size(); i += 2) {
        const auto z = rng::normal_pair(seed, rng::Stream::duplication, 0, i / 2);
        for (std::size_t j = 0; j < 2 && i + j < y.size(); ++j) {
            y1[i + j] = y[i + j] + z[j];
            y2[i + j] = y[i + j] - z[j];
        }
    }
    return {std::move(y1), std::move(y2)};
}

FittedEstimator fit(const MarginalFunctional& F, const LevelSchedule& schedule, NoiseMode noise_mode) {
    require(noise_mode != NoiseMode::raw, "noise mode oracle or duplicate for the multi-scale estimator");
    FittedEstimator fe;
    fe.kind = FittedEstimator::Kind::multiscale;
    fe.schedule = schedule;
    fe.value_at_zero = F.value_at_zero();
    fe.noise_mode = noise_mode;
    fe.label = F.label();
    const double sigma = noise_mode == NoiseMode::duplicate ? std::numbers::sqrt2 : 1.0;
    const MarginalFunctional G = F.centered();
    for (int i = 0; i < schedule.level_count(); ++i) {
        const Level& lv = schedule.level(i);
        PolyApprox p = remez(G, lv.K, -lv.M, lv.M);
        if (!p.converged)
            throw NumericalError("remez did not converge at level " + std::to_string(i) +
                                 " (K = " + std::to_string(lv.K) + ")");
        fe.rate = std::max(fe.rate, p.delta * p.delta);
        fe.per_level_series.push_back(hermitize(p.coeffs, false, sigma));
        fe.per_level_poly.push_back(std::move(p));
    }
    return fe;
}

int simplified_degree(int d, double M, double c) {
    const double log_d = std::log(static_cast<double>(d));
    const double K = c * log_d / std::log(std::numbers::e * log_d / (M * M));
    return std::max(1, static_cast<int>(std::floor(K)));
}

FittedEstimator fit_simplified(const MarginalFunctional& F, int d, double M, double c) {
    require(d >= 2, "d >= 2");
    require(M > 0.0, "M > 0");
    require(M <= std::sqrt(std::log(static_cast<double>(d))), "M <= sqrt(log d)");
    require(c > 0.0, "c > 0");

    FittedEstimator fe;
    fe.kind = FittedEstimator::Kind::simplified;
    fe.schedule.c = c;
    fe.schedule.L = -1;
    fe.schedule.s = d;
    fe.schedule.d = d;
    fe.schedule.top.l = 0;
    fe.schedule.top.M = M;
    fe.schedule.top.K = simplified_degree(d, M, c);
    fe.schedule.top.t = std::numeric_limits<double>::infinity();
    fe.value_at_zero = F.value_at_zero();
    fe.noise_mode = NoiseMode::raw;
    fe.label = F.label();

    // Fitting F - F(0) and adding d F(0) back is identical to fitting F,
    // since best approximation commutes with adding constants.
    PolyApprox p = remez(F.centered(), fe.schedule.top.K, -M, M);
    if (!p.converged)
        throw NumericalError("remez did not converge (K = " + std::to_string(fe.schedule.top.K) + ")");
    fe.rate = p.delta * p.delta;
    fe.per_level_series.push_back(hermitize(p.coeffs, true, 1.0));
    fe.per_level_poly.push_back(std::move(p));
    return fe;
}

double estimate_pairs(const FittedEstimator& fitted, std::span<const double> y1,
                      std::span<const double> y2) {
    require(fitted.kind == FittedEstimator::Kind::multiscale, "a multi-scale estimator");
    require(y1.size() == static_cast<std::size_t>(fitted.d()), "length(y1) = d");
    require(y2.size() == static_cast<std::size_t>(fitted.d()), "length(y2) = d");
    CompensatedSum sum;
    sum += static_cast<long double>(fitted.d()) * fitted.value_at_zero;
    for (std::size_t i = 0; i < y1.size(); ++i) {
        const int l = fitted.schedule.select(y2[i]);
        sum += fitted.per_level_series[static_cast<std::size_t>(l)](y1[i]);
    }
    return sum.value();
}

double estimate(const FittedEstimator& fitted, std::span<const double> y, std::uint64_t seed) {
    require(y.size() == static_cast<std::size_t>(fitted.d()), "length(y) = d");
    if (fitted.kind == FittedEstimator::Kind::simplified) {
        CompensatedSum sum;
        sum += static_cast<long double>(fitted.d()) * fitted.value_at_zero;
        const auto& series = fitted.per_level_series.front();
        for (double v : y) sum += series(v);
        return sum.value();
    }
    require(fitted.noise_mode == NoiseMode::duplicate,
            "duplicate noise mode (oracle pairs are passed to estimate_pairs)");
    const auto [y1, y2] = duplicate_samples(y, seed);
    return estimate_pairs(fitted, y1, y2);
}

}  // namespace addfunc
