#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "addfunc/functional.hpp"
#include "addfunc/hermite.hpp"
#include "addfunc/polyapprox.hpp"

namespace addfunc {

/// How the two samples feeding each coordinate are obtained.
///
/// oracle_pairs: the caller supplies two independent N(theta, 1) vectors.
/// duplicate: y is split into y + z and y - z, z ~ N(0, 1); both are
///   N(theta, 2) and the Hermite terms are rescaled with sigma = sqrt(2).
/// raw: a single N(theta, 1) vector, used by the simplified estimator.
enum class NoiseMode { oracle_pairs, duplicate, raw };

const char* to_string(NoiseMode m);
NoiseMode parse_noise_mode(const std::string& text);

struct Level {
    int l = 0;
    double M = 0.0;
    int K = 1;
    double t = 0.0;  // selector threshold; unused for the top level
};

/// Intervals, degrees and thresholds of the multi-scale estimator.
struct LevelSchedule {
    double c = 1.0;
    std::vector<Level> levels;  // l = 0 .. L
    int L = -1;
    Level top;                  // l = L + 1
    int s = 0;
    int d = 0;

    int level_count() const { return L + 2; }
    const Level& level(int i) const { return i <= L ? levels[static_cast<std::size_t>(i)] : top; }

    /// Index of the level whose selector fires for v: level 0 covers
    /// |v| <= t_0, level l covers t_{l-1} < |v| <= t_l, the top level covers
    /// |v| > t_L (every v when L = -1).
    int select(double v) const;
};

/// Requires 2 sqrt(d) <= s <= d and c > 0.
LevelSchedule build_schedule(int d, int s, double c);

/// y1 = y + z, y2 = y - z with z ~ N(0, 1) drawn from `seed`.
std::pair<std::vector<double>, std::vector<double>> duplicate_samples(std::span<const double> y,
                                                                      std::uint64_t seed);

struct FittedEstimator {
    enum class Kind { multiscale, simplified };

    Kind kind = Kind::multiscale;
    LevelSchedule schedule;
    std::vector<PolyApprox> per_level_poly;  // approximations of F - F(0)
    std::vector<HermiteSeries> per_level_series;
    double value_at_zero = 0.0;
    NoiseMode noise_mode = NoiseMode::oracle_pairs;
    std::string label;
    double rate = 0.0;  // max_l delta_{K_l,M_l}^2

    int d() const { return schedule.d; }
};

/// Multi-scale estimator. noise_mode must be oracle_pairs or duplicate.
/// Throws NumericalError naming the level if remez fails to converge.
FittedEstimator fit(const MarginalFunctional& F, const LevelSchedule& schedule, NoiseMode noise_mode);

/// Degree of the simplified estimator: max(1, floor(c log d / log(e log d / M^2))).
int simplified_degree(int d, double M, double c);

/// Single-level estimator on raw y, Hermite sum from k = 0.
/// Requires d >= 2, 0 < M <= sqrt(log d), c > 0.
FittedEstimator fit_simplified(const MarginalFunctional& F, int d, double M, double c);

/// Estimate from one observation vector: duplicate mode splits y using
/// `seed`, raw mode uses y directly. oracle_pairs needs estimate_pairs.
double estimate(const FittedEstimator& fitted, std::span<const double> y, std::uint64_t seed);

/// d F(0) + sum_i sum_{k>=1} a_{k,l(i)} H_k(y1_i), with l(i) selected by |y2_i|.
double estimate_pairs(const FittedEstimator& fitted, std::span<const double> y1,
                      std::span<const double> y2);

}  // namespace addfunc
