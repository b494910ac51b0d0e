#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "addfunc/estimator.hpp"
#include "addfunc/functional.hpp"

namespace addfunc {

/// y = theta + xi, xi ~ N(0, I), drawn from `seed`.
std::vector<double> simulate(std::span<const double> theta, std::uint64_t seed);

struct RiskConfig {
    int d = 0;
    int s = 0;
    double M = 0.0;
    double c = 0.0;
    std::string F_label;
    NoiseMode noise_mode = NoiseMode::oracle_pairs;
    int n_reps = 0;
    std::uint64_t seed = 0;
};

struct RiskReport {
    RiskConfig config;
    std::string theta_label;
    double truth = 0.0;          // sum_i F(theta_i)
    double mean_error = 0.0;     // mean of (estimate - truth)
    double se_mean_error = 0.0;
    double mse = 0.0;
    double se_mse = 0.0;         // jackknife
    double bias_sq = 0.0;
    double variance = 0.0;       // 1/n normalisation, so mse = bias_sq + variance
    double rate_upper = 0.0;     // s^2 max_l delta^2
    double rate_lower = 0.0;     // rate_expression, NaN when s^2 < 2d
    double ratio = 0.0;          // mse / rate_upper, NaN when rate_upper = 0
};

struct RiskOptions {
    int threads = 0;  // <= 0: hardware concurrency
    std::string theta_label = "custom";
    double M = 0.0;   // reported bound on |theta|; 0 selects the top level's M
    std::optional<double> rate_lower;  // computed when absent
};

/// Monte Carlo risk over n_reps >= 100 replications. Replication r uses the
/// counter-based streams of child_seed(seed, r), so the report does not
/// depend on the number of threads.
RiskReport measure_risk(const FittedEstimator& fitted, const MarginalFunctional& F,
                        std::span<const double> theta, int n_reps, std::uint64_t seed,
                        const RiskOptions& opt = {});

struct ThetaCandidate {
    std::string label;
    std::vector<double> theta;
};

/// All s spikes on the first coordinates, at each magnitude among
/// M_l/4, t_l, 2 t_l, M_l over the levels and M itself (those <= M).
/// For s = 0 the only candidate is theta = 0.
std::vector<ThetaCandidate> default_candidates(const FittedEstimator& fitted,
                                               const ParameterSpace& space);

struct SweepResult {
    std::vector<RiskReport> reports;
    std::size_t worst = 0;  // index of the largest mse
};

/// Risk at every candidate with the same seed (common random numbers).
SweepResult adversarial_sweep(const FittedEstimator& fitted, const MarginalFunctional& F,
                              const ParameterSpace& space,
                              const std::vector<ThetaCandidate>& candidates, int n_reps,
                              std::uint64_t seed, const RiskOptions& opt = {});

struct ScalingRow {
    int d = 0;
    int s = 0;
    double mse_worst = 0.0;
    double rate_upper = 0.0;
    double ratio = 0.0;  // NaN when rate_upper = 0
    std::string worst_label;
};

/// Worst-candidate risk of the multi-scale estimator for each d, with
/// s = s_rule(d) and theta bounded by sqrt(2 log d).
std::vector<ScalingRow> rate_scaling_study(const MarginalFunctional& F, const std::vector<int>& d_list,
                                           const std::function<int(int)>& s_rule, double c,
                                           int n_reps, std::uint64_t seed,
                                           NoiseMode noise_mode = NoiseMode::oracle_pairs,
                                           int threads = 0);

}  // namespace addfunc
