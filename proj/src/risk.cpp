#include "addfunc/risk.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <thread>

#include "addfunc/errors.hpp"
#include "addfunc/lowerbound.hpp"
#include "addfunc/rng.hpp"
#include "addfunc/summation.hpp"

namespace addfunc {

std::vector<double> simulate(std::span<const double> theta, std::uint64_t seed) {
    std::vector<double> y(theta.size());
    for (std::size_t i = 0; i < theta.size(); i += 2) {
        const auto z = rng::normal_pair(seed, rng::Stream::observation, 0, i / 2);
        y[i] = theta[i] + z[0];
        if (i + 1 < theta.size()) y[i + 1] = theta[i + 1] + z[1];
    }
    return y;
}

namespace {

double one_replication(const FittedEstimator& fitted, std::span<const double> theta,
                       std::uint64_t rep_seed, std::vector<double>& y1, std::vector<double>& y2) {
    if (fitted.noise_mode == NoiseMode::oracle_pairs) {
        for (std::size_t i = 0; i < theta.size(); ++i) {
            const auto z = rng::normal_pair(rep_seed, rng::Stream::observation, 0, i);
            y1[i] = theta[i] + z[0];
            y2[i] = theta[i] + z[1];
        }
        return estimate_pairs(fitted, y1, y2);
    }
    return estimate(fitted, simulate(theta, rep_seed), rep_seed);
}

[[noreturn]] void rethrow_with_rep(std::exception_ptr ep, int rep) {
    const std::string where = "replication " + std::to_string(rep) + ": ";
    try {
        std::rethrow_exception(ep);
    } catch (const PreconditionError& e) {
        throw PreconditionError(where + e.what());
    } catch (const NumericalError& e) {
        throw NumericalError(where + e.what());
    } catch (const std::exception& e) {
        throw NumericalError(where + e.what());
    }
}

std::string format_magnitude(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "spikes@%.6g", v);
    return buf;
}

}  // namespace

RiskReport measure_risk(const FittedEstimator& fitted, const MarginalFunctional& F,
                        std::span<const double> theta, int n_reps, std::uint64_t seed,
                        const RiskOptions& opt) {
    require(n_reps >= 100, "n_reps >= 100");
    require(theta.size() == static_cast<std::size_t>(fitted.d()), "length(theta) = d");

    RiskReport rep;
    rep.config.d = fitted.d();
    rep.config.s = fitted.schedule.s;
    rep.config.M = opt.M > 0.0 ? opt.M : fitted.schedule.top.M;
    rep.config.c = fitted.schedule.c;
    rep.config.F_label = F.label();
    rep.config.noise_mode = fitted.noise_mode;
    rep.config.n_reps = n_reps;
    rep.config.seed = seed;
    rep.theta_label = opt.theta_label;
    rep.truth = additive_value(F, theta);

    std::vector<double> errors(static_cast<std::size_t>(n_reps));
    unsigned threads = opt.threads > 0 ? static_cast<unsigned>(opt.threads)
                                       : std::max(1U, std::thread::hardware_concurrency());
    threads = std::min(threads, static_cast<unsigned>(n_reps));
    std::vector<std::exception_ptr> failure(threads);
    std::vector<int> failed_rep(threads, -1);
    auto work = [&](unsigned w) {
        const int lo = static_cast<int>(static_cast<long long>(n_reps) * w / threads);
        const int hi = static_cast<int>(static_cast<long long>(n_reps) * (w + 1) / threads);
        std::vector<double> y1(theta.size()), y2(theta.size());
        for (int r = lo; r < hi; ++r) {
            try {
                const double est = one_replication(fitted, theta, rng::child_seed(seed, static_cast<std::uint64_t>(r)), y1, y2);
                errors[static_cast<std::size_t>(r)] = est - rep.truth;
            } catch (...) {
                failure[w] = std::current_exception();
                failed_rep[w] = r;
                return;
            }
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    for (unsigned w = 0; w < threads; ++w)
        if (failure[w]) rethrow_with_rep(failure[w], failed_rep[w]);

    // Serial reduction in replication order keeps the result independent of
    // the thread count.
    const long double n = n_reps;
    CompensatedSum s1, s2;
    for (double e : errors) {
        s1 += e;
        s2 += static_cast<long double>(e) * e;
    }
    const long double mean = s1.extended() / n;
    const long double mse = s2.extended() / n;
    CompensatedSum c2;
    for (double e : errors) c2 += (e - mean) * (e - mean);
    const long double var = c2.extended() / n;

    // Jackknife over replications for the mse.
    CompensatedSum jk;
    for (double e : errors) {
        const long double loo = (s2.extended() - static_cast<long double>(e) * e) / (n - 1);
        jk += (loo - mse) * (loo - mse);
    }

    rep.mean_error = static_cast<double>(mean);
    rep.se_mean_error = static_cast<double>(std::sqrt(c2.extended() / (n - 1) / n));
    rep.mse = static_cast<double>(mse);
    rep.bias_sq = static_cast<double>(mean * mean);
    rep.variance = static_cast<double>(var);
    rep.se_mse = static_cast<double>(std::sqrt((n - 1) / n * jk.extended()));

    const double s = rep.config.s;
    rep.rate_upper = s * s * fitted.rate;
    if (opt.rate_lower) {
        rep.rate_lower = *opt.rate_lower;
    } else if (s * s >= 2.0 * rep.config.d) {
        rep.rate_lower = rate_expression(F, rep.config.d, rep.config.s).value;
    } else {
        rep.rate_lower = std::numeric_limits<double>::quiet_NaN();
    }
    rep.ratio = rep.rate_upper > 0.0 ? rep.mse / rep.rate_upper
                                     : std::numeric_limits<double>::quiet_NaN();
    return rep;
}

std::vector<ThetaCandidate> default_candidates(const FittedEstimator& fitted,
                                               const ParameterSpace& space) {
    require(space.d == fitted.d(), "parameter space dimension = d");
    if (space.s == 0) return {{"zero", std::vector<double>(static_cast<std::size_t>(space.d), 0.0)}};

    std::vector<double> mags;
    const auto& sch = fitted.schedule;
    for (int i = 0; i < sch.level_count(); ++i) {
        const Level& lv = sch.level(i);
        mags.push_back(lv.M / 4.0);
        mags.push_back(lv.M);
        if (std::isfinite(lv.t)) {
            mags.push_back(lv.t);
            mags.push_back(2.0 * lv.t);
        }
    }
    mags.push_back(space.M);
    std::sort(mags.begin(), mags.end());
    std::vector<double> kept;
    for (double v : mags) {
        if (v > space.M || v <= 0.0) continue;
        if (!kept.empty() && std::fabs(v - kept.back()) <= 1e-12 * v) continue;
        kept.push_back(v);
    }

    std::vector<ThetaCandidate> out;
    for (double v : kept)
        out.push_back({format_magnitude(v),
                       make_theta(space, Placement::first_coords, ThetaValues::at(v), 0)});
    return out;
}

SweepResult adversarial_sweep(const FittedEstimator& fitted, const MarginalFunctional& F,
                              const ParameterSpace& space,
                              const std::vector<ThetaCandidate>& candidates, int n_reps,
                              std::uint64_t seed, const RiskOptions& opt) {
    require(!candidates.empty(), "a nonempty candidate list");
    for (const auto& c : candidates)
        if (!space.contains(c.theta))
            throw PreconditionError("requires candidate '" + c.label + "' in Theta_{s,M}");

    RiskOptions o = opt;
    o.M = space.M;
    if (!o.rate_lower) {
        const double s = fitted.schedule.s;
        o.rate_lower = s * s >= 2.0 * fitted.d() ? rate_expression(F, fitted.d(), fitted.schedule.s).value
                                                 : std::numeric_limits<double>::quiet_NaN();
    }
    SweepResult res;
    for (const auto& c : candidates) {
        o.theta_label = c.label;
        res.reports.push_back(measure_risk(fitted, F, c.theta, n_reps, seed, o));
        if (res.reports.back().mse > res.reports[res.worst].mse) res.worst = res.reports.size() - 1;
    }
    return res;
}

std::vector<ScalingRow> rate_scaling_study(const MarginalFunctional& F, const std::vector<int>& d_list,
                                           const std::function<int(int)>& s_rule, double c,
                                           int n_reps, std::uint64_t seed, NoiseMode noise_mode,
                                           int threads) {
    require(!d_list.empty(), "a nonempty list of d");
    std::vector<ScalingRow> rows;
    for (int d : d_list) {
        const int s = s_rule(d);
        const auto schedule = build_schedule(d, s, c);
        const auto fitted = fit(F, schedule, noise_mode);
        const auto space = ParameterSpace::make(d, s, schedule.top.M);
        RiskOptions opt;
        opt.threads = threads;
        const auto sweep = adversarial_sweep(fitted, F, space, default_candidates(fitted, space),
                                             n_reps, seed, opt);
        const auto& worst = sweep.reports[sweep.worst];
        rows.push_back({d, s, worst.mse, worst.rate_upper, worst.ratio, worst.theta_label});
    }
    return rows;
}

}  // namespace addfunc
