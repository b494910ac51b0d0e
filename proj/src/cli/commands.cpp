#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "addfunc/assumptions.hpp"
#include "addfunc/cli.hpp"
#include "addfunc/errors.hpp"
#include "addfunc/estimator.hpp"
#include "addfunc/lowerbound.hpp"
#include "addfunc/polyapprox.hpp"
#include "addfunc/risk.hpp"
#include "addfunc/rng.hpp"
#include "run_config.hpp"

namespace addfunc::cli {

namespace {

using nlohmann::json;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + '"';
}

MarginalFunctional load_functional(const RunConfig& cfg) {
    require(!cfg.functional.empty(), "--functional");
    const double* f0 = cfg.f0 ? &*cfg.f0 : nullptr;
    return parse_functional(cfg.functional, f0);
}

int need(const std::optional<int>& v, const char* flag) {
    require(v.has_value(), std::string(flag));
    return *v;
}

json header(const RunConfig& cfg) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["config"] = cfg.resolved();
    return j;
}

json schedule_json(const LevelSchedule& sch) {
    json levels = json::array();
    for (int i = 0; i < sch.level_count(); ++i) {
        const Level& lv = sch.level(i);
        json row{{"l", lv.l}, {"M", lv.M}, {"K", lv.K}};
        row["t"] = std::isfinite(lv.t) ? json(lv.t) : json(nullptr);
        levels.push_back(row);
    }
    return json{{"c", sch.c}, {"L", sch.L}, {"d", sch.d}, {"s", sch.s}, {"levels", levels}};
}

// Writes `payload` to the --out target (a file, or <dir>/<command>.<ext> when
// the target names a directory) or to `out` when no target was given.
void emit(const RunConfig& cfg, const std::string& ext, const std::string& payload, std::ostream& out,
          const std::string& summary) {
    if (cfg.out.empty()) {
        out << payload;
        return;
    }
    std::filesystem::path path(cfg.out);
    if (cfg.out.back() == '/' || std::filesystem::is_directory(path)) {
        std::filesystem::create_directories(path);
        path /= cfg.command + "." + ext;
    } else if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw PreconditionError("requires a writable output path, got '" + path.string() + "'");
    f << payload;
    out << summary << " -> " << path.string() << "\n";
}

void emit_json(const RunConfig& cfg, const json& j, std::ostream& out, const std::string& summary) {
    emit(cfg, "json", j.dump(2) + "\n", out, summary);
}

bool use_simplified(const RunConfig& cfg, int d, int s) {
    if (cfg.estimator == "simplified") return true;
    if (cfg.estimator == "multiscale") return false;
    return s == d;
}

FittedEstimator fit_for(const RunConfig& cfg, const MarginalFunctional& F, int d, int s) {
    if (use_simplified(cfg, d, s)) {
        const double M = cfg.M.value_or(std::sqrt(std::log(static_cast<double>(d))));
        return fit_simplified(F, d, M, cfg.c);
    }
    return fit(F, build_schedule(d, s, cfg.c), parse_noise_mode(cfg.noise_mode));
}

double space_bound(const RunConfig& cfg, const FittedEstimator& fe) {
    if (cfg.M) return *cfg.M;
    return fe.schedule.top.M;
}

std::vector<ThetaCandidate> resolve_theta(const RunConfig& cfg, const FittedEstimator& fe,
                                          const ParameterSpace& space, const std::string& fallback) {
    const std::string t = cfg.theta.empty() ? fallback : cfg.theta;
    auto value_after = [&](const std::string& prefix) {
        try {
            std::size_t pos = 0;
            const std::string rest = t.substr(prefix.size());
            const double v = std::stod(rest, &pos);
            if (pos != rest.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (const std::logic_error&) {
            throw PreconditionError("requires a number after '" + prefix + "' in --theta");
        }
    };
    if (t == "zero")
        return {{"zero", std::vector<double>(static_cast<std::size_t>(space.d), 0.0)}};
    if (t == "all-at-M")
        return {{"all-at-M", make_theta(space, Placement::first_coords, ThetaValues::at(space.M))}};
    if (t.rfind("all-at:", 0) == 0)
        return {{t, make_theta(space, Placement::first_coords, ThetaValues::at(value_after("all-at:")))}};
    if (t.rfind("random-at:", 0) == 0)
        return {{t, make_theta(space, Placement::random, ThetaValues::at(value_after("random-at:")),
                               cfg.seed)}};
    if (t == "sweep") return default_candidates(fe, space);
    throw PreconditionError("requires --theta in {zero, all-at-M, all-at:<v>, random-at:<v>, sweep}");
}

int cmd_approx(const RunConfig& cfg, std::ostream& out) {
    const auto F = load_functional(cfg);
    const int K = need(cfg.degree, "--degree");
    std::pair<double, double> ab;
    if (cfg.interval) ab = *cfg.interval;
    else if (cfg.M) ab = {-*cfg.M, *cfg.M};
    else throw PreconditionError("requires --interval a,b or --M");

    PolyApprox p;
    if (cfg.method == "lp") p = grid_lp_approx(F, K, ab.first, ab.second, cfg.grid.value_or(std::max(4001, 10 * (K + 2))));
    else p = remez(F, K, ab.first, ab.second);
    if (!p.converged) throw NumericalError("remez did not converge for K = " + std::to_string(K));

    json j = header(cfg);
    j["degree"] = p.degree;
    j["interval"] = {p.a, p.b};
    j["coeffs"] = p.coeffs;
    j["chebyshev_coeffs"] = p.cheb;
    j["delta"] = p.delta;
    j["alternation_points"] = p.alternation_points;
    j["iterations"] = p.iterations;
    j["converged"] = p.converged;
    emit_json(cfg, j, out, "approx: delta = " + num(p.delta));
    return 0;
}

struct Observations {
    std::vector<double> y1, y2;
    bool pairs = false;
};

Observations read_observations(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw PreconditionError("requires a readable --input file, got '" + path + "'");
    Observations obs;
    std::string line;
    int lineno = 0;
    int columns = 0;
    while (std::getline(f, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::vector<double> vals;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t pos = 0;
                vals.push_back(std::stod(cell, &pos));
                if (cell.find_first_not_of(" \t\r", pos) != std::string::npos)
                    throw std::invalid_argument("trailing");
            } catch (const std::logic_error&) {
                throw PreconditionError("requires numeric input at line " + std::to_string(lineno));
            }
        }
        if (vals.empty() || vals.size() > 2)
            throw PreconditionError("requires one or two values per line (line " + std::to_string(lineno) + ")");
        if (columns == 0) columns = static_cast<int>(vals.size());
        if (static_cast<int>(vals.size()) != columns)
            throw PreconditionError("requires the same number of columns on every line (line " +
                                    std::to_string(lineno) + ")");
        obs.y1.push_back(vals[0]);
        if (columns == 2) obs.y2.push_back(vals[1]);
    }
    obs.pairs = columns == 2;
    return obs;
}

int cmd_estimate(const RunConfig& cfg, std::ostream& out) {
    const auto F = load_functional(cfg);
    Observations obs;
    if (!cfg.input.empty()) obs = read_observations(cfg.input);
    const int d = cfg.d ? *cfg.d : static_cast<int>(obs.y1.size());
    require(d >= 1, "--d or a nonempty --input");
    const int s = cfg.s.value_or(d);
    const auto fe = fit_for(cfg, F, d, s);

    json j = header(cfg);
    std::optional<double> truth;
    if (cfg.input.empty()) {
        // No data given: simulate one draw at the requested theta.
        const auto space = ParameterSpace::make(d, s, space_bound(cfg, fe));
        const auto cands = resolve_theta(cfg, fe, space, "zero");
        require(cands.size() == 1, "a single --theta configuration for estimate");
        const auto& theta = cands.front().theta;
        truth = additive_value(F, theta);
        if (fe.noise_mode == NoiseMode::oracle_pairs) {
            obs.y1 = simulate(theta, cfg.seed);
            obs.y2 = simulate(theta, rng::child_seed(cfg.seed, 1));
            obs.pairs = true;
        } else {
            obs.y1 = simulate(theta, cfg.seed);
        }
        j["theta"] = cands.front().label;
    }
    require(obs.y1.size() == static_cast<std::size_t>(d), "length(y) = d");

    double value = 0.0;
    if (fe.noise_mode == NoiseMode::oracle_pairs) {
        require(obs.pairs, "y1,y2 pairs on every input line in oracle noise mode");
        value = estimate_pairs(fe, obs.y1, obs.y2);
    } else {
        require(!obs.pairs, "one value per input line in duplicate noise mode");
        value = estimate(fe, obs.y1, cfg.seed);
    }

    std::vector<double> deltas;
    for (const auto& p : fe.per_level_poly) deltas.push_back(p.delta);
    j["estimate"] = value;
    j["estimator"] = fe.kind == FittedEstimator::Kind::simplified ? "simplified" : "multiscale";
    j["schedule"] = schedule_json(fe.schedule);
    j["per_level_delta"] = deltas;
    j["rate"] = fe.rate;
    j["truth"] = truth ? json(*truth) : json(nullptr);
    emit_json(cfg, j, out, "estimate = " + num(value));
    return 0;
}

int cmd_risk(const RunConfig& cfg, std::ostream& out) {
    const auto F = load_functional(cfg);
    const int d = need(cfg.d, "--d");
    const int s = cfg.s.value_or(d);
    const auto fe = fit_for(cfg, F, d, s);
    const auto space = ParameterSpace::make(d, s, space_bound(cfg, fe));
    const auto cands = resolve_theta(cfg, fe, space, "sweep");

    RiskOptions opt;
    opt.threads = cfg.threads;
    const auto sweep = adversarial_sweep(fe, F, space, cands, cfg.reps, cfg.seed, opt);

    std::ostringstream csv;
    csv << "# schema: " << kSchemaVersion << " risk\n";
    csv << "# config: " << cfg.resolved().dump() << "\n";
    csv << "d,s,M,c,F,noise_mode,theta_label,n_reps,seed,mse,se_mse,bias_sq,variance,rate_upper,"
           "rate_lower,ratio\n";
    for (const auto& r : sweep.reports) {
        const auto& c = r.config;
        csv << c.d << ',' << c.s << ',' << num(c.M) << ',' << num(c.c) << ',' << csv_field(c.F_label)
            << ',' << to_string(c.noise_mode) << ',' << csv_field(r.theta_label) << ',' << c.n_reps
            << ',' << c.seed << ',' << num(r.mse) << ',' << num(r.se_mse) << ',' << num(r.bias_sq)
            << ',' << num(r.variance) << ',' << num(r.rate_upper) << ',' << num(r.rate_lower) << ','
            << num(r.ratio) << '\n';
    }
    const auto& worst = sweep.reports[sweep.worst];
    emit(cfg, "csv", csv.str(), out,
         "risk: worst mse = " + num(worst.mse) + " at " + worst.theta_label);
    return 0;
}

int cmd_lowerbound(const RunConfig& cfg, std::ostream& out) {
    const auto F = load_functional(cfg);
    const int d = need(cfg.d, "--d");
    const int s = need(cfg.s, "--s");
    require(static_cast<double>(s) * s > d, "s^2 > d");
    const double M = cfg.M.value_or(std::sqrt(std::log(static_cast<double>(s) * s / d)));
    const auto c = certificate(F, d, s, M, cfg.grid.value_or(0));

    std::vector<double> grid, w0, w1;
    for (std::size_t i = 0; i < c.pair.grid.size(); ++i) {
        if (c.pair.w0[i] > 0.0 || c.pair.w1[i] > 0.0) {
            grid.push_back(c.pair.grid[i]);
            w0.push_back(c.pair.w0[i]);
            w1.push_back(c.pair.w1[i]);
        }
    }
    json j = header(cfg);
    j["K"] = c.K;
    j["M"] = c.M;
    j["n_grid"] = c.pair.grid.size();
    j["grid"] = grid;
    j["w0"] = w0;
    j["w1"] = w1;
    j["gap"] = c.pair.gap;
    j["delta"] = c.delta_ref;
    j["separation"] = c.separation;
    j["chi2_bound"] = c.chi2_bound;
    j["chi2_series"] = c.chi2_series;
    j["chi2_product"] = c.chi2_product;
    j["tail_terms"] = c.tail_terms;
    j["tv_bound"] = c.tv_bound;
    j["mass_terms"] = {c.mass_term0, c.mass_term1};
    j["V"] = c.V;
    j["rate"] = c.rate;
    j["valid"] = c.valid;
    j["g"] = c.g_value;
    j["g_above_half"] = c.g_ok;
    emit_json(cfg, j, out, "lowerbound: K = " + std::to_string(c.K) + ", rate = " + num(c.rate));
    return 0;
}

int cmd_rates(const RunConfig& cfg, std::ostream& out) {
    const auto F = load_functional(cfg);
    const int d = need(cfg.d, "--d");
    const int s = need(cfg.s, "--s");
    const auto r = rate_expression(F, d, s);
    json pts = json::array();
    for (const auto& [k, v] : r.points) pts.push_back({k, v});
    json j = header(cfg);
    j["value"] = r.value;
    j["argmax_k"] = r.argmax_k;
    j["degenerate"] = r.degenerate;
    j["points"] = pts;
    emit_json(cfg, j, out, "rates: value = " + num(r.value));
    return 0;
}

int cmd_probe(const RunConfig& cfg, std::ostream& out) {
    const auto F = load_functional(cfg);
    const int d = need(cfg.d, "--d");
    const int s = need(cfg.s, "--s");
    const auto rep = probe_assumptions(F, s, d, cfg.grid.value_or(8));
    json grid = json::array();
    for (const auto& p : rep.grid)
        grid.push_back({{"M", p.M}, {"K", p.K}, {"sup_norm", p.sup_norm}, {"delta", p.delta}});
    json j = header(cfg);
    j["eps1_hat"] = rep.eps1_hat;
    j["eps2_hat"] = rep.eps2_hat;
    j["a3_ratio_max"] = rep.a3_ratio_max;
    j["a2_violated"] = rep.a2_violated;
    j["range_expanded"] = rep.range_expanded;
    j["M_range"] = {rep.M_lo, rep.M_hi};
    j["grid"] = grid;
    emit_json(cfg, j, out, "probe: eps1 = " + num(rep.eps1_hat) + ", eps2 = " + num(rep.eps2_hat));
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        std::string help;
        const auto cfg = parse_args(args, help);
        if (!cfg) {
            out << help;
            return 0;
        }
        if (cfg->command == "approx") return cmd_approx(*cfg, out);
        if (cfg->command == "estimate") return cmd_estimate(*cfg, out);
        if (cfg->command == "risk") return cmd_risk(*cfg, out);
        if (cfg->command == "lowerbound") return cmd_lowerbound(*cfg, out);
        if (cfg->command == "rates") return cmd_rates(*cfg, out);
        if (cfg->command == "probe") return cmd_probe(*cfg, out);
        err << "error: unknown command '" << cfg->command << "'\n";
        return 2;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace addfunc::cli
