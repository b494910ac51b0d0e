// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
// failure. Tolerances and time limits are fixed below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "addfunc/cli.hpp"
#include "addfunc/estimator.hpp"
#include "addfunc/hermite.hpp"
#include "addfunc/lowerbound.hpp"
#include "addfunc/polyapprox.hpp"
#include "addfunc/risk.hpp"

using namespace addfunc;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

constexpr std::uint64_t kSeed = 20240611;

MarginalFunctional abs_pow(double g) {
    const std::vector<double> p{g};
    return builtin_functional("abs_pow", p);
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

Outcome c1_anchors() {
    const auto F = abs_pow(1.0);
    const double r1 = remez(F, 1, -1, 1).delta, r2 = remez(F, 2, -1, 1).delta;
    const double l1 = grid_lp_approx(F, 1, -1, 1, 2001).delta;
    const double l2 = grid_lp_approx(F, 2, -1, 1, 2001).delta;
    Outcome o;
    o.pass = std::fabs(r1 - 0.5) <= 1e-6 && std::fabs(r2 - 0.125) <= 1e-6 && std::fabs(l1 - r1) <= 1e-6 &&
             std::fabs(l2 - r2) <= 1e-6;
    o.detail = "remez " + fmt("%.9f", r1) + ", " + fmt("%.9f", r2) + "; lp " + fmt("%.9f", l1) + ", " +
               fmt("%.9f", l2);
    return o;
}

Outcome c2_degree_scaling() {
    Outcome o;
    for (double g : {0.5, 1.0}) {
        std::vector<double> x, y;
        for (int K = 5; K <= 40; ++K) {
            x.push_back(std::log(static_cast<double>(K)));
            y.push_back(std::log(best_approx_error(abs_pow(g), K, 1.0)));
        }
        const double b = slope(x, y);
        if (std::fabs(b + g) > 0.1) o.pass = false;
        if (!o.detail.empty()) o.detail += ", ";
        o.detail += "gamma " + fmt("%.1f", g) + ": slope " + fmt("%.4f", b);
    }
    return o;
}

Outcome c3_duality() {
    Outcome o;
    int cases = 0;
    double worst = 0.0;
    for (double g : {1.0, 0.5})
        for (double M : {1.0, 2.0})
            for (int K : {1, 4, 10, 20, 30}) {
                const auto F = abs_pow(g);
                const double rz = remez(F, K, -M, M).delta;
                const double gap = build_prior_pair(F, K, M).gap;
                const double rel = std::fabs(gap - 2 * rz) / (2 * rz);
                worst = std::max(worst, rel);
                ++cases;
            }
    o.pass = cases >= 12 && worst <= 1e-3;
    o.detail = std::to_string(cases) + " cases, worst relative gap error " + fmt("%.2e", worst);
    return o;
}

Outcome c4_hermite() {
    Outcome o;
    double worst_mean = 0.0, worst_second = 0.0, worst_orth = 0.0;
    for (double th : {0.0, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0}) {
        for (int k = 0; k <= 10; ++k) {
            const double m = hermite_moment_check(th, k, 2 * k + 2);
            const double err = std::fabs(m - std::pow(th, k)) / std::max(1.0, std::pow(std::fabs(th), k));
            worst_mean = std::max(worst_mean, err);
            if (err > 1e-8) o.pass = false;
            const double s2 = hermite_second_moment(th, k, k + 2);
            worst_second = std::max(worst_second, s2 / std::pow(k + th * th, k));
            if (s2 > std::pow(k + th * th, k) * (1 + 1e-12)) o.pass = false;
        }
    }
    const auto& rule = gauss_hermite(20);
    for (int j = 0; j <= 12; ++j) {
        for (int k = 0; k <= 12; ++k) {
            long double acc = 0.0L;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                const auto h = hermite_all(rule.nodes[i], 12);
                acc += static_cast<long double>(rule.weights[i]) * h.values[static_cast<std::size_t>(j)] *
                       h.values[static_cast<std::size_t>(k)];
            }
            const double expect = j == k ? std::tgamma(k + 1.0) : 0.0;
            const double scale = std::sqrt(std::tgamma(j + 1.0) * std::tgamma(k + 1.0));
            const double err = std::fabs(static_cast<double>(acc) - expect) / scale;
            worst_orth = std::max(worst_orth, err);
            if (err > 1e-10) o.pass = false;
        }
    }
    o.detail = "mean rel err " + fmt("%.1e", worst_mean) + ", max E H^2/(k+theta^2)^k " +
               fmt("%.3f", worst_second) + ", orthogonality rel err " + fmt("%.1e", worst_orth);
    return o;
}

Outcome c5_chi2() {
    Outcome o;
    double worst = 0.0;
    for (double mu : {0.4, 0.8}) {
        const DiscreteMeasure z{{0.0}, {1.0}}, m{{mu}, {1.0}};
        const double err = std::fabs(chi2_series(z, m, 60).value - std::expm1(mu * mu));
        worst = std::max(worst, err);
        if (err > 1e-10) o.pass = false;
    }
    double worst_ratio = 0.0;
    const std::vector<std::pair<int, double>> cases{{4, 1.0}, {8, 1.0}, {14, 1.0}, {20, 1.0}, {14, 2.0}, {20, 2.0}};
    for (const auto& [K, M] : cases) {
        const auto p = build_prior_pair(abs_pow(1.0), K, M);
        const double v = chi2_series(p, 2 * K + 40).value;
        const double bound = 4.0 * std::pow(std::numbers::e * M * M / K, K);
        worst_ratio = std::max(worst_ratio, v / bound);
        if (v > bound) o.pass = false;
    }
    o.detail = "closed-form err " + fmt("%.1e", worst) + ", max series/bound " + fmt("%.2e", worst_ratio);
    return o;
}

Outcome c6_g() {
    double lo = 1e300, at = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double x = std::exp(1.0 + (std::log(1e6) - 1.0) * i / 199.0);
        const double g = g_function(x);
        if (g < lo) {
            lo = g;
            at = x;
        }
    }
    return {lo > 0.5, "min g = " + fmt("%.6f", lo) + " at x = " + fmt("%.4g", at)};
}

Outcome c7_simplified() {
    const auto F = builtin_functional("square");
    const auto fe = fit_simplified(F, 100, std::sqrt(std::log(100.0)), 1.0);
    const std::vector<double> theta(100, 0.0);
    const auto r = measure_risk(fe, F, theta, 10000, kSeed);
    return {r.mse >= 190.0 && r.mse <= 210.0, "mse = " + fmt("%.3f", r.mse) + " (se " + fmt("%.3f", r.se_mse) + ")"};
}

Outcome c8_unbiased() {
    const auto F = abs_pow(1.0);
    const auto fe = fit(F, build_schedule(10000, 400, 1.0), NoiseMode::oracle_pairs);
    const std::vector<double> theta(10000, 0.0);
    const auto r = measure_risk(fe, F, theta, 2000, kSeed);
    return {std::fabs(r.mean_error) <= 3.0 * r.se_mean_error,
            "bias = " + fmt("%.4f", r.mean_error) + ", se = " + fmt("%.4f", r.se_mean_error)};
}

Outcome c9_rate_ratio() {
    const std::vector<int> ds{2500, 10000, 40000};
    const auto rows = rate_scaling_study(abs_pow(1.0), ds,
                                         [](int d) { return static_cast<int>(std::lround(4.0 * std::sqrt(d))); },
                                         1.0, 2000, kSeed);
    Outcome o;
    double lo = 1e300, hi = 0.0;
    for (const auto& r : rows) {
        if (!std::isfinite(r.ratio) || r.ratio <= 0.0) o.pass = false;
        lo = std::min(lo, r.ratio);
        hi = std::max(hi, r.ratio);
        o.detail += "d=" + std::to_string(r.d) + " ratio " + fmt("%.4g", r.ratio) + " (" + r.worst_label + "); ";
    }
    if (hi / lo > 10.0) o.pass = false;
    o.detail += "spread " + fmt("%.3g", hi / lo);

    const std::filesystem::path base = std::filesystem::path(ADDFUNC_TEST_DATA_DIR) / "rate_ratio_baseline.csv";
    if (!std::filesystem::exists(base)) {
        std::filesystem::create_directories(base.parent_path());
        std::ofstream f(base);
        f << "d,s,ratio\n";
        for (const auto& r : rows) f << r.d << ',' << r.s << ',' << fmt("%.17g", r.ratio) << '\n';
        o.detail += "; baseline recorded";
        return o;
    }
    std::ifstream f(base);
    std::string line;
    std::getline(f, line);
    std::size_t i = 0;
    while (std::getline(f, line) && i < rows.size()) {
        std::istringstream in(line);
        std::string d, s, ratio;
        std::getline(in, d, ',');
        std::getline(in, s, ',');
        std::getline(in, ratio, ',');
        const double b = std::stod(ratio);
        if (std::stoi(d) != rows[i].d || std::fabs(rows[i].ratio - b) > 0.2 * b) o.pass = false;
        ++i;
    }
    if (i != rows.size()) o.pass = false;
    o.detail += "; baseline checked (+/-20%)";
    return o;
}

// Largest ratio of each moment of the Hermite estimator to its bound over F, M in [1, 4],
// c <= 8 and theta grids on both sides of M.
Outcome c10_moment_bounds() {
    const std::vector<MarginalFunctional> fs{abs_pow(1.0), abs_pow(0.5), builtin_functional("neg_t_log")};
    double r4 = 0.0, r5 = 0.0, r6a = 0.0, r6b = 0.0;
    for (const auto& F0 : fs) {
        const auto F = F0.centered();
        for (double M : {1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0}) {
            const double norm = F.centered_sup_norm(M);
            for (double c : {1.0, 2.0, 4.0, 8.0}) {
                const int K = std::max(1, static_cast<int>(std::floor(c * M * M / 8.0)));
                const auto p = remez(F, K, -M, M);
                const HermiteSeries P(p.coeffs, false);
                const int n = K + 2;
                auto sq = [&](double x) {
                    const double v = P(x);
                    return v * v;
                };
                const double kd = K;
                r4 = std::max(r4, normal_expectation(sq, 0.0, 1.0, n) / (norm * norm * std::pow(6.0, kd)));
                for (double f : {0.0, 0.5, -0.5, 1.0, -1.0}) {
                    const double v = normal_expectation(sq, f * M, 1.0, n);
                    r5 = std::max(r5, v / (norm * norm * std::pow(12.0, kd)));
                }
                for (double f : {1.25, -1.25, 1.5, 2.0, -2.0, 3.0}) {
                    const double th = f * M;
                    const double mean = std::fabs(p(th) - p.coeffs[0]);
                    r6a = std::max(r6a, mean / (norm * std::pow(3.0, kd) * std::exp(c * th * th / 16.0)));
                    const double v = normal_expectation(sq, th, 1.0, n);
                    const double e = c * std::log(1.0 + 8.0 / c) / 8.0 * th * th;
                    r6b = std::max(r6b, v / (norm * norm * std::pow(6.0, kd) * std::exp(e)));
                }
            }
        }
    }
    const double worst = std::max({r4, r5, r6a, r6b});
    return {worst <= 100.0, "max ratios: null variance " + fmt("%.3g", r4) + ", bounded theta " + fmt("%.3g", r5) +
                                ", large-theta mean " + fmt("%.3g", r6a) + ", large-theta second moment " +
                                fmt("%.3g", r6b)};
}

std::string run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    if (code != 0) throw std::runtime_error("cli exited with " + std::to_string(code) + ": " + err.str());
    return out.str();
}

Outcome c11_determinism() {
    Outcome o;
    const std::vector<std::vector<std::string>> cmds{
        {"risk", "--functional", "abs_pow:1", "--d", "2500", "--s", "200", "--reps", "200", "--seed", "17"},
        {"risk", "--functional", "abs_pow:1", "--d", "2500", "--s", "200", "--reps", "200", "--seed", "17",
         "--noise-mode", "duplicate", "--theta", "all-at-M"},
        {"estimate", "--functional", "abs_pow:0.5", "--d", "10000", "--s", "400", "--seed", "17",
         "--noise-mode", "duplicate"},
        {"approx", "--functional", "neg_t_log", "--degree", "9", "--M", "2"},
        {"lowerbound", "--functional", "abs_pow:1", "--d", "10000", "--s", "2000"},
        {"rates", "--functional", "abs_pow:1", "--d", "100000", "--s", "2000"},
    };
    int compared = 0;
    for (const auto& base : cmds) {
        std::string ref;
        for (const char* threads : {"1", "4", "1", "3"}) {
            auto args = base;
            args.insert(args.end(), {"--threads", threads});
            const auto payload = run_cli(args);
            if (ref.empty()) ref = payload;
            else if (payload != ref) o.pass = false;
            ++compared;
        }
    }
    o.detail = std::to_string(compared) + " payloads over " + std::to_string(cmds.size()) + " commands";
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double limit_s;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> all{
        {1, "best-approximation anchors", 1.0, c1_anchors},
        {2, "degree scaling of delta", 30.0, c2_degree_scaling},
        {3, "LP-Remez duality", 60.0, c3_duality},
        {4, "Hermite identities", 5.0, c4_hermite},
        {5, "chi-square series", 5.0, c5_chi2},
        {6, "g lower bound", 1.0, c6_g},
        {7, "simplified estimator closed form", 10.0, c7_simplified},
        {8, "off-support unbiasedness", 60.0, c8_unbiased},
        {9, "rate-ratio stability", 600.0, c9_rate_ratio},
        {10, "Hermite estimator moment bounds", 30.0, c10_moment_bounds},
        {11, "determinism", 30.0, c11_determinism},
    };
    int failed = 0;
    for (const auto& c : all) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs < c.limit_s;
        const bool pass = o.pass && in_time;
        if (!pass) ++failed;
        std::printf("criterion %2d %s: %s (%s; %.2f s, limit %.0f s%s)\n", c.id, c.name, pass ? "PASS" : "FAIL",
                    o.detail.c_str(), secs, c.limit_s, in_time ? "" : ", over time");
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
    return failed == 0 ? 0 : 1;
}
