#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "addfunc/errors.hpp"
#include "run_config.hpp"

namespace addfunc::cli {

namespace {

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// key=value files go through CLI11's own reader; a file whose first
// non-blank character is '{' is read as a flat JSON object instead. In JSON
// the functional may be {"name": ..., "params": [...]} or
// {"callback": "<expression>", "value_at_zero": ...}.
class ConfigReader : public CLI::ConfigBase {
public:
    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        std::stringstream buf;
        buf << input.rdbuf();
        const std::string text = buf.str();
        const auto first = text.find_first_not_of(" \t\r\n");
        if (first == std::string::npos || text[first] != '{') {
            std::istringstream again(text);
            auto items = CLI::ConfigBase::from_config(again);
            // The reader splits "a,b" into two values; the interval takes one.
            for (auto& it : items) {
                if (it.name == "interval" && it.inputs.size() == 2)
                    it.inputs = {it.inputs[0] + "," + it.inputs[1]};
            }
            return items;
        }
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw CLI::ConversionError(std::string("config file is not valid JSON: ") + e.what());
        }
        if (!j.is_object()) throw CLI::ConversionError("JSON config must be an object");

        std::vector<CLI::ConfigItem> items;
        auto add = [&](const std::string& key, std::string value) {
            CLI::ConfigItem it;
            it.name = key;
            it.inputs.push_back(std::move(value));
            items.push_back(std::move(it));
        };
        for (const auto& [key, value] : j.items()) {
            if (key == "functional" && value.is_object()) {
                if (value.contains("callback")) {
                    add("functional", "expr:" + value.at("callback").get<std::string>());
                    if (value.contains("value_at_zero"))
                        add("f0", format_number(value.at("value_at_zero").get<double>()));
                } else {
                    std::string spec = value.at("name").get<std::string>();
                    if (value.contains("params") && !value.at("params").empty()) {
                        spec += ':';
                        bool firstp = true;
                        for (const auto& p : value.at("params")) {
                            if (!firstp) spec += ',';
                            spec += format_number(p.get<double>());
                            firstp = false;
                        }
                    }
                    add("functional", spec);
                }
            } else if (key == "interval" && value.is_array() && value.size() == 2) {
                add("interval", format_number(value[0].get<double>()) + "," +
                                    format_number(value[1].get<double>()));
            } else if (value.is_string()) {
                add(key, value.get<std::string>());
            } else if (value.is_number_integer()) {
                add(key, std::to_string(value.get<long long>()));
            } else if (value.is_number()) {
                add(key, format_number(value.get<double>()));
            } else {
                throw CLI::ConversionError("unsupported value for config key '" + key + "'");
            }
        }
        return items;
    }
};

std::pair<double, double> parse_interval(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw PreconditionError("requires --interval a,b");
    try {
        std::size_t p1 = 0, p2 = 0;
        const std::string l = text.substr(0, comma), r = text.substr(comma + 1);
        const double a = std::stod(l, &p1), b = std::stod(r, &p2);
        if (p1 != l.size() || p2 != r.size()) throw std::invalid_argument("trailing");
        return {a, b};
    } catch (const std::logic_error&) {
        throw PreconditionError("requires --interval a,b with numeric a and b, got '" + text + "'");
    }
}

}  // namespace

nlohmann::json RunConfig::resolved() const {
    nlohmann::json j;
    j["command"] = command;
    j["functional"] = functional;
    j["f0"] = f0 ? nlohmann::json(*f0) : nlohmann::json(nullptr);
    j["d"] = d ? nlohmann::json(*d) : nlohmann::json(nullptr);
    j["s"] = s ? nlohmann::json(*s) : nlohmann::json(nullptr);
    j["M"] = M ? nlohmann::json(*M) : nlohmann::json(nullptr);
    j["c"] = c;
    j["noise_mode"] = noise_mode;
    j["estimator"] = estimator;
    j["reps"] = reps;
    j["seed"] = seed;
    j["degree"] = degree ? nlohmann::json(*degree) : nlohmann::json(nullptr);
    j["interval"] = interval ? nlohmann::json({interval->first, interval->second})
                             : nlohmann::json(nullptr);
    j["method"] = method;
    j["grid"] = grid ? nlohmann::json(*grid) : nlohmann::json(nullptr);
    j["input"] = input;
    j["theta"] = theta;
    return j;
}

std::optional<RunConfig> parse_args(const std::vector<std::string>& args, std::string& help) {
    CLI::App app{"Estimation of additive functionals in the sparse Gaussian sequence model", "addfunc"};
    app.config_formatter(std::make_shared<ConfigReader>());

    RunConfig cfg;
    std::string interval;
    double f0 = 0.0, M = 0.0;
    int d = 0, s = 0, degree = 0, grid = 0;

    app.add_option("command", cfg.command, "approx | estimate | risk | lowerbound | rates | probe")
        ->required()
        ->check(CLI::IsMember({"approx", "estimate", "risk", "lowerbound", "rates", "probe"}));
    app.set_config("--config", "", "key=value or JSON config file; flags take precedence");
    app.add_option("--functional", cfg.functional,
                   "abs_pow:<gamma> | square | identity | neg_t_log | expr:<expression in t>");
    auto* o_f0 = app.add_option("--f0", f0, "F(0), required with expr: functionals");
    auto* o_d = app.add_option("--d", d, "dimension");
    auto* o_s = app.add_option("--s", s, "sparsity");
    auto* o_M = app.add_option("--M", M, "bound on |theta_i| / approximation half-width");
    app.add_option("--c", cfg.c, "degree constant")->capture_default_str();
    app.add_option("--noise-mode", cfg.noise_mode, "oracle | duplicate")
        ->check(CLI::IsMember({"oracle", "duplicate"}))
        ->capture_default_str();
    app.add_option("--estimator", cfg.estimator, "auto | multiscale | simplified")
        ->check(CLI::IsMember({"auto", "multiscale", "simplified"}))
        ->capture_default_str();
    app.add_option("--reps", cfg.reps, "Monte Carlo replications")->capture_default_str();
    app.add_option("--seed", cfg.seed, "random seed")->envname("ADDFUNC_SEED")->capture_default_str();
    app.add_option("--threads", cfg.threads, "worker threads (0: all cores)")->capture_default_str();
    app.add_option("--out", cfg.out, "output file, or directory ending in '/'");
    auto* o_deg = app.add_option("--degree", degree, "polynomial degree K");
    auto* o_int = app.add_option("--interval", interval, "approximation interval a,b");
    app.add_option("--method", cfg.method, "remez | lp")
        ->check(CLI::IsMember({"remez", "lp"}))
        ->capture_default_str();
    auto* o_grid = app.add_option("--grid", grid, "grid size (LP oracle, prior pair, probe)");
    app.add_option("--input", cfg.input, "CSV of observations (one per line, or y1,y2 pairs)");
    app.add_option("--theta", cfg.theta,
                   "zero | all-at-M | all-at:<v> | random-at:<v> | sweep");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        help = app.help();
        return std::nullopt;
    } catch (const CLI::ParseError& e) {
        throw PreconditionError(std::string(e.what()) + "\n" + app.help());
    }

    if (o_f0->count() > 0) cfg.f0 = f0;
    if (o_d->count() > 0) cfg.d = d;
    if (o_s->count() > 0) cfg.s = s;
    if (o_M->count() > 0) cfg.M = M;
    if (o_deg->count() > 0) cfg.degree = degree;
    if (o_grid->count() > 0) cfg.grid = grid;
    if (o_int->count() > 0) cfg.interval = parse_interval(interval);
    return cfg;
}

}  // namespace addfunc::cli
