#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace addfunc::cli {

/// Options resolved from flags, an optional config file and ADDFUNC_SEED,
/// in that order of precedence.
struct RunConfig {
    std::string command;
    std::string functional;
    std::optional<double> f0;
    std::optional<int> d;
    std::optional<int> s;
    std::optional<double> M;
    double c = 1.0;
    std::string noise_mode = "oracle";
    std::string estimator = "auto";
    int reps = 1000;
    std::uint64_t seed = 0;
    int threads = 0;
    std::string out;
    std::optional<int> degree;
    std::optional<std::pair<double, double>> interval;
    std::string method = "remez";
    std::optional<int> grid;
    std::string input;
    std::string theta;

    /// Every field that affects the payload; threads and the output path
    /// are excluded so that they cannot change the bytes written.
    nlohmann::json resolved() const;
};

/// Parses `args` (without the program name). Throws PreconditionError with
/// a usage message on malformed input. Returns nullopt after printing help.
std::optional<RunConfig> parse_args(const std::vector<std::string>& args, std::string& help);

}  // namespace addfunc::cli
