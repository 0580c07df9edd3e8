#pragma once

#include "topodeg/domain.hpp"
#include "topodeg/fields.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace topodeg {

inline constexpr const char* kToolVersion = "topodeg 0.1.0";

/// One run = one subcommand with everything needed to reproduce it.
struct RunConfig {
    std::string command;
    std::string map_spec = "identity";
    std::string domain_spec = "disk:1";
    int res = 128;
    int bres = 1024;
    std::uint64_t seed = 1;
    int jobs = 0;
    std::string out;

    std::vector<std::string> probes;  // degree probes "x,y"
    std::string method = "all";
    double bump = 0.15;
    int yres = 96;
    std::string ywindow;  // "lo0,lo1:hi0,hi1"
    std::string a;        // fscan center
    std::string radii;    // fscan / scan radii
    int scales = 5;
    double base_scale = 0.0;
    int centers = 64;
    std::string p;  // vmodegree / cov probe
    std::string schedule = "0.2,0.1,0.05,0.025";
    double trim = 1e-3;
    int points = 100;
    std::string theta = "log";
    std::string surface;

    std::string to_json() const;
    static RunConfig from_json(const std::string& text);
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parses argv into a validated config (defaults filled). Throws UsageError
/// for unknown flags or bad values; exit code 2 belongs to the caller.
RunConfig parse_config(const std::vector<std::string>& args);

/// Executes the run: writes artifacts under config.out and prints a
/// one-line summary per query. Returns the process exit code (0 ok,
/// 1 inconclusive result, 3 I/O failure).
int run(const RunConfig& config);

Vec parse_vec(const std::string& text);
std::vector<double> parse_list(const std::string& text);
Domain resolve_domain_spec(const std::string& spec, int res);
MapField resolve_map_spec(const std::string& spec);

}  // namespace topodeg
