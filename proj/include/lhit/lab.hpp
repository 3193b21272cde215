#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lhit/walk_law.hpp"

namespace lhit::lab {

struct RatioRow {
    std::string claim;
    int n = 0;
    double x_re = 0.0, x_im = 0.0;
    double s = 0.0;
    double discrete = 0.0;
    double continuum = 0.0;
    double ratio = 0.0;
    double envelope = 0.0;
};

struct RatioReport {
    std::string claim;
    std::vector<RatioRow> rows;
    double max_dev = 0.0;          // max |ratio - 1| over rows
    double fitted_constant = 0.0;  // claim-specific fitted envelope constant
    std::string verdict;           // pass | fail
};

struct ExperimentConfig {
    std::string walk = "srw";
    std::vector<std::string> claims;
    std::vector<int> ns = {4, 8, 16};
    std::vector<double> x_over_n = {1.0, 1.25, 2.0, 5.0};
    std::vector<double> s_over_n = {-0.875, -0.5, 0.0, 0.5, 0.875};
    std::uint64_t seed = 42;
    std::map<std::string, double> tolerances;
    std::string out = ".";

    double tol(const std::string& key, double fallback) const;
};

// Parses the JSON config (keys walk, claims, grids, seeds, tolerances,
// out); throws ConfigError naming the offending field.
ExperimentConfig load_config(const std::string& path);

inline const std::vector<std::string> kClaims = {
    "thm1",   "thm2i", "thm2ii", "thm4i", "thm4ii", "thm4ii'",
    "thm5",   "thmII2", "prop1", "cor1",  "cor2",   "cor3"};

// One claim of the paper-verification suite; claim must be one of kClaims.
RatioReport verify_claim(const std::string& claim,
                         const ExperimentConfig& cfg);

// Convenience groupings mirroring the harness operations.
RatioReport verify_thm1(const ExperimentConfig& cfg);
std::vector<RatioReport> verify_thm2(const ExperimentConfig& cfg);
std::vector<RatioReport> verify_thm4(const ExperimentConfig& cfg);
std::vector<RatioReport> verify_edge_theorems(const ExperimentConfig& cfg);
RatioReport verify_prop1(const ExperimentConfig& cfg);

// Runs every requested claim (in parallel), writes <out>/<claim>.csv with
// columns claim,n,x_re,x_im,s,discrete,continuum,ratio,envelope plus
// <out>/summary.json; returns 0 iff every verdict is "pass".
int run(const ExperimentConfig& cfg);

std::string render_csv(const RatioReport& rep);

}  // namespace lhit::lab
