#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace lhls {

/// Knobs shared by the acceptance matrix and the CLI. The defaults are the
/// reference settings; coarser values are allowed and make criteria fail.
struct RunConfig {
    int radial_n = 4096;      // radial grid panels × order, equality cases
    double radial_rmax = 1e6;
    int cartesian_n = 512;
    int sphere_lmax = 32;
    int ks_n = 1024;
    double ks_T = 50.0;
    double tol = 1e-6;        // absolute tolerance of certificates
    bool oracle = false;      // dense-sweep cross-check of nearest-point searches
    unsigned seed = 1;        // base seed of random families
    std::string out_dir;      // trajectory files; empty means none

    /// Throws ParameterError on the first invalid field.
    void validate() const;
};

/// Flat "key = value" file with the RunConfig field names; '#' starts a comment.
RunConfig load_run_config(const std::string& path, RunConfig base = {});
nlohmann::json to_json(const RunConfig& c);

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string summary;          // one line with the decisive numbers
    nlohmann::json details;
    double seconds = 0.0;
    double time_limit = 0.0;
};

inline constexpr int kCriterionCount = 12;

/// Runs one criterion; pass requires both the numerical checks and the
/// runtime limit.
CriterionResult run_criterion(int id, const RunConfig& cfg);
std::vector<CriterionResult> run_acceptance(const RunConfig& cfg, const std::vector<int>& ids = {});

nlohmann::json to_json(const CriterionResult& r);
/// "[PASS]  3  title  summary  (1.23 s / 120 s)"
std::string format_line(const CriterionResult& r);

}  // namespace lhls
