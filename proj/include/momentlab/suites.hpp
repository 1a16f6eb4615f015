#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "momentlab/eigenforms.hpp"
#include "momentlab/lfunctions.hpp"
#include "momentlab/moments.hpp"

// Verification suites shared by the CLI and the acceptance binary.
namespace momentlab::suites {

using arith::u64;
using lfun::Exec;
using json = nlohmann::ordered_json;

struct Check {
    std::string name;
    bool passed = true;
    std::string detail;
};

struct SuiteResult {
    std::string suite;
    bool passed = true;
    double seconds = 0.0;
    std::vector<Check> checks;
    json data = json::object();

    void add(std::string name, bool ok, std::string detail = {});
    u64 failed() const;
};

struct Options {
    std::shared_ptr<const forms::EigenformData> form;  // null: built-in Delta
    std::optional<std::filesystem::path> cache_dir;    // character tables
    Exec exec = Exec::Parallel;
};

// divisor formula against enumeration over primitive characters, q <= q_max admissible, m, n <= mn_max
SuiteResult orthogonality(u64 q_max = 60, u64 mn_max = 30, const Options& o = {});
// exact Hecke relations for mn <= limit and Deligne for n <= limit
SuiteResult hecke(u64 limit = 10000, const Options& o = {});
SuiteResult weil(u64 c_max = 500, const Options& o = {});
// triple product AFE against L(1/2, f x chi) L(1/2, conj chi)^2 for every primitive chi with eps = +1
SuiteResult afe(const std::vector<u64>& qs = {5, 7, 13}, double tol = 1e-6, const Options& o = {});
SuiteResult voronoi(double tol = 1e-6, const Options& o = {});
// exact coprimality removal for q <= q_max over indicator functions inside [1, 1000]
SuiteResult coprime(u64 q_max = 200, const Options& o = {});
// realness and parity components against the divisor route, q <= q_max, a, b in {1, 2, 3}
SuiteResult moment_routes(u64 q_max = 100, const Options& o = {});
SuiteResult sweep(u64 lo = 30, u64 hi = 300, u64 a = 1, u64 b = 1, const Options& o = {},
                  moments::SweepResult* out = nullptr);
SuiteResult exponents();
// precluded cells exactly zero, ratios finite
SuiteResult aq_grid(const Options& o = {});

std::vector<u64> admissible_range(u64 lo, u64 hi);
std::shared_ptr<const forms::EigenformData> form_or_delta(const Options& o, u64 n_max);
json to_json(const SuiteResult& r);

}  // namespace momentlab::suites
