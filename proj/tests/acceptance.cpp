// One PASS/FAIL line per acceptance criterion, each with its wall-clock limit.

#include <cstdio>
#include <functional>
#include <string>

#include "momentlab/suites.hpp"

using namespace momentlab;

namespace {

struct Criterion {
    int id;
    const char* title;
    double limit_seconds;
    std::function<suites::SuiteResult()> run;
};

}  // namespace

int main() {
    const suites::Options o;
    const Criterion all[] = {
        {1, "orthogonality, q <= 60, m, n <= 30, tol 1e-9", 10, [&] { return suites::orthogonality(60, 30, o); }},
        {2, "exact Hecke mn <= 1e4 and Deligne n <= 1e4", 30, [&] { return suites::hecke(10000, o); }},
        {3, "Weil bound, c <= 500, zero violations", 60, [&] { return suites::weil(500, o); }},
        {4, "AFE cross-route, q in {5, 7, 13}, rel 1e-6", 120, [&] { return suites::afe({5, 7, 13}, 1e-6, o); }},
        {5, "Voronoi residual <= 1e-6 on the default grid", 300, [&] { return suites::voronoi(1e-6, o); }},
        {6, "coprime removal exactly zero, q <= 200", 30, [&] { return suites::coprime(200, o); }},
        {7, "moment realness and parity routes, q <= 100", 600, [&] { return suites::moment_routes(100, o); }},
        {8, "sweep q in [30, 300], a = b = 1", 1800, [&] { return suites::sweep(30, 300, 1, 1, o); }},
        {9, "error exponents 1/22 and 5/152 exact", 1, [] { return suites::exponents(); }},
        {10, "A_q zero when precluded, finite bound ratios", 600, [&] { return suites::aq_grid(o); }},
    };
    int failed = 0;
    for (const auto& c : all) {
        suites::SuiteResult r;
        std::string why;
        try {
            r = c.run();
        } catch (const std::exception& e) {
            r.passed = false;
            why = e.what();
        }
        const bool in_time = r.seconds < c.limit_seconds;
        const bool ok = r.passed && in_time;
        if (!ok) ++failed;
        for (const auto& k : r.checks)
            if (!k.passed || r.checks.size() <= 4) why += (why.empty() ? "" : "; ") + k.name + ": " + k.detail;
        if (!in_time) why += (why.empty() ? "" : "; ") + std::string("over the time limit");
        std::printf("criterion %2d: %s  %s  [%.2f s / %.0f s]  %s\n", c.id, ok ? "PASS" : "FAIL", c.title, r.seconds,
                    c.limit_seconds, why.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of 10 criteria passed\n", 10 - failed);
    return failed == 0 ? 0 : 1;
}
