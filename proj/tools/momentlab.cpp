// momentlab: moments, verification suites and exponent budgets from the command line.
// Exit codes: 0 ok, 1 configuration error, 2 per-item failures, 3 suite failure.

#include <omp.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "momentlab/eigenforms.hpp"
#include "momentlab/moments.hpp"
#include "momentlab/suites.hpp"

using namespace momentlab;
using arith::u64;
using suites::json;

namespace {

enum Exit { kOk = 0, kConfig = 1, kItems = 2, kSuite = 3 };

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Global {
    std::string form = "builtin:delta";
    std::string cache_dir;
    std::string out;
    int jobs = 0;
    double tol = 0.0;  // 0: suite default
};

std::shared_ptr<const forms::EigenformData> load_form(const std::string& spec) {
    if (spec == "builtin:delta") return nullptr;
    if (spec.rfind("file:", 0) != 0) throw ConfigError("--form must be builtin:delta or file:<path>, got '" + spec + "'");
    try {
        const auto path = forms::resolve_coefficient_path(spec.substr(5));
        return std::make_shared<const forms::EigenformData>(forms::ingest_coefficients(path));
    } catch (const std::exception& e) {
        throw ConfigError(std::string("cannot load form: ") + e.what());
    }
}

suites::Options options(const Global& g) {
    suites::Options o;
    o.form = load_form(g.form);
    if (!g.cache_dir.empty()) o.cache_dir = g.cache_dir;
    return o;
}

std::pair<u64, u64> parse_range(const std::string& s) {
    const auto c = s.find(':');
    try {
        if (c == std::string::npos) throw std::invalid_argument("");
        const u64 lo = std::stoull(s.substr(0, c)), hi = std::stoull(s.substr(c + 1));
        if (lo > hi) throw std::invalid_argument("");
        return {lo, hi};
    } catch (const std::exception&) {
        throw ConfigError("--q-range must be lo:hi with lo <= hi, got '" + s + "'");
    }
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write " + path);
    return f;
}

// two-column plot file, sorted by q
void write_dat(const std::string& path, const std::vector<moments::MomentReport>& rows, bool corollary) {
    auto f = open_out(path);
    f.precision(12);
    f << "# q " << (corollary ? "ratio_corollary" : "ratio_theorem") << '\n';
    for (const auto& r : rows) f << r.q << ' ' << (corollary ? r.ratio_corollary : r.ratio_theorem) << '\n';
}

struct MomentArgs {
    u64 q = 0;
    std::string q_range;
    u64 a = 1, b = 1;
    bool sweep = false;
};

int run_moment(const Global& g, const MomentArgs& m) {
    const auto o = options(g);
    if (m.q_range.empty() == (m.q == 0)) throw ConfigError("moment needs exactly one of --q and --q-range");
    if (m.sweep && m.q_range.empty()) throw ConfigError("--sweep needs --q-range");
    auto engine = [&] { return moments::MomentEngine(o.form ? o.form : forms::shared_delta(u64{1} << 20)); };

    if (m.q) {
        try {
            moments::validate({m.q, m.a, m.b});
        } catch (const moments::InvalidQuery& e) {
            throw ConfigError(e.what());
        }
        const auto r = engine().brute({m.q, m.a, m.b});
        std::ostringstream os;
        moments::write_csv_header(os);
        moments::write_csv_row(os, r);
        if (g.out.empty()) {
            std::cout << os.str();
        } else {
            open_out(g.out) << os.str();
        }
        return kOk;
    }

    const auto [lo, hi] = parse_range(m.q_range);
    moments::SweepResult s;
    if (m.sweep) {
        suites::sweep(lo, hi, m.a, m.b, o, &s);
    } else {
        s = moments::sweep(suites::admissible_range(lo, hi), m.a, m.b, engine());
    }
    std::ostringstream csv;
    moments::write_csv_header(csv);
    for (const auto& r : s.rows) moments::write_csv_row(csv, r);
    json summary = json::parse(moments::summary_json(s.summary));
    json fails = json::array();
    for (const auto& f : s.failures) fails.push_back({{"q", f.q}, {"message", f.message}});
    summary["failed_q"] = fails;
    if (g.out.empty()) {
        std::cout << csv.str();
        if (m.sweep) std::cerr << summary.dump(2) << '\n';
    } else {
        open_out(g.out + ".csv") << csv.str();
        if (m.sweep) {
            open_out(g.out + ".summary.json") << summary.dump(2) << '\n';
            write_dat(g.out + "_theorem.dat", s.rows, false);
            write_dat(g.out + "_corollary.dat", s.rows, true);
        }
    }
    for (const auto& f : s.failures) std::cerr << "q=" << f.q << ": " << f.message << '\n';
    return s.failures.empty() ? kOk : kItems;
}

int report(const Global& g, const std::vector<suites::SuiteResult>& rs) {
    bool ok = true;
    json all = json::array();
    for (const auto& r : rs) {
        for (const auto& c : r.checks)
            std::cout << (c.passed ? "PASS " : "FAIL ") << r.suite << ": " << c.name
                      << (c.detail.empty() ? "" : " (" + c.detail + ")") << '\n';
        ok = ok && r.passed;
        all.push_back(suites::to_json(r));
    }
    const json doc = {{"passed", ok}, {"suites", all}};
    if (g.out.empty()) {
        std::cout << doc.dump(2) << '\n';
    } else {
        open_out(g.out) << doc.dump(2) << '\n';
    }
    return ok ? kOk : kSuite;
}

int run_exponent(const std::string& theta, const std::string& alpha, const std::string& beta) {
    moments::ExponentBudget e;
    try {
        e = moments::error_exponent(moments::parse_rational(theta), moments::parse_rational(alpha),
                                    moments::parse_rational(beta));
    } catch (const std::invalid_argument& ex) {
        throw ConfigError(ex.what());
    }
    auto str = [](const moments::Rational& x) {
        return x.denominator() == 1 ? std::to_string(x.numerator())
                                    : std::to_string(x.numerator()) + "/" + std::to_string(x.denominator());
    };
    std::cout << str(e.q_exponent) << '\n';
    const json j = {{"theta", str(e.theta)},     {"alpha", str(e.alpha)},   {"beta", str(e.beta)},
                    {"q_exponent", str(e.q_exponent)}, {"first", str(e.first)}, {"second", str(e.second)},
                    {"eta", str(e.eta)},         {"b_exponent", str(e.b_exponent)}};
    std::cerr << j.dump() << '\n';
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"momentlab: twisted moments of L-functions and their verification suites"};
    app.require_subcommand(1);
    app.fallthrough();  // global options may follow the subcommand
    Global g;
    app.add_option("--form", g.form, "builtin:delta or file:<path> (relative paths use MOMENTLAB_COEFF_DIR)");
    app.add_option("--cache-dir", g.cache_dir, "character table cache")->envname("MOMENTLAB_CACHE_DIR");
    app.add_option("--out", g.out, "output file (moment sweeps: path prefix)");
    app.add_option("--jobs", g.jobs, "OpenMP threads")->check(CLI::NonNegativeNumber);
    app.add_option("--tol", g.tol, "tolerance override for afe, voronoi")->check(CLI::PositiveNumber);

    MomentArgs m;
    auto* moment = app.add_subcommand("moment", "brute-force moment for one q or a range");
    moment->add_option("--q", m.q, "modulus");
    moment->add_option("--q-range", m.q_range, "lo:hi, admissible q only");
    moment->add_option("--a", m.a, "twist a")->check(CLI::PositiveNumber);
    moment->add_option("--b", m.b, "twist b")->check(CLI::PositiveNumber);
    moment->add_flag("--sweep", m.sweep, "write the sweep summary and plot files");

    auto* verify = app.add_subcommand("verify", "verification suites");
    verify->require_subcommand(1);
    u64 q_max_orth = 60, limit = 10000, c_max = 500, q_max_cop = 200, q_max_mom = 100;
    std::string grid = "default";
    std::vector<u64> afe_q = {5, 7, 13};
    verify->add_subcommand("orthogonality")->add_option("--q-max", q_max_orth);
    verify->add_subcommand("hecke")->add_option("--limit", limit);
    verify->add_subcommand("weil")->add_option("--c-max", c_max);
    verify->add_subcommand("voronoi")->add_option("--grid", grid)->check(CLI::IsMember({"default"}));
    verify->add_subcommand("afe")->add_option("--q", afe_q, "moduli");
    verify->add_subcommand("coprime")->add_option("--q-max", q_max_cop);
    verify->add_subcommand("moments")->add_option("--q-max", q_max_mom);
    verify->add_subcommand("aq");
    verify->add_subcommand("all");

    std::string theta = "0", alpha = "0", beta = "0";
    auto* expo = app.add_subcommand("exponent", "exact power saving for theta, alpha, beta");
    expo->add_option("--theta", theta, "rational, e.g. 7/64")->required();
    expo->add_option("--alpha", alpha);
    expo->add_option("--beta", beta);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfig;
    }

    try {
        if (g.jobs > 0) omp_set_num_threads(g.jobs);
        if (*moment) return run_moment(g, m);
        if (*expo) return run_exponent(theta, alpha, beta);

        const auto o = options(g);
        const std::string which = verify->get_subcommands().front()->get_name();
        const double afe_tol = g.tol > 0 ? g.tol : 1e-6, vor_tol = g.tol > 0 ? g.tol : 1e-6;
        std::vector<suites::SuiteResult> rs;
        const bool all = which == "all";
        if (all || which == "orthogonality") rs.push_back(suites::orthogonality(q_max_orth, 30, o));
        if (all || which == "hecke") rs.push_back(suites::hecke(limit, o));
        if (all || which == "weil") {
            if (c_max < 1 || c_max > 500) throw ConfigError("--c-max must lie in [1, 500]");
            rs.push_back(suites::weil(c_max, o));
        }
        if (all || which == "afe") rs.push_back(suites::afe(afe_q, afe_tol, o));
        if (all || which == "voronoi") rs.push_back(suites::voronoi(vor_tol, o));
        if (all || which == "coprime") rs.push_back(suites::coprime(q_max_cop, o));
        if (all || which == "moments") rs.push_back(suites::moment_routes(q_max_mom, o));
        if (all || which == "aq") rs.push_back(suites::aq_grid(o));
        if (all) rs.push_back(suites::exponents());
        return report(g, rs);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kSuite;
    }
}
