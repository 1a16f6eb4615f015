#include "momentlab/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "momentlab/characters.hpp"
#include "momentlab/expsums.hpp"
#include "momentlab/voronoi.hpp"

namespace momentlab::suites {

namespace {

using Clock = std::chrono::steady_clock;
using cplx = std::complex<double>;

constexpr u64 kMomentTable = u64{1} << 20;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

chars::CharacterGroup group(u64 q, const Options& o) {
    return o.cache_dir ? chars::cached_group(q, *o.cache_dir) : chars::build_group(q);
}

bool close(cplx x, cplx y, double rel) { return std::abs(x - y) <= rel * std::abs(y) + 1e-12; }

SuiteResult start(const char* name) {
    SuiteResult r;
    r.suite = name;
    return r;
}

}  // namespace

void SuiteResult::add(std::string name, bool ok, std::string detail) {
    checks.push_back({std::move(name), ok, std::move(detail)});
    passed = passed && ok;
}

u64 SuiteResult::failed() const {
    return static_cast<u64>(std::count_if(checks.begin(), checks.end(), [](const Check& c) { return !c.passed; }));
}

std::vector<u64> admissible_range(u64 lo, u64 hi) {
    std::vector<u64> out;
    for (u64 q = std::max<u64>(lo, 3); q <= hi; ++q)
        if (arith::is_admissible(q)) out.push_back(q);
    return out;
}

std::shared_ptr<const forms::EigenformData> form_or_delta(const Options& o, u64 n_max) {
    return o.form ? o.form : forms::shared_delta(n_max);
}

SuiteResult orthogonality(u64 q_max, u64 mn_max, const Options& o) {
    auto r = start("orthogonality");
    const auto t0 = Clock::now();
    double worst = 0.0;
    u64 checked = 0, moduli = 0;
    for (u64 q : admissible_range(1, q_max)) {
        const auto g = group(q, o);
        ++moduli;
        double qworst = 0.0;
        for (u64 m = 1; m <= mn_max; ++m) {
            if (arith::gcd(m, q) != 1) continue;
            for (u64 n = 1; n <= mn_max; ++n) {
                if (arith::gcd(n, q) != 1) continue;
                for (int s : {1, -1}) {
                    const auto h = chars::orthogonality_sum(q, static_cast<arith::i64>(m), static_cast<arith::i64>(n), s);
                    const auto e = chars::enumerated_orthogonality(g, static_cast<arith::i64>(m),
                                                                   static_cast<arith::i64>(n), s);
                    qworst = std::max(qworst, std::abs(e - cplx(h.value(), 0.0)));
                    ++checked;
                }
            }
        }
        worst = std::max(worst, qworst);
        if (qworst > 1e-9) r.add("q=" + std::to_string(q), false, "max deviation " + fmt(qworst));
    }
    r.add("divisor formula = enumeration", worst <= 1e-9, "max deviation " + fmt(worst));
    r.data = {{"q_max", q_max}, {"moduli", moduli}, {"checked", checked}, {"max_deviation", worst}};
    r.seconds = since(t0);
    return r;
}

SuiteResult hecke(u64 limit, const Options& o) {
    auto r = start("hecke");
    const auto t0 = Clock::now();
    const auto f = form_or_delta(o, std::max<u64>(limit, 1));
    if (f->has_exact() && f->exact_limit() >= limit) {
        const auto h = forms::hecke_exact_check(*f, limit);
        const auto d = forms::deligne_exact_check(*f, limit);
        r.add("hecke relations (exact)", h.failures == 0 && h.checked > 0,
              std::to_string(h.checked) + " relations, " + std::to_string(h.failures) + " failures" +
                  (h.first_failure.empty() ? "" : ", first " + h.first_failure));
        r.add("deligne bound (exact)", d.failures == 0 && d.checked == limit,
              std::to_string(d.checked) + " coefficients, " + std::to_string(d.failures) + " failures" +
                  (d.first_failure.empty() ? "" : ", first " + d.first_failure));
        r.data = {{"mode", "exact"}, {"limit", limit}, {"hecke_checked", h.checked}, {"hecke_failures", h.failures},
                  {"deligne_checked", d.checked}, {"deligne_failures", d.failures}};
    } else {
        // floating data: relations to the ingest tolerance
        const double tol = 1e-6;
        const auto v = forms::validate(*f, tol);
        r.add("hecke relations (float)", v.max_hecke_deviation <= tol,
              std::to_string(v.hecke_relations) + " relations, max deviation " + fmt(v.max_hecke_deviation));
        r.add("ramanujan bound (float)", v.max_ramanujan_ratio <= 1.0 + tol, "max ratio " + fmt(v.max_ramanujan_ratio));
        r.data = {{"mode", "float"}, {"relations", v.hecke_relations}, {"max_deviation", v.max_hecke_deviation},
                  {"max_ramanujan_ratio", v.max_ramanujan_ratio}};
    }
    r.seconds = since(t0);
    return r;
}

SuiteResult weil(u64 c_max, const Options& o) {
    auto r = start("weil");
    const auto t0 = Clock::now();
    expsums::WeilReport w;
    try {
        w = expsums::weil_certify(c_max, o.exec);
    } catch (const expsums::WeilViolation& e) {
        w = e.report;
    }
    r.add("weil bound", w.violations == 0 && w.checked == c_max * 400,
          std::to_string(w.checked) + " sums, " + std::to_string(w.violations) + " violations, max ratio " +
              fmt(w.max_ratio));
    r.data = {{"c_max", c_max}, {"checked", w.checked}, {"violations", w.violations}, {"max_ratio", w.max_ratio},
              {"worst", {w.worst_m, w.worst_n, w.worst_c}}};
    r.seconds = since(t0);
    return r;
}

SuiteResult afe(const std::vector<u64>& qs, double tol, const Options& o) {
    auto r = start("afe");
    const auto t0 = Clock::now();
    const auto f = form_or_delta(o, kMomentTable);
    const auto V_even = lfun::WeightFunction::afe(*f, 0);
    const auto V_odd = lfun::WeightFunction::afe(*f, 1);
    json rows = json::array();
    double worst = 0.0;
    u64 used = 0;
    for (u64 q : qs) {
        const auto g = group(q, o);
        u64 here = 0;
        for (auto chi : g.primitive_indices()) {
            if (lfun::root_numbers(g, chi, *f).eps_pair != 1) continue;
            const auto& V = g.info(chi).parity == 1 ? V_even : V_odd;
            const cplx a = lfun::afe_triple_product(g, chi, *f, V);
            const cplx lb = lfun::dirichlet_L_half(g, g.conjugate(chi));
            const cplx oracle = lfun::twisted_L_half(g, chi, *f) * lb * lb;
            const double rel = std::abs(a - oracle) / std::abs(oracle);
            worst = std::max(worst, rel);
            ++here;
            rows.push_back({{"q", q}, {"chi", chi}, {"afe_re", a.real()}, {"afe_im", a.imag()}, {"rel_error", rel}});
            if (!(rel <= tol)) r.add("q=" + std::to_string(q) + " chi=" + std::to_string(chi), false, "relative error " + fmt(rel));
        }
        if (here == 0) r.add("q=" + std::to_string(q), false, "no primitive character with eps = +1");
        used += here;
    }
    r.add("afe cross-route", used > 0 && worst <= tol,
          std::to_string(used) + " characters, max relative error " + fmt(worst));
    r.data = {{"tolerance", tol}, {"characters", used}, {"max_rel_error", worst}, {"rows", rows}};
    r.seconds = since(t0);
    return r;
}

SuiteResult voronoi(double tol, const Options& o) {
    auto r = start("voronoi");
    const auto t0 = Clock::now();
    const auto f = form_or_delta(o, forms::kMaxDeltaTable);
    const auto cases = voronoi::default_grid();
    std::vector<voronoi::VoronoiResult> res;
    try {
        res = voronoi::run_grid(cases, *f, o.exec);
    } catch (const std::exception& e) {
        r.add("voronoi grid", false, e.what());
        r.seconds = since(t0);
        return r;
    }
    double worst = 0.0, worst_cert = 0.0;
    json rows = json::array();
    for (const auto& v : res) {
        worst = std::max(worst, v.residual);
        worst_cert = std::max(worst_cert, v.tail_certificate);
        rows.push_back({{"b", v.c.b}, {"d", v.c.d}, {"q", v.c.q}, {"X", v.c.X}, {"residual", v.residual},
                        {"tail_certificate", v.tail_certificate}, {"rhs_terms", v.rhs_terms}});
        if (!(v.residual <= tol)) {
            std::ostringstream os;
            os << "b=" << v.c.b << " d=" << v.c.d << " q=" << v.c.q << " X=" << v.c.X;
            r.add(os.str(), false, "residual " + fmt(v.residual));
        }
    }
    r.add("voronoi residual", !res.empty() && worst <= tol,
          std::to_string(res.size()) + " cases, max residual " + fmt(worst) + ", max tail certificate " + fmt(worst_cert));
    r.data = {{"tolerance", tol}, {"cases", res.size()}, {"max_residual", worst},
              {"max_tail_certificate", worst_cert}, {"rows", rows}};
    r.seconds = since(t0);
    return r;
}

SuiteResult coprime(u64 q_max, const Options& o) {
    auto r = start("coprime");
    const auto t0 = Clock::now();
    const auto f = form_or_delta(o, 1000);
    const bool exact = f->has_exact() && f->exact_limit() >= 1000;
    const std::pair<u64, u64> intervals[] = {{1, 1000}, {1, 1}, {37, 512}, {500, 1000}, {999, 1000}};
    u64 checked = 0, failures = 0;
    double worst_float = 0.0;
    for (u64 q = 1; q <= q_max; ++q)
        for (auto [lo, hi] : intervals) {
            for (auto seq : {forms::Sequence::Hecke, forms::Sequence::Divisor}) {
                ++checked;
                bool ok;
                if (seq == forms::Sequence::Hecke && !exact) {
                    std::vector<double> F(1000, 0.0);
                    for (u64 n = lo; n <= hi; ++n) F[n - 1] = 1.0;
                    const double d = forms::coprime_removal_check(*f, q, F, seq);
                    worst_float = std::max(worst_float, d);
                    ok = d <= 1e-9;
                } else {
                    ok = forms::coprime_removal_exact(*f, q, lo, hi, seq).is_zero();
                }
                if (!ok) {
                    ++failures;
                    r.add("q=" + std::to_string(q) + " [" + std::to_string(lo) + "," + std::to_string(hi) + "] " +
                              (seq == forms::Sequence::Hecke ? "lambda" : "tau"),
                          false, "nonzero residual");
                }
            }
        }
    r.add(exact ? "coprime removal exactly zero" : "coprime removal (float lambda, exact divisor)", failures == 0,
          std::to_string(checked) + " identities, " + std::to_string(failures) + " nonzero");
    r.data = {{"q_max", q_max}, {"mode", exact ? "exact" : "float"}, {"checked", checked}, {"failures", failures}};
    if (!exact) r.data["max_float_residual"] = worst_float;
    r.seconds = since(t0);
    return r;
}

SuiteResult moment_routes(u64 q_max, const Options& o) {
    auto r = start("moments");
    const auto t0 = Clock::now();
    const moments::MomentEngine e(form_or_delta(o, kMomentTable), o.exec);
    u64 queries = 0;
    double worst_im = 0.0;
    for (u64 q : admissible_range(3, q_max))
        for (u64 a = 1; a <= 3; ++a)
            for (u64 b = 1; b <= 3; ++b) {
                const moments::MomentQuery Q{q, a, b};
                try {
                    moments::validate(Q);
                } catch (const moments::InvalidQuery&) {
                    continue;
                }
                ++queries;
                const auto m = e.brute(Q);
                const auto d = e.divisor_route(Q);
                const double im = std::abs(m.brute.imag()) / std::max(1.0, std::abs(m.brute.real()));
                const double re =
                    std::max(std::abs(m.m_even - d.even) / std::max(std::abs(d.even), 1e-300),
                             std::abs(m.m_odd - d.odd) / std::max(std::abs(d.odd), 1e-300));
                worst_im = std::max(worst_im, im);
                const bool route_ok = close(m.m_even, d.even, 1e-6) && close(m.m_odd, d.odd, 1e-6);
                std::ostringstream id;
                id << "q=" << q << " a=" << a << " b=" << b;
                if (!(im <= 1e-8)) r.add(id.str() + " realness", false, "relative imaginary part " + fmt(im));
                if (!route_ok) r.add(id.str() + " parity route", false, "relative deviation " + fmt(re));
            }
    r.add("moment realness and parity routes", r.failed() == 0 && queries > 0,
          std::to_string(queries) + " queries, max relative Im " + fmt(worst_im));
    r.data = {{"q_max", q_max}, {"queries", queries}, {"max_rel_imag", worst_im}};
    r.seconds = since(t0);
    return r;
}

SuiteResult sweep(u64 lo, u64 hi, u64 a, u64 b, const Options& o, moments::SweepResult* out) {
    auto r = start("sweep");
    const auto t0 = Clock::now();
    const moments::MomentEngine e(form_or_delta(o, kMomentTable), o.exec);
    auto s = moments::sweep(admissible_range(lo, hi), a, b, e);
    const auto& S = s.summary;
    r.add("no per-q failures", s.failures.empty(), std::to_string(s.failures.size()) + " failures");
    const bool one = S.theorem_convergent != S.corollary_convergent;
    r.add("exactly one normalization convergent", one, "winner " + S.winner);
    const double top = S.corollary_convergent ? S.top_corollary : S.top_theorem;
    const double bottom = S.corollary_convergent ? S.bottom_corollary : S.bottom_theorem;
    r.add("top third closer than bottom third", top < bottom, "top " + fmt(top) + ", bottom " + fmt(bottom));
    r.add("fitted exponent reported", S.fit_points >= 2 && std::isfinite(S.fitted_exponent),
          "exponent " + fmt(S.fitted_exponent) + " from " + std::to_string(S.fit_points) + " points");
    r.data = json::parse(moments::summary_json(S));
    if (out) *out = std::move(s);
    r.seconds = since(t0);
    return r;
}

SuiteResult exponents() {
    auto r = start("exponent");
    const auto t0 = Clock::now();
    using moments::Rational;
    const auto e0 = moments::error_exponent(Rational(0), Rational(0), Rational(0));
    const auto e1 = moments::error_exponent(Rational(7, 64), Rational(0), Rational(0));
    auto str = [](const Rational& x) { return std::to_string(x.numerator()) + "/" + std::to_string(x.denominator()); };
    r.add("theta = 0 gives 1/22", e0.q_exponent == Rational(1, 22), str(e0.q_exponent));
    r.add("theta = 7/64 gives 5/152", e1.q_exponent == Rational(5, 152), str(e1.q_exponent));
    bool rejected = false;
    try {
        moments::error_exponent(Rational(1, 2), Rational(0), Rational(0));
    } catch (const moments::ExponentError&) {
        rejected = true;
    }
    r.add("theta = 1/2 rejected", rejected);
    r.data = {{"theta_0", str(e0.q_exponent)}, {"theta_7_64", str(e1.q_exponent)}};
    r.seconds = since(t0);
    return r;
}

SuiteResult aq_grid(const Options& o) {
    auto r = start("aq");
    const auto t0 = Clock::now();
    const auto f = form_or_delta(o, 200000);
    const std::vector<u64> qs = {101, 211, 401, 1009, 2003};
    const std::vector<double> fac = {0.25, 1.0, 4.0, 16.0};
    const auto cells = expsums::thmAq_grid(qs, fac, fac, 1, 1, *f, o.exec);
    u64 precluded = 0, bad_zero = 0, bad_ratio = 0;
    double max_ratio = 0.0;
    for (const auto& c : cells) {
        if (c.precluded) {
            ++precluded;
            if (c.value != 0.0 || c.solutions != 0) ++bad_zero;
        }
        if (!std::isfinite(c.ratio)) ++bad_ratio;
        else max_ratio = std::max(max_ratio, c.ratio);
    }
    r.add("precluded cells exactly zero", precluded > 0 && bad_zero == 0,
          std::to_string(precluded) + " precluded, " + std::to_string(bad_zero) + " nonzero");
    r.add("bound ratios finite", bad_ratio == 0,
          std::to_string(cells.size()) + " cells, max ratio " + fmt(max_ratio));
    r.data = {{"cells", cells.size()}, {"precluded", precluded}, {"max_ratio", max_ratio}};
    r.seconds = since(t0);
    return r;
}

json to_json(const SuiteResult& r) {
    json checks = json::array();
    for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    return {{"suite", r.suite}, {"passed", r.passed}, {"seconds", r.seconds}, {"checks", checks}, {"data", r.data}};
}

}  // namespace momentlab::suites
