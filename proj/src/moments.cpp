#include "momentlab/moments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <ostream>
#include <set>

#include "json.hpp"

namespace momentlab::moments {

namespace {


std::vector<u64> prime_divisors(u64 n) {
    std::vector<u64> out;
    if (n <= 1) return out;
    const auto fac = arith::factorize(n);
    for (const auto& pp : fac.factors()) out.push_back(pp.prime);
    return out;
}

double median(std::vector<double> v) {
    if (v.empty()) return std::nan("");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct LocalPrime {
    u64 p;
    int alpha, beta;  // v_p(a), v_p(b)
};

std::vector<LocalPrime> local_primes(u64 a, u64 b) {
    std::vector<LocalPrime> out;
    for (u64 p : prime_divisors(a * b)) out.push_back({p, arith::valuation(a, p), arith::valuation(b, p)});
    return out;
}

void check_cab_input(u64 a, u64 b, const forms::EigenformData& f) {
    if (a == 0 || b == 0) throw std::invalid_argument("c_ab: a and b must be positive");
    if (arith::gcd(a, b) != 1) throw std::invalid_argument("c_ab: a and b must be coprime");
    if (!(f.theta < 0.5)) throw std::domain_error("c_ab: theta_f >= 1/2, the series diverges");
}

// sum_e (alpha+e+1) p^{theta(alpha+e)} (beta+e+1) p^{-e} with a geometric remainder
long double local_majorant(const LocalPrime& lp, double theta) {
    const long double p = static_cast<long double>(lp.p);
    const long double r = std::pow(p, static_cast<long double>(theta) - 1.0L);
    long double s = 0.0L, t = std::pow(p, static_cast<long double>(theta) * lp.alpha);
    for (int e = 0; e < 4000; ++e) {
        const long double term = (lp.alpha + e + 1.0L) * (lp.beta + e + 1.0L) * t;
        s += term;
        t *= r;
        if (e > 8 && term < 1e-30L * s) {
            // remaining ratio is at most ((e+3)/(e+2))^2 r < 1
            const long double q = r * ((e + 3.0L) / (e + 2.0L)) * ((e + 3.0L) / (e + 2.0L));
            return s + term * q / (1.0L - q);
        }
    }
    throw std::runtime_error("c_ab: majorant series did not converge");
}

}  // namespace

void validate(const MomentQuery& Q) {
    if (Q.q < 3 || !arith::is_admissible(Q.q))
        throw InvalidQuery("moment: q = " + std::to_string(Q.q) + " is not admissible (need q > 2, q != 2 mod 4)");
    if (Q.a < 1 || Q.b < 1 || Q.a > Q.q || Q.b > Q.q) throw InvalidQuery("moment: need 1 <= a, b <= q");
    if (arith::gcd(Q.a, Q.b) != 1) throw InvalidQuery("moment: need (a, b) = 1");
    if (arith::gcd(Q.a * Q.b, Q.q) != 1) throw InvalidQuery("moment: need (ab, q) = 1");
}

CabResult c_ab_truncated(u64 a, u64 b, const forms::EigenformData& f, u64 depth) {
    check_cab_input(a, b, f);
    const auto P = local_primes(a, b);
    const double theta = f.theta;
    long double full = 1.0L;
    for (const auto& lp : P) full *= local_majorant(lp, theta);
    CabResult r;
    r.depth = depth;
    long double value = 0.0L, partial = 0.0L;
    // depth-first over m = prod p^{e_p} with every p^{e_p} <= depth; a box keeps
    // the term count polylogarithmic when ab has several primes
    std::vector<int> e(P.size(), 0);
    std::function<void(std::size_t, long double)> walk = [&](std::size_t i, long double m) {
        if (i == P.size()) {
            long double lam = 1.0L, dv = 1.0L, maj = 1.0L;
            for (std::size_t k = 0; k < P.size(); ++k) {
                const int ea = P[k].alpha + e[k];
                lam *= f.hecke_prime_power(P[k].p, ea);
                dv *= P[k].beta + e[k] + 1.0L;
                maj *= (ea + 1.0L) * std::pow(static_cast<long double>(P[k].p), static_cast<long double>(theta) * ea);
            }
            value += lam * dv / m;
            partial += maj * dv / m;
            ++r.terms;
            return;
        }
        long double mm = m;
        u64 pe = 1;
        for (e[i] = 0;; ++e[i]) {
            walk(i + 1, mm);
            if (pe > depth / P[i].p) break;
            pe *= P[i].p;
            mm = m * static_cast<long double>(pe);
        }
        e[i] = 0;
    };
    if (depth >= 1) walk(0, 1.0L);
    r.value = static_cast<double>(value);
    r.tail_bound = static_cast<double>(std::max(0.0L, full - partial));
    return r;
}

CabResult c_ab(u64 a, u64 b, const forms::EigenformData& f, double tol) {
    check_cab_input(a, b, f);
    if (a * b == 1) return {1.0, 0.0, 1, 1};
    for (u64 depth = 2;; depth *= 2) {
        auto r = c_ab_truncated(a, b, f, depth);
        if (r.tail_bound < tol) return r;
        if (depth > (u64{1} << 60)) throw std::runtime_error("c_ab: tail bound did not reach tolerance");
    }
}

double c_ab_product(u64 a, u64 b, const forms::EigenformData& f) {
    check_cab_input(a, b, f);
    double prod = 1.0;
    for (const auto& lp : local_primes(a, b)) {
        const double p = static_cast<double>(lp.p);
        // lambda(p^j) by the three-term recursion, carried alongside
        const double l1 = f.lambda(lp.p);
        double prev = 0.0, cur = 1.0;  // lambda(p^{-1}), lambda(p^0)
        for (int j = 0; j < lp.alpha; ++j) {
            const double nx = l1 * cur - prev;
            prev = cur;
            cur = nx;
        }
        double s = 0.0, pw = 1.0;
        for (int e = 0; e < 400; ++e) {
            s += cur * (lp.beta + e + 1.0) * pw;
            const double nx = l1 * cur - prev;
            prev = cur;
            cur = nx;
            pw /= p;
        }
        prod *= s;
    }
    return prod;
}

double euler_factor(const forms::EigenformData& f, u64 p) {
    const double l = f.lambda(p), x = 1.0 / static_cast<double>(p);
    const double u = 1.0 - l * x + x * x;
    return u * u / (1.0 - x * x);
}

double euler_factor_printed(const forms::EigenformData& f, u64 p) {
    const double l = f.lambda(p), x = 1.0 / static_cast<double>(p);
    const double v = 1.0 - x * x;
    return (1.0 - l * x + x * x) / (v * v);
}

MomentEngine::MomentEngine(std::shared_ptr<const forms::EigenformData> f, lfun::Exec exec)
    : f_(std::move(f)),
      exec_(exec),
      v_even_(lfun::WeightFunction::afe(*f_, 0, lfun::WeightFunction::Options{}, exec)),
      v_odd_(lfun::WeightFunction::afe(*f_, 1, lfun::WeightFunction::Options{}, exec)) {
    L1_ = f_->kind == forms::FormKind::Holomorphic ? lfun::L_one_f(*f_, 10.0).value : lfun::L_one_mellin(*f_).value;
}

const CharacterValues& MomentEngine::character_values(u64 q) const {
    if (cache_ && cache_->q == q) return *cache_;
    validate({q, 1, 1});
    CharacterValues cv;
    cv.q = q;
    cv.group = chars::build_group(q);
    const auto B0 = lfun::afe_buckets(*f_, v_even_, q, exec_);
    const auto B1 = lfun::afe_buckets(*f_, v_odd_, q, exec_);
    for (u32 chi : cv.group.primitive_indices()) {
        const int par = cv.group.info(chi).parity;
        const int sign = lfun::root_numbers(cv.group, chi, *f_).eps_pair;
        cv.index.push_back(chi);
        cv.parity.push_back(par);
        cv.sign.push_back(sign);
        cv.value.push_back(lfun::afe_from_buckets(par == 1 ? B0 : B1, cv.group, chi, sign));
    }
    cache_ = std::move(cv);
    return *cache_;
}

MomentReport MomentEngine::brute(const MomentQuery& Q) const {
    validate(Q);
    if (Q.q > 400) throw InvalidQuery("moment: brute force limited to q <= 400");
    const bool holo = f_->kind == forms::FormKind::Holomorphic;
    if (!holo && f_->epsilon != 1)
        throw lfun::ParityVanishing("moment: a Maass form with root number -1 gives an identically zero moment");
    const auto t0 = std::chrono::steady_clock::now();
    const auto& cv = character_values(Q.q);
    MomentReport r;
    r.q = Q.q;
    r.a = Q.a;
    r.b = Q.b;
    r.form = f_->name;
    for (std::size_t i = 0; i < cv.index.size(); ++i) {
        const u32 chi = cv.index[i];
        const cplx w = cv.value[i] * cv.group.value(chi, Q.b) * std::conj(cv.group.value(chi, Q.a));
        (cv.parity[i] == 1 ? r.m_even : r.m_odd) += w;
        const bool used = !holo || cv.parity[i] == f_->epsilon;
        (used ? r.chars_used : r.chars_skipped) += 1;
    }
    const double ps = static_cast<double>(arith::phi_star(Q.q));
    r.m_even /= ps;
    r.m_odd /= ps;
    r.brute = holo ? (f_->epsilon == 1 ? r.m_even : r.m_odd) : r.m_even + r.m_odd;
    r.main = main_term(Q);
    r.ratio_theorem = r.brute.real() / r.main.theorem;
    r.ratio_corollary = r.brute.real() / r.main.corollary;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

namespace {

struct PairLoop {
    u64 q;
    double q2;
    u64 n_cut;
    std::vector<std::uint32_t> d;
    std::vector<double> w;  // V(N / q^2) / sqrt(N), zero off the units
};

PairLoop make_loop(const forms::EigenformData& f, const lfun::WeightFunction& V, u64 q) {
    PairLoop L;
    L.q = q;
    L.q2 = static_cast<double>(q) * static_cast<double>(q);
    L.n_cut = static_cast<u64>(std::floor(V.x_cut(1e-12) * L.q2));
    if (L.n_cut > f.n_max()) throw std::out_of_range("divisor route: lambda table too short");
    L.d = arith::divisor_count_table(static_cast<std::uint32_t>(L.n_cut));
    L.w.assign(L.n_cut + 1, 0.0);
    for (u64 N = 1; N <= L.n_cut; ++N)
        if (arith::gcd(N, q) == 1) L.w[N] = V(static_cast<double>(N) / L.q2) / std::sqrt(static_cast<double>(N));
    return L;
}

int pair_sign(const forms::EigenformData& f, int sigma) {
    return f.kind == forms::FormKind::Holomorphic ? sigma * f.epsilon : f.epsilon;
}

}  // namespace

ParityPair MomentEngine::divisor_route(const MomentQuery& Q, Orthogonality mode) const {
    validate(Q);
    if (Q.q > 150) throw InvalidQuery("divisor route: limited to q <= 150");
    const u64 q = Q.q;
    const auto qf = arith::factorize(q);
    struct Div {
        arith::i64 d, c;
    };
    std::vector<Div> divs;
    for (u64 d : qf.divisors()) {
        const int mu = arith::moebius(q / d);
        if (mu != 0) divs.push_back({static_cast<arith::i64>(d), static_cast<arith::i64>(arith::euler_phi(d)) * mu});
    }
    std::optional<chars::CharacterGroup> g;
    if (mode == Orthogonality::Enumerated) g = chars::build_group(q);
    // twice the primitive sum over chi(-1) = sigma of chi(x) conj chi(y)
    auto twice_K = [&](arith::i64 x, arith::i64 y, int sigma) -> double {
        if (g) return 2.0 * chars::enumerated_orthogonality(*g, x, y, sigma).real();
        arith::i64 s = 0;
        for (const auto& dv : divs) {
            if ((x - y) % dv.d == 0) s += dv.c;
            if ((x + y) % dv.d == 0) s += sigma * dv.c;
        }
        return static_cast<double>(s);
    };
    ParityPair out;
    const double ps = static_cast<double>(arith::phi_star(q));
    for (int sigma : {1, -1}) {
        const auto L = make_loop(*f_, weight(sigma), q);
        const int s = pair_sign(*f_, sigma);
        double acc = 0.0;
        for (u64 m = 1; m <= L.n_cut; ++m) {
            if (arith::gcd(m, q) != 1) continue;
            const double lm = (*f_)[m];
            const arith::i64 am = static_cast<arith::i64>((Q.a * m) % q), bm = static_cast<arith::i64>((Q.b * m) % q);
            for (u64 n = 1; n <= L.n_cut / m; ++n) {
                const double wn = L.w[m * n];
                if (wn == 0.0) continue;
                const arith::i64 an = static_cast<arith::i64>((Q.a * n) % q),
                                 bn = static_cast<arith::i64>((Q.b * n) % q);
                const double k = twice_K(bm, an, sigma) + s * twice_K(bn, am, sigma);
                if (k != 0.0) acc += lm * L.d[n] * wn * k;
            }
        }
        (sigma == 1 ? out.even : out.odd) = acc / (2.0 * ps);
    }
    return out;
}

ParityPair MomentEngine::divisor_route_diagonal(const MomentQuery& Q) const {
    validate(Q);
    const u64 q = Q.q;
    double csum = 0.0;
    for (u64 d : arith::factorize(q).divisors())
        csum += static_cast<double>(arith::euler_phi(d)) * arith::moebius(q / d);
    ParityPair out;
    for (int sigma : {1, -1}) {
        const auto L = make_loop(*f_, weight(sigma), q);
        double acc = 0.0;
        // b m = a n with (a, b) = 1 forces m = a k, n = b k
        for (u64 k = 1; Q.a * Q.b * k * k <= L.n_cut; ++k) {
            const u64 m = Q.a * k, n = Q.b * k;
            acc += (*f_)[m] * L.d[n] * L.w[m * n];
        }
        (sigma == 1 ? out.even : out.odd) = csum * acc / static_cast<double>(arith::phi_star(q));
    }
    return out;
}

double MomentEngine::diagonal(const MomentQuery& Q, int sigma) const {
    validate(Q);
    const auto& V = weight(sigma);
    const double q2 = static_cast<double>(Q.q) * static_cast<double>(Q.q);
    const double ab = static_cast<double>(Q.a * Q.b);
    const double top = std::sqrt(V.x_cut(1e-12) * q2 / ab);
    double s = 0.0;
    for (u64 n = 1; n <= static_cast<u64>(top); ++n) {
        if (arith::gcd(n, Q.q) != 1) continue;
        const double nd = static_cast<double>(n);
        s += f_->lambda(Q.a * n) * static_cast<double>(arith::divisor_count(Q.b * n)) / nd * V(ab * nd * nd / q2);
    }
    return s / std::sqrt(ab);
}

MainTerm MomentEngine::main_term(const MomentQuery& Q) const {
    validate(Q);
    MainTerm mt;
    mt.c_f = f_->kind == forms::FormKind::Holomorphic ? 0.5 : 1.0;
    mt.euler = mt.euler_printed = 1.0;
    for (u64 p : prime_divisors(Q.q * Q.a * Q.b)) {
        if (p > f_->n_max()) throw std::out_of_range("main term: lambda(" + std::to_string(p) + ") missing");
        mt.euler *= euler_factor(*f_, p);
        mt.euler_printed *= euler_factor_printed(*f_, p);
    }
    mt.c_ab = c_ab(Q.a, Q.b, *f_, 1e-10).value;
    mt.c_ba = c_ab(Q.b, Q.a, *f_, 1e-10).value;
    mt.L1 = L1_;
    const double core = (mt.c_ab + mt.c_ba) / std::sqrt(static_cast<double>(Q.a * Q.b)) * L1_ * L1_ / lfun::zeta_two();
    mt.theorem = mt.c_f * mt.euler * core;
    mt.corollary = 0.5 * mt.theorem;
    mt.theorem_printed = mt.c_f * mt.euler_printed * core;
    return mt;
}

MomentReport brute_moment(const MomentQuery& Q, std::shared_ptr<const forms::EigenformData> f) {
    validate(Q);
    MomentEngine e(std::move(f));
    return e.brute(Q);
}

SweepResult sweep(const std::vector<u64>& q_list, u64 a, u64 b, const MomentEngine& engine) {
    SweepResult out;
    const std::set<u64> qs(q_list.begin(), q_list.end());
    for (u64 q : qs) {
        try {
            out.rows.push_back(engine.brute({q, a, b}));
        } catch (const std::exception& e) {
            out.failures.push_back({q, e.what()});
        }
    }
    out.summary = summarize(out.rows, out.failures.size());
    return out;
}

SweepSummary summarize(const std::vector<MomentReport>& rows_in, std::size_t failures) {
    auto rows = rows_in;
    std::sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) { return x.q < y.q; });
    SweepSummary s;
    s.rows = rows.size();
    s.failures = failures;
    s.winner = "none";
    if (rows.empty()) return s;
    auto dev_t = [](const MomentReport& r) { return std::abs(r.ratio_theorem - 1.0); };
    auto dev_c = [](const MomentReport& r) { return std::abs(r.ratio_corollary - 1.0); };
    auto dev_p = [](const MomentReport& r) { return std::abs(r.brute.real() / r.main.theorem_printed - 1.0); };

    for (u64 lo = 1; lo <= rows.back().q; lo *= 2) {
        std::vector<double> t, c;
        for (const auto& r : rows)
            if (r.q >= lo && r.q < 2 * lo) {
                t.push_back(dev_t(r));
                c.push_back(dev_c(r));
            }
        if (!t.empty()) s.blocks.push_back({lo, 2 * lo - 1, t.size(), median(t), median(c)});
    }

    const std::size_t k = std::max<std::size_t>(1, rows.size() / 3);
    auto third = [&](bool top, auto dev) {
        std::vector<double> v;
        for (std::size_t i = 0; i < k; ++i) v.push_back(dev(rows[top ? rows.size() - 1 - i : i]));
        return median(v);
    };
    s.bottom_theorem = third(false, dev_t);
    s.top_theorem = third(true, dev_t);
    s.bottom_corollary = third(false, dev_c);
    s.top_corollary = third(true, dev_c);
    s.bottom_printed = third(false, dev_p);
    s.top_printed = third(true, dev_p);
    s.theorem_convergent = s.top_theorem < s.bottom_theorem && s.top_theorem < s.top_corollary;
    s.corollary_convergent = s.top_corollary < s.bottom_corollary && s.top_corollary < s.top_theorem;
    if (s.theorem_convergent) s.winner = "theorem";
    if (s.corollary_convergent) s.winner = "corollary";

    // least squares on the top half of the q range
    const double mid = 0.5 * static_cast<double>(rows.front().q + rows.back().q);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    for (const auto& r : rows) {
        if (static_cast<double>(r.q) < mid) continue;
        const double main = s.corollary_convergent ? r.main.corollary : r.main.theorem;
        const double diff = std::abs(r.brute.real() - main);
        if (!(diff > 0.0)) continue;
        const double x = std::log(static_cast<double>(r.q)), y = std::log(diff);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    s.fit_points = n;
    if (n >= 2) {
        const double den = n * sxx - sx * sx;
        s.fitted_exponent = (n * sxy - sx * sy) / den;
        s.fit_intercept = (sy - s.fitted_exponent * sx) / n;
    } else {
        s.fitted_exponent = std::nan("");
    }
    return s;
}

namespace {

double round_sig(double v, int digits) {
    if (!std::isfinite(v)) return v;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return std::strtod(buf, nullptr);
}

std::string fmt(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

}  // namespace

void write_csv_header(std::ostream& os) {
    os << "q,a,b,form,brute_re,brute_im,m_even,m_odd,main_theorem,main_corollary,ratio_theorem,ratio_corollary,"
          "chars_used,chars_skipped\n";
}

void write_csv_row(std::ostream& os, const MomentReport& r, int digits) {
    os << r.q << ',' << r.a << ',' << r.b << ',' << r.form << ',' << fmt(r.brute.real(), digits) << ','
       << fmt(r.brute.imag(), digits) << ',' << fmt(r.m_even.real(), digits) << ',' << fmt(r.m_odd.real(), digits)
       << ',' << fmt(r.main.theorem, digits) << ',' << fmt(r.main.corollary, digits) << ','
       << fmt(r.ratio_theorem, digits) << ',' << fmt(r.ratio_corollary, digits) << ',' << r.chars_used << ','
       << r.chars_skipped << '\n';
}

void write_jsonl_row(std::ostream& os, const MomentReport& r, int digits) {
    nlohmann::ordered_json j;
    j["q"] = r.q;
    j["a"] = r.a;
    j["b"] = r.b;
    j["form"] = r.form;
    j["brute_re"] = round_sig(r.brute.real(), digits);
    j["brute_im"] = round_sig(r.brute.imag(), digits);
    j["m_even"] = round_sig(r.m_even.real(), digits);
    j["m_odd"] = round_sig(r.m_odd.real(), digits);
    j["main_theorem"] = round_sig(r.main.theorem, digits);
    j["main_corollary"] = round_sig(r.main.corollary, digits);
    j["ratio_theorem"] = round_sig(r.ratio_theorem, digits);
    j["ratio_corollary"] = round_sig(r.ratio_corollary, digits);
    j["chars_used"] = r.chars_used;
    j["seconds"] = round_sig(r.seconds, 6);
    os << j.dump() << '\n';
}

std::string summary_json(const SweepSummary& s) {
    nlohmann::ordered_json j;
    j["rows"] = s.rows;
    j["failures"] = s.failures;
    auto blocks = nlohmann::ordered_json::array();
    for (const auto& b : s.blocks)
        blocks.push_back({{"q_lo", b.lo},
                          {"q_hi", b.hi},
                          {"count", b.count},
                          {"median_dev_theorem", round_sig(b.median_theorem, 12)},
                          {"median_dev_corollary", round_sig(b.median_corollary, 12)}});
    j["dyadic_blocks"] = blocks;
    j["bottom_third_dev_theorem"] = round_sig(s.bottom_theorem, 12);
    j["top_third_dev_theorem"] = round_sig(s.top_theorem, 12);
    j["bottom_third_dev_corollary"] = round_sig(s.bottom_corollary, 12);
    j["top_third_dev_corollary"] = round_sig(s.top_corollary, 12);
    j["bottom_third_dev_printed_euler"] = round_sig(s.bottom_printed, 12);
    j["top_third_dev_printed_euler"] = round_sig(s.top_printed, 12);
    j["theorem_convergent"] = s.theorem_convergent;
    j["corollary_convergent"] = s.corollary_convergent;
    j["winner"] = s.winner;
    if (std::isfinite(s.fitted_exponent))
        j["fitted_error_exponent"] = round_sig(s.fitted_exponent, 12);
    else
        j["fitted_error_exponent"] = nullptr;
    j["fit_points"] = s.fit_points;
    return j.dump(2);
}

ExponentBudget error_exponent(Rational theta, Rational alpha, Rational beta) {
    if (theta < 0 || theta >= Rational(1, 2)) throw ExponentError("error_exponent: theta_f must lie in [0, 1/2)");
    if (alpha < 0 || beta < 0) throw ExponentError("error_exponent: alpha and beta must be nonnegative");
    ExponentBudget e;
    e.theta = theta;
    e.alpha = alpha;
    e.beta = beta;
    const Rational one(1);
    const Rational base = (one - 2 * theta) / (22 + 16 * theta);
    e.b_exponent = (3 + 2 * theta) / (11 + 8 * theta);
    e.first = Rational(-1, 20) + Rational(3, 10) * alpha;
    e.second = -base + beta * e.b_exponent;
    e.q_exponent = -std::max(e.first, e.second);
    e.eta = std::min((one - 2 * theta) / (12 + 12 * theta), (one - 2 * theta - (6 + 4 * theta) * beta) / (22 + 16 * theta));
    return e;
}

Rational parse_rational(const std::string& s) {
    auto bad = [&] { return std::invalid_argument("not a rational number: '" + s + "'"); };
    auto to_int = [&](const std::string& t) -> arith::i64 {
        if (t.empty()) throw bad();
        std::size_t pos = 0;
        arith::i64 v = 0;
        try {
            v = std::stoll(t, &pos);
        } catch (const std::exception&) {
            throw bad();
        }
        if (pos != t.size()) throw bad();
        return v;
    };
    const auto slash = s.find('/');
    if (slash != std::string::npos) {
        const auto den = to_int(s.substr(slash + 1));
        if (den == 0) throw bad();
        return Rational(to_int(s.substr(0, slash)), den);
    }
    const auto dot = s.find('.');
    if (dot == std::string::npos) return Rational(to_int(s));
    const std::string frac = s.substr(dot + 1);
    if (frac.size() > 15 || frac.find_first_not_of("0123456789") != std::string::npos) throw bad();
    std::string whole = s.substr(0, dot);
    const bool neg = !whole.empty() && whole[0] == '-';
    if (whole.empty() || whole == "-" || whole == "+") whole += "0";
    arith::i64 den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    const arith::i64 w = to_int(whole);
    const arith::i64 fpart = frac.empty() ? 0 : to_int(frac);
    const arith::i64 num = w * den + (neg ? -fpart : fpart);
    return Rational(num, den);
}

}  // namespace momentlab::moments
