#include "momentlab/expsums.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace momentlab::expsums {

namespace {

constexpr double kPi = std::numbers::pi;

u64 inverse(u64 x, u64 c) { return arith::mod_inverse(static_cast<i64>(x % c), c); }

using arith::mulmod;

struct Kahan {
    double s = 0.0, comp = 0.0;
    void add(double x) {
        const double y = x - comp;
        const double t = s + y;
        comp = (t - s) - y;
        s = t;
    }
};

double log_eps(u64 q) {
    const double l = std::log(static_cast<double>(q));
    return l * l;
}

}  // namespace

KloostermanTable::KloostermanTable(u64 c) : c_(c) {
    if (c == 0 || c > kMaxKloostermanModulus) throw std::invalid_argument("kloosterman: modulus outside [1, 1e6]");
    for (u64 x = 0; x < c; ++x) {
        if (arith::gcd(x, c) != 1) continue;
        units_.push_back(x);
        inv_.push_back(c == 1 ? 0 : inverse(x, c));
    }
    cos_.resize(c);
    sin_.resize(c);
    for (u64 k = 0; k < c; ++k) {
        // symmetric reduction keeps cos(k) == cos(c - k) bit for bit
        const u64 kk = std::min(k, c - k);
        const double t = 2.0 * kPi * static_cast<double>(kk) / static_cast<double>(c);
        cos_[k] = std::cos(t);
        sin_[k] = (kk == k ? 1.0 : -1.0) * std::sin(t);
    }
}

cplx KloostermanTable::sum(i64 m, i64 n) const {
    const u64 c = c_;
    if (c == 1) return 1.0;
    const u64 mr = arith::reduce(m, c), nr = arith::reduce(n, c);
    std::vector<std::uint32_t> cnt(c, 0);
    for (std::size_t i = 0; i < units_.size(); ++i) {
        const u64 k = (mulmod(mr, units_[i], c) + mulmod(nr, inv_[i], c)) % c;
        ++cnt[k];
    }
    if (c > 10000) {
        Kahan re, im;
        for (u64 k = 0; k < c; ++k)
            if (cnt[k]) {
                re.add(cnt[k] * cos_[k]);
                im.add(cnt[k] * sin_[k]);
            }
        return {re.s, im.s};
    }
    double re = 0.0, im = 0.0;
    for (u64 k = 0; k < c; ++k)
        if (cnt[k]) {
            re += cnt[k] * cos_[k];
            im += cnt[k] * sin_[k];
        }
    return {re, im};
}

cplx kloosterman_complex(i64 m, i64 n, u64 c) { return KloostermanTable(c).sum(m, n); }

double kloosterman(i64 m, i64 n, u64 c) { return kloosterman_complex(m, n, c).real(); }

cplx kloosterman_cusp(i64 m, i64 n, u64 u, u64 v, u64 w) {
    if (u == 0 || v == 0 || w == 0) throw std::invalid_argument("kloosterman_cusp: u, v, w must be positive");
    if (arith::gcd(u, v) != 1) throw std::invalid_argument("kloosterman_cusp: need (u, v) = 1");
    if (arith::gcd(w, v) != 1) throw std::invalid_argument("kloosterman_cusp: need (w, v) = 1");
    const u64 c = u * w;
    const u64 ubar = v == 1 ? 0 : inverse(u % v, v);
    const u64 vbar = c == 1 ? 0 : inverse(v % c, c);
    const u64 k = v == 1 ? 0 : mulmod(arith::reduce(n, v), ubar, v);
    const double t = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(v);
    const cplx phase(std::cos(t), std::sin(t));
    const i64 mv = static_cast<i64>(mulmod(arith::reduce(m, c), vbar, c));
    return phase * kloosterman_complex(mv, n, c);
}

double weil_bound(i64 m, i64 n, u64 c) {
    const u64 g = arith::gcd(arith::gcd(arith::reduce(m, c), arith::reduce(n, c)), c);
    const u64 gg = g == 0 ? c : g;
    return static_cast<double>(arith::divisor_count(c)) * std::sqrt(static_cast<double>(gg)) *
           std::sqrt(static_cast<double>(c));
}

const std::array<i64, 20>& weil_grid() {
    static const std::array<i64, 20> g = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 16, 18, 25, 27, 30, 49, 60, 97};
    return g;
}

WeilReport weil_certify(u64 c_max, Exec exec) {
    if (c_max < 1 || c_max > 500) throw std::invalid_argument("weil_certify: c_max must lie in [1, 500]");
    const auto& G = weil_grid();
    std::vector<WeilReport> per(c_max + 1);
    auto one = [&](u64 c) {
        const KloostermanTable T(c);
        WeilReport& r = per[c];
        for (i64 m : G)
            for (i64 n : G) {
                const double ratio = std::abs(T.sum(m, n)) / weil_bound(m, n, c);
                ++r.checked;
                if (ratio > 1.0 + 1e-9) ++r.violations;
                if (ratio > r.max_ratio) {
                    r.max_ratio = ratio;
                    r.worst_m = m;
                    r.worst_n = n;
                    r.worst_c = c;
                }
            }
    };
    const long C = static_cast<long>(c_max);
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 4)
        for (long c = 1; c <= C; ++c) one(static_cast<u64>(c));
    } else {
        for (long c = 1; c <= C; ++c) one(static_cast<u64>(c));
    }
    WeilReport out;
    out.c_max = c_max;
    for (u64 c = 1; c <= c_max; ++c) {
        out.checked += per[c].checked;
        out.violations += per[c].violations;
        if (per[c].max_ratio > out.max_ratio) {
            out.max_ratio = per[c].max_ratio;
            out.worst_m = per[c].worst_m;
            out.worst_n = per[c].worst_n;
            out.worst_c = per[c].worst_c;
        }
    }
    if (out.violations) {
        std::ostringstream os;
        os << "Weil bound violated " << out.violations << " times; worst S(" << out.worst_m << "," << out.worst_n
           << ";" << out.worst_c << ") ratio " << out.max_ratio;
        throw WeilViolation(os.str(), out);
    }
    return out;
}

double Ranges::pairs() const {
    const double nm = m_hi >= m_lo ? static_cast<double>(m_hi - m_lo + 1) : 0.0;
    const double nn = n_hi >= n_lo ? static_cast<double>(n_hi - n_lo + 1) : 0.0;
    return nm * nn;
}

Ranges ranges(const ConvolutionQuery& Q) {
    if (Q.a == 0 || Q.b == 0 || Q.q == 0) throw std::invalid_argument("convolution: a, b, q must be positive");
    if (!(Q.M > 0 && Q.N > 0)) throw std::invalid_argument("convolution: M, N must be positive");
    if (Q.sign != 1 && Q.sign != -1) throw std::invalid_argument("convolution: sign must be +1 or -1");
    const double lo = Q.window.lo(), hi = Q.window.hi();
    if (lo < special::BumpFunction::lo - 1e-12 || hi > special::BumpFunction::hi + 1e-12)
        throw std::invalid_argument("convolution: window support must stay inside [1/2, 3]");
    Ranges r;
    // open supports: W vanishes at the endpoints
    r.m_lo = static_cast<u64>(std::floor(lo * Q.M / Q.b)) + 1;
    r.m_hi = static_cast<u64>(std::ceil(hi * Q.M / Q.b)) - 1;
    r.n_lo = static_cast<u64>(std::floor(lo * Q.N / Q.a)) + 1;
    r.n_hi = static_cast<u64>(std::ceil(hi * Q.N / Q.a)) - 1;
    return r;
}

bool support_precluded(const ConvolutionQuery& Q) {
    const auto R = ranges(Q);
    if (R.pairs() == 0) return true;
    // bm - sign an runs over an interval of integers; it must avoid every nonzero multiple of q
    const i64 bm_lo = static_cast<i64>(Q.b * R.m_lo), bm_hi = static_cast<i64>(Q.b * R.m_hi);
    const i64 an_lo = static_cast<i64>(Q.a * R.n_lo), an_hi = static_cast<i64>(Q.a * R.n_hi);
    i64 lo, hi;
    if (Q.sign == 1) {
        lo = bm_lo - an_hi;
        hi = bm_hi - an_lo;
    } else {
        lo = bm_lo + an_lo;
        hi = bm_hi + an_hi;
    }
    const i64 q = static_cast<i64>(Q.q);
    // smallest multiple of q that is >= lo
    i64 k = lo >= 0 ? (lo + q - 1) / q : -((-lo) / q);
    for (; k * q <= hi; ++k)
        if (k != 0) return false;
    return true;
}

namespace {

void check_budget(const Ranges& R, const char* who) {
    const double p = R.pairs();
    if (p > kPairBudget) {
        std::ostringstream os;
        os << who << ": " << p << " candidate pairs exceed the budget of " << kPairBudget;
        throw BudgetExceeded(os.str(), p);
    }
}

struct Tables {
    std::vector<double> wm, wn;
    std::vector<std::uint32_t> d;
};

Tables tables(const ConvolutionQuery& Q, const Ranges& R, const forms::EigenformData& f) {
    if (R.m_hi > f.n_max()) throw std::out_of_range("convolution: lambda table too short");
    Tables t;
    t.d = arith::divisor_count_table(static_cast<std::uint32_t>(std::max<u64>(R.n_hi, 1)));
    t.wm.assign(R.m_hi + 1, 0.0);
    t.wn.assign(R.n_hi + 1, 0.0);
    for (u64 m = R.m_lo; m <= R.m_hi; ++m) t.wm[m] = f[m] * Q.window(static_cast<double>(Q.b * m) / Q.M);
    for (u64 n = R.n_lo; n <= R.n_hi; ++n) t.wn[n] = t.d[n] * Q.window(static_cast<double>(Q.a * n) / Q.N);
    return t;
}

}  // namespace

AqResult shifted_conv_Aq(const ConvolutionQuery& Q, const forms::EigenformData& f) {
    const auto R = ranges(Q);
    check_budget(R, "shifted_conv_Aq");
    AqResult out;
    if (R.pairs() == 0) return out;
    const auto T = tables(Q, R, f);
    const u64 q = Q.q;
    // a n = sign b m (q): solvable iff g | b m with g = (a, q); then n runs over one class mod q/g
    const u64 g = arith::gcd(Q.a, q), qg = q / g;
    const u64 abar = qg == 1 ? 0 : arith::mod_inverse(static_cast<i64>((Q.a / g) % qg), qg);
    for (u64 m = R.m_lo; m <= R.m_hi; ++m) {
        if (T.wm[m] == 0.0) continue;
        const u64 bm = (Q.b * m) % q;
        const u64 rhs = Q.sign == 1 ? bm : (q - bm) % q;
        if (rhs % g != 0) continue;
        const u64 n0 = qg == 1 ? 0 : mulmod((rhs / g) % qg, abar, qg);
        // first n >= n_lo in the class n0 mod qg
        u64 n = R.n_lo + (n0 + qg - R.n_lo % qg) % qg;
        double acc = 0.0;
        for (; n <= R.n_hi; n += qg) {
            if (Q.b * m == Q.a * n) continue;
            ++out.solutions;
            acc += T.wn[n];
        }
        out.value += T.wm[m] * acc;
    }
    return out;
}

AqResult shifted_conv_Aq_naive(const ConvolutionQuery& Q, const forms::EigenformData& f) {
    const auto R = ranges(Q);
    check_budget(R, "shifted_conv_Aq");
    AqResult out;
    if (R.pairs() == 0) return out;
    const auto T = tables(Q, R, f);
    const i64 q = static_cast<i64>(Q.q);
    for (u64 m = R.m_lo; m <= R.m_hi; ++m) {
        double acc = 0.0;
        for (u64 n = R.n_lo; n <= R.n_hi; ++n) {
            const i64 bm = static_cast<i64>(Q.b * m), an = static_cast<i64>(Q.a * n);
            if (bm == an || (bm - Q.sign * an) % q != 0) continue;
            ++out.solutions;
            acc += T.wn[n];
        }
        out.value += T.wm[m] * acc;
    }
    return out;
}

AqBound thmAq_bound(const ConvolutionQuery& Q) {
    if (Q.q < 3) throw std::invalid_argument("thmAq_bound: need q >= 3 for the (log q)^2 factor");
    const double M = std::max(Q.M, Q.N), N = std::min(Q.M, Q.N);
    const double q = static_cast<double>(Q.q), ab = static_cast<double>(Q.a * Q.b);
    const double g = static_cast<double>(arith::gcd(Q.a * Q.b, Q.q));
    AqBound B;
    B.terms[0] = M / std::sqrt(q);
    B.terms[1] = std::pow(g, 0.25) * std::pow(M, 1.25) * std::pow(N, 0.25) / (std::pow(ab, 0.25) * q);
    B.terms[2] = std::pow(M, 0.75) * std::pow(N, 0.25) / (std::pow(ab, 0.25) * std::pow(q, 0.25));
    B.terms[3] = std::pow(g, 0.25) * M * std::sqrt(N) / (std::sqrt(ab) * std::pow(q, 0.75));
    B.eps = log_eps(Q.q);
    B.total = B.eps * (B.terms[0] + B.terms[1] + B.terms[2] + B.terms[3]);
    return B;
}

double thmAq_ratio(const ConvolutionQuery& Q, const forms::EigenformData& f) {
    const auto B = thmAq_bound(Q);
    return std::abs(shifted_conv_Aq(Q, f).value) / B.total;
}

std::vector<AqCell> thmAq_grid(const std::vector<u64>& qs, const std::vector<double>& m_factors,
                               const std::vector<double>& n_factors, u64 a, u64 b, const forms::EigenformData& f,
                               Exec exec) {
    std::vector<AqCell> cells;
    for (u64 q : qs)
        for (double mf : m_factors)
            for (double nf : n_factors)
                for (int s : {1, -1}) {
                    const double r = std::sqrt(static_cast<double>(q));
                    cells.push_back({q, mf * r, nf * r, s, 0, 0, 0, 0, false});
                }
    const long C = static_cast<long>(cells.size());
    auto run = [&](long i) {
        auto& c = cells[i];
        ConvolutionQuery Q;
        Q.a = a;
        Q.b = b;
        Q.q = c.q;
        Q.M = c.M;
        Q.N = c.N;
        Q.sign = c.sign;
        const auto r = shifted_conv_Aq(Q, f);
        c.value = r.value;
        c.solutions = r.solutions;
        c.bound = thmAq_bound(Q).total;
        c.ratio = std::abs(r.value) / c.bound;
        c.precluded = support_precluded(Q);
    };
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (long i = 0; i < C; ++i) run(i);
    } else {
        for (long i = 0; i < C; ++i) run(i);
    }
    return cells;
}

double emn_brute(double M, double N, u64 a, u64 b, u64 q, const forms::EigenformData& f, CoprimeFilter filter) {
    if (q < 3 || !arith::is_admissible(q)) throw std::invalid_argument("emn_brute: q must be admissible");
    if (a == 0 || b == 0 || arith::gcd(a, b) != 1 || arith::gcd(a * b, q) != 1)
        throw std::invalid_argument("emn_brute: need (a, b) = (ab, q) = 1");
    ConvolutionQuery Q;
    Q.M = M;
    Q.N = N;
    Q.q = q;
    const auto R = ranges(Q);  // a = b = 1: windows in m/M and n/N
    check_budget(R, "emn_brute");
    if (R.pairs() == 0) return 0.0;
    const auto T = tables(Q, R, f);
    struct Div {
        i64 d, c;
    };
    std::vector<Div> divs;
    const auto qf = arith::factorize(q);
    for (u64 d : qf.divisors()) {
        const int mu = arith::moebius(q / d);
        if (mu) divs.push_back({static_cast<i64>(d), static_cast<i64>(arith::euler_phi(d)) * mu});
    }
    auto keep = [&](u64 m, u64 n) {
        const bool cop = arith::gcd(m * n, q) == 1;
        switch (filter) {
            case CoprimeFilter::Coprime: return cop;
            case CoprimeFilter::Complement: return !cop;
            default: return true;
        }
    };
    double acc = 0.0;
    for (u64 m = R.m_lo; m <= R.m_hi; ++m) {
        if (T.wm[m] == 0.0) continue;
        const i64 bm = static_cast<i64>(b * m);
        double row = 0.0;
        for (u64 n = R.n_lo; n <= R.n_hi; ++n) {
            const i64 an = static_cast<i64>(a * n);
            if (bm == an || !keep(m, n)) continue;
            i64 k = 0;
            for (const auto& dv : divs) {
                if ((bm - an) % dv.d == 0) k += dv.c;
                if ((bm + an) % dv.d == 0) k += dv.c;
            }
            if (k) row += static_cast<double>(k) * T.wn[n];
        }
        acc += T.wm[m] * row;
    }
    return acc / (static_cast<double>(arith::phi_star(q)) * std::sqrt(M * N));
}

TrivialBounds trivial_bounds(double M, double N, u64, u64, u64 q, double theta) {
    if (q < 3) throw std::invalid_argument("trivial_bounds: need q >= 3");
    if (!(theta >= 0 && theta < 0.5)) throw std::invalid_argument("trivial_bounds: theta must lie in [0, 1/2)");
    const double e = log_eps(q), qd = static_cast<double>(q);
    const double common = std::sqrt(M * N) / qd;
    return {e * (common + std::sqrt(M / N)), std::pow(M, theta) * e * (common + std::sqrt(N / M))};
}

BilinearResult bilinear_incomplete(const std::vector<cplx>& alpha, const std::vector<cplx>& beta, u64 c, u64 q,
                                   Exec exec) {
    if (q < 2) throw std::invalid_argument("bilinear_incomplete: need q >= 2");
    if (arith::gcd(c, q) != 1) throw std::invalid_argument("bilinear_incomplete: need (c, q) = 1");
    const std::size_t A = alpha.size(), B = beta.size();
    if (A == 0 || B == 0 || A > 10000 || B > 10000) throw std::invalid_argument("bilinear_incomplete: need 1 <= A, B <= 1e4");
    std::vector<u64> bbar(B + 1, 0);
    std::vector<bool> unit(B + 1, false);
    for (std::size_t b = 1; b <= B; ++b)
        if (arith::gcd(b, q) == 1) {
            unit[b] = true;
            bbar[b] = inverse(b % q, q);
        }
    std::vector<double> cs(q), sn(q);
    for (u64 k = 0; k < q; ++k) {
        const double t = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(q);
        cs[k] = std::cos(t);
        sn[k] = std::sin(t);
    }
    std::vector<double> inner(A + 1, 0.0);
    auto row = [&](long a) {
        const u64 ca = mulmod(c % q, static_cast<u64>(a) % q, q);
        cplx s = 0.0;
        for (std::size_t b = 1; b <= B; ++b) {
            if (!unit[b]) continue;
            const u64 k = mulmod(ca, bbar[b], q);
            s += beta[b - 1] * cplx(cs[k], sn[k]);
        }
        inner[a] = std::abs(s);
    };
    const long AL = static_cast<long>(A);
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (long a = 1; a <= AL; ++a) row(a);
    } else {
        for (long a = 1; a <= AL; ++a) row(a);
    }
    BilinearResult r;
    for (std::size_t a = 1; a <= A; ++a) r.value += alpha[a - 1] * inner[a];
    double a2 = 0.0, binf = 0.0;
    for (const auto& x : alpha) a2 += std::norm(x);
    for (const auto& x : beta) binf = std::max(binf, std::abs(x));
    const double Ad = static_cast<double>(A), Bd = static_cast<double>(B), qd = static_cast<double>(q);
    r.bound = std::sqrt(a2) * binf * std::sqrt(Ad) * Bd * log_eps(q) *
              (std::pow(Ad, -0.5) * std::pow(Bd, -0.25) * std::pow(qd, 0.25) + std::pow(Ad, -0.5) +
               std::pow(qd, -0.5) + std::pow(Bd, -0.5));
    r.ratio = std::abs(r.value) / r.bound;
    return r;
}

}  // namespace momentlab::expsums
