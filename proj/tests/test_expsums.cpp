#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "momentlab/expsums.hpp"

using namespace momentlab;
using namespace momentlab::expsums;
constexpr double kPi = std::numbers::pi;

namespace {

const forms::EigenformData& delta() {
    static const auto f = forms::shared_delta(200000);
    return *f;
}

// sum over x mod c, (x, c) = 1, of e((m x + n conj(x)) / c), no tables
cplx kloosterman_slow(i64 m, i64 n, u64 c) {
    cplx s = 0.0;
    for (u64 x = 0; x < c; ++x) {
        if (arith::gcd(x, c) != 1) continue;
        const u64 xb = c == 1 ? 0 : arith::mod_inverse(static_cast<i64>(x), c);
        const long double t = 2.0L * std::numbers::pi_v<long double> *
                              static_cast<long double>((static_cast<__int128>(m) * x + static_cast<__int128>(n) * xb) %
                                                       static_cast<__int128>(c)) /
                              c;
        s += cplx(static_cast<double>(std::cos(t)), static_cast<double>(std::sin(t)));
    }
    return s;
}

}  // namespace

TEST_CASE("kloosterman small values") {
    CHECK(kloosterman(5, 7, 1) == 1.0);
    CHECK(std::abs(kloosterman(1, 1, 2) - 1.0) < 1e-14);
    CHECK(std::abs(kloosterman(1, 1, 3) - (-1.0)) < 1e-14);
    CHECK(std::abs(kloosterman(0, 0, 12) - static_cast<double>(arith::euler_phi(12))) < 1e-12);
    // Ramanujan sum c_5(1) = -1
    CHECK(std::abs(kloosterman(1, 0, 5) - (-1.0)) < 1e-13);
    CHECK_THROWS_AS(kloosterman(1, 1, 0), std::invalid_argument);
    CHECK_THROWS_AS(kloosterman(1, 1, 1000001), std::invalid_argument);
}

TEST_CASE("kloosterman symmetry, realness and the slow oracle") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<i64> U(-500, 500);
    for (u64 c = 1; c <= 120; ++c) {
        const KloostermanTable T(c);
        for (int i = 0; i < 8; ++i) {
            const i64 m = U(rng), n = U(rng);
            const cplx s = T.sum(m, n);
            CHECK(std::abs(s.imag()) < 1e-9);
            CHECK(s == T.sum(n, m));
            CHECK(std::abs(s - kloosterman_slow(m, n, c)) < 1e-9);
            CHECK(std::abs(s - T.sum(m + static_cast<i64>(c), n)) < 1e-12);
        }
    }
}

TEST_CASE("kloosterman twisted multiplicativity") {
    const std::pair<u64, u64> pairs[] = {{3, 4}, {5, 8}, {7, 9}, {11, 25}, {16, 27}};
    for (auto [c1, c2] : pairs)
        for (i64 m : {1, 2, 6, 13})
            for (i64 n : {1, 3, 10}) {
                const i64 b2 = static_cast<i64>(arith::mod_inverse(static_cast<i64>(c2 % c1), c1));
                const i64 b1 = static_cast<i64>(arith::mod_inverse(static_cast<i64>(c1 % c2), c2));
                const double rhs = kloosterman(m * b2 * b2, n, c1) * kloosterman(m * b1 * b1, n, c2);
                CHECK(std::abs(kloosterman(m, n, c1 * c2) - rhs) < 1e-9);
            }
}

TEST_CASE("kloosterman cusp identity") {
    struct Case {
        i64 m, n;
        u64 u, v, w;
    };
    for (const Case& c : {Case{1, 1, 1, 1, 7}, Case{2, 3, 3, 4, 5}, Case{5, 1, 2, 9, 5}, Case{1, 4, 5, 3, 2}}) {
        const cplx k = kloosterman_cusp(c.m, c.n, c.u, c.v, c.w);
        const u64 uw = c.u * c.w;
        const i64 vbar = uw == 1 ? 0 : static_cast<i64>(arith::mod_inverse(static_cast<i64>(c.v % uw), uw));
        const i64 ubar = c.v == 1 ? 0 : static_cast<i64>(arith::mod_inverse(static_cast<i64>(c.u % c.v), c.v));
        const double t = 2 * kPi * static_cast<double>(arith::reduce(c.n * ubar, c.v)) / c.v;
        const cplx oracle = cplx(std::cos(t), std::sin(t)) * kloosterman_slow(c.m * vbar, c.n, uw);
        CHECK(std::abs(k - oracle) < 1e-9);
        // modulus of the phase is one
        CHECK(std::abs(std::abs(k) - std::abs(kloosterman(c.m * vbar, c.n, uw))) < 1e-9);
    }
    // v = 1 reduces to the plain sum
    CHECK(std::abs(kloosterman_cusp(3, 5, 4, 1, 3) - kloosterman_complex(3, 5, 12)) < 1e-12);
    CHECK_THROWS_AS(kloosterman_cusp(1, 1, 2, 4, 1), std::invalid_argument);
}

TEST_CASE("weil bound") {
    const auto S = weil_certify(100, Exec::Serial);
    const auto P = weil_certify(100, Exec::Parallel);
    CHECK(S.violations == 0);
    CHECK(S.checked == 100 * 400);
    CHECK(S.max_ratio == P.max_ratio);
    CHECK(S.max_ratio <= 1.0);
    CHECK(S.max_ratio > 0.5);
    // prime moduli: |S(1,1;p)| <= 2 sqrt p
    for (u64 p : {101ull, 499ull, 997ull, 7919ull})
        CHECK(std::abs(kloosterman(1, 1, p)) <= 2 * std::sqrt(static_cast<double>(p)) + 1e-9);
    // c = p^2, (mn, p) = 1: |S| = 2 p |cos| <= 2p
    for (u64 p : {5ull, 7ull, 13ull}) {
        const double v = kloosterman(1, 1, p * p);
        CHECK(std::abs(v) <= 2.0 * p + 1e-9);
        CHECK(std::abs(v) <= weil_bound(1, 1, p * p));
    }
    CHECK_THROWS_AS(weil_certify(501), std::invalid_argument);
}

TEST_CASE("shifted convolution: walk against naive") {
    std::mt19937 rng(3);
    for (u64 q : {1ull, 2ull, 5ull, 12ull, 31ull, 97ull})
        for (auto [a, b] : {std::pair<u64, u64>{1, 1}, {2, 3}, {5, 1}, {4, 9}})
            for (int s : {1, -1})
                for (double M : {40.0, 150.0}) {
                    ConvolutionQuery Q;
                    Q.a = a;
                    Q.b = b;
                    Q.q = q;
                    Q.M = M;
                    Q.N = 0.7 * M;
                    Q.sign = s;
                    const auto w = shifted_conv_Aq(Q, delta());
                    const auto n = shifted_conv_Aq_naive(Q, delta());
                    CHECK(w.solutions == n.solutions);
                    CHECK(std::abs(w.value - n.value) <= 1e-9 * (1.0 + std::abs(n.value)));
                }
}

TEST_CASE("shifted convolution: q = 1 is the full sum minus the diagonal") {
    ConvolutionQuery Q;
    Q.a = 2;
    Q.b = 3;
    Q.M = 90;
    Q.N = 60;
    const auto R = ranges(Q);
    double full = 0.0, diag = 0.0;
    for (u64 m = R.m_lo; m <= R.m_hi; ++m)
        for (u64 n = R.n_lo; n <= R.n_hi; ++n) {
            const double t = delta()[m] * static_cast<double>(arith::divisor_count(n)) *
                             Q.window(3.0 * m / Q.M) * Q.window(2.0 * n / Q.N);
            full += t;
            if (3 * m == 2 * n) diag += t;
        }
    CHECK(std::abs(shifted_conv_Aq(Q, delta()).value - (full - diag)) <= 1e-9 * (1.0 + std::abs(full)));
}

TEST_CASE("shifted convolution: support precluded regime is exactly zero") {
    int hits = 0;
    for (u64 q : {101ull, 211ull, 1009ull, 10007ull})
        for (double M : {5.0, 10.0, 20.0})
            for (int s : {1, -1}) {
                ConvolutionQuery Q;
                Q.q = q;
                Q.M = M;
                Q.N = M;
                Q.sign = s;
                if (!support_precluded(Q)) continue;
                ++hits;
                const auto r = shifted_conv_Aq(Q, delta());
                CHECK(r.value == 0.0);
                CHECK(r.solutions == 0);
            }
    CHECK(hits >= 20);
    // and precluded never lies: a large box always has solutions
    ConvolutionQuery Q;
    Q.q = 7;
    Q.M = 200;
    Q.N = 200;
    CHECK(!support_precluded(Q));
    CHECK(shifted_conv_Aq(Q, delta()).solutions > 0);
}

TEST_CASE("shifted convolution: bounds, budget and window rescaling") {
    ConvolutionQuery Q;
    Q.q = 1009;
    Q.M = 3000;
    Q.N = 400;
    const auto B = thmAq_bound(Q);
    CHECK(B.eps == doctest::Approx(std::pow(std::log(1009.0), 2)));
    CHECK(std::isfinite(B.total));
    CHECK(B.total > 0.0);
    ConvolutionQuery Qs = Q;
    std::swap(Qs.M, Qs.N);
    CHECK(thmAq_bound(Qs).total == B.total);
    const double r = thmAq_ratio(Q, delta());
    CHECK(std::isfinite(r));
    ConvolutionQuery Qw = Q;
    Qw.window = special::AffineWindow{1.2, -0.1};
    const double rw = thmAq_ratio(Qw, delta());
    CHECK(rw / r < 10.0);
    CHECK(r / rw < 10.0);
    ConvolutionQuery big;
    big.q = 5;
    big.M = 1e5;
    big.N = 1e5;
    CHECK_THROWS_AS(shifted_conv_Aq(big, delta()), BudgetExceeded);
    ConvolutionQuery small;
    small.q = 2;
    CHECK_THROWS_AS(thmAq_bound(small), std::invalid_argument);
    ConvolutionQuery bad;
    bad.sign = 0;
    CHECK_THROWS_AS(ranges(bad), std::invalid_argument);
}

TEST_CASE("theorem grid: serial and parallel agree") {
    const auto S = thmAq_grid({101, 401}, {0.5, 2.0}, {0.5, 1.0}, 1, 1, delta(), Exec::Serial);
    const auto P = thmAq_grid({101, 401}, {0.5, 2.0}, {0.5, 1.0}, 1, 1, delta(), Exec::Parallel);
    REQUIRE(S.size() == 16);
    REQUIRE(P.size() == S.size());
    for (std::size_t i = 0; i < S.size(); ++i) {
        CHECK(S[i].value == P[i].value);
        CHECK(std::isfinite(S[i].ratio));
        if (S[i].precluded) CHECK(S[i].value == 0.0);
    }
}

TEST_CASE("E_{M,N}: coprime filter identity and trivial bounds") {
    for (u64 q : {5ull, 9ull, 21ull})
        for (auto [a, b] : {std::pair<u64, u64>{1, 1}, {1, 2}}) {
            if (arith::gcd(a * b, q) != 1) continue;
            const double M = 60, N = 45;
            const double c = emn_brute(M, N, a, b, q, delta(), CoprimeFilter::Coprime);
            const double all = emn_brute(M, N, a, b, q, delta(), CoprimeFilter::All);
            const double co = emn_brute(M, N, a, b, q, delta(), CoprimeFilter::Complement);
            CHECK(all - co == doctest::Approx(c).epsilon(1e-12).scale(1.0));
            const auto tb = trivial_bounds(M, N, a, b, q, 7.0 / 64);
            CHECK(tb.A > 0.0);
            CHECK(tb.B > 0.0);
            CHECK(std::isfinite(c));
        }
    CHECK_THROWS_AS(emn_brute(10, 10, 1, 1, 6, delta()), std::invalid_argument);
    CHECK_THROWS_AS(emn_brute(10, 10, 3, 1, 9, delta()), std::invalid_argument);
    CHECK_THROWS_AS(trivial_bounds(10, 10, 1, 1, 7, 0.5), std::invalid_argument);
}

TEST_CASE("bilinear incomplete sums") {
    // one b: the inner sum has modulus |beta_1|
    {
        const std::vector<cplx> alpha = {1.0, 2.0, -1.0};
        const std::vector<cplx> beta = {cplx(0.6, 0.8)};
        const auto r = bilinear_incomplete(alpha, beta, 3, 11, Exec::Serial);
        CHECK(std::abs(r.value - cplx(2.0, 0.0)) < 1e-12);
    }
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::vector<cplx> alpha(50), beta(50);
    for (auto& x : alpha) x = cplx(U(rng), U(rng));
    for (auto& x : beta) x = cplx(U(rng), U(rng));
    const auto S = bilinear_incomplete(alpha, beta, 1, 101, Exec::Serial);
    const auto P = bilinear_incomplete(alpha, beta, 1, 101, Exec::Parallel);
    CHECK(S.value == P.value);
    CHECK(S.ratio < 1.0);
    CHECK(S.ratio > 0.0);
    // the bound holds uniformly in c
    double lo = 1e9, hi = 0.0;
    for (u64 c = 1; c < 101; c += 7) {
        const double r = bilinear_incomplete(alpha, beta, c, 101, Exec::Serial).ratio;
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    CHECK(hi < 1.0);
    CHECK(lo > 0.0);
    CHECK_THROWS_AS(bilinear_incomplete(alpha, beta, 101, 101), std::invalid_argument);
}
