#include "momentlab/arith.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace momentlab::arith {

Factorization::Factorization(u64 value, std::vector<PrimePower> factors)
    : value_(value), factors_(std::move(factors)) {}

std::vector<u64> Factorization::divisors() const {
    std::vector<u64> out{1};
    for (const auto& [p, e] : factors_) {
        const std::size_t base = out.size();
        u64 pk = 1;
        for (int k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

u64 gcd(u64 a, u64 b) { return std::gcd(a, b); }

u64 lcm(u64 a, u64 b) { return a / std::gcd(a, b) * b; }

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 a, u64 e, u64 m) {
    if (m == 1) return 0;
    u64 r = 1;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

u64 reduce(i64 a, u64 m) {
    const i64 mm = static_cast<i64>(m);
    i64 r = a % mm;
    if (r < 0) r += mm;
    return static_cast<u64>(r);
}

u64 mod_inverse(i64 a, u64 m) {
    if (m == 0) throw std::domain_error("mod_inverse: zero modulus");
    if (m == 1) return 0;
    i64 old_r = static_cast<i64>(reduce(a, m)), r = static_cast<i64>(m);
    i64 old_s = 1, s = 0;
    while (r != 0) {
        const i64 qt = old_r / r;
        old_r -= qt * r;
        std::swap(old_r, r);
        old_s -= qt * s;
        std::swap(old_s, s);
    }
    if (old_r != 1)
        throw std::domain_error("mod_inverse: " + std::to_string(a) + " not invertible mod " +
                                std::to_string(m));
    return reduce(old_s, m);
}

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // deterministic for n < 2^64
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

namespace {

u64 pollard_brent(u64 n) {
    if (n % 2 == 0) return 2;
    for (u64 c = 1;; ++c) {
        u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
        const u64 m = 128;
        u64 r = 1;
        auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
        do {
            x = y;
            for (u64 i = 0; i < r; ++i) y = f(y);
            u64 k = 0;
            do {
                ys = y;
                for (u64 i = 0; i < std::min(m, r - k); ++i) {
                    y = f(y);
                    q = mulmod(q, x > y ? x - y : y - x, n);
                }
                g = std::gcd(q, n);
                k += m;
            } while (k < r && g == 1);
            r <<= 1;
        } while (g == 1);
        if (g == n) {
            do {
                ys = f(ys);
                g = std::gcd(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

void split(u64 n, std::vector<u64>& primes) {
    if (n == 1) return;
    if (is_prime(n)) {
        primes.push_back(n);
        return;
    }
    const u64 d = pollard_brent(n);
    split(d, primes);
    split(n / d, primes);
}

Factorization collect(u64 value, std::vector<u64>& primes) {
    std::sort(primes.begin(), primes.end());
    std::vector<PrimePower> out;
    for (u64 p : primes) {
        if (!out.empty() && out.back().prime == p)
            ++out.back().exponent;
        else
            out.push_back({p, 1});
    }
    return Factorization(value, std::move(out));
}

}  // namespace

Factorization factorize(u64 n) {
    if (n == 0) throw std::invalid_argument("factorize: n must be positive");
    if (n > kMaxFactorInput) throw std::invalid_argument("factorize: input exceeds 2^63");
    std::vector<u64> primes;
    u64 m = n;
    for (u64 p : {2ull, 3ull, 5ull}) {
        while (m % p == 0) {
            primes.push_back(p);
            m /= p;
        }
    }
    // wheel mod 30
    static constexpr int gaps[8] = {4, 2, 4, 2, 4, 6, 2, 6};
    u64 p = 7;
    for (int i = 0; p <= 1000000 && p * p <= m; p += gaps[i++ & 7]) {
        while (m % p == 0) {
            primes.push_back(p);
            m /= p;
        }
    }
    if (m > 1) split(m, primes);
    return collect(n, primes);
}

int moebius(const Factorization& f) {
    for (const auto& pe : f.factors())
        if (pe.exponent > 1) return 0;
    return (f.factors().size() % 2) ? -1 : 1;
}

u64 euler_phi(const Factorization& f) {
    u64 r = 1;
    for (const auto& [p, e] : f.factors()) {
        r *= p - 1;
        for (int i = 1; i < e; ++i) r *= p;
    }
    return r;
}

u64 divisor_count(const Factorization& f) {
    u64 r = 1;
    for (const auto& pe : f.factors()) r *= static_cast<u64>(pe.exponent + 1);
    return r;
}

// multiplicative: p -> p-2, p^e -> p^(e-2) (p-1)^2 for e >= 2
u64 phi_star(const Factorization& f) {
    u64 r = 1;
    for (const auto& [p, e] : f.factors()) {
        if (e == 1) {
            r *= p - 2;
        } else {
            r *= (p - 1) * (p - 1);
            for (int i = 2; i < e; ++i) r *= p;
        }
    }
    return r;
}

int moebius(u64 n) { return moebius(factorize(n)); }
u64 euler_phi(u64 n) { return euler_phi(factorize(n)); }
u64 divisor_count(u64 n) { return divisor_count(factorize(n)); }
u64 phi_star(u64 q) { return phi_star(factorize(q)); }

bool is_admissible(u64 q) { return q % 4 != 2; }

int valuation(u64 n, u64 p) {
    if (n == 0) throw std::invalid_argument("valuation of zero");
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

bool is_squarefree(u64 n) { return moebius(n) != 0; }

SieveCache::SieveCache(std::uint32_t limit) : limit_(limit), spf_(static_cast<std::size_t>(limit) + 1, 0) {
    for (std::uint32_t i = 2; i <= limit; ++i) {
        if (spf_[i]) continue;
        for (std::uint64_t j = i; j <= limit; j += i)
            if (!spf_[j]) spf_[j] = i;
    }
}

Factorization SieveCache::factorize(u64 n) const {
    if (n == 0 || n > limit_) return arith::factorize(n);
    std::vector<PrimePower> out;
    u64 m = n;
    while (m > 1) {
        const u64 p = spf_[m];
        int e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        out.push_back({p, e});
    }
    return Factorization(n, std::move(out));
}

std::vector<std::uint32_t> divisor_count_table(std::uint32_t limit) {
    std::vector<std::uint32_t> d(static_cast<std::size_t>(limit) + 1, 0);
    for (std::uint32_t i = 1; i <= limit; ++i)
        for (std::uint64_t j = i; j <= limit; j += i) ++d[j];
    return d;
}

}  // namespace momentlab::arith
