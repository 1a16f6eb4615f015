#pragma once

#include <cstdint>
#include <vector>

namespace momentlab::arith {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

struct PrimePower {
    u64 prime;
    int exponent;
    bool operator==(const PrimePower&) const = default;
};

class Factorization {
public:
    Factorization() = default;
    Factorization(u64 value, std::vector<PrimePower> factors);

    u64 value() const { return value_; }
    const std::vector<PrimePower>& factors() const { return factors_; }
    bool is_one() const { return factors_.empty(); }

    // all divisors, ascending
    std::vector<u64> divisors() const;

private:
    u64 value_ = 1;
    std::vector<PrimePower> factors_;
};

constexpr u64 kMaxFactorInput = u64{1} << 63;

// throws std::invalid_argument for n == 0 or n > 2^63
Factorization factorize(u64 n);

int moebius(const Factorization& f);
u64 euler_phi(const Factorization& f);
u64 divisor_count(const Factorization& f);
u64 phi_star(const Factorization& f);

int moebius(u64 n);
u64 euler_phi(u64 n);
u64 divisor_count(u64 n);
// number of primitive characters mod q
u64 phi_star(u64 q);

bool is_admissible(u64 q);

u64 gcd(u64 a, u64 b);
u64 lcm(u64 a, u64 b);
u64 mulmod(u64 a, u64 b, u64 m);
u64 powmod(u64 a, u64 e, u64 m);
// inverse of a mod m; throws std::domain_error if gcd(a, m) != 1
u64 mod_inverse(i64 a, u64 m);
// a mod m in [0, m)
u64 reduce(i64 a, u64 m);
bool is_prime(u64 n);
// largest e with p^e | n
int valuation(u64 n, u64 p);
bool is_squarefree(u64 n);

// Smallest-prime-factor table. Multiplicative functions computed through it
// must agree bit-for-bit with the Factorization path.
class SieveCache {
public:
    explicit SieveCache(std::uint32_t limit);

    std::uint32_t limit() const { return limit_; }
    Factorization factorize(u64 n) const;
    int moebius(u64 n) const { return arith::moebius(factorize(n)); }
    u64 euler_phi(u64 n) const { return arith::euler_phi(factorize(n)); }
    u64 divisor_count(u64 n) const { return arith::divisor_count(factorize(n)); }

private:
    std::uint32_t limit_;
    std::vector<std::uint32_t> spf_;
};

// divisor_count for all n <= limit (index 0 unused)
std::vector<std::uint32_t> divisor_count_table(std::uint32_t limit);

}  // namespace momentlab::arith
