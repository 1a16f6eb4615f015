#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace momentlab::ntt {

struct Prime {
    std::uint32_t p;
    std::uint32_t g;  // primitive root
};

// p - 1 divisible by 2^23 for each
inline constexpr std::array<Prime, 5> kPrimes = {{
    {998244353u, 3u},
    {469762049u, 3u},
    {167772161u, 3u},
    {754974721u, 11u},
    {2013265921u, 31u},
}};

inline constexpr std::uint32_t kMaxLog = 23;

// a * a mod (x^len, p); a given with entries in [0, p)
std::vector<std::uint32_t> square_truncated(const std::vector<std::uint32_t>& a, std::size_t len, const Prime& pr);

// schoolbook reference for tests
std::vector<std::uint32_t> square_naive(const std::vector<std::uint32_t>& a, std::size_t len, std::uint32_t p);

}  // namespace momentlab::ntt
