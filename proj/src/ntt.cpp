#include "momentlab/ntt.hpp"

#include <stdexcept>
#include <utility>

namespace momentlab::ntt {

namespace {

using u32 = std::uint32_t;
using u64 = std::uint64_t;

struct Mont {
    u32 p, pinv, r2;  // pinv = -p^{-1} mod 2^32, r2 = 2^64 mod p

    explicit Mont(u32 mod) : p(mod) {
        u32 inv = mod;
        for (int i = 0; i < 5; ++i) inv *= 2u - mod * inv;
        pinv = 0u - inv;
        r2 = static_cast<u32>((static_cast<unsigned __int128>(1) << 64) % mod);
    }
    u32 reduce(u64 t) const {
        const u32 m = static_cast<u32>(t) * pinv;
        const u32 r = static_cast<u32>((t + static_cast<u64>(m) * p) >> 32);
        return r >= p ? r - p : r;
    }
    u32 mul(u32 a, u32 b) const { return reduce(static_cast<u64>(a) * b); }
    u32 to(u32 a) const { return mul(a, r2); }
    u32 from(u32 a) const { return reduce(a); }
    u32 add(u32 a, u32 b) const {
        const u32 s = a + b;
        return s >= p ? s - p : s;
    }
    u32 sub(u32 a, u32 b) const { return a >= b ? a - b : a + p - b; }
    u32 pow(u32 a, u64 e) const {
        u32 r = to(1);
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
};

// twiddles for every stage, stage with half-length h stored at offset h
std::vector<u32> twiddles(const Mont& m, u32 g, std::size_t n, bool inverse) {
    std::vector<u32> tw(n);
    for (std::size_t h = 1; h < n; h <<= 1) {
        u32 w = m.pow(m.to(g), (m.p - 1) / (2 * h));
        if (inverse) w = m.pow(w, m.p - 2);
        u32 cur = m.to(1);
        for (std::size_t j = 0; j < h; ++j) {
            tw[h + j] = cur;
            cur = m.mul(cur, w);
        }
    }
    return tw;
}

// natural order in, bit-reversed out
void dif(std::vector<u32>& a, const Mont& m, const std::vector<u32>& tw) {
    const std::size_t n = a.size();
    for (std::size_t h = n >> 1; h >= 1; h >>= 1) {
        for (std::size_t s = 0; s < n; s += 2 * h) {
            for (std::size_t j = 0; j < h; ++j) {
                const u32 x = a[s + j], y = a[s + j + h];
                a[s + j] = m.add(x, y);
                a[s + j + h] = m.mul(m.sub(x, y), tw[h + j]);
            }
        }
    }
}

// bit-reversed in, natural order out
void dit(std::vector<u32>& a, const Mont& m, const std::vector<u32>& tw) {
    const std::size_t n = a.size();
    for (std::size_t h = 1; h < n; h <<= 1) {
        for (std::size_t s = 0; s < n; s += 2 * h) {
            for (std::size_t j = 0; j < h; ++j) {
                const u32 x = a[s + j], y = m.mul(a[s + j + h], tw[h + j]);
                a[s + j] = m.add(x, y);
                a[s + j + h] = m.sub(x, y);
            }
        }
    }
}

}  // namespace

std::vector<u32> square_truncated(const std::vector<u32>& a, std::size_t len, const Prime& pr) {
    std::size_t n = 1;
    while (n < 2 * len) n <<= 1;
    if (n > (std::size_t{1} << kMaxLog)) throw std::length_error("square_truncated: transform too long");
    const Mont m(pr.p);
    std::vector<u32> f(n, 0);
    for (std::size_t i = 0; i < len && i < a.size(); ++i) f[i] = m.to(a[i]);
    dif(f, m, twiddles(m, pr.g, n, false));
    for (auto& v : f) v = m.mul(v, v);
    dit(f, m, twiddles(m, pr.g, n, true));
    const u32 ninv = m.pow(m.to(static_cast<u32>(n % pr.p)), pr.p - 2);
    std::vector<u32> out(len);
    for (std::size_t i = 0; i < len; ++i) out[i] = m.from(m.mul(f[i], ninv));
    return out;
}

std::vector<u32> square_naive(const std::vector<u32>& a, std::size_t len, u32 p) {
    std::vector<u32> out(len, 0);
    for (std::size_t i = 0; i < len && i < a.size(); ++i)
        for (std::size_t j = 0; i + j < len && j < a.size(); ++j)
            out[i + j] = static_cast<u32>((out[i + j] + static_cast<u64>(a[i]) * a[j]) % p);
    return out;
}

}  // namespace momentlab::ntt
