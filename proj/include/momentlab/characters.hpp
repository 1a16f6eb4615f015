#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "momentlab/arith.hpp"

namespace momentlab::chars {

using arith::u64;
using u32 = std::uint32_t;
using cplx = std::complex<double>;

inline constexpr u32 kNonUnit = 0xFFFFFFFFu;

// One cyclic factor of (Z/qZ)^*. For 2^e with e >= 3 there are two factors
// sharing the modulus 2^e: generator -1 (order 2) then generator 5.
struct Component {
    u64 prime;
    int exponent;
    u64 modulus;
    u64 generator;
    u64 order;
    std::vector<u32> dlog;  // dlog[x] for x < modulus; kNonUnit off the units
};

struct CharacterInfo {
    u32 index;
    std::vector<u32> exps;  // exponent on each component generator
    u64 conductor;
    int parity;  // chi(-1)
    bool primitive;
};

struct HalfInteger {
    arith::i64 twice;
    double value() const { return 0.5 * static_cast<double>(twice); }
    bool operator==(const HalfInteger&) const = default;
};

class CharacterGroup {
public:
    CharacterGroup() = default;

    u64 modulus() const { return q_; }
    u64 size() const { return infos_.size(); }
    // exponent L of the group: values are e(k / L)
    u64 exponent() const { return L_; }
    const std::vector<Component>& components() const { return comps_; }
    const CharacterInfo& info(u32 chi) const { return infos_.at(chi); }
    const std::vector<CharacterInfo>& infos() const { return infos_; }

    std::vector<u32> primitive_indices() const;
    std::vector<u32> primitive_indices(int parity) const;
    u64 primitive_count() const;

    // k with chi(x) = e(k / L), or kNonUnit
    u32 exponent_at(u32 chi, u64 x) const;
    cplx value(u32 chi, u64 x) const;
    cplx root(u64 k) const { return roots_[k % L_]; }
    u32 conjugate(u32 chi) const;

    bool has_table() const { return !table_.empty(); }
    // row-major phi(q) x q
    const std::vector<u32>& table() const { return table_; }

    friend CharacterGroup load_group(const std::filesystem::path& path);
    static CharacterGroup make(u64 q, bool with_table);

private:
    void finish(bool with_table);
    u32 compute_exponent(u32 chi, u64 x) const;

    u64 q_ = 0;
    u64 L_ = 1;
    std::vector<Component> comps_;
    std::vector<u64> weights_;  // L / order per component
    std::vector<CharacterInfo> infos_;
    std::vector<u32> table_;
    std::vector<cplx> roots_;
};

// throws std::invalid_argument for q == 0
CharacterGroup build_group(u64 q);

struct GaussData {
    u32 index;
    cplx eps_chi;   // q^{-1/2} sum chi(x) e(x/q)
    cplx eps_root;  // i^{-a} eps_chi
};

// throws std::invalid_argument for non-primitive chi
GaussData gauss_eps(const CharacterGroup& g, u32 chi);

// half of (sum_{d | (q, m-n)} phi(d) mu(q/d) + sigma sum_{d | (q, m+n)} phi(d) mu(q/d))
HalfInteger orthogonality_sum(u64 q, arith::i64 m, arith::i64 n, int sigma);

// primitive-only enumerated counterpart of orthogonality_sum
cplx enumerated_orthogonality(const CharacterGroup& g, arith::i64 m, arith::i64 n, int sigma);

// binary cache: u32 LE header (q, phi(q), L) then the exponent matrix
void save_group(const CharacterGroup& g, const std::filesystem::path& path);
CharacterGroup load_group(const std::filesystem::path& path);
// load from dir/chars_<q>.bin when present and valid, else build and store
CharacterGroup cached_group(u64 q, const std::filesystem::path& dir);

}  // namespace momentlab::chars
