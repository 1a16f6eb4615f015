#include "momentlab/characters.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <string>

namespace momentlab::chars {

using arith::i64;

namespace {

constexpr u64 kTableLimit = u64{1} << 26;

u64 primitive_root_mod_p(u64 p) {
    if (p == 2) return 1;
    const auto fac = arith::factorize(p - 1);
    for (u64 g = 2;; ++g) {
        bool ok = true;
        for (const auto& pe : fac.factors())
            if (arith::powmod(g, (p - 1) / pe.prime, p) == 1) {
                ok = false;
                break;
            }
        if (ok) return g;
    }
}

Component cyclic_component(u64 p, int e, u64 modulus, u64 gen, u64 order) {
    Component c{p, e, modulus, gen, order, std::vector<u32>(modulus, kNonUnit)};
    u64 x = 1 % modulus;
    for (u64 i = 0; i < order; ++i) {
        c.dlog[x] = static_cast<u32>(i);
        x = arith::mulmod(x, gen, modulus);
    }
    return c;
}

// conductor contribution of one prime from the exponents on its components
u64 local_conductor(const std::vector<Component>& comps, const std::vector<u32>& exps, std::size_t i,
                    std::size_t count) {
    const Component& c = comps[i];
    if (c.prime != 2) {
        const u32 j = exps[i];
        if (j == 0) return 1;
        u64 r = 1;
        for (int k = 0; k < c.exponent - arith::valuation(j, c.prime); ++k) r *= c.prime;
        return r;
    }
    if (count == 1) {
        // 2^1 (trivial) or 2^2 (generator -1)
        if (c.exponent <= 1) return 1;
        return exps[i] ? 4 : 1;
    }
    const u32 a = exps[i], j = exps[i + 1];
    if (j == 0) return a ? 4 : 1;
    u64 r = 1;
    for (int k = 0; k < c.exponent - arith::valuation(j, 2); ++k) r *= 2;
    return r;
}

}  // namespace

CharacterGroup build_group(u64 q) { return CharacterGroup::make(q, true); }

CharacterGroup CharacterGroup::make(u64 q, bool with_table) {
    if (q == 0) throw std::invalid_argument("build_group: q must be positive");
    if (q > 0xFFFFFFFFull) throw std::invalid_argument("build_group: q too large");
    CharacterGroup g;
    g.q_ = q;
    const auto fac = arith::factorize(q);
    for (const auto& [p, e] : fac.factors()) {
        u64 pe = 1;
        for (int k = 0; k < e; ++k) pe *= p;
        if (p == 2) {
            if (e == 1) {
                g.comps_.push_back(cyclic_component(2, 1, 2, 1, 1));
            } else if (e == 2) {
                g.comps_.push_back(cyclic_component(2, 2, 4, 3, 2));
            } else {
                // x = (-1)^a 5^j
                Component a{2, e, pe, pe - 1, 2, std::vector<u32>(pe, kNonUnit)};
                Component b{2, e, pe, 5, pe / 4, std::vector<u32>(pe, kNonUnit)};
                u64 x = 1;
                for (u64 j = 0; j < pe / 4; ++j) {
                    a.dlog[x] = 0;
                    b.dlog[x] = static_cast<u32>(j);
                    a.dlog[pe - x] = 1;
                    b.dlog[pe - x] = static_cast<u32>(j);
                    x = x * 5 % pe;
                }
                g.comps_.push_back(std::move(a));
                g.comps_.push_back(std::move(b));
            }
        } else {
            u64 r = primitive_root_mod_p(p);
            if (e > 1 && arith::powmod(r, p - 1, p * p) == 1) r += p;
            g.comps_.push_back(cyclic_component(p, e, pe, r, pe / p * (p - 1)));
        }
    }
    g.finish(with_table && q * arith::euler_phi(fac) <= kTableLimit);
    return g;
}

void CharacterGroup::finish(bool with_table) {
    L_ = 1;
    for (const auto& c : comps_) L_ = arith::lcm(L_, c.order);
    weights_.clear();
    for (const auto& c : comps_) weights_.push_back(L_ / c.order);
    roots_.resize(L_);
    for (u64 k = 0; k < L_; ++k) {
        const double t = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(L_);
        roots_[k] = {std::cos(t), std::sin(t)};
    }

    u64 count = 1;
    for (const auto& c : comps_) count *= c.order;
    infos_.assign(count, {});
    for (u64 idx = 0; idx < count; ++idx) {
        CharacterInfo& ci = infos_[idx];
        ci.index = static_cast<u32>(idx);
        ci.exps.assign(comps_.size(), 0);
        u64 rest = idx;
        for (std::size_t i = comps_.size(); i-- > 0;) {
            ci.exps[i] = static_cast<u32>(rest % comps_[i].order);
            rest /= comps_[i].order;
        }
        u64 cond = 1;
        for (std::size_t i = 0; i < comps_.size();) {
            const std::size_t span =
                (i + 1 < comps_.size() && comps_[i + 1].modulus == comps_[i].modulus) ? 2 : 1;
            cond *= local_conductor(comps_, ci.exps, i, span);
            i += span;
        }
        ci.conductor = cond;
        ci.primitive = cond == q_;
    }
    for (auto& ci : infos_) {
        const u32 k = compute_exponent(ci.index, q_ - 1);
        ci.parity = (k == 0) ? 1 : -1;
    }

    table_.clear();
    if (with_table) {
        table_.resize(count * q_);
        for (u64 idx = 0; idx < count; ++idx)
            for (u64 x = 0; x < q_; ++x) table_[idx * q_ + x] = compute_exponent(static_cast<u32>(idx), x);
    }
}

u32 CharacterGroup::compute_exponent(u32 chi, u64 x) const {
    const auto& e = infos_[chi].exps;
    u64 k = 0;
    for (std::size_t i = 0; i < comps_.size(); ++i) {
        const u32 lg = comps_[i].dlog[x % comps_[i].modulus];
        if (lg == kNonUnit) return kNonUnit;
        k = (k + static_cast<u64>(e[i]) * lg % comps_[i].order * weights_[i]) % L_;
    }
    return static_cast<u32>(k);
}

u32 CharacterGroup::exponent_at(u32 chi, u64 x) const {
    x %= q_;
    if (!table_.empty()) return table_[static_cast<u64>(chi) * q_ + x];
    return compute_exponent(chi, x);
}

cplx CharacterGroup::value(u32 chi, u64 x) const {
    const u32 k = exponent_at(chi, x);
    return k == kNonUnit ? cplx{} : roots_[k];
}

u32 CharacterGroup::conjugate(u32 chi) const {
    u64 idx = 0;
    for (std::size_t i = 0; i < comps_.size(); ++i) {
        const u64 ord = comps_[i].order;
        const u64 e = infos_[chi].exps[i];
        idx = idx * ord + (ord - e) % ord;
    }
    return static_cast<u32>(idx);
}

std::vector<u32> CharacterGroup::primitive_indices() const {
    std::vector<u32> out;
    for (const auto& ci : infos_)
        if (ci.primitive) out.push_back(ci.index);
    return out;
}

std::vector<u32> CharacterGroup::primitive_indices(int parity) const {
    std::vector<u32> out;
    for (const auto& ci : infos_)
        if (ci.primitive && ci.parity == parity) out.push_back(ci.index);
    return out;
}

u64 CharacterGroup::primitive_count() const { return primitive_indices().size(); }

GaussData gauss_eps(const CharacterGroup& g, u32 chi) {
    const auto& ci = g.info(chi);
    if (!ci.primitive) throw std::invalid_argument("gauss_eps: character is not primitive");
    const u64 q = g.modulus();
    cplx s{};
    for (u64 x = 0; x < q; ++x) {
        const u32 k = g.exponent_at(chi, x);
        if (k == kNonUnit) continue;
        const double t = 2.0 * std::numbers::pi * static_cast<double>(x) / static_cast<double>(q);
        s += g.root(k) * cplx{std::cos(t), std::sin(t)};
    }
    s /= std::sqrt(static_cast<double>(q));
    const cplx eps_root = ci.parity == 1 ? s : s * cplx{0.0, -1.0};
    return {chi, s, eps_root};
}

HalfInteger orthogonality_sum(u64 q, i64 m, i64 n, int sigma) {
    if (sigma != 1 && sigma != -1) throw std::invalid_argument("orthogonality_sum: sigma must be +-1");
    if (q == 0) throw std::invalid_argument("orthogonality_sum: q must be positive");
    if (arith::gcd(arith::reduce(m, q), q) != 1 || arith::gcd(arith::reduce(n, q), q) != 1)
        throw std::invalid_argument("orthogonality_sum: (mn, q) must be 1");
    const auto fac = arith::factorize(q);
    i64 s_minus = 0, s_plus = 0;
    for (u64 d : fac.divisors()) {
        const i64 w = static_cast<i64>(arith::euler_phi(d)) * arith::moebius(q / d);
        if (w == 0) continue;
        if (arith::reduce(m - n, d) == 0) s_minus += w;
        if (arith::reduce(m + n, d) == 0) s_plus += w;
    }
    return {s_minus + sigma * s_plus};
}

cplx enumerated_orthogonality(const CharacterGroup& g, i64 m, i64 n, int sigma) {
    const u64 q = g.modulus();
    const u64 mr = arith::reduce(m, q), nr = arith::reduce(n, q);
    cplx s{};
    for (u32 chi : g.primitive_indices(sigma)) s += g.value(chi, mr) * std::conj(g.value(chi, nr));
    return s;
}

namespace {

void put_u32(std::ostream& os, u32 v) {
    const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                                static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

bool get_u32(std::istream& is, u32& v) {
    unsigned char b[4];
    if (!is.read(reinterpret_cast<char*>(b), 4)) return false;
    v = static_cast<u32>(b[0]) | static_cast<u32>(b[1]) << 8 | static_cast<u32>(b[2]) << 16 |
        static_cast<u32>(b[3]) << 24;
    return true;
}

}  // namespace

void save_group(const CharacterGroup& g, const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write character cache " + path.string());
    const u64 q = g.modulus();
    put_u32(os, static_cast<u32>(q));
    put_u32(os, static_cast<u32>(g.size()));
    put_u32(os, static_cast<u32>(g.exponent()));
    for (u32 chi = 0; chi < g.size(); ++chi)
        for (u64 x = 0; x < q; ++x) put_u32(os, g.exponent_at(chi, x));
    if (!os) throw std::runtime_error("short write on character cache " + path.string());
}

CharacterGroup load_group(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open character cache " + path.string());
    u32 q = 0, phi = 0, L = 0;
    if (!get_u32(is, q) || !get_u32(is, phi) || !get_u32(is, L) || q == 0)
        throw std::runtime_error("corrupt character cache header " + path.string());
    CharacterGroup g = CharacterGroup::make(q, false);
    if (g.size() != phi || g.exponent() != L)
        throw std::runtime_error("character cache header mismatch " + path.string());
    std::vector<u32> table(static_cast<u64>(phi) * q);
    for (auto& v : table)
        if (!get_u32(is, v)) throw std::runtime_error("truncated character cache " + path.string());
    g.table_ = std::move(table);
    return g;
}

CharacterGroup cached_group(u64 q, const std::filesystem::path& dir) {
    const auto path = dir / ("chars_" + std::to_string(q) + ".bin");
    if (std::filesystem::exists(path)) {
        try {
            return load_group(path);
        } catch (const std::runtime_error&) {
            // fall through and rebuild
        }
    }
    CharacterGroup g = build_group(q);
    std::filesystem::create_directories(dir);
    save_group(g, path);
    return g;
}

}  // namespace momentlab::chars
