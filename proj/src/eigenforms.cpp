#include "momentlab/eigenforms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "momentlab/ntt.hpp"

namespace momentlab::forms {

using std::uint32_t;

const char* to_string(FormKind k) { return k == FormKind::Holomorphic ? "holomorphic" : "maass"; }

double EigenformData::lambda(u64 n) const {
    if (n == 0 || n > n_max())
        throw std::out_of_range("lambda(" + std::to_string(n) + ") outside coefficient table of size " +
                                std::to_string(n_max()));
    return lambda_[n];
}

i128 EigenformData::tau_exact(u64 n) const {
    if (n == 0 || n > exact_limit())
        throw std::out_of_range("tau(" + std::to_string(n) + ") outside exact table");
    return tau_[n];
}

double EigenformData::hecke_prime_power(u64 p, int j) const {
    if (j < 0) throw std::invalid_argument("hecke_prime_power: negative exponent");
    if (!arith::is_prime(p)) throw std::invalid_argument("hecke_prime_power: p not prime");
    const double lp = lambda(p);
    double prev = 1.0, cur = lp;
    if (j == 0) return 1.0;
    for (int i = 1; i < j; ++i) {
        const double next = lp * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

namespace {

using u32 = std::uint32_t;

// residues of tau(1..len) modulo one NTT prime, from the Jacobi series cubed thrice squared
std::vector<u32> tau_residues(std::size_t len, const ntt::Prime& pr) {
    std::vector<u32> a(len, 0);
    for (u64 k = 0;; ++k) {
        const u64 t = k * (k + 1) / 2;
        if (t >= len) break;
        const u64 c = (2 * k + 1) % pr.p;
        a[t] = static_cast<u32>((k % 2) ? (pr.p - c) % pr.p : c);
    }
    for (int i = 0; i < 3; ++i) a = ntt::square_truncated(a, len, pr);
    return a;
}

u64 inv_mod(u64 a, u64 m) { return arith::mod_inverse(static_cast<i64>(a % m), m); }

}  // namespace

EigenformData delta_coefficients(u64 n_max) {
    if (n_max < 1) throw std::invalid_argument("delta_coefficients: N_max must be >= 1");
    if (n_max > kMaxDeltaTable)
        throw std::invalid_argument("delta_coefficients: N_max " + std::to_string(n_max) +
                                    " exceeds the memory budget " + std::to_string(kMaxDeltaTable));
    const std::size_t len = n_max;
    constexpr std::size_t K = ntt::kPrimes.size();
    std::array<std::vector<u32>, K> res;
    for (std::size_t i = 0; i < K; ++i) res[i] = tau_residues(len, ntt::kPrimes[i]);

    // Garner mixed radix: x = x0 + x1 p0 + x2 p0p1 + x3 p0p1p2 + x4 p0p1p2p3
    std::array<u64, K> p{};
    for (std::size_t i = 0; i < K; ++i) p[i] = ntt::kPrimes[i].p;
    std::array<std::array<u64, K>, K> inv{};
    for (std::size_t i = 0; i < K; ++i)
        for (std::size_t j = 0; j < i; ++j) inv[j][i] = inv_mod(p[j], p[i]);
    arith::u128 radix[K];
    radix[0] = 1;
    for (std::size_t i = 1; i < K; ++i) radix[i] = radix[i - 1] * p[i - 1];
    const arith::u128 P4 = radix[K - 1];
    const u64 top = p[K - 1];
    constexpr u64 kSmall = 1u << 12;

    std::vector<i128> tau(len + 1, 0);
    std::vector<double> lam(len + 1, 0.0);
    for (std::size_t m = 0; m < len; ++m) {
        std::array<u64, K> x{};
        for (std::size_t i = 0; i < K; ++i) {
            u64 v = res[i][m];
            for (std::size_t j = 0; j < i; ++j) v = (v + p[i] - x[j] % p[i]) % p[i] * inv[j][i] % p[i];
            x[i] = v;
        }
        arith::u128 low = 0;
        for (std::size_t i = 0; i + 1 < K; ++i) low += static_cast<arith::u128>(x[i]) * radix[i];
        i128 t;
        if (x[K - 1] < kSmall)
            t = static_cast<i128>(low + static_cast<arith::u128>(x[K - 1]) * P4);
        else if (top - x[K - 1] <= kSmall)
            t = static_cast<i128>(low) - static_cast<i128>(static_cast<arith::u128>(top - x[K - 1]) * P4);
        else
            throw std::overflow_error("delta_coefficients: CRT reconstruction out of range");
        const u64 n = m + 1;
        tau[n] = t;
        lam[n] = static_cast<double>(static_cast<long double>(t) /
                                     std::pow(static_cast<long double>(n), 5.5L));
    }

    EigenformData f;
    f.name = "builtin:delta";
    f.kind = FormKind::Holomorphic;
    f.weight = 12.0;
    f.theta = 0.0;
    f.theta_exact = Rational(0);
    f.epsilon = 1;
    f.set_lambdas(std::move(lam));
    f.set_tau(std::move(tau));
    return f;
}

std::shared_ptr<const EigenformData> shared_delta(u64 n_max) {
    static std::mutex mu;
    static std::shared_ptr<const EigenformData> cache;
    std::lock_guard<std::mutex> lock(mu);
    if (!cache || cache->n_max() < n_max) {
        const u64 want = std::min(kMaxDeltaTable, std::max<u64>(n_max, 100000));
        cache = std::make_shared<const EigenformData>(delta_coefficients(want));
    }
    if (cache->n_max() < n_max) throw std::invalid_argument("shared_delta: table size beyond budget");
    return cache;
}

// ---------------------------------------------------------------- ingestion

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::optional<Rational> parse_rational(const std::string& s) {
    const auto slash = s.find('/');
    try {
        if (slash != std::string::npos) {
            const i64 num = std::stoll(s.substr(0, slash));
            const i64 den = std::stoll(s.substr(slash + 1));
            if (den == 0) return std::nullopt;
            return Rational(num, den);
        }
        std::size_t pos = 0;
        const i64 v = std::stoll(s, &pos);
        if (pos == s.size()) return Rational(v);
    } catch (const std::exception&) {
    }
    return std::nullopt;
}

double rational_to_double(const Rational& r) {
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

void set_theta(EigenformData& f, const std::string& text) {
    if (auto r = parse_rational(text)) {
        f.theta_exact = *r;
        f.theta = rational_to_double(*r);
    } else {
        f.theta_exact.reset();
        f.theta = std::stod(text);
    }
}

}  // namespace

std::filesystem::path resolve_coefficient_path(const std::string& spec) {
    std::filesystem::path p(spec);
    if (p.is_absolute() || std::filesystem::exists(p)) return p;
    if (const char* dir = std::getenv("MOMENTLAB_COEFF_DIR")) {
        auto q = std::filesystem::path(dir) / p;
        if (std::filesystem::exists(q)) return q;
    }
    return p;
}

EigenformData ingest_coefficients(const std::filesystem::path& path, const IngestOptions& opts,
                                  ValidationReport* report) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open coefficient file " + path.string());
    EigenformData f;
    f.name = "file:" + path.string();
    std::optional<std::string> kind_text, weight_text, kappa_text, eps_text, theta_text;
    std::map<u64, double> values;
    std::string line;
    u64 lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t[0] == '#') {
            std::string body = trim(t.substr(1));
            for (auto& c : body)
                if (c == ':' || c == '=') c = ' ';
            std::istringstream hs(body);
            std::string key, value;
            hs >> key >> value;
            key = lower(key);
            if (key == "kind") kind_text = lower(value);
            else if (key == "weight") weight_text = value;
            else if (key == "kappa") kappa_text = value;
            else if (key == "epsilon") eps_text = value;
            else if (key == "theta") theta_text = value;
            continue;
        }
        std::istringstream ls(t);
        long long n = 0;
        double v = 0.0;
        std::string extra;
        if (!(ls >> n >> v) || (ls >> extra) || n < 1)
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": cannot parse '" + t + "'");
        if (!values.emplace(static_cast<u64>(n), v).second)
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": duplicate n = " +
                                     std::to_string(n));
    }
    if (values.empty()) throw std::runtime_error(path.string() + ": no coefficients");
    const u64 nmax = values.rbegin()->first;
    if (values.size() != nmax)
        throw std::runtime_error(path.string() + ": coefficients must cover 1..N_max without gaps");

    if (opts.kind) {
        f.kind = *opts.kind;
    } else if (kind_text) {
        if (*kind_text == "holomorphic") f.kind = FormKind::Holomorphic;
        else if (*kind_text == "maass") f.kind = FormKind::Maass;
        else throw std::runtime_error(path.string() + ": unknown kind '" + *kind_text + "'");
    } else {
        throw std::runtime_error(path.string() + ": missing '# kind' header");
    }
    if (f.kind == FormKind::Holomorphic) {
        if (opts.parameter) f.weight = *opts.parameter;
        else if (weight_text) f.weight = std::stod(*weight_text);
        else throw std::runtime_error(path.string() + ": missing '# weight' header");
        if (f.weight < 2 || std::fmod(f.weight, 2.0) != 0.0)
            throw std::runtime_error(path.string() + ": level-1 holomorphic weight must be even and >= 2");
        set_theta(f, opts.theta.value_or(theta_text.value_or("0")));
    } else {
        if (opts.parameter) f.kappa = *opts.parameter;
        else if (kappa_text) f.kappa = std::stod(*kappa_text);
        else throw std::runtime_error(path.string() + ": missing '# kappa' header");
        set_theta(f, opts.theta.value_or(theta_text.value_or("7/64")));
    }
    f.epsilon = opts.epsilon.value_or(eps_text ? std::stoi(*eps_text) : 1);
    if (f.epsilon != 1 && f.epsilon != -1) throw std::runtime_error(path.string() + ": epsilon must be +1 or -1");
    if (f.kind == FormKind::Maass && f.epsilon == -1)
        throw std::runtime_error(
            "Maass form with root number -1 rejected: the mixed moment vanishes identically, the "
            "characters chi and conj(chi) cancel in pairs");
    if (f.theta < 0.0 || f.theta >= 0.5) throw std::runtime_error(path.string() + ": theta must lie in [0, 1/2)");

    std::vector<double> lam(nmax + 1, 0.0);
    for (const auto& [n, v] : values) lam[n] = v;
    f.set_lambdas(std::move(lam));
    const ValidationReport rep = validate(f, opts.tolerance);
    if (report) *report = rep;
    return f;
}

ValidationReport validate(const EigenformData& f, double tolerance) {
    ValidationReport rep;
    const u64 N = f.n_max();
    if (N < 1 || std::abs(f[1] - 1.0) > tolerance) throw std::runtime_error("validation: lambda(1) must be 1");
    for (u64 m = 2; m <= N; ++m) {
        for (u64 n = m; m * n <= N; ++n) {
            const u64 g = std::gcd(m, n);
            double rhs = 0.0;
            for (u64 d = 1; d <= g; ++d)
                if (g % d == 0) rhs += f[m * n / (d * d)];
            const double dev = std::abs(f[m] * f[n] - rhs);
            ++rep.hecke_relations;
            if (dev > rep.max_hecke_deviation) rep.max_hecke_deviation = dev;
            if (dev > tolerance) {
                std::ostringstream os;
                os << "validation: Hecke relation violated at (m, n) = (" << m << ", " << n << "), deviation "
                   << dev;
                throw std::runtime_error(os.str());
            }
        }
    }
    const auto dtab = arith::divisor_count_table(static_cast<uint32_t>(N));
    for (u64 n = 1; n <= N; ++n) {
        const double bound = dtab[n] * std::pow(static_cast<double>(n), f.theta);
        const double r = std::abs(f[n]) / bound;
        rep.max_ramanujan_ratio = std::max(rep.max_ramanujan_ratio, r);
        if (r > 1.0 + tolerance) {
            std::ostringstream os;
            os << "validation: |lambda(" << n << ")| = " << std::abs(f[n]) << " exceeds d(n) n^theta = " << bound;
            throw std::runtime_error(os.str());
        }
    }
    return rep;
}

void write_coefficients(const EigenformData& f, const std::filesystem::path& path, u64 n_max) {
    if (n_max == 0 || n_max > f.n_max()) n_max = f.n_max();
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << "# kind " << to_string(f.kind) << "\n";
    if (f.kind == FormKind::Holomorphic) os << "# weight " << f.weight << "\n";
    else os << "# kappa " << f.kappa << "\n";
    os << "# epsilon " << f.epsilon << "\n";
    if (f.theta_exact)
        os << "# theta " << f.theta_exact->numerator() << "/" << f.theta_exact->denominator() << "\n";
    else
        os << "# theta " << f.theta << "\n";
    os.precision(17);
    for (u64 n = 1; n <= n_max; ++n) os << n << " " << f[n] << "\n";
}

// ---------------------------------------------------------------- exact checks

namespace {

BigInt big(i128 v) {
    const bool neg = v < 0;
    arith::u128 u = neg ? static_cast<arith::u128>(-(v + 1)) + 1 : static_cast<arith::u128>(v);
    BigInt r = static_cast<unsigned long long>(u >> 64);
    r <<= 64;
    r += static_cast<unsigned long long>(u & 0xFFFFFFFFFFFFFFFFull);
    return neg ? BigInt(-r) : r;
}

i128 ipow(i128 b, int e) {
    i128 r = 1;
    while (e-- > 0) r *= b;
    return r;
}

std::string i128_string(i128 v) {
    if (v == 0) return "0";
    const bool neg = v < 0;
    std::string s;
    while (v != 0) {
        const int d = static_cast<int>(v % 10);
        s.push_back(static_cast<char>('0' + (d < 0 ? -d : d)));
        v /= 10;
    }
    if (neg) s.push_back('-');
    return {s.rbegin(), s.rend()};
}

void require_exact(const EigenformData& f, u64 limit) {
    if (!f.has_exact() || f.exact_limit() < limit)
        throw std::invalid_argument("exact check needs integer coefficients up to " + std::to_string(limit));
}

}  // namespace

ExactCheck hecke_exact_check(const EigenformData& f, u64 limit) {
    require_exact(f, limit);
    ExactCheck out;
    for (u64 m = 1; m <= limit; ++m) {
        for (u64 n = 1; m * n <= limit; ++n) {
            const u64 g = std::gcd(m, n);
            i128 rhs = 0;
            for (u64 d = 1; d <= g; ++d)
                if (g % d == 0) rhs += ipow(static_cast<i128>(d), 11) * f.tau_exact(m * n / (d * d));
            const i128 lhs = f.tau_exact(m) * f.tau_exact(n);
            ++out.checked;
            if (lhs != rhs) {
                if (out.failures++ == 0)
                    out.first_failure = "(" + std::to_string(m) + "," + std::to_string(n) + "): " +
                                        i128_string(lhs) + " != " + i128_string(rhs);
            }
        }
    }
    return out;
}

ExactCheck deligne_exact_check(const EigenformData& f, u64 limit) {
    require_exact(f, limit);
    ExactCheck out;
    const auto dtab = arith::divisor_count_table(static_cast<uint32_t>(limit));
    for (u64 n = 1; n <= limit; ++n) {
        const BigInt t = big(f.tau_exact(n));
        BigInt rhs = BigInt(dtab[n]) * dtab[n];
        rhs *= boost::multiprecision::pow(BigInt(n), 11);
        ++out.checked;
        if (t * t > rhs) {
            if (out.failures++ == 0) out.first_failure = "n = " + std::to_string(n);
        }
    }
    return out;
}

// ---------------------------------------------------------------- varpi

const VarpiEntry* VarpiTable::find(u64 delta) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), delta,
                               [](const VarpiEntry& e, u64 d) { return e.delta < d; });
    return (it != entries.end() && it->delta == delta) ? &*it : nullptr;
}

namespace {

struct KL {
    u64 k, l, delta;
    int weight;  // mu(l) mu(kl)
};

std::vector<KL> kl_pairs(u64 q) {
    std::vector<KL> out;
    for (u64 e : arith::factorize(q).divisors()) {
        const int me = arith::moebius(e);
        if (me == 0) continue;
        for (u64 l : arith::factorize(e).divisors()) {
            const int w = arith::moebius(l) * me;
            if (w == 0) continue;
            const u64 k = e / l;
            out.push_back({k, l, k * l * l, w});
        }
    }
    return out;
}

}  // namespace

VarpiTable varpi_table(const EigenformData& f, u64 q) {
    if (q == 0) throw std::invalid_argument("varpi_table: q must be positive");
    if (q > f.n_max())
        throw std::invalid_argument("varpi_table: q = " + std::to_string(q) + " too large for lambda table");
    std::map<u64, VarpiEntry> acc;
    for (const auto& t : kl_pairs(q)) {
        auto& e = acc.try_emplace(t.delta, VarpiEntry{t.delta, 0.0, 0}).first->second;
        e.varpi_lambda += t.weight * f.lambda(t.k);
        e.varpi_tau += t.weight * static_cast<i64>(arith::divisor_count(t.k));
    }
    VarpiTable out;
    out.q = q;
    for (auto& [d, e] : acc) out.entries.push_back(e);
    return out;
}

double coprime_removal_check(const EigenformData& f, u64 q, std::span<const double> F, Sequence seq) {
    const u64 S = F.size();
    if (S > kMaxRemovalSupport) throw std::invalid_argument("coprime_removal_check: support beyond 10^4");
    if (seq == Sequence::Hecke && S > f.n_max())
        throw std::invalid_argument("coprime_removal_check: lambda table shorter than the support");
    std::vector<double> a(S + 1, 0.0);
    for (u64 n = 1; n <= S; ++n)
        a[n] = seq == Sequence::Hecke ? f[n] : static_cast<double>(arith::divisor_count(n));
    double lhs = 0.0;
    for (u64 n = 1; n <= S; ++n)
        if (std::gcd(n, q) == 1) lhs += a[n] * F[n - 1];
    const auto tab = varpi_table(f, q);
    double rhs = 0.0;
    for (const auto& e : tab.entries) {
        const double w = seq == Sequence::Hecke ? e.varpi_lambda : static_cast<double>(e.varpi_tau);
        double inner = 0.0;
        for (u64 n = 1; n * e.delta <= S; ++n) inner += a[n] * F[n * e.delta - 1];
        rhs += w * inner;
    }
    return std::abs(lhs - rhs);
}

bool SurdSum::is_zero() const {
    return std::all_of(coeff.begin(), coeff.end(), [](const auto& kv) { return kv.second == 0; });
}

void SurdSum::add(u64 squarefree, const BigRational& c) {
    if (c == 0) return;
    auto& slot = coeff[squarefree];
    slot += c;
}

SurdSum coprime_removal_exact(const EigenformData& f, u64 q, u64 lo, u64 hi, Sequence seq) {
    if (lo < 1 || hi < lo) throw std::invalid_argument("coprime_removal_exact: bad interval");
    if (hi > kMaxRemovalSupport) throw std::invalid_argument("coprime_removal_exact: support beyond 10^4");
    if (seq == Sequence::Hecke) require_exact(f, hi);
    const auto dtab = arith::divisor_count_table(static_cast<uint32_t>(hi));
    auto coef = [&](u64 n) -> i128 { return seq == Sequence::Hecke ? f.tau_exact(n) : static_cast<i128>(dtab[n]); };

    // diff[N] = [(N,q)=1] a(N) - sum_{kl^2 n = N, kl | q} mu(l) mu(kl) l^{11 or 0} a(k) a(n)
    std::vector<i128> diff(hi - lo + 1, 0);
    for (u64 N = lo; N <= hi; ++N)
        if (std::gcd(N, q) == 1) diff[N - lo] = coef(N);
    for (const auto& t : kl_pairs(q)) {
        const i128 lw = seq == Sequence::Hecke ? ipow(static_cast<i128>(t.l), 11) : 1;
        if (t.k > hi) continue;
        const i128 ck = coef(t.k) * lw * t.weight;
        for (u64 n = (lo + t.delta - 1) / t.delta; n * t.delta <= hi; ++n)
            diff[n * t.delta - lo] -= ck * coef(n);
    }
    SurdSum out;
    for (u64 N = lo; N <= hi; ++N) {
        const i128 d = diff[N - lo];
        if (d == 0) continue;
        if (seq == Sequence::Divisor) {
            out.add(1, BigRational(big(d)));
            continue;
        }
        // N^{-11/2} = t sqrt(s) / N^6 with N = s t^2
        u64 s = 1, t = 1;
        for (auto [p, e] : arith::factorize(N).factors()) {
            for (int i = 0; i < e / 2; ++i) t *= p;
            if (e % 2) s *= p;
        }
        out.add(s, BigRational(big(d) * t, boost::multiprecision::pow(BigInt(N), 6)));
    }
    return out;
}

}  // namespace momentlab::forms
