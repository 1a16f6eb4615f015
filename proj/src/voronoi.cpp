#include "momentlab/voronoi.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>

namespace momentlab::voronoi {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPanelWidth = 0.25;  // in s = sqrt(z)
constexpr int kPanelDegree = 24;
constexpr double kLandau = 0.7858;

const double kVLo = std::sqrt(special::BumpFunction::lo);
const double kVHi = std::sqrt(special::BumpFunction::hi);

int ik_sign(int weight) { return (weight / 2) % 2 == 0 ? 1 : -1; }

void check_weight(int weight) {
    if (weight < 2 || weight > 60 || weight % 2 != 0)
        throw std::invalid_argument("HankelProfile: weight must be an even integer in [2, 60]");
}

int default_points(double z) {
    // 16 nodes per oscillation of J(4 pi sqrt(z) v) on top of a base for the ramps
    const double osc = 2.0 * std::sqrt(z) * (kVHi - kVLo);
    return 2000 + static_cast<int>(16.0 * osc);
}

// trapezoid in v; W(v^2) 2v vanishes to all orders at both ends
template <class J>
double quad(const J& bessel, int weight, double z, int points) {
    const double h = (kVHi - kVLo) / points;
    const double k = 4.0 * kPi * std::sqrt(z);
    double s = 0.0;
    for (int i = 1; i < points; ++i) {
        const double v = kVLo + i * h;
        const double w = special::BumpFunction::value(v * v);
        if (w != 0.0) s += w * 2.0 * v * bessel(k * v);
    }
    return ik_sign(weight) * 2.0 * kPi * h * s;
}

// prefix sums of |lambda(n)| for the form last asked about
std::vector<double> abs_prefix(const forms::EigenformData& f) {
    std::vector<double> p(f.n_max() + 1, 0.0);
    for (u64 n = 1; n <= f.n_max(); ++n) p[n] = p[n - 1] + std::abs(f[n]);
    return p;
}

const std::vector<double>& shared_abs_prefix(const forms::EigenformData& f) {
    static std::mutex mu;
    static const forms::EigenformData* key = nullptr;
    static u64 key_n = 0;
    static std::vector<double> cache;
    std::lock_guard<std::mutex> lock(mu);
    if (key != &f || key_n != f.n_max()) {
        cache = abs_prefix(f);
        key = &f;
        key_n = f.n_max();
    }
    return cache;
}

u64 inverse_mod(i64 x, u64 m) { return m == 1 ? 0 : arith::mod_inverse(x, m); }

}  // namespace

HankelProfile::HankelProfile(int weight, double z_max, Exec exec) : weight_(weight), z_max_(z_max) {
    check_weight(weight);
    if (!(z_max > 0.0 && z_max <= 1e6)) throw std::invalid_argument("HankelProfile: z_max outside (0, 1e6]");
    const double s_max = std::sqrt(z_max);
    const int panels = std::max(1, static_cast<int>(std::ceil(s_max / kPanelWidth)));
    const auto xs = special::ChebyshevPanels::nodes(0.0, s_max, panels, kPanelDegree);
    const special::BesselJTable J(weight - 1, 4.0 * kPi * s_max * kVHi + 1.0);
    std::vector<double> v(xs.size());
    const long n = static_cast<long>(xs.size());
    auto one = [&](long i) {
        const double z = xs[i] * xs[i];
        v[i] = quad(J, weight, z, default_points(z));
    };
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 64)
        for (long i = 0; i < n; ++i) one(i);
    } else {
        for (long i = 0; i < n; ++i) one(i);
    }
    cheb_ = special::ChebyshevPanels::from_samples(0.0, s_max, panels, kPanelDegree, v);
}

double HankelProfile::direct(int weight, double z, int points) {
    check_weight(weight);
    if (!(z >= 0.0)) throw std::invalid_argument("HankelProfile::direct: z must be >= 0");
    if (points <= 0) points = default_points(z);
    return quad([weight](double x) { return special::bessel_j(weight - 1, x); }, weight, z, points);
}

double HankelProfile::operator()(double z) const {
    if (!(z >= 0.0 && z <= z_max_)) throw std::out_of_range("HankelProfile: z outside the tabulated range");
    return cheb_(std::sqrt(z));
}

DecayBound::DecayBound(int weight) {
    check_weight(weight);
    using J = special::Jet<kMaxSteps + 1>;
    const double nu = weight - 1;
    const int points = 40000;
    const double h = (kVHi - kVLo) / points;
    std::array<double, kMaxSteps + 1> I{};
    for (int i = 1; i < points; ++i) {
        const double v = kVLo + i * h;
        const J V = J::variable(v);
        const J inv = V.reciprocal();
        J g = special::bump_jet(V * V);
        const double w = std::pow(v, 2.0 / 3.0) * h;
        for (int j = 0; j <= kMaxSteps; ++j) {
            I[j] += std::abs(g.c[0]) * w;
            J dg;
            for (int k = 0; k < kMaxSteps; ++k) dg.c[k] = (k + 1) * g.c[k + 1];
            g = (-1.0) * (dg + (-(nu + j)) * (g * inv));
        }
    }
    for (int j = 0; j <= kMaxSteps; ++j) log_I_[j] = std::log(I[j]);
}

double DecayBound::log_at(int j, double z) const {
    const double c = 16.0 * kPi * kPi * z;
    return std::log(4.0 * kPi * kLandau) + log_I_[j] - (0.5 * j + 1.0 / 6.0) * std::log(c);
}

int DecayBound::best_steps(double z) const {
    if (!(z > 0.0)) throw std::invalid_argument("DecayBound: z must be positive");
    int best = 0;
    for (int j = 1; j <= kMaxSteps; ++j)
        if (log_at(j, z) < log_at(best, z)) best = j;
    return best;
}

double DecayBound::operator()(double z) const { return std::exp(log_at(best_steps(z), z)); }

double DecayBound::divisor_tail(double s, double x0) const {
    // a fixed j is a pure power z^{-p} past x0; pick the best one with p > 1
    const double z0 = s * x0;
    double best = std::numeric_limits<double>::infinity();
    for (int j = 2; j <= kMaxSteps; ++j) {
        const double p = 0.5 * j + 1.0 / 6.0;
        const double b = std::exp(log_at(j, z0));  // B_j(s x0)
        const double L = std::log(x0);
        best = std::min(best, b * x0 * (L / (p - 1) + 1.0 / ((p - 1) * (p - 1)) + 2.0 / (p - 1)));
    }
    return best;
}

const DecayBound& shared_decay(int weight) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<DecayBound>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& p = cache[weight];
    if (!p) p = std::make_unique<DecayBound>(weight);
    return *p;
}

const HankelProfile& shared_profile(int weight) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<HankelProfile>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& p = cache[weight];
    if (!p) p = std::make_unique<HankelProfile>(weight);
    return *p;
}

void validate(const VoronoiCase& c, const forms::EigenformData& f) {
    if (f.kind != forms::FormKind::Holomorphic)
        throw std::invalid_argument("voronoi: only holomorphic forms (the K-Bessel kernel is out of scope)");
    if (c.d == 0 || c.q == 0) throw std::invalid_argument("voronoi: d and q must be positive");
    if (arith::gcd(arith::reduce(c.b, c.d), c.d) != 1 && c.d != 1)
        throw std::invalid_argument("voronoi: need (b, d) = 1");
    if (!(c.X > 0.0)) throw std::invalid_argument("voronoi: X must be positive");
    if (c.dual_sign != 1 && c.dual_sign != -1) throw std::invalid_argument("voronoi: dual_sign must be +1 or -1");
    if (!(c.tail_tol > 0.0 && c.safety >= 1.0 && c.truncation_scale >= 1.0))
        throw std::invalid_argument("voronoi: bad truncation controls");
}

cplx voronoi_lhs(const VoronoiCase& c, const forms::EigenformData& f) {
    validate(c, f);
    const u64 lo = static_cast<u64>(std::floor(special::BumpFunction::lo * c.X)) + 1;
    const u64 hi = static_cast<u64>(std::ceil(special::BumpFunction::hi * c.X)) - 1;
    if (hi > f.n_max()) throw std::out_of_range("voronoi_lhs: lambda table too short");
    const u64 b = arith::reduce(c.b, c.d);
    double re = 0.0, im = 0.0;
    for (u64 n = lo; n <= hi; ++n) {
        if (arith::gcd(n, c.q) != 1) continue;
        const double w = f[n] * special::BumpFunction::value(n / c.X);
        if (w == 0.0) continue;
        const double t = 2.0 * kPi * static_cast<double>(arith::mulmod(b, n % c.d, c.d)) / c.d;
        re += w * std::cos(t);
        im += w * std::sin(t);
    }
    return {re, im};
}

cplx dual_sum(const forms::EigenformData& f, const HankelProfile& H, double scale, u64 n_cut, u64 h, u64 m,
              Exec exec, bool reverse) {
    if (n_cut > f.n_max()) throw std::out_of_range("dual_sum: lambda table too short");
    if (m == 0) throw std::invalid_argument("dual_sum: modulus must be positive");
    std::vector<double> cs(m), sn(m);
    for (u64 r = 0; r < m; ++r) {
        const double t = 2.0 * kPi * static_cast<double>(r) / m;
        cs[r] = std::cos(t);
        sn[r] = std::sin(t);
    }
    const long N = static_cast<long>(n_cut);
    auto term = [&](long n, double& re, double& im) {
        const double v = f[n] * H(scale * n);
        const u64 r = arith::mulmod(h, static_cast<u64>(n) % m, m);
        re += v * cs[r];
        im += v * sn[r];
    };
    double re = 0.0, im = 0.0;
    if (exec == Exec::Parallel) {
#pragma omp parallel for reduction(+ : re, im) schedule(static)
        for (long n = 1; n <= N; ++n) term(n, re, im);
    } else if (reverse) {
        for (long n = N; n >= 1; --n) term(n, re, im);
    } else {
        for (long n = 1; n <= N; ++n) term(n, re, im);
    }
    return {re, im};
}

namespace {

struct Plan {
    u64 delta, delta_prime, d_prime;
    double varpi, scale, amp;
    u64 n_cut;
    double tail;
};

// sum over n > N of |lambda(n)| B(scale n): |lambda| inside the table, d(n) beyond it.
// B decreases, so geometric blocks bounded by their left end are safe.
class TailBound {
public:
    TailBound(const DecayBound& B, const std::vector<double>& prefix, double scale)
        : B_(B), prefix_(prefix), scale_(scale), top_(prefix.size() - 1) {
        u64 n = top_;
        edges_.push_back(n);
        while (n > 1) {
            n = std::min(n - 1, static_cast<u64>(static_cast<double>(n) / 1.01));
            edges_.push_back(std::max<u64>(n, 1));
            if (n <= 1) break;
        }
        // suffix[i] = bound for the sum over n > edges_[i]
        suffix_.assign(edges_.size(), 0.0);
        suffix_[0] = B_.divisor_tail(scale_, static_cast<double>(top_));
        for (std::size_t i = 1; i < edges_.size(); ++i) {
            const u64 lo = edges_[i], hi = edges_[i - 1];
            suffix_[i] = suffix_[i - 1] + B_(scale_ * static_cast<double>(lo + 1)) * (prefix_[hi] - prefix_[lo]);
        }
    }
    // smallest block edge N with tail(N) <= target; 0 if even the beyond-table part is too large
    u64 cutoff(double target, double* tail) const {
        if (suffix_[0] > target) return 0;
        std::size_t i = 0;
        while (i + 1 < suffix_.size() && suffix_[i + 1] <= target) ++i;
        *tail = suffix_[i];
        return edges_[i];
    }
    double tail_from(u64 N) const {
        double t = B_.divisor_tail(scale_, static_cast<double>(top_));
        // walk down to N, last partial block exact in the coefficient sum
        for (std::size_t i = 1; i < edges_.size(); ++i) {
            const u64 lo = std::max(edges_[i], N), hi = edges_[i - 1];
            if (hi <= N) break;
            t += B_(scale_ * static_cast<double>(lo + 1)) * (prefix_[hi] - prefix_[lo]);
        }
        return t;
    }

private:
    const DecayBound& B_;
    const std::vector<double>& prefix_;
    double scale_;
    u64 top_;
    std::vector<u64> edges_;
    std::vector<double> suffix_;
};

void certify(Plan& p, const DecayBound& B, const std::vector<double>& prefix, double z_max, double share,
             double safety, double trunc_scale) {
    const TailBound T(B, prefix, p.scale);
    double tail = 0.0;
    const double target = share / (safety * p.amp);
    u64 n = T.cutoff(target, &tail);
    if (n == 0 && tail == 0.0) {
        std::ostringstream os;
        os << "voronoi: tail beyond the coefficient table exceeds " << share << " for delta = " << p.delta;
        throw TailCertificateFailure(os.str());
    }
    n = static_cast<u64>(std::ceil(static_cast<double>(n) * trunc_scale));
    if (p.scale * static_cast<double>(n) > z_max) {
        std::ostringstream os;
        os << "voronoi: certified cutoff z = " << p.scale * static_cast<double>(n)
           << " lies beyond the tabulated transform (z_max = " << z_max << ") for delta = " << p.delta;
        throw TailCertificateFailure(os.str());
    }
    p.n_cut = n;
    p.tail = safety * p.amp * (trunc_scale > 1.0 ? T.tail_from(n) : tail);
}

std::vector<Plan> plan(const VoronoiCase& c, const forms::EigenformData& f, const HankelProfile& H) {
    const auto& B = shared_decay(H.weight());
    const auto& prefix = shared_abs_prefix(f);
    const auto tab = forms::varpi_table(f, c.q);
    std::vector<Plan> out;
    for (const auto& e : tab.entries) {
        if (e.varpi_lambda == 0.0) continue;
        const u64 g = arith::gcd(e.delta, c.d);
        Plan p;
        p.delta = e.delta;
        p.delta_prime = e.delta / g;
        p.d_prime = c.d / g;
        p.varpi = e.varpi_lambda;
        const double dd = static_cast<double>(p.d_prime);
        p.scale = c.X / (static_cast<double>(e.delta) * dd * dd);
        p.amp = std::abs(p.varpi) * c.X / (static_cast<double>(e.delta) * dd);
        out.push_back(p);
    }
    const double share = c.tail_tol / static_cast<double>(std::max<std::size_t>(out.size(), 1));
    for (auto& p : out) certify(p, B, prefix, H.z_max(), share, c.safety, c.truncation_scale);
    return out;
}

}  // namespace

u64 required_table(const VoronoiCase& c, const forms::EigenformData& f) {
    validate(c, f);
    const auto& H = shared_profile(static_cast<int>(f.weight));
    u64 need = static_cast<u64>(std::ceil(special::BumpFunction::hi * c.X));
    for (const auto& p : plan(c, f, H)) need = std::max(need, p.n_cut);
    return need;
}

RhsResult voronoi_rhs(const VoronoiCase& c, const forms::EigenformData& f, Exec exec) {
    validate(c, f);
    const auto& H = shared_profile(static_cast<int>(f.weight));
    auto plans = plan(c, f, H);
    if (c.reverse) std::reverse(plans.begin(), plans.end());
    RhsResult out;
    const u64 b = arith::reduce(c.b, c.d);
    for (const auto& p : plans) {
        u64 h = 0;
        if (p.d_prime > 1) {
            const u64 db = arith::mulmod(p.delta_prime % p.d_prime, b % p.d_prime, p.d_prime);
            const u64 inv = inverse_mod(static_cast<i64>(db), p.d_prime);
            h = c.dual_sign == 1 ? inv : (p.d_prime - inv) % p.d_prime;
        }
        const cplx s = dual_sum(f, H, p.scale, p.n_cut, h, p.d_prime, exec, c.reverse);
        const cplx v = p.amp / std::abs(p.varpi) * p.varpi * s;
        out.value += v;
        out.tail_certificate += p.tail;
        out.terms += p.n_cut;
        out.deltas.push_back({p.delta, p.delta_prime, p.d_prime, p.varpi, p.n_cut, p.tail, v});
    }
    return out;
}

VoronoiResult voronoi_check(const VoronoiCase& c, const forms::EigenformData& f, Exec exec) {
    const auto t0 = std::chrono::steady_clock::now();
    VoronoiResult r;
    r.c = c;
    r.lhs = voronoi_lhs(c, f);
    const auto rhs = voronoi_rhs(c, f, exec);
    r.rhs = rhs.value;
    r.residual = std::abs(r.lhs - r.rhs);
    r.tail_certificate = rhs.tail_certificate;
    r.lhs_terms = static_cast<u64>(std::ceil(special::BumpFunction::hi * c.X));
    r.rhs_terms = rhs.terms;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

std::vector<VoronoiCase> default_grid() {
    std::vector<VoronoiCase> out;
    for (u64 d = 1; d <= 5; ++d)
        for (u64 b = 0; b < std::max<u64>(d, 1); ++b) {
            if (d > 1 && arith::gcd(b, d) != 1) continue;
            for (u64 q : {1, 2, 3, 6})
                for (double X : {10.0, 20.0, 40.0}) {
                    VoronoiCase c;
                    c.b = static_cast<i64>(b);
                    c.d = d;
                    c.q = q;
                    c.X = X;
                    out.push_back(c);
                }
        }
    return out;
}

std::vector<VoronoiResult> run_grid(const std::vector<VoronoiCase>& cases, const forms::EigenformData& f,
                                    Exec exec) {
    if (!cases.empty()) shared_profile(static_cast<int>(f.weight));
    std::vector<VoronoiResult> out(cases.size());
    const long n = static_cast<long>(cases.size());
    if (exec == Exec::Parallel) {
        std::vector<std::exception_ptr> errors(cases.size());
#pragma omp parallel for schedule(dynamic, 1)
        for (long i = 0; i < n; ++i) {
            try {
                out[i] = voronoi_check(cases[i], f, Exec::Serial);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
        for (const auto& e : errors)
            if (e) std::rethrow_exception(e);
    } else {
        for (long i = 0; i < n; ++i) out[i] = voronoi_check(cases[i], f, Exec::Serial);
    }
    return out;
}

}  // namespace momentlab::voronoi
