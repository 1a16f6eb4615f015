#include "momentlab/lfunctions.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "momentlab/special.hpp"

namespace momentlab::lfun {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRight = 2.0, kLeft = -0.25;

using special::log_gamma;

// B_{2j} / (2j)!, j = 1..16
constexpr double kBernoulliOverFactorial[16] = {
    1.0 / 6 / 2,
    -1.0 / 30 / 24,
    1.0 / 42 / 720,
    -1.0 / 30 / 40320,
    5.0 / 66 / 3628800,
    -691.0 / 2730 / 479001600,
    7.0 / 6 / 87178291200.0,
    -3617.0 / 510 / 20922789888000.0,
    43867.0 / 798 / 6402373705728000.0,
    -174611.0 / 330 / 2432902008176640000.0,
    854513.0 / 138 / 1.1240007277776077e21,
    -236364091.0 / 2730 / 6.204484017332394e23,
    8553103.0 / 6 / 4.0329146112660565e26,
    -23749461029.0 / 870 / 3.0488834461171387e29,
    8615841276005.0 / 14322 / 2.6525285981219107e32,
    -7709321041217.0 / 510 / 2.631308369336935e35,
};

std::vector<cplx> line_coefficients(const WeightFunction::LogRatio& lg, double c, double T, double h) {
    const int J = static_cast<int>(std::ceil(T / h));
    std::vector<cplx> a(J + 1);
    for (int j = 0; j <= J; ++j) {
        const cplx s(c, j * h);
        a[j] = std::exp(lg(s)) / s;
    }
    return a;
}

double sum_line(double x, double c, double h, const std::vector<cplx>& a) {
    const double lx = std::log(x);
    double s = 0.5 * a[0].real();
    for (std::size_t j = 1; j < a.size(); ++j) {
        const double th = static_cast<double>(j) * h * lx;
        s += a[j].real() * std::cos(th) + a[j].imag() * std::sin(th);
    }
    return 2.0 * s * std::exp(-c * lx) * h / (2.0 * kPi);
}

cplx dirichlet_part(cplx s, int parity) {
    // log of L_inf(1/2+s, chi)^2 / L_inf(1/2, chi)^2
    const double a = parity;
    return 2.0 * (-0.5 * s * std::log(kPi) + log_gamma((0.5 + s + a) / 2.0) - log_gamma(cplx((0.5 + a) / 2.0)));
}

WeightFunction::LogRatio twist_part(const forms::EigenformData& f, int parity) {
    if (f.kind == forms::FormKind::Holomorphic) {
        const double a = (f.weight - 1.0) / 2.0;
        const cplx base = log_gamma(cplx(a + 0.5));
        return [a, base](cplx s) { return -s * std::log(2.0 * kPi) + log_gamma(a + 0.5 + s) - base; };
    }
    const double k = f.kappa, p = parity;
    const cplx ik(0.0, k);
    const cplx base = log_gamma((0.5 + ik + p) / 2.0) + log_gamma((0.5 - ik + p) / 2.0);
    return [ik, p, base](cplx s) {
        return -s * std::log(kPi) + log_gamma((0.5 + s + ik + p) / 2.0) + log_gamma((0.5 + s - ik + p) / 2.0) - base;
    };
}

void check_parity(int parity) {
    if (parity != 0 && parity != 1) throw std::invalid_argument("weight: parity must be 0 or 1");
}

}  // namespace

WeightFunction::WeightFunction(LogRatio log_g, int parity, const Options& opt, Exec exec)
    : log_g_(std::move(log_g)), parity_(parity), opt_(opt) {
    check_parity(parity);
    if (!(opt.T > 0 && opt.h > 0 && opt.du > 0 && opt.x_lo > 0 && opt.x_hi > opt.x_lo))
        throw std::invalid_argument("WeightFunction: bad options");
    right_ = line_coefficients(log_g_, kRight, opt.T, opt.h);
    left_ = line_coefficients(log_g_, kLeft, opt.T, opt.h);
    if (!opt.memo) return;
    u0_ = std::log(opt.x_lo);
    const long M = static_cast<long>(std::floor((std::log(opt.x_hi) - u0_) / opt.du)) + 1;
    memo_.assign(M, 0.0);
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (long i = 0; i < M; ++i) memo_[i] = direct(std::exp(u0_ + i * opt.du));
    } else {
        for (long i = 0; i < M; ++i) memo_[i] = direct(std::exp(u0_ + i * opt.du));
    }
}

WeightFunction WeightFunction::afe(const forms::EigenformData& f, int parity, const Options& opt, Exec exec) {
    check_parity(parity);
    auto tw = twist_part(f, parity);
    return WeightFunction([tw, parity](cplx s) { return tw(s) + dirichlet_part(s, parity); }, parity, opt, exec);
}

WeightFunction WeightFunction::twisted(const forms::EigenformData& f, int parity, const Options& opt, Exec exec) {
    check_parity(parity);
    return WeightFunction(twist_part(f, parity), parity, opt, exec);
}

double WeightFunction::line_sum(double x, double c, const std::vector<cplx>& a) const {
    return sum_line(x, c, opt_.h, a);
}

double WeightFunction::direct(double x) const {
    if (!(x > 0.0)) throw std::invalid_argument("weight: x must be positive");
    if (x >= 1.0) return line_sum(x, kRight, right_);
    return 1.0 + line_sum(x, kLeft, left_);
}

double WeightFunction::direct(double x, double T, double h) const {
    if (!(x > 0.0)) throw std::invalid_argument("weight: x must be positive");
    const double c = x >= 1.0 ? kRight : kLeft;
    const auto a = line_coefficients(log_g_, c, T, h);
    return (c < 0 ? 1.0 : 0.0) + sum_line(x, c, h, a);
}

double WeightFunction::operator()(double x) const {
    if (memo_.empty()) return direct(x);
    if (!(x > 0.0)) throw std::invalid_argument("weight: x must be positive");
    const double p = (std::log(x) - u0_) / opt_.du;
    const long i = static_cast<long>(std::floor(p));
    if (i < 1 || i + 2 >= static_cast<long>(memo_.size())) return direct(x);
    const double f = p - static_cast<double>(i);
    const double* v = memo_.data() + i;
    const double wm = -f * (f - 1) * (f - 2) / 6.0, w0 = (f + 1) * (f - 1) * (f - 2) / 2.0,
                 w1 = -(f + 1) * f * (f - 2) / 2.0, w2 = (f + 1) * f * (f - 1) / 6.0;
    return wm * v[-1] + w0 * v[0] + w1 * v[1] + w2 * v[2];
}

double WeightFunction::x_cut(double level) const {
    if (memo_.empty()) {
        // coarse scan of direct values
        double x = opt_.x_hi;
        while (x > opt_.x_lo && std::abs(direct(x)) <= level) x /= 1.05;
        return x * 1.05;
    }
    for (long i = static_cast<long>(memo_.size()) - 1; i >= 0; --i)
        if (std::abs(memo_[i]) > level) return std::exp(u0_ + (i + 1) * opt_.du);
    return opt_.x_lo;
}

RootNumbers root_numbers(const chars::CharacterGroup& g, u32 chi, const forms::EigenformData& f) {
    const auto gd = chars::gauss_eps(g, chi);
    const int parity = g.info(chi).parity;
    RootNumbers r;
    r.eps_chi = gd.eps_chi;
    r.eps_dirichlet = gd.eps_root;
    const double ef = f.epsilon;
    if (f.kind == forms::FormKind::Holomorphic) {
        r.eps_twist = ef * gd.eps_chi * gd.eps_chi;
        r.eps_pair = parity * f.epsilon;
    } else {
        r.eps_twist = static_cast<double>(parity) * ef * gd.eps_chi * gd.eps_chi;
        r.eps_pair = f.epsilon;
    }
    return r;
}

cplx hurwitz_zeta(cplx s, double alpha, int shift, int bernoulli) {
    if (s == cplx(1.0, 0.0)) throw std::domain_error("hurwitz_zeta: pole at s = 1");
    if (!(alpha > 0.0)) throw std::invalid_argument("hurwitz_zeta: alpha must be positive");
    if (bernoulli < 0 || bernoulli > 16) throw std::invalid_argument("hurwitz_zeta: at most 16 Bernoulli terms");
    cplx sum = 0.0;
    for (int k = 0; k < shift; ++k) sum += std::exp(-s * std::log(k + alpha));
    const double N = shift + alpha, lN = std::log(N);
    const cplx Ns = std::exp(-s * lN);
    sum += N * Ns / (s - 1.0) + 0.5 * Ns;
    cplx poch = s, pw = Ns / N;
    for (int j = 1; j <= bernoulli; ++j) {
        sum += kBernoulliOverFactorial[j - 1] * poch * pw;
        poch *= (s + (2.0 * j - 1.0)) * (s + 2.0 * j);
        pw /= N * N;
    }
    return sum;
}

cplx dirichlet_L_half(const chars::CharacterGroup& g, u32 chi, int shift, int bernoulli) {
    if (g.info(chi).conductor == 1) throw std::invalid_argument("dirichlet_L_half: principal character has a pole");
    const u64 q = g.modulus();
    cplx s = 0.0;
    for (u64 a = 1; a <= q; ++a) {
        if (arith::gcd(a, q) != 1) continue;
        s += g.value(chi, a) * hurwitz_zeta(0.5, static_cast<double>(a) / q, shift, bernoulli);
    }
    return s / std::sqrt(static_cast<double>(q));
}

cplx twisted_L_half(const chars::CharacterGroup& g, u32 chi, const forms::EigenformData& f, const WeightFunction& W,
                    double balance) {
    if (!(balance > 0.0)) throw std::invalid_argument("twisted_L_half: balance must be positive");
    const auto rn = root_numbers(g, chi, f);
    const int a = g.info(chi).parity == 1 ? 0 : 1;
    if (f.kind == forms::FormKind::Maass && W.parity() != a)
        throw std::invalid_argument("twisted_L_half: weight parity does not match the character");
    const u64 q = g.modulus();
    const double yc = W.x_cut(1e-17);
    const double qd = static_cast<double>(q);
    const u64 n1 = static_cast<u64>(std::ceil(yc * qd / balance)), n2 = static_cast<u64>(std::ceil(yc * qd * balance));
    if (std::max(n1, n2) > f.n_max()) throw std::out_of_range("twisted_L_half: lambda table too short");
    cplx s1 = 0.0, s2 = 0.0;
    for (u64 n = 1; n <= std::max(n1, n2); ++n) {
        const u32 e = g.exponent_at(chi, n);
        if (e == chars::kNonUnit) continue;
        const cplx c = g.root(e);
        const double w = f[n] / std::sqrt(static_cast<double>(n));
        if (n <= n1) s1 += w * c * W(n * balance / qd);
        if (n <= n2) s2 += w * std::conj(c) * W(n / (qd * balance));
    }
    return s1 + rn.eps_twist * s2;
}

cplx twisted_L_half(const chars::CharacterGroup& g, u32 chi, const forms::EigenformData& f, double balance) {
    WeightFunction::Options opt;
    opt.memo = false;
    const int a = g.info(chi).parity == 1 ? 0 : 1;
    const auto W = WeightFunction::twisted(f, a, opt);
    return twisted_L_half(g, chi, f, W, balance);
}

LOne L_one_f(const forms::EigenformData& f, double X) {
    if (f.kind != forms::FormKind::Holomorphic)
        throw std::invalid_argument("L_one_f: only holomorphic forms carry the incomplete-gamma route");
    if (!(X > 0.0)) throw std::invalid_argument("L_one_f: X must be positive");
    using boost::math::gamma_q;
    const double a = (f.weight - 1.0) / 2.0;
    const double zmax = 70.0;
    const u64 n1 = static_cast<u64>(std::ceil(zmax * X / (2 * kPi)));
    const u64 n2 = static_cast<u64>(std::ceil(zmax / (2 * kPi * X)));
    if (std::max(n1, n2) > f.n_max()) throw std::out_of_range("L_one_f: lambda table too short");
    LOne r;
    double s1 = 0.0, s2 = 0.0;
    for (u64 n = 1; n <= n1; ++n) s1 += f[n] / n * gamma_q(a + 1.0, 2 * kPi * n / X);
    for (u64 n = 1; n <= n2; ++n) s2 += f[n] * gamma_q(a, 2 * kPi * n * X);
    r.value = s1 + f.epsilon * (2 * kPi / a) * s2;
    r.terms = n1 + n2;
    // |lambda(n)| <= d(n) <= 2 sqrt(n)
    double tail = 0.0;
    for (u64 n = n1 + 1;; ++n) {
        const double t = 2.0 / std::sqrt(static_cast<double>(n)) * gamma_q(a + 1.0, 2 * kPi * n / X);
        tail += t;
        if (t < 1e-40 || n > 4 * n1 + 100) break;
    }
    for (u64 n = n2 + 1;; ++n) {
        const double t = 2.0 * std::sqrt(static_cast<double>(n)) * (2 * kPi / a) * gamma_q(a, 2 * kPi * n * X);
        tail += t;
        if (t < 1e-40 || n > 4 * n2 + 100) break;
    }
    r.tail_bound = tail;
    return r;
}

LOne L_one_mellin(const forms::EigenformData& f) {
    // log gamma_f(s), up to an additive constant
    WeightFunction::LogRatio lg;
    double T = 40.0;
    if (f.kind == forms::FormKind::Holomorphic) {
        const double a = (f.weight - 1.0) / 2.0;
        lg = [a](cplx s) { return -s * std::log(2.0 * kPi) + log_gamma(s + a); };
    } else {
        const cplx ik(0.0, f.kappa);
        const double p = f.epsilon == 1 ? 0.0 : 1.0;
        lg = [ik, p](cplx s) {
            return -s * std::log(kPi) + log_gamma((s + ik + p) / 2.0) + log_gamma((s - ik + p) / 2.0);
        };
        T += 2.0 * std::abs(f.kappa);
    }
    WeightFunction::Options opt;
    opt.memo = false;
    opt.T = T;
    opt.h = 0.04;
    const cplx g0 = lg(0.0), g1 = lg(1.0);
    const WeightFunction V1([lg, g1](cplx s) { return lg(1.0 + s) - g1; }, 0, opt, Exec::Serial);
    const WeightFunction V2([lg, g0](cplx s) { return lg(s) - g0; }, 0, opt, Exec::Serial);
    const double ratio = std::exp((g0 - g1).real());
    LOne r;
    double s1 = 0.0, s2 = 0.0, tail = 0.0;
    for (u64 n = 1;; ++n) {
        const double v1 = V1(static_cast<double>(n)), v2 = V2(static_cast<double>(n));
        const double maj = 2.0 * std::sqrt(static_cast<double>(n)) * (std::abs(v1) / n + ratio * std::abs(v2));
        if (maj < 1e-17 && n > 4) {
            // weights decay at least geometrically past this point
            tail = 4.0 * maj;
            break;
        }
        if (n > f.n_max()) throw std::out_of_range("L_one_mellin: lambda table too short");
        s1 += f[n] * v1 / static_cast<double>(n);
        s2 += f[n] * v2;
        r.terms = n;
        if (n > 100000) throw std::runtime_error("L_one_mellin: weights do not decay");
    }
    r.value = s1 + f.epsilon * ratio * s2;
    r.tail_bound = tail;
    return r;
}

double zeta_two() { return kPi * kPi / 6.0; }

AfeBuckets afe_buckets(const forms::EigenformData& f, const WeightFunction& V, u64 q, Exec exec) {
    if (q == 0) throw std::invalid_argument("afe_buckets: q must be positive");
    AfeBuckets B;
    B.q = q;
    const double q2 = static_cast<double>(q) * static_cast<double>(q);
    const double xc = V.x_cut(1e-12);
    B.n_cut = static_cast<u64>(std::floor(xc * q2));
    if (B.n_cut > f.n_max()) {
        std::ostringstream os;
        os << "afe: lambda table too short, need n_max >= " << B.n_cut << " for q = " << q;
        throw std::out_of_range(os.str());
    }
    if (B.n_cut > 0xFFFFFFF0ull) throw std::out_of_range("afe: truncation beyond 32-bit tables");
    const u64 Nc = B.n_cut;
    const auto d = arith::divisor_count_table(static_cast<std::uint32_t>(Nc));
    std::vector<double> w(Nc + 1, 0.0);
    for (u64 N = 1; N <= Nc; ++N)
        if (arith::gcd(N, q) == 1) w[N] = V(static_cast<double>(N) / q2) / std::sqrt(static_cast<double>(N));
    std::vector<u64> inv(q, 0);
    for (u64 r = 0; r < q; ++r)
        if (arith::gcd(r, q) == 1) inv[r] = q == 1 ? 0 : arith::mod_inverse(static_cast<arith::i64>(r), q);
    B.C.assign(q, 0.0);
    const long M = static_cast<long>(Nc);
    auto row = [&](long m, std::vector<double>& C) {
        if (arith::gcd(static_cast<u64>(m), q) != 1) return;
        const double lm = f[m];
        const u64 mq = static_cast<u64>(m) % q;
        const u64 top = Nc / static_cast<u64>(m);
        for (u64 n = 1; n <= top; ++n) {
            const double wn = w[static_cast<u64>(m) * n];
            if (wn == 0.0) continue;
            const u64 r = static_cast<u64>((static_cast<arith::u128>(mq) * inv[n % q]) % q);
            C[r] += lm * d[n] * wn;
        }
    };
    if (exec == Exec::Parallel) {
#pragma omp parallel
        {
            std::vector<double> local(q, 0.0);
#pragma omp for schedule(dynamic, 16) nowait
            for (long m = 1; m <= M; ++m) row(m, local);
#pragma omp critical
            for (u64 r = 0; r < q; ++r) B.C[r] += local[r];
        }
    } else {
        for (long m = 1; m <= M; ++m) row(m, B.C);
    }
    // mean of d_4(N) ~ log^3 N / 6 against |lambda(m)| d(n) <= d(m) d(n)
    double tail = 0.0;
    const double du = 0.01;
    for (double u = std::log(xc); u < std::log(1e6); u += du) {
        const double x = std::exp(u), N = x * q2;
        const double L = std::log(std::max(N, 3.0));
        tail += std::abs(V(x)) * L * L * L / 6.0 / std::sqrt(N) * q2 * x * du;
    }
    B.tail_estimate = 2.0 * tail;
    return B;
}

cplx afe_from_buckets(const AfeBuckets& B, const chars::CharacterGroup& g, u32 chi, int sign) {
    if (g.modulus() != B.q) throw std::invalid_argument("afe_from_buckets: modulus mismatch");
    cplx s = 0.0;
    for (u64 r = 0; r < B.q; ++r) {
        if (B.C[r] == 0.0) continue;
        const u32 e = g.exponent_at(chi, r);
        if (e == chars::kNonUnit) continue;
        const cplx c = g.root(e);
        s += B.C[r] * (c + static_cast<double>(sign) * std::conj(c));
    }
    return s;
}

cplx afe_direct(const forms::EigenformData& f, const WeightFunction& V, const chars::CharacterGroup& g, u32 chi,
                int sign) {
    const u64 q = g.modulus();
    const double q2 = static_cast<double>(q) * static_cast<double>(q);
    const u64 Nc = static_cast<u64>(std::floor(V.x_cut(1e-12) * q2));
    if (Nc > f.n_max()) throw std::out_of_range("afe_direct: lambda table too short");
    cplx s = 0.0;
    for (u64 m = 1; m <= Nc; ++m) {
        const u32 em = g.exponent_at(chi, m);
        if (em == chars::kNonUnit) continue;
        const cplx cm = g.root(em);
        for (u64 n = 1; m * n <= Nc; ++n) {
            const u32 en = g.exponent_at(chi, n);
            if (en == chars::kNonUnit) continue;
            const cplx cn = g.root(en);
            const double mn = static_cast<double>(m * n);
            const double base = V(mn / q2) / std::sqrt(mn);
            const cplx ch = cm * std::conj(cn);
            s += base * (f[m] * static_cast<double>(arith::divisor_count(n)) * ch +
                         static_cast<double>(sign) * f[n] * static_cast<double>(arith::divisor_count(m)) * ch);
        }
    }
    return s;
}

cplx afe_triple_product(const chars::CharacterGroup& g, u32 chi, const forms::EigenformData& f,
                        const WeightFunction& V) {
    if (g.modulus() == 1) throw std::invalid_argument("afe_triple_product: q = 1 gives no twisted family");
    if (!g.info(chi).primitive) throw std::invalid_argument("afe_triple_product: character is not primitive");
    const auto rn = root_numbers(g, chi, f);
    if (rn.eps_pair != 1)
        throw ParityVanishing(
            "afe_triple_product: eps(f, chi) = -1; such characters cancel in the moment by the functional "
            "equation and the AFE used here assumes eps(f, chi) = +1");
    const int a = g.info(chi).parity == 1 ? 0 : 1;
    if (V.parity() != a) throw std::invalid_argument("afe_triple_product: weight parity does not match chi");
    const auto B = afe_buckets(f, V, g.modulus(), Exec::Serial);
    return afe_from_buckets(B, g, chi, 1);
}

}  // namespace momentlab::lfun
