#include "momentlab/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "momentlab/quadrature.hpp"

namespace momentlab::special {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> sqrt_breaks(double lo, double hi, double y) {
    // zeros of J(4 pi sqrt(xy)) are about evenly spaced in sqrt(x), period 1/(2 sqrt y)
    const double s0 = std::sqrt(lo), s1 = std::sqrt(hi);
    const double cycles = (s1 - s0) * 2.0 * std::sqrt(std::max(y, 0.0));
    const int pieces = std::clamp(static_cast<int>(std::ceil(2.0 * cycles)), 4, 20000);
    std::vector<double> br(pieces + 1);
    for (int j = 0; j <= pieces; ++j) {
        const double s = s0 + (s1 - s0) * j / pieces;
        br[j] = s * s;
    }
    br.front() = lo;
    br.back() = hi;
    return br;
}

}  // namespace

Kernel Kernel::bessel(double nu) {
    if (!(nu >= 0.0 && nu <= 60.0)) throw std::invalid_argument("Kernel::bessel: order outside [0, 60]");
    Kernel k;
    k.type_ = KernelType::BesselJ;
    k.order_ = nu;
    return k;
}

Kernel Kernel::holomorphic(int weight, int sign, double table_x_max) {
    if (weight < 2 || weight > 60 || weight % 2 != 0)
        throw std::invalid_argument("Kernel::holomorphic: weight must be even in [2, 60]");
    if (sign != 1 && sign != -1) throw std::invalid_argument("Kernel::holomorphic: sign must be +1 or -1");
    Kernel k;
    k.type_ = sign > 0 ? KernelType::HolomorphicPlus : KernelType::HolomorphicMinus;
    k.order_ = weight - 1;
    k.scale_ = sign > 0 ? 2.0 * kPi : 0.0;
    k.phase_ = QuarterTurn{weight};
    if (sign > 0 && table_x_max > 0.0) k.table_ = std::make_shared<BesselJTable>(weight - 1, table_x_max);
    return k;
}

Kernel Kernel::maass(double kappa, int sign) {
    if (sign != 1 && sign != -1) throw std::invalid_argument("Kernel::maass: sign must be +1 or -1");
    Kernel k;
    k.type_ = sign > 0 ? KernelType::MaassPlus : KernelType::MaassMinus;
    k.order_ = kappa;
    return k;
}

double Kernel::amplitude(double x) const {
    switch (type_) {
        case KernelType::BesselJ: return bessel_j(order_, x);
        case KernelType::HolomorphicPlus:
            if (table_ && x <= table_->x_max()) return (*table_)(x);
            return bessel_j(order_, x);
        case KernelType::HolomorphicMinus: return 0.0;
        default: break;
    }
    throw UnsupportedKernel("unsupported kernel: the Maass kernels need K and J Bessel functions of imaginary order");
}

SmoothProfile SmoothProfile::window(const AffineWindow& w) {
    SmoothProfile p;
    p.f = w;
    p.lo = w.lo();
    p.hi = w.hi();
    p.X = p.lo;
    p.X1 = p.hi - p.lo;
    p.X2 = 1.0 / w.scale;
    return p;
}

SmoothProfile SmoothProfile::zero(double lo, double hi) {
    SmoothProfile p;
    p.f = [](double) { return 0.0; };
    p.lo = p.X = lo;
    p.hi = hi;
    p.X1 = hi - lo;
    p.X2 = hi - lo;
    return p;
}

double hankel_envelope(double X, double X1, double X2, double y, double theta, int i) {
    const double xy = X * y;
    const double a = std::pow(1.0 + xy, -0.5 * i), b = std::pow(1.0 + X2 * X2 * y / X, -0.5 * i);
    return X1 * (1.0 + std::pow(xy, -theta)) * (a + b);
}

TransformResult hankel_transform(const SmoothProfile& F, const Kernel& kernel, double y, double abs_tol) {
    if (!(y >= 0.0)) throw std::invalid_argument("hankel_transform: y must be nonnegative");
    if (!(F.hi >= F.lo) || F.lo < 0.0) throw std::invalid_argument("hankel_transform: bad support");
    TransformResult r;
    if (kernel.vanishes() || F.hi == F.lo) return r;
    if (kernel.type() == KernelType::MaassPlus || kernel.type() == KernelType::MaassMinus) kernel.amplitude(1.0);
    const double s = kernel.scale();
    quad::Options opt;
    opt.abs_tol = abs_tol / s;
    const double c = 4.0 * kPi * std::sqrt(y);
    auto g = [&](double x) {
        const double v = F.f(x);
        return v == 0.0 ? 0.0 : v * kernel.amplitude(c * std::sqrt(x));
    };
    const auto q = quad::integrate(g, sqrt_breaks(F.lo, F.hi, y), opt);
    r.value = kernel.phase().apply(s * q.value);
    r.error = s * q.error;
    r.evaluations = q.evaluations;
    r.envelope = s * hankel_envelope(F.X, F.X1, F.X2, y, kernel.theta(), 0);
    return r;
}

TransformResult vring_pm(const Kernel& kernel, double b, double q, double M, double N, double y, double h,
                         double abs_tol) {
    if (!(b > 0 && q > 0 && M > 0 && N > 0 && y > 0))
        throw std::invalid_argument("vring_pm: b, q, M, N, y must be positive");
    if (kernel.vanishes()) return {};
    const AffineWindow w1{b / N, -h * q / N}, w2{b / M, 0.0};
    const double lo = std::max({w1.lo(), w2.lo(), 0.0}), hi = std::min(w1.hi(), w2.hi());
    if (!(lo < hi)) return {};
    SmoothProfile F;
    F.f = [w1, w2](double x) { return w1(x) * w2(x); };
    F.lo = lo;
    F.hi = hi;
    F.X = M / b;
    F.X1 = F.X2 = std::min(M, N) / b;
    return hankel_transform(F, kernel, y, abs_tol);
}

double HankelProfile::inner(double t, const std::vector<double>& u, const std::vector<double>& w) const {
    const double c = 4.0 * kPi * t;
    double s = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) s += w[j] * (*table_)(c * u[j]);
    return s;
}

HankelProfile::HankelProfile(int weight, const AffineWindow& V, double y_max, bool parallel)
    : weight_(weight), V_(V), t_max_(std::sqrt(y_max)), phase_{weight} {
    if (weight < 2 || weight > 60 || weight % 2 != 0) throw std::invalid_argument("HankelProfile: bad weight");
    if (!(V.lo() > 0.0)) throw std::invalid_argument("HankelProfile: window must sit in x > 0");
    if (!(y_max > 0.0)) throw std::invalid_argument("HankelProfile: y_max must be positive");
    const double s0 = std::sqrt(V.lo()), s1 = std::sqrt(V.hi()), L = s1 - s0;
    const double omega = 4.0 * kPi * s1;
    table_ = std::make_shared<BesselJTable>(weight - 1, omega * t_max_ * (1.0 + 1e-9) + 1.0);

    auto grid = [&](long n, std::vector<double>& u, std::vector<double>& w) {
        const double h = L / static_cast<double>(n);
        u.clear();
        w.clear();
        for (long j = 1; j < n; ++j) {
            const double x = s0 + h * static_cast<double>(j);
            const double v = V(x * x);
            if (v == 0.0) continue;
            u.push_back(x);
            w.push_back(h * v * 2.0 * x);
        }
    };
    std::vector<double> probes;
    for (double f : {0.01, 0.05, 0.13, 0.29, 0.41, 0.57, 0.66, 0.78, 0.85, 0.93, 0.97, 1.0}) probes.push_back(f * t_max_);

    long n = static_cast<long>(std::ceil(L * (omega * t_max_ + 200.0) / (2.0 * kPi))) + 8;
    for (;;) {
        std::vector<double> u2, w2;
        grid(n, u_, w_);
        grid(2 * n, u2, w2);
        double d = 0.0;
        for (double t : probes) d = std::max(d, std::abs(inner(t, u_, w_) - inner(t, u2, w2)));
        halving_delta_ = 2.0 * kPi * d;
        if (d < 1e-14) break;
        if (n > (1L << 22)) throw std::runtime_error("HankelProfile: inner rule did not settle under halving");
        n *= 2;
    }

    const int degree = 14;
    const int panels = std::max(1, static_cast<int>(std::ceil(t_max_ * omega / 2.0)));
    const auto nodes = ChebyshevPanels::nodes(0.0, t_max_, panels, degree);
    std::vector<double> vals(nodes.size());
    const long m = static_cast<long>(nodes.size());
    if (parallel) {
#pragma omp parallel for schedule(dynamic, 64)
        for (long i = 0; i < m; ++i) vals[i] = inner(nodes[i], u_, w_);
    } else {
        for (long i = 0; i < m; ++i) vals[i] = inner(nodes[i], u_, w_);
    }
    cheb_ = ChebyshevPanels::from_samples(0.0, t_max_, panels, degree, vals);
    suffix_bound_.assign(panels + 1, 0.0);
    for (int i = panels - 1; i >= 0; --i) suffix_bound_[i] = std::max(suffix_bound_[i + 1], cheb_.panel_bound(i));
}

double HankelProfile::sup_beyond(double y) const {
    const double t = std::sqrt(y);
    if (t >= t_max_) return 0.0;
    const int panels = cheb_.panels();
    const int i = std::clamp(static_cast<int>(t / (t_max_ / panels)), 0, panels - 1);
    return 2.0 * kPi * suffix_bound_[i];
}

cplx fourier_transform(double xi, double abs_tol) {
    quad::Options opt;
    opt.abs_tol = abs_tol;
    const double lo = BumpFunction::lo, hi = BumpFunction::hi;
    const int pieces = std::clamp(static_cast<int>(std::ceil(2.0 * (hi - lo) * std::abs(xi))), 4, 200000);
    std::vector<double> br(pieces + 1);
    for (int j = 0; j <= pieces; ++j) br[j] = lo + (hi - lo) * j / pieces;
    const double w = 2.0 * kPi * xi;
    const double re = quad::integrate([&](double x) { return BumpFunction::value(x) * std::cos(w * x); }, br, opt).value;
    if (xi == 0.0) return {re, 0.0};
    const double im = quad::integrate([&](double x) { return -BumpFunction::value(x) * std::sin(w * x); }, br, opt).value;
    return {re, im};
}

cplx fourier_transform(const AffineWindow& w, double xi, double abs_tol) {
    const double r = xi / w.scale;
    return std::polar(1.0 / w.scale, 2.0 * kPi * w.shift * r) * fourier_transform(r, abs_tol * w.scale);
}

FourierGrid::FourierGrid(double step, int count) : step_(step), count_(count), values_(count + 1) {
    if (!(step > 0.0) || count < 0) throw std::invalid_argument("FourierGrid: bad layout");
#pragma omp parallel for schedule(dynamic)
    for (int j = 0; j <= count; ++j) values_[j] = fourier_transform(step * j);
}

cplx FourierGrid::at(int j) const {
    if (j < -count_ || j > count_) throw std::out_of_range("FourierGrid: index outside grid");
    return j >= 0 ? values_[j] : std::conj(values_[-j]);
}

}  // namespace momentlab::special
