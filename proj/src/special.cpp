#include "momentlab/special.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>

#include "momentlab/quadrature.hpp"

namespace momentlab::special {

namespace {

constexpr double kPi = std::numbers::pi;

// B_2k / (2k (2k - 1)), k = 1..10
constexpr double kStirling[10] = {
    1.0 / 12.0,           -1.0 / 360.0,           1.0 / 1260.0,          -1.0 / 1680.0,
    1.0 / 1188.0,         -691.0 / 360360.0,      1.0 / 156.0,           -3617.0 / 122400.0,
    43867.0 / 244188.0,   -174611.0 / 125400.0,
};

cplx stirling(cplx z) {
    const cplx iz = 1.0 / z, iz2 = iz * iz;
    cplx s = 0.0, p = iz;
    for (double c : kStirling) {
        s += c * p;
        p *= iz2;
    }
    return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * kPi) + s;
}

double bessel_trapezoid(int n, double x) {
    // J_n(x) = (1/2pi) int_0^{2pi} cos(n t - x sin t) dt, periodic and entire
    const long N = static_cast<long>(std::ceil(x + n + 10.0 * std::cbrt(x) + 40.0));
    double s = 0.0;
    for (long j = 0; j < N; ++j) {
        const double t = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(N);
        s += std::cos(n * t - x * std::sin(t));
    }
    return s / static_cast<double>(N);
}

double bessel_schlafli(double nu, double x) {
    quad::Options opt;
    opt.abs_tol = 1e-13;
    const int pieces = std::max(8, static_cast<int>(std::ceil((x + nu) / 2.0)));
    std::vector<double> br(pieces + 1);
    for (int i = 0; i <= pieces; ++i) br[i] = kPi * i / pieces;
    const auto r1 = quad::gauss_kronrod([&](double t) { return std::cos(nu * t - x * std::sin(t)); }, br, opt);
    if (r1.error > 1e-11) throw quad::QuadratureError("bessel_j: Schlafli integral did not converge", r1);
    const double i1 = r1.value / kPi;
    const double s = std::sin(nu * kPi);
    if (s == 0.0) return i1;
    const double T = std::asinh(45.0 / x);
    const auto r2 = quad::gauss_kronrod([&](double t) { return std::exp(-x * std::sinh(t) - nu * t); }, 0.0, T, opt);
    if (r2.error > 1e-11) throw quad::QuadratureError("bessel_j: Schlafli tail did not converge", r2);
    const double i2 = r2.value;
    return i1 - s / kPi * i2;
}

}  // namespace

cplx log_gamma(cplx z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw std::domain_error("log_gamma: non-finite argument");
    if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
        throw std::domain_error("log_gamma: pole at a nonpositive integer");
    if (z.real() < -1e7) throw std::domain_error("log_gamma: real part below -1e7");
    cplx acc = 0.0;
    while (z.real() < 15.0) {
        acc += std::log(z);
        z += 1.0;
    }
    return stirling(z) - acc;
}

double bessel_j_series(double nu, double x) {
    if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
    const double h = 0.5 * x, h2 = h * h;
    double term = std::exp(nu * std::log(h) - std::lgamma(nu + 1.0));
    double sum = term;
    for (int m = 0; m < 500; ++m) {
        term *= -h2 / ((m + 1.0) * (m + nu + 1.0));
        sum += term;
        if (std::abs(term) < 1e-17 * std::max(1.0, std::abs(sum)) && m > h) break;
    }
    return sum;
}

double bessel_j_asymptotic(double nu, double x, double* err) {
    const double mu = 4.0 * nu * nu;
    double P = 1.0, Q = 0.0, a = 1.0, prev = 1.0, last = 0.0;
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        a *= (mu - odd * odd) / (8.0 * k * x);
        const double t = std::abs(a);
        if (t > prev) {
            last = prev;
            break;
        }
        const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
        if (k % 2 == 0)
            P += sign * a;
        else
            Q += sign * a;
        prev = t;
        last = t;
        if (t < 1e-17) break;
    }
    if (err) *err = last * std::sqrt(2.0 / (kPi * x));
    const double w = x - (0.5 * nu + 0.25) * kPi;
    return std::sqrt(2.0 / (kPi * x)) * (P * std::cos(w) - Q * std::sin(w));
}

double bessel_j(double nu, double x) {
    if (!(nu >= 0.0 && nu <= 60.0)) throw std::domain_error("bessel_j: order outside [0, 60]");
    if (!(x >= 0.0 && x <= 1e6)) throw std::domain_error("bessel_j: argument outside [0, 1e6]");
    if (x <= 12.0) return bessel_j_series(nu, x);
    if (x >= std::max(35.0, nu * nu)) {
        double err = 0.0;
        const double v = bessel_j_asymptotic(nu, x, &err);
        if (err < 1e-14) return v;
    }
    if (nu == std::floor(nu)) return bessel_trapezoid(static_cast<int>(nu), x);
    return bessel_schlafli(nu, x);
}

std::vector<double> ChebyshevPanels::nodes(double a, double b, int panels, int degree) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(panels) * (degree + 1));
    const double w = (b - a) / panels;
    for (int i = 0; i < panels; ++i) {
        const double c = a + (i + 0.5) * w;
        for (int k = 0; k <= degree; ++k) out.push_back(c + 0.5 * w * std::cos(kPi * (k + 0.5) / (degree + 1)));
    }
    return out;
}

ChebyshevPanels ChebyshevPanels::from_samples(double a, double b, int panels, int degree,
                                              const std::vector<double>& samples) {
    if (!(b > a) || panels < 1 || degree < 1) throw std::invalid_argument("ChebyshevPanels: bad layout");
    const std::size_t n = static_cast<std::size_t>(degree) + 1;
    if (samples.size() != panels * n) throw std::invalid_argument("ChebyshevPanels: sample count mismatch");
    ChebyshevPanels p;
    p.a_ = a;
    p.b_ = b;
    p.panels_ = panels;
    p.degree_ = degree;
    p.w_ = (b - a) / panels;
    p.coef_.assign(samples.size(), 0.0);
    std::vector<double> cosines(n * n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) cosines[j * n + k] = std::cos(kPi * j * (k + 0.5) / n);
    for (int i = 0; i < panels; ++i) {
        const double* f = samples.data() + i * n;
        double* c = p.coef_.data() + i * n;
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += f[k] * cosines[j * n + k];
            c[j] = 2.0 * s / static_cast<double>(n);
        }
        c[0] *= 0.5;
    }
    return p;
}

ChebyshevPanels::ChebyshevPanels(const std::function<double(double)>& f, double a, double b, double width, int degree) {
    const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / width)));
    const auto xs = nodes(a, b, panels, degree);
    std::vector<double> v(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) v[i] = f(xs[i]);
    *this = from_samples(a, b, panels, degree, v);
}

double ChebyshevPanels::operator()(double x) const {
    if (!(x >= a_ - 1e-12 * w_ && x <= b_ + 1e-12 * w_)) throw std::out_of_range("ChebyshevPanels: outside range");
    int i = static_cast<int>((x - a_) / w_);
    i = std::clamp(i, 0, panels_ - 1);
    const double t = 2.0 * (x - a_ - i * w_) / w_ - 1.0;
    const double* c = coef_.data() + static_cast<std::size_t>(i) * (degree_ + 1);
    double b1 = 0.0, b2 = 0.0;
    for (int j = degree_; j >= 1; --j) {
        const double b0 = 2.0 * t * b1 - b2 + c[j];
        b2 = b1;
        b1 = b0;
    }
    return t * b1 - b2 + c[0];
}

double ChebyshevPanels::panel_bound(int i) const {
    const double* c = coef_.data() + static_cast<std::size_t>(i) * (degree_ + 1);
    double s = 0.0;
    for (int j = 0; j <= degree_; ++j) s += std::abs(c[j]);
    return s;
}

BesselJTable::BesselJTable(int order, double x_max)
    : order_(order), cheb_([order](double x) { return bessel_j(order, x); }, 0.0, x_max, 1.0, 16) {
    if (order < 0 || order > 60) throw std::invalid_argument("BesselJTable: order outside [0, 60]");
}

double BumpFunction::ramp(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double u = (1.0 - 2.0 * t) / (t * (1.0 - t));
    if (u > 0.0) {
        const double e = std::exp(-u);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(u));
}

double BumpFunction::value(double x) {
    if (x <= lo || x >= hi) return 0.0;
    return ramp(2.0 * x - 1.0) * ramp(3.0 - x);
}

BumpJet BumpFunction::jet(double x) {
    if (x <= lo || x >= hi) return BumpJet{};
    return bump_jet(BumpJet::variable(x));
}

const std::array<double, kBumpOrder + 1>& BumpFunction::bounds() {
    static const std::array<double, kBumpOrder + 1> b = [] {
        std::array<double, kBumpOrder + 1> m{};
        const int n = 250000;
        for (int i = 1; i < n; ++i) {
            const auto J = jet(lo + (hi - lo) * i / n);
            for (int j = 0; j <= kBumpOrder; ++j) m[j] = std::max(m[j], std::abs(J.derivative(j)));
        }
        for (auto& v : m) v *= 1.02;
        return m;
    }();
    return b;
}

}  // namespace momentlab::special
