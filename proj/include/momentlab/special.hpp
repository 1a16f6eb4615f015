#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace momentlab::special {

using cplx = std::complex<double>;

// Principal branch, continued from the positive axis by the shift recurrence.
cplx log_gamma(cplx z);

// J_nu(x) for 0 <= nu <= 60, 0 <= x <= 1e6, absolute error about 1e-12.
double bessel_j(double nu, double x);
double bessel_j_series(double nu, double x);
// Hankel expansion; err receives the first omitted term
double bessel_j_asymptotic(double nu, double x, double* err = nullptr);

// Piecewise Chebyshev interpolant on [a, b] with equal panels.
class ChebyshevPanels {
public:
    ChebyshevPanels() = default;
    ChebyshevPanels(const std::function<double(double)>& f, double a, double b, double width, int degree);
    // build from precomputed samples at the Chebyshev nodes of each panel
    static ChebyshevPanels from_samples(double a, double b, int panels, int degree, const std::vector<double>& samples);
    static std::vector<double> nodes(double a, double b, int panels, int degree);

    double operator()(double x) const;
    double a() const { return a_; }
    double b() const { return b_; }
    int panels() const { return panels_; }
    int degree() const { return degree_; }
    // sum |c_j| on panel i, an upper bound for the interpolant there
    double panel_bound(int i) const;

private:
    double a_ = 0, b_ = 0, w_ = 1;
    int panels_ = 0, degree_ = 0;
    std::vector<double> coef_;
};

// J_n on [0, x_max] for fixed integer order
class BesselJTable {
public:
    BesselJTable(int order, double x_max);
    double operator()(double x) const { return x <= cheb_.b() ? cheb_(x) : bessel_j(order_, x); }
    int order() const { return order_; }
    double x_max() const { return cheb_.b(); }

private:
    int order_;
    ChebyshevPanels cheb_;
};

// Truncated Taylor series, c[j] = f^{(j)}(x0) / j!.
template <int N>
struct Jet {
    std::array<double, N> c{};

    static Jet constant(double v) {
        Jet r;
        r.c[0] = v;
        return r;
    }
    static Jet variable(double x0) {
        Jet r;
        r.c[0] = x0;
        if (N > 1) r.c[1] = 1.0;
        return r;
    }
    double derivative(int j) const {
        double f = 1.0;
        for (int i = 2; i <= j; ++i) f *= i;
        return c[j] * f;
    }
    friend Jet operator+(Jet a, const Jet& b) {
        for (int i = 0; i < N; ++i) a.c[i] += b.c[i];
        return a;
    }
    friend Jet operator-(Jet a, const Jet& b) {
        for (int i = 0; i < N; ++i) a.c[i] -= b.c[i];
        return a;
    }
    friend Jet operator*(double s, Jet a) {
        for (auto& v : a.c) v *= s;
        return a;
    }
    friend Jet operator+(double s, Jet a) {
        a.c[0] += s;
        return a;
    }
    friend Jet operator*(const Jet& a, const Jet& b) {
        Jet r;
        for (int i = 0; i < N; ++i)
            for (int j = 0; i + j < N; ++j) r.c[i + j] += a.c[i] * b.c[j];
        return r;
    }
    Jet reciprocal() const {
        Jet r;
        r.c[0] = 1.0 / c[0];
        for (int n = 1; n < N; ++n) {
            double s = 0.0;
            for (int j = 1; j <= n; ++j) s += c[j] * r.c[n - j];
            r.c[n] = -s * r.c[0];
        }
        return r;
    }
    friend Jet operator/(const Jet& a, const Jet& b) { return a * b.reciprocal(); }
    Jet exp() const {
        Jet r;
        r.c[0] = std::exp(c[0]);
        // r' = a' r
        for (int n = 1; n < N; ++n) {
            double s = 0.0;
            for (int j = 1; j <= n; ++j) s += j * c[j] * r.c[n - j];
            r.c[n] = s / n;
        }
        return r;
    }
};

// g(t) composed with a jet t, any order
template <int N>
Jet<N> ramp_jet(const Jet<N>& t) {
    const double t0 = t.c[0];
    if (t0 <= 0.0) return Jet<N>{};
    if (t0 >= 1.0) return Jet<N>::constant(1.0);
    const Jet<N> u = (1.0 + (-2.0) * t) / (t * (1.0 + (-1.0) * t));
    if (u.c[0] > 700.0) return Jet<N>{};
    if (u.c[0] < -700.0) return Jet<N>::constant(1.0);
    if (u.c[0] > 0.0) {
        const Jet<N> e = ((-1.0) * u).exp();
        return e / (1.0 + e);
    }
    return (1.0 + u.exp()).reciprocal();
}

// W composed with a jet x
template <int N>
Jet<N> bump_jet(const Jet<N>& x) {
    if (x.c[0] <= 0.5 || x.c[0] >= 3.0) return Jet<N>{};
    return ramp_jet(-1.0 + 2.0 * x) * ramp_jet(3.0 + (-1.0) * x);
}

constexpr int kBumpOrder = 6;
using BumpJet = Jet<kBumpOrder + 1>;

// W(x) = g(2x - 1) g(3 - x), g(t) = 1 / (1 + exp((1 - 2t) / (t (1 - t)))).
// Support [1/2, 3], W = 1 on [1, 2].
class BumpFunction {
public:
    static constexpr double lo = 0.5, hi = 3.0, plateau_lo = 1.0, plateau_hi = 2.0;
    static double value(double x);
    static BumpJet jet(double x);
    static double derivative(int j, double x) { return jet(x).derivative(j); }
    // B_j >= sup |W^{(j)}|, j <= 6: grid maximum times 1.02
    static const std::array<double, kBumpOrder + 1>& bounds();
    static double ramp(double t);
};

// x -> W(scale x + shift), scale > 0
struct AffineWindow {
    double scale = 1.0, shift = 0.0;

    static AffineWindow identity() { return {}; }
    // maps [lo, hi] onto the support [1/2, 3]
    static AffineWindow onto(double lo, double hi) {
        const double s = (BumpFunction::hi - BumpFunction::lo) / (hi - lo);
        return {s, BumpFunction::lo - s * lo};
    }
    double operator()(double x) const { return BumpFunction::value(scale * x + shift); }
    double lo() const { return (BumpFunction::lo - shift) / scale; }
    double hi() const { return (BumpFunction::hi - shift) / scale; }
    double derivative_bound(int j) const { return BumpFunction::bounds()[j] * std::pow(scale, j); }
};

}  // namespace momentlab::special
