#include "doctest.h"

#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "momentlab/quadrature.hpp"
#include "momentlab/special.hpp"
#include "momentlab/transforms.hpp"

using namespace momentlab;
using special::cplx;
constexpr double kPi = std::numbers::pi;

namespace {

// Stirling at z + 60 in long double, shifted back
std::complex<long double> shifted_stirling(std::complex<long double> z) {
    const long double B[] = {1.0L / 6, -1.0L / 30, 1.0L / 42, -1.0L / 30, 5.0L / 66, -691.0L / 2730, 7.0L / 6};
    std::complex<long double> acc = 0;
    for (int k = 0; k < 60; ++k) acc += std::log(z + static_cast<long double>(k));
    const auto w = z + 60.0L;
    std::complex<long double> s = (w - 0.5L) * std::log(w) - w + 0.5L * std::log(2.0L * std::numbers::pi_v<long double>);
    for (int k = 1; k <= 7; ++k) s += B[k - 1] / (2.0L * k * (2.0L * k - 1)) / std::pow(w, 2 * k - 1);
    return s - acc;
}

double riemann(const std::function<double(double)>& f, double a, double b, long n) {
    const double h = (b - a) / n;
    double s = 0.0;
    for (long j = 0; j < n; ++j) s += f(a + (j + 0.5) * h);
    return s * h;
}

}  // namespace

TEST_CASE("adaptive quadrature") {
    auto r = quad::integrate([](double x) { return std::exp(x); }, 0.0, 1.0);
    CHECK(std::abs(r.value - (std::exp(1.0) - 1.0)) < 1e-14);
    auto s = quad::integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0, {1e-12, 0, 20000});
    CHECK(std::abs(s.value - 2.0 / 3.0) < 1e-11);
    quad::Options tight{1e-30, 0, 10};
    CHECK_THROWS_AS(quad::integrate([](double x) { return std::sin(1.0 / (x + 1e-9)); }, 0.0, 1.0, tight),
                    quad::QuadratureError);
}

TEST_CASE("log gamma") {
    using special::log_gamma;
    CHECK(std::abs(log_gamma(1.0)) < 1e-14);
    CHECK(std::abs(log_gamma(2.0)) < 1e-14);
    CHECK(std::abs(log_gamma(0.5) - std::log(std::sqrt(kPi))) < 1e-14);
    for (double x = 0.5; x < 80.0; x += 0.37) {
        const double ref = std::lgamma(x);
        CHECK(std::abs(log_gamma(x).real() - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
        CHECK(log_gamma(x).imag() == 0.0);
    }
    // |Gamma(1/2 + it)|^2 = pi / cosh(pi t)
    for (double t : {0.1, 1.0, 5.0, 17.3, 60.0}) {
        const double lhs = 2.0 * log_gamma(cplx(0.5, t)).real();
        const double rhs = std::log(kPi) - (kPi * t + std::log1p(std::exp(-2 * kPi * t)) - std::log(2.0));
        CHECK(std::abs(lhs - rhs) < 1e-12 * std::max(1.0, std::abs(rhs)));
    }
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> U(0.5, 30.0), V(-40.0, 40.0);
    for (int i = 0; i < 200; ++i) {
        const cplx z(U(rng), V(rng));
        const auto d = log_gamma(z + 1.0) - log_gamma(z) - std::log(z);
        CHECK(std::abs(d) < 1e-11 * std::max(1.0, std::abs(log_gamma(z))));
        const auto o = shifted_stirling(std::complex<long double>(z.real(), z.imag()));
        const cplx oc(static_cast<double>(o.real()), static_cast<double>(o.imag()));
        CHECK(std::abs(log_gamma(z) - oc) <= 1e-12 * std::max(1.0, std::abs(oc)));
    }
    const auto o = shifted_stirling({2.0L, 3.0L});
    CHECK(std::abs(log_gamma(cplx(2, 3)) - cplx(double(o.real()), double(o.imag()))) < 1e-13);
    // Gamma(-1/2) = Gamma(1/2) / (-1/2), and log(-1/2) carries +i pi
    CHECK(std::abs(log_gamma(-0.5) - cplx(std::log(2 * std::sqrt(kPi)), -kPi)) < 1e-13);
    CHECK_THROWS_AS(log_gamma(0.0), std::domain_error);
    CHECK_THROWS_AS(log_gamma(-3.0), std::domain_error);
    CHECK_NOTHROW(log_gamma(cplx(-3.0, 1e-3)));
}

TEST_CASE("bessel J against boost") {
    const double orders[] = {0.0, 0.5, 1.0, 2.3, 5.0, 11.0, 23.7, 40.0, 60.0};
    const double xs[] = {1e-6, 0.3, 1.0, 7.5, 11.9, 12.1, 20.0, 34.0, 36.0, 60.0, 121.0, 400.0, 1234.5, 3599.0, 3601.0,
                         9000.0, 1e5};
    double worst = 0.0;
    for (double nu : orders)
        for (double x : xs) {
            const double v = special::bessel_j(nu, x);
            const double ref = boost::math::cyl_bessel_j(nu, x);
            worst = std::max(worst, std::abs(v - ref));
            CHECK(std::abs(v) <= 1.0);
        }
    CHECK(worst < 1e-10);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> N(0.0, 60.0), X(0.0, 5000.0);
    for (int i = 0; i < 300; ++i) {
        const double nu = N(rng), x = X(rng);
        REQUIRE(std::abs(special::bessel_j(nu, x) - boost::math::cyl_bessel_j(nu, x)) < 1e-10);
    }
    CHECK(special::bessel_j(0.0, 0.0) == 1.0);
    CHECK(std::abs(special::bessel_j(0.0, 1e-300) - 1.0) < 1e-16);
    // leading term x^11 / (2^11 11!)
    const double x = 1e-3;
    CHECK(special::bessel_j(11.0, x) == doctest::Approx(std::pow(x, 11) / (2048.0 * 39916800.0)).epsilon(1e-7));
    CHECK_THROWS_AS(special::bessel_j(61.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(special::bessel_j(1.0, 2e6), std::domain_error);
    CHECK_THROWS_AS(special::bessel_j(-1.0, 1.0), std::domain_error);
}

TEST_CASE("bessel table") {
    special::BesselJTable t(11, 3000.0);
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> X(0.0, 3000.0);
    for (int i = 0; i < 2000; ++i) {
        const double x = X(rng);
        REQUIRE(std::abs(t(x) - special::bessel_j(11, x)) < 1e-13);
    }
    CHECK(std::abs(t(3500.0) - special::bessel_j(11, 3500.0)) == 0.0);
}

TEST_CASE("bump function") {
    using special::BumpFunction;
    CHECK(BumpFunction::value(0.5) == 0.0);
    CHECK(BumpFunction::value(0.2) == 0.0);
    CHECK(BumpFunction::value(3.0) == 0.0);
    CHECK(BumpFunction::value(7.0) == 0.0);
    for (double x = 1.0; x <= 2.0; x += 0.01) CHECK(BumpFunction::value(x) == 1.0);
    CHECK(BumpFunction::value(0.75) == doctest::Approx(0.5));
    CHECK(BumpFunction::value(2.5) == doctest::Approx(0.5));
    // integral = 1 + 1/4 + 1/2 since g(t) + g(1 - t) = 1
    const auto I = quad::integrate(BumpFunction::value, std::vector<double>{0.5, 1.0, 2.0, 3.0}, {1e-14, 0, 20000});
    CHECK(std::abs(I.value - 1.75) < 1e-13);

    const auto& B = BumpFunction::bounds();
    const int n = 10000;
    const double h = 2.5 / n;
    for (int j = 1; j <= special::kBumpOrder; ++j) {
        double fdmax = 0.0, worst = 0.0;
        for (int i = 1; i < n; ++i) {
            const double x = 0.5 + i * h, e = 1e-6;
            const double fd =
                (BumpFunction::jet(x + e).derivative(j - 1) - BumpFunction::jet(x - e).derivative(j - 1)) / (2 * e);
            fdmax = std::max(fdmax, std::abs(fd));
            worst = std::max(worst, std::abs(fd - BumpFunction::derivative(j, x)));
        }
        CHECK(fdmax <= 1.05 * B[j]);
        CHECK(worst <= 0.05 * B[j]);
    }
    CHECK(B[0] == doctest::Approx(1.02));
    auto w = special::AffineWindow::onto(10.0, 20.0);
    CHECK(w.lo() == doctest::Approx(10.0));
    CHECK(w.hi() == doctest::Approx(20.0));
    CHECK(w(12.0) == doctest::Approx(1.0));
}

TEST_CASE("hankel transform") {
    const auto J0 = special::Kernel::bessel(0.0);
    auto zero = special::SmoothProfile::zero(1.0, 4.0);
    CHECK(special::hankel_transform(zero, J0, 3.0).value == cplx(0, 0));

    // dense Riemann oracle, 1e6 nodes
    const double X = 10.0;
    auto F = special::SmoothProfile::window(special::AffineWindow::onto(X, 2 * X));
    for (double nu : {0.0, 11.0, 3.5}) {
        const auto K = special::Kernel::bessel(nu);
        const double y = 0.37;
        const auto r = special::hankel_transform(F, K, y);
        const double ref = riemann(
            [&](double x) { return F.f(x) * boost::math::cyl_bessel_j(nu, 4 * kPi * std::sqrt(x * y)); }, X, 2 * X,
            1000000);
        CHECK(std::abs(r.value.real() - ref) < 1e-8);
        CHECK(r.value.imag() == 0.0);
        CHECK(r.error < 1e-10);
        // halving the tolerance target
        const auto r2 = special::hankel_transform(F, K, y, 1e-14);
        CHECK(std::abs(r.value - r2.value) < 1e-10);
    }

    // decay past the cutoff 1 / min(X, X2^2 / X); the canonical W needs a multiple near 3000
    for (double Xs : {10.0, 40.0, 200.0}) {
        auto G = special::SmoothProfile::window(special::AffineWindow::onto(Xs, 2 * Xs));
        const double cutoff = 1.0 / std::min(G.X, G.X2 * G.X2 / G.X);
        const auto K = special::Kernel::holomorphic(12, 1);
        const auto r = special::hankel_transform(G, K, 3000.0 * cutoff);
        CHECK(std::abs(r.value) <= 1e-8);
        CHECK(std::abs(r.value) < std::abs(special::hankel_transform(G, K, 100.0 * cutoff).value));
    }

    // envelope with i = j = 0, constant 10
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double lo = 1.0 + 99.0 * U(rng), len = lo * (0.1 + 0.9 * U(rng));
        const double nu = std::floor(12.0 * U(rng));
        auto G = special::SmoothProfile::window(special::AffineWindow::onto(lo, lo + len));
        const double y = std::pow(10.0, -3.0 + 4.0 * U(rng));
        const auto r = special::hankel_transform(G, special::Kernel::bessel(nu), y);
        CHECK(std::abs(r.value) <= 10.0 * r.envelope);
    }
}

TEST_CASE("vring transform") {
    const auto plus = special::Kernel::holomorphic(12, 1), minus = special::Kernel::holomorphic(12, -1);
    CHECK(special::vring_pm(minus, 1, 1, 100, 100, 0.5, 3).value == cplx(0, 0));
    // hq > 3M: the two windows do not meet
    CHECK(special::vring_pm(plus, 1, 7, 100, 100, 0.5, 50).value == cplx(0, 0));
    CHECK(special::vring_pm(plus, 1, 7, 100, 100, 0.5, 50).evaluations == 0);
    CHECK_THROWS_AS(special::vring_pm(special::Kernel::maass(9.5, 1), 1, 1, 100, 100, 0.5, 3),
                    special::UnsupportedKernel);
    CHECK_THROWS_AS(special::vring_pm(plus, 0, 1, 100, 100, 0.5, 3), std::invalid_argument);

    // phase i^12 = 1, value real
    const auto r = special::vring_pm(plus, 1, 1, 100, 100, 0.01, 0.0);
    CHECK(r.value.imag() == 0.0);
    CHECK(r.value.real() != 0.0);

    struct Cfg {
        double b, q, M, N, h;
    };
    for (const Cfg& c : {Cfg{1, 1, 100, 100, 0}, Cfg{3, 5, 200, 150, 10}, Cfg{1, 2, 50, 400, -30},
                         Cfg{2, 3, 500, 300, 40}, Cfg{5, 1, 1000, 1000, 200}}) {
        const double y = 3000.0 * std::max(c.b / c.M, c.b * c.M / (c.N * c.N));
        const auto v = special::vring_pm(plus, c.b, c.q, c.M, c.N, y, c.h);
        CHECK(std::abs(v.value) <= 1e-8 * std::min(c.M, c.N) / c.b);
    }
}

TEST_CASE("hankel profile") {
    const auto V = special::AffineWindow::onto(10.0, 20.0);
    special::HankelProfile P(12, V, 2000.0);
    CHECK(P.halving_delta() < 1e-10);
    const auto K = special::Kernel::holomorphic(12, 1);
    auto F = special::SmoothProfile::window(V);
    for (double y : {0.0137, 0.2, 1.0, 3.3, 47.0, 300.0, 1999.0}) {
        const auto r = special::hankel_transform(F, K, y, 1e-13);
        CHECK(std::abs(P(y) - r.value) < 1e-10);
        CHECK(std::abs(P(y)) <= P.sup_beyond(y) * (1 + 1e-12));
    }
    CHECK(std::abs(P(0.0)) < 1e-14);
    special::HankelProfile S(12, V, 2000.0, false);
    for (double y : {0.5, 17.0, 1500.0}) CHECK(S(y) == P(y));
    CHECK_THROWS_AS(P(2500.0), std::out_of_range);
}

TEST_CASE("fourier transform of W") {
    CHECK(std::abs(special::fourier_transform(0.0) - cplx(1.75, 0.0)) < 1e-13);
    for (double xi : {0.3, -1.7, 4.0, 25.0}) {
        const auto v = special::fourier_transform(xi);
        const double re = riemann([&](double x) { return special::BumpFunction::value(x) * std::cos(2 * kPi * x * xi); },
                                  0.5, 3.0, 200000);
        const double im = riemann(
            [&](double x) { return -special::BumpFunction::value(x) * std::sin(2 * kPi * x * xi); }, 0.5, 3.0, 200000);
        CHECK(std::abs(v - cplx(re, im)) < 1e-11);
    }
    const auto w = special::AffineWindow{0.1, -0.7};
    const double xi = 0.23;
    const double re = riemann([&](double x) { return w(x) * std::cos(2 * kPi * x * xi); }, w.lo(), w.hi(), 400000);
    const double im = riemann([&](double x) { return -w(x) * std::sin(2 * kPi * x * xi); }, w.lo(), w.hi(), 400000);
    CHECK(std::abs(special::fourier_transform(w, xi) - cplx(re, im)) < 1e-10);
    special::FourierGrid g(0.25, 40);
    CHECK(g.at(-3) == std::conj(g.at(3)));
    CHECK(std::abs(g.at(8) - special::fourier_transform(2.0)) < 1e-15);
    CHECK_THROWS_AS(g.at(41), std::out_of_range);
}
