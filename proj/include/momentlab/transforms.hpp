#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "momentlab/special.hpp"

namespace momentlab::special {

class UnsupportedKernel : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// i^k, applied exactly
struct QuarterTurn {
    int k = 0;
    cplx apply(double r) const {
        switch (((k % 4) + 4) % 4) {
            case 0: return {r, 0.0};
            case 1: return {0.0, r};
            case 2: return {-r, 0.0};
            default: return {0.0, -r};
        }
    }
};

enum class KernelType { BesselJ, HolomorphicPlus, HolomorphicMinus, MaassPlus, MaassMinus };

// kernel(x) = scale * phase * J_order(x), or identically zero
class Kernel {
public:
    static Kernel bessel(double nu);
    // J_+ = 2 pi i^k J_{k-1}, J_- = 0
    static Kernel holomorphic(int weight, int sign, double table_x_max = 0.0);
    // interface only, evaluation throws UnsupportedKernel
    static Kernel maass(double kappa, int sign);

    KernelType type() const { return type_; }
    bool vanishes() const { return type_ == KernelType::HolomorphicMinus; }
    double order() const { return order_; }
    double scale() const { return scale_; }
    QuarterTurn phase() const { return phase_; }
    // theta in the uniform bound 1 + x^{-theta}
    double theta() const { return -order_; }
    // real part before scale and phase
    double amplitude(double x) const;
    cplx operator()(double x) const { return phase_.apply(scale_ * amplitude(x)); }

private:
    KernelType type_ = KernelType::BesselJ;
    double order_ = 0.0;
    double scale_ = 1.0;
    QuarterTurn phase_{};
    std::shared_ptr<const BesselJTable> table_;
};

// F with support in [lo, hi] = [X, X + X1] and |F^{(j)}| << X2^{-j}
struct SmoothProfile {
    std::function<double(double)> f;
    double lo = 0, hi = 0;
    double X = 0, X1 = 0, X2 = 0;

    static SmoothProfile window(const AffineWindow& w);
    static SmoothProfile zero(double lo, double hi);
};

struct TransformResult {
    cplx value{};
    double error = 0.0;
    double envelope = 0.0;
    long evaluations = 0;
};

// X1 (1 + (Xy)^{-theta}) ((1 + Xy)^{-i/2} + (1 + X2^2 y / X)^{-i/2}), epsilon dropped
double hankel_envelope(double X, double X1, double X2, double y, double theta, int i);

// int F(x) kernel(4 pi sqrt(xy)) dx
TransformResult hankel_transform(const SmoothProfile& F, const Kernel& kernel, double y, double abs_tol = 1e-11);

// int W((bx - hq)/N) W(bx/M) kernel(4 pi sqrt(xy)) dx
TransformResult vring_pm(const Kernel& kernel, double b, double q, double M, double N, double y, double h,
                         double abs_tol = 1e-11);

// y -> int V(x) J_+(4 pi sqrt(xy)) dx for a fixed window, tabulated in t = sqrt(y).
// Inner integral: trapezoid in u = sqrt(x), step fixed by a halving check.
class HankelProfile {
public:
    HankelProfile(int weight, const AffineWindow& V, double y_max, bool parallel = true);

    cplx operator()(double y) const { return phase_.apply(2.0 * std::numbers::pi * real_part(y)); }
    // value divided by 2 pi i^k
    double real_part(double y) const { return cheb_(std::sqrt(y)); }
    // bound for |value| on [y, y_max]
    double sup_beyond(double y) const;
    double y_max() const { return t_max_ * t_max_; }
    QuarterTurn phase() const { return phase_; }
    const std::vector<double>& inner_nodes() const { return u_; }
    const std::vector<double>& inner_weights() const { return w_; }
    // change from halving the inner step at the probe points
    double halving_delta() const { return halving_delta_; }
    // direct evaluation of the inner sum, used by tests and the builder
    double inner(double t, const std::vector<double>& u, const std::vector<double>& w) const;

private:
    int weight_;
    AffineWindow V_;
    double t_max_;
    QuarterTurn phase_;
    std::shared_ptr<const BesselJTable> table_;
    std::vector<double> u_, w_;
    double halving_delta_ = 0.0;
    ChebyshevPanels cheb_;
    std::vector<double> suffix_bound_;
};

// hat W(xi) = int W(x) e(-x xi) dx
cplx fourier_transform(double xi, double abs_tol = 1e-13);
// transform of x -> W(s x + c)
cplx fourier_transform(const AffineWindow& w, double xi, double abs_tol = 1e-13);

// hat W at j * step for |j| <= count, filled once
class FourierGrid {
public:
    FourierGrid(double step, int count);
    cplx at(int j) const;
    double step() const { return step_; }
    int count() const { return count_; }

private:
    double step_;
    int count_;
    std::vector<cplx> values_;
};

}  // namespace momentlab::special
