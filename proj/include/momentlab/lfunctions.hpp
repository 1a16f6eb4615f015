#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "momentlab/characters.hpp"
#include "momentlab/eigenforms.hpp"

namespace momentlab::lfun {

using arith::u64;
using chars::cplx;
using chars::u32;

enum class Exec { Serial, Parallel };

// (1/2 pi i) int_{(c)} G(s) x^{-s} ds / s with G(0) = 1, trapezoid on the vertical line.
// c = 2 for x >= 1; for x < 1 the line sits at c = -1/4 and the residue 1 is added.
class WeightFunction {
public:
    using LogRatio = std::function<cplx(cplx)>;
    struct Options {
        double T = 40.0;
        double h = 0.05;
        double x_lo = 1e-12, x_hi = 1e6;
        double du = 0.004;  // memo step in log x
        bool memo = true;
    };

    WeightFunction(LogRatio log_g, int parity, const Options& opt, Exec exec = Exec::Parallel);

    // V_{f,a}: ratio L_inf(1/2+s, f x chi) L_inf(1/2+s, chi)^2 over its value at s = 0
    static WeightFunction afe(const forms::EigenformData& f, int parity, const Options& opt,
                              Exec exec = Exec::Parallel);
    static WeightFunction afe(const forms::EigenformData& f, int parity) { return afe(f, parity, Options{}); }
    // single twisted L(1/2, f x chi), G(s) = L_inf(1/2+s, f x chi) / L_inf(1/2, f x chi)
    static WeightFunction twisted(const forms::EigenformData& f, int parity, const Options& opt,
                                  Exec exec = Exec::Parallel);
    static WeightFunction twisted(const forms::EigenformData& f, int parity) {
        return twisted(f, parity, Options{});
    }

    // memo with cubic interpolation in log x, direct evaluation off the grid
    double operator()(double x) const;
    double direct(double x) const;
    // refinement oracle with other contour parameters
    double direct(double x, double T, double h) const;
    int parity() const { return parity_; }
    // smallest grid point beyond which |V| stays below level
    double x_cut(double level = 1e-12) const;
    cplx log_ratio(cplx s) const { return log_g_(s); }

private:
    double line_sum(double x, double c, const std::vector<cplx>& a) const;

    LogRatio log_g_;
    int parity_;
    Options opt_;
    std::vector<cplx> right_, left_;  // G(s_j) / s_j at t_j = j h, j >= 0
    double u0_ = 0.0;
    std::vector<double> memo_;
};

struct RootNumbers {
    cplx eps_chi;        // normalized Gauss sum
    cplx eps_dirichlet;  // i^{-a} eps_chi
    cplx eps_twist;      // root number of L(s, f x chi)
    int eps_pair = 1;    // chi(-1) eps(f) holomorphic, eps(f) Maass
};

RootNumbers root_numbers(const chars::CharacterGroup& g, u32 chi, const forms::EigenformData& f);

// Euler-Maclaurin with `shift` direct terms and `bernoulli` correction terms (<= 16)
cplx hurwitz_zeta(cplx s, double alpha, int shift = 50, int bernoulli = 8);

// q^{-1/2} sum_a chi(a) zeta(1/2, a/q); principal characters rejected
cplx dirichlet_L_half(const chars::CharacterGroup& g, u32 chi, int shift = 50, int bernoulli = 8);

// L(1/2, f x chi) from a single smoothed AFE of conductor q^2, split at n ~ q / balance
cplx twisted_L_half(const chars::CharacterGroup& g, u32 chi, const forms::EigenformData& f,
                    const WeightFunction& W, double balance = 1.0);
cplx twisted_L_half(const chars::CharacterGroup& g, u32 chi, const forms::EigenformData& f, double balance = 1.0);

struct LOne {
    double value = 0.0;
    double tail_bound = 0.0;
    u64 terms = 0;
};

// L(1,f) through the incomplete-gamma functional equation, split at n ~ X
LOne L_one_f(const forms::EigenformData& f, double X = 1e4);
// L(1,f) for either kind: both halves of the functional equation as contour
// weights on Re s = 2, gamma ratios from the archimedean factor of f
LOne L_one_mellin(const forms::EigenformData& f);
double zeta_two();

// C(r) = sum_{m n^{-1} = r (q)} lambda(m) d(n) (mn)^{-1/2} V(mn/q^2), (mn, q) = 1, mn <= n_cut
struct AfeBuckets {
    u64 q = 0;
    u64 n_cut = 0;
    std::vector<double> C;
    double tail_estimate = 0.0;
};

AfeBuckets afe_buckets(const forms::EigenformData& f, const WeightFunction& V, u64 q, Exec exec = Exec::Parallel);
// sum_r C(r) (chi(r) + sign conj chi(r))
cplx afe_from_buckets(const AfeBuckets& B, const chars::CharacterGroup& g, u32 chi, int sign = 1);
// direct double sum, serial reference
cplx afe_direct(const forms::EigenformData& f, const WeightFunction& V, const chars::CharacterGroup& g, u32 chi,
                int sign = 1);

class ParityVanishing : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// checks q > 1, chi primitive, eps(f, chi) = +1 and the parity of V
cplx afe_triple_product(const chars::CharacterGroup& g, u32 chi, const forms::EigenformData& f,
                        const WeightFunction& V);

}  // namespace momentlab::lfun
