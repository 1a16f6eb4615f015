#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <vector>

#include "momentlab/arith.hpp"
#include "momentlab/eigenforms.hpp"
#include "momentlab/lfunctions.hpp"
#include "momentlab/special.hpp"

namespace momentlab::expsums {

using arith::i64;
using arith::u64;
using cplx = std::complex<double>;
using lfun::Exec;

inline constexpr u64 kMaxKloostermanModulus = 1000000;

// Inverses and phase table for one modulus, shared by many (m, n)
class KloostermanTable {
public:
    explicit KloostermanTable(u64 c);
    u64 modulus() const { return c_; }
    // phases grouped by residue so that S(m,n) and S(n,m) see identical counts
    cplx sum(i64 m, i64 n) const;

private:
    u64 c_;
    std::vector<u64> units_, inv_;
    std::vector<double> cos_, sin_;
};

cplx kloosterman_complex(i64 m, i64 n, u64 c);
double kloosterman(i64 m, i64 n, u64 c);

// e(n conj(u) / v) S(m conj(v), n; u w) for the cusp 1/u of Gamma_0(uv)
cplx kloosterman_cusp(i64 m, i64 n, u64 u, u64 v, u64 w);

// d(c) (m, n, c)^{1/2} c^{1/2}
double weil_bound(i64 m, i64 n, u64 c);

struct WeilReport {
    u64 c_max = 0;
    u64 checked = 0;
    u64 violations = 0;
    double max_ratio = 0.0;
    i64 worst_m = 0, worst_n = 0;
    u64 worst_c = 0;
};

class WeilViolation : public std::logic_error {
public:
    WeilViolation(const std::string& what, WeilReport r) : std::logic_error(what), report(r) {}
    WeilReport report;
};

// fixed 20 x 20 sample grid of (m, n)
const std::array<i64, 20>& weil_grid();
// every c <= c_max against the grid; throws WeilViolation on any violation
WeilReport weil_certify(u64 c_max, Exec exec = Exec::Parallel);

// W(bm/M) W(an/N), windows from the canonical bump through an affine change
struct ConvolutionQuery {
    u64 a = 1, b = 1;
    double M = 1, N = 1;
    u64 q = 1;
    int sign = 1;  // +1: bm = an (q), -1: bm = -an (q)
    special::AffineWindow window{};
};

class BudgetExceeded : public std::invalid_argument {
public:
    BudgetExceeded(const std::string& what, double pairs) : std::invalid_argument(what), pairs(pairs) {}
    double pairs;
};

inline constexpr double kPairBudget = 1e7;

// m in (M/2b, 3M/b), n in (N/2a, 3N/a) for the canonical window
struct Ranges {
    u64 m_lo, m_hi, n_lo, n_hi;
    double pairs() const;
};
Ranges ranges(const ConvolutionQuery& Q);

// no (m, n) in the supports can satisfy the congruence with bm != an
bool support_precluded(const ConvolutionQuery& Q);

struct AqResult {
    double value = 0.0;
    u64 solutions = 0;  // congruence solutions inside the supports
};

// sum over bm = sign an (q), bm != an of lambda(m) d(n) W(bm/M) W(an/N)
AqResult shifted_conv_Aq(const ConvolutionQuery& Q, const forms::EigenformData& f);
// naive double loop over the box, reference for the congruence walk
AqResult shifted_conv_Aq_naive(const ConvolutionQuery& Q, const forms::EigenformData& f);

struct AqBound {
    std::array<double, 4> terms{};
    double eps = 0.0;  // (log q)^2
    double total = 0.0;
};
// bound with (M, N) taken as (max, min)
AqBound thmAq_bound(const ConvolutionQuery& Q);
double thmAq_ratio(const ConvolutionQuery& Q, const forms::EigenformData& f);

struct AqCell {
    u64 q;
    double M, N;
    int sign;
    double value, bound, ratio;
    u64 solutions;
    bool precluded;
};
// every (q, M, N, sign) combination, cells in parallel when exec is Parallel
std::vector<AqCell> thmAq_grid(const std::vector<u64>& qs, const std::vector<double>& m_factors,
                               const std::vector<double>& n_factors, u64 a, u64 b, const forms::EigenformData& f,
                               Exec exec = Exec::Parallel);

enum class CoprimeFilter { Coprime, All, Complement };

// E_{M,N} with windows W(m/M) W(n/N), both signs, bm != an
double emn_brute(double M, double N, u64 a, u64 b, u64 q, const forms::EigenformData& f,
                 CoprimeFilter filter = CoprimeFilter::Coprime);

struct TrivialBounds {
    double A, B;
};
TrivialBounds trivial_bounds(double M, double N, u64 a, u64 b, u64 q, double theta);

struct BilinearResult {
    cplx value;
    double bound;
    double ratio;
};
// sum_{a <= A} alpha_a |sum_{b <= B, (b,q)=1} beta_b e(c a conj(b) / q)|; alpha, beta indexed from 1
BilinearResult bilinear_incomplete(const std::vector<cplx>& alpha, const std::vector<cplx>& beta, u64 c, u64 q,
                                   Exec exec = Exec::Parallel);

}  // namespace momentlab::expsums
