#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <vector>

#include "momentlab/arith.hpp"
#include "momentlab/eigenforms.hpp"
#include "momentlab/lfunctions.hpp"
#include "momentlab/special.hpp"

namespace momentlab::voronoi {

using arith::i64;
using arith::u64;
using cplx = std::complex<double>;
using lfun::Exec;

inline constexpr double kProfileZ = 3e4;

// H(z) = 2 pi i^k int W(u) J_{k-1}(4 pi sqrt(z u)) du for the canonical bump W,
// so that V(x) = W(x / X) has transform X H(X y).
// Tabulated in s = sqrt(z), where the oscillation is uniform.
class HankelProfile {
public:
    explicit HankelProfile(int weight, double z_max = kProfileZ, Exec exec = Exec::Parallel);

    // trapezoid in v = sqrt(u); points = 0 picks a count from the oscillation
    static double direct(int weight, double z, int points = 0);

    double operator()(double z) const;
    double z_max() const { return z_max_; }
    int weight() const { return weight_; }

private:
    int weight_;
    double z_max_;
    special::ChebyshevPanels cheb_;
};

// |H(z)| <= min_j 4 pi c_L c^{-j/2 - 1/6} int |g_j(v)| v^{2/3} dv, c = 16 pi^2 z,
// from j integrations by parts against x^{nu+1} J_{nu+1}; g_0(v) = W(v^2),
// g_{j+1} = -(g_j' - (nu + j) g_j / v), and c_L = 0.7858 the Landau constant in |J_mu(x)| <= c_L x^{-1/3}
class DecayBound {
public:
    static constexpr int kMaxSteps = 16;
    explicit DecayBound(int weight);
    double operator()(double z) const;
    int best_steps(double z) const;
    // sum over n > x0 of (log n + 2) B(s n), the divisor-bound tail beyond any coefficient table
    double divisor_tail(double s, double x0) const;
    double integral(int j) const { return log_I_[j]; }  // log of the j-th integral

private:
    std::array<double, kMaxSteps + 1> log_I_{};
    double log_at(int j, double z) const;
};

const DecayBound& shared_decay(int weight);

// built once per weight with the default range
const HankelProfile& shared_profile(int weight);

// sum_{(n,q)=1} lambda(n) W(n/X) e(bn/d) against its dual
struct VoronoiCase {
    i64 b = 0;
    u64 d = 1;
    u64 q = 1;
    double X = 10;
    double tail_tol = 1e-8;
    double safety = 10;              // certificate is safety times the estimated tail
    double truncation_scale = 1.0;   // multiplies every dual cutoff, for the doubling check
    int dual_sign = -1;              // phase e(dual_sign conj(delta' b) n / d')
    bool reverse = false;            // sum delta and n in descending order
};

class TailCertificateFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct DeltaTerm {
    u64 delta, delta_prime, d_prime;
    double varpi;
    u64 n_cut;
    double tail;  // certified, safety factor included
    cplx value;
};

struct RhsResult {
    cplx value;
    double tail_certificate = 0.0;
    u64 terms = 0;
    std::vector<DeltaTerm> deltas;
};

struct VoronoiResult {
    VoronoiCase c;
    cplx lhs, rhs;
    double residual = 0.0;
    double tail_certificate = 0.0;
    u64 lhs_terms = 0, rhs_terms = 0;
    double seconds = 0.0;
};

void validate(const VoronoiCase& c, const forms::EigenformData& f);

cplx voronoi_lhs(const VoronoiCase& c, const forms::EigenformData& f);
RhsResult voronoi_rhs(const VoronoiCase& c, const forms::EigenformData& f, Exec exec = Exec::Parallel);
VoronoiResult voronoi_check(const VoronoiCase& c, const forms::EigenformData& f, Exec exec = Exec::Parallel);

// largest n any dual sum of the case needs, before running it
u64 required_table(const VoronoiCase& c, const forms::EigenformData& f);

// sum_{n <= n_cut} lambda(n) H(scale n) e(h n / m)
cplx dual_sum(const forms::EigenformData& f, const HankelProfile& H, double scale, u64 n_cut, u64 h, u64 m,
              Exec exec = Exec::Parallel, bool reverse = false);

// d <= 5 with (b, d) = 1, q in {1, 2, 3, 6}, X in {10, 20, 40}
std::vector<VoronoiCase> default_grid();
// cases in parallel, each case serial inside
std::vector<VoronoiResult> run_grid(const std::vector<VoronoiCase>& cases, const forms::EigenformData& f,
                                    Exec exec = Exec::Parallel);

}  // namespace momentlab::voronoi
