#pragma once

#include <boost/rational.hpp>
#include <complex>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "momentlab/characters.hpp"
#include "momentlab/eigenforms.hpp"
#include "momentlab/lfunctions.hpp"

namespace momentlab::moments {

using arith::u64;
using chars::cplx;
using chars::u32;

class InvalidQuery : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// q admissible (q > 2, q != 2 mod 4), 1 <= a, b <= q, (a, b) = (ab, q) = 1
struct MomentQuery {
    u64 q = 0;
    u64 a = 1, b = 1;
};

void validate(const MomentQuery& Q);

struct MainTerm {
    double c_f = 0.0;
    double c_ab = 0.0, c_ba = 0.0;
    double euler = 0.0;          // prod_{p | qab} (1 - lambda(p)/p + 1/p^2)^2 (1 - 1/p^2)^{-1}
    double euler_printed = 0.0;  // prod_{p | qab} (1 - lambda(p)/p + 1/p^2) (1 - 1/p^2)^{-2}
    double L1 = 0.0;
    double theorem = 0.0;    // c_f E (c_ab + c_ba) / sqrt(ab) L(1,f)^2 / zeta(2)
    double corollary = 0.0;  // same with (c_ab + c_ba) / (2 sqrt(ab)), i.e. 1 at a = b = 1
    double theorem_printed = 0.0;  // theorem with euler_printed, diagnostic only
};

struct MomentReport {
    u64 q = 0, a = 1, b = 1;
    std::string form;
    cplx brute;  // M_{f,E}(q; a, b)
    cplx m_even, m_odd;
    MainTerm main;
    double ratio_theorem = 0.0, ratio_corollary = 0.0;
    u64 chars_used = 0;
    u64 chars_skipped = 0;  // eps(f, chi) = -1, reported in the diagnostic component only
    double seconds = 0.0;
};

struct CabResult {
    double value = 0.0;
    double tail_bound = 0.0;
    u64 depth = 0;
    u64 terms = 0;
};

// sum over a1 | a^inf, b1 | b^inf of lambda(a a1 b1) d(b a1 b1) / (a1 b1), truncated to
// m = a1 b1 whose prime-power components are all <= depth;
// the tail is majorized by |lambda(n)| <= d(n) n^theta
CabResult c_ab_truncated(u64 a, u64 b, const forms::EigenformData& f, u64 depth);
// doubles depth until the tail bound is below tol
CabResult c_ab(u64 a, u64 b, const forms::EigenformData& f, double tol = 1e-10);
// Euler product over p | ab, each local series summed to convergence
double c_ab_product(u64 a, u64 b, const forms::EigenformData& f);

double euler_factor(const forms::EigenformData& f, u64 p);
double euler_factor_printed(const forms::EigenformData& f, u64 p);

enum class Orthogonality { Divisor, Enumerated };

struct ParityPair {
    cplx even, odd;
    cplx at(int sigma) const { return sigma == 1 ? even : odd; }
};

// Per-character AFE values for one modulus
struct CharacterValues {
    u64 q = 0;
    chars::CharacterGroup group;
    std::vector<u32> index;
    std::vector<int> parity;
    std::vector<int> sign;  // eps(f, chi)
    std::vector<cplx> value;
};

class MomentEngine {
public:
    explicit MomentEngine(std::shared_ptr<const forms::EigenformData> f, lfun::Exec exec = lfun::Exec::Parallel);

    const forms::EigenformData& form() const { return *f_; }
    // V_{f, sigma}: parity 0 for even characters, 1 for odd
    const lfun::WeightFunction& weight(int sigma) const { return sigma == 1 ? v_even_ : v_odd_; }
    double L_one() const { return L1_; }
    lfun::Exec exec() const { return exec_; }

    // cached for the most recent q; not thread safe
    const CharacterValues& character_values(u64 q) const;

    MomentReport brute(const MomentQuery& Q) const;
    // 2 M_sigma = M^s(a, b) + eps M^s(b, a) over (m, n) pairs and congruences mod d | q,
    // twist chi(conj(a) b) as in brute
    ParityPair divisor_route(const MomentQuery& Q, Orthogonality mode = Orthogonality::Divisor) const;
    // pairs with b m = a n only, first congruence
    ParityPair divisor_route_diagonal(const MomentQuery& Q) const;
    // sum_{(n,q)=1} lambda(an) d(bn) / (sqrt(ab) n) V(ab n^2 / q^2)
    double diagonal(const MomentQuery& Q, int sigma) const;
    MainTerm main_term(const MomentQuery& Q) const;

private:
    std::shared_ptr<const forms::EigenformData> f_;
    lfun::Exec exec_;
    lfun::WeightFunction v_even_, v_odd_;
    double L1_ = 0.0;
    mutable std::optional<CharacterValues> cache_;
};

MomentReport brute_moment(const MomentQuery& Q, std::shared_ptr<const forms::EigenformData> f);

struct SweepFailure {
    u64 q;
    std::string message;
};

struct BlockStat {
    u64 lo, hi;
    std::size_t count;
    double median_theorem, median_corollary;
};

struct SweepSummary {
    std::size_t rows = 0, failures = 0;
    std::vector<BlockStat> blocks;  // dyadic in q
    double bottom_theorem = 0, top_theorem = 0;
    double bottom_corollary = 0, top_corollary = 0;
    double bottom_printed = 0, top_printed = 0;
    bool theorem_convergent = false, corollary_convergent = false;
    std::string winner;  // "theorem", "corollary" or "none"
    double fitted_exponent = 0.0;  // slope of log|brute - main| against log q, top half of the range
    double fit_intercept = 0.0;
    std::size_t fit_points = 0;
};

struct SweepResult {
    std::vector<MomentReport> rows;  // sorted by q
    std::vector<SweepFailure> failures;
    SweepSummary summary;
};

SweepResult sweep(const std::vector<u64>& q_list, u64 a, u64 b, const MomentEngine& engine);
SweepSummary summarize(const std::vector<MomentReport>& rows, std::size_t failures = 0);

void write_csv_header(std::ostream& os);
void write_csv_row(std::ostream& os, const MomentReport& r, int digits = 12);
void write_jsonl_row(std::ostream& os, const MomentReport& r, int digits = 12);
std::string summary_json(const SweepSummary& s);

using Rational = boost::rational<arith::i64>;

class ExponentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct ExponentBudget {
    Rational theta, alpha, beta;
    Rational first;       // -1/20 + 3 alpha / 10
    Rational second;      // -(1 - 2 theta)/(22 + 16 theta) + beta (3 + 2 theta)/(11 + 8 theta)
    Rational q_exponent;  // power saving: -max(first, second)
    Rational eta;         // min((1 - 2 theta)/(12 + 12 theta), (1 - 2 theta - (6 + 4 theta) beta)/(22 + 16 theta))
    Rational b_exponent;  // (3 + 2 theta)/(11 + 8 theta)
};

ExponentBudget error_exponent(Rational theta, Rational alpha, Rational beta);
// "7/64", "0", "-3/2"
Rational parse_rational(const std::string& s);

}  // namespace momentlab::moments
