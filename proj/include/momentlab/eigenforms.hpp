#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include "momentlab/arith.hpp"

namespace momentlab::forms {

using arith::i128;
using arith::i64;
using arith::u64;
using Rational = boost::rational<i64>;
using BigRational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

enum class FormKind { Holomorphic, Maass };

const char* to_string(FormKind k);

// Largest table accepted by delta_coefficients.
inline constexpr u64 kMaxDeltaTable = u64{1} << 22;

class EigenformData {
public:
    std::string name;
    FormKind kind = FormKind::Holomorphic;
    double weight = 12.0;  // holomorphic
    double kappa = 0.0;    // maass spectral parameter
    double theta = 0.0;
    std::optional<Rational> theta_exact;
    int epsilon = 1;

    u64 n_max() const { return lambda_.empty() ? 0 : lambda_.size() - 1; }
    // throws std::out_of_range beyond n_max
    double lambda(u64 n) const;
    const std::vector<double>& lambdas() const { return lambda_; }
    double operator[](u64 n) const { return lambda_[n]; }

    // Ramanujan tau values, present for the built-in form
    bool has_exact() const { return !tau_.empty(); }
    u64 exact_limit() const { return tau_.empty() ? 0 : tau_.size() - 1; }
    i128 tau_exact(u64 n) const;

    // lambda(p^j) from lambda(p) by the Hecke recursion; the explicit
    // extension used when a prime power lies past the table
    double hecke_prime_power(u64 p, int j) const;

    void set_lambdas(std::vector<double> lam) { lambda_ = std::move(lam); }
    void set_tau(std::vector<i128> tau) { tau_ = std::move(tau); }

private:
    std::vector<double> lambda_;  // index 0 unused
    std::vector<i128> tau_;
};

// Ramanujan Delta, weight 12, lambda(n) = tau(n) n^{-11/2}
EigenformData delta_coefficients(u64 n_max);

// process-wide Delta table, grown on demand
std::shared_ptr<const EigenformData> shared_delta(u64 n_max);

struct IngestOptions {
    std::optional<FormKind> kind;
    std::optional<double> parameter;  // weight or kappa
    std::optional<int> epsilon;
    std::optional<std::string> theta;
    double tolerance = 1e-6;
};

struct ValidationReport {
    double max_hecke_deviation = 0.0;
    u64 hecke_relations = 0;
    double max_ramanujan_ratio = 0.0;
};

// throws std::runtime_error on parse or validation failure
EigenformData ingest_coefficients(const std::filesystem::path& path, const IngestOptions& opts = {},
                                  ValidationReport* report = nullptr);
// resolves relative paths against MOMENTLAB_COEFF_DIR when set
std::filesystem::path resolve_coefficient_path(const std::string& spec);
void write_coefficients(const EigenformData& f, const std::filesystem::path& path, u64 n_max = 0);

ValidationReport validate(const EigenformData& f, double tolerance);

// exact checks for forms with tau data
struct ExactCheck {
    u64 checked = 0;
    u64 failures = 0;
    std::string first_failure;
};
// tau(m) tau(n) = sum_{d | (m,n)} d^11 tau(mn/d^2) for all mn <= limit
ExactCheck hecke_exact_check(const EigenformData& f, u64 limit);
// tau(n)^2 <= d(n)^2 n^11 for n <= limit
ExactCheck deligne_exact_check(const EigenformData& f, u64 limit);

struct VarpiEntry {
    u64 delta;
    double varpi_lambda;
    i64 varpi_tau;
};

struct VarpiTable {
    u64 q = 1;
    std::vector<VarpiEntry> entries;  // ascending delta
    const VarpiEntry* find(u64 delta) const;
};

VarpiTable varpi_table(const EigenformData& f, u64 q);

enum class Sequence { Hecke, Divisor };

inline constexpr u64 kMaxRemovalSupport = 10000;

// |sum_{(n,q)=1} a(n) F(n) - sum_delta varpi(delta,q) sum_n a(n) F(delta n)|
// with a = lambda or the divisor function; F[n-1] = F(n)
double coprime_removal_check(const EigenformData& f, u64 q, std::span<const double> F, Sequence seq);

// Real number sum_s c_s sqrt(s) with s squarefree and rational c_s.
struct SurdSum {
    std::map<u64, BigRational> coeff;
    bool is_zero() const;
    void add(u64 squarefree, const BigRational& c);
};

// Exact residual of the removal identity for F = indicator of [lo, hi].
// Hecke: residual = sum_N c_N N^{-11/2}; Divisor: integer coefficients.
SurdSum coprime_removal_exact(const EigenformData& f, u64 q, u64 lo, u64 hi, Sequence seq);

}  // namespace momentlab::forms
