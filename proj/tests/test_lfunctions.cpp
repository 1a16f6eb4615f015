#include "doctest.h"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "momentlab/characters.hpp"
#include "momentlab/eigenforms.hpp"
#include "momentlab/lfunctions.hpp"

using namespace momentlab;
using lfun::cplx;
constexpr double kPi = std::numbers::pi;

namespace {

const forms::EigenformData& delta() {
    static const auto f = forms::shared_delta(500000);
    return *f;
}

const lfun::WeightFunction& afe_weight(int a) {
    static const auto v0 = lfun::WeightFunction::afe(delta(), 0);
    static const auto v1 = lfun::WeightFunction::afe(delta(), 1);
    return a == 0 ? v0 : v1;
}

}  // namespace

TEST_CASE("afe weight envelopes and refinement") {
    for (int a : {0, 1}) {
        const auto& V = afe_weight(a);
        CHECK(std::abs(V(1e-8) - 1.0) <= 0.01);
        for (double x : {1e-12, 1e-9, 1e-8, 1e-7}) CHECK(std::abs(V(x) - 1.0) <= 0.01);
        // even parity: the double pole at s = -1/2 leaves about 1.17 sqrt(x) log(1/x)
        const double r6 = std::abs(V(1e-6) - 1.0);
        CHECK(r6 <= (a == 0 ? 0.02 : 0.01));
        CHECK(std::abs(V(1e-10) - 1.0) < 1e-3);
        CHECK(std::abs(V(1e4)) <= 1e-10);
        CHECK(std::abs(V(1e5)) <= 1e-10);
        for (double x : {0.3, 1.0, 2.5})
            CHECK(std::abs(V.direct(x) - V.direct(x, 80.0, 0.025)) < 1e-9);
        // memo against direct
        std::mt19937 rng(a + 1);
        std::uniform_real_distribution<double> U(std::log(1e-11), std::log(9e5));
        double worst = 0.0;
        for (int i = 0; i < 400; ++i) {
            const double x = std::exp(U(rng));
            worst = std::max(worst, std::abs(V(x) - V.direct(x)));
        }
        CHECK(worst < 1e-9);
        const double xc = V.x_cut();
        CHECK(xc > 1.0);
        CHECK(xc < 100.0);
        CHECK(std::abs(V(xc * 1.01)) < 1e-12);
        // decreasing through the transition
        CHECK(V(0.1) > V(1.0));
        CHECK(V(1.0) > V(3.0));
    }
    CHECK(std::abs(afe_weight(0)(1.0) - afe_weight(1)(1.0)) > 1e-3);
    CHECK_THROWS_AS(afe_weight(0)(0.0), std::invalid_argument);
}

TEST_CASE("twisted weight matches the incomplete gamma closed form") {
    const auto W = lfun::WeightFunction::twisted(delta(), 0);
    for (double y : {1e-6, 0.01, 0.1, 0.5, 1.0, 2.0, 5.0})
        CHECK(std::abs(W(y) - boost::math::gamma_q(6.0, 2 * kPi * y)) < 1e-10);
}

TEST_CASE("root numbers follow the case split") {
    for (arith::u64 q = 3; q <= 60; ++q) {
        if (!arith::is_admissible(q)) continue;
        auto g = chars::build_group(q);
        for (auto chi : g.primitive_indices()) {
            const auto rn = lfun::root_numbers(g, chi, delta());
            CHECK(std::abs(std::abs(rn.eps_chi) - 1.0) < 1e-12);
            // eps(f, chi) = eps(f x chi) eps(conj chi)^2
            const auto rb = lfun::root_numbers(g, g.conjugate(chi), delta());
            const cplx combined = rn.eps_twist * rb.eps_dirichlet * rb.eps_dirichlet;
            CHECK(std::abs(combined - cplx(rn.eps_pair, 0.0)) < 1e-10);
            CHECK(rn.eps_pair == g.info(chi).parity);
        }
    }
}

TEST_CASE("hurwitz zeta") {
    CHECK(std::abs(lfun::hurwitz_zeta(2.0, 1.0) - kPi * kPi / 6) < 1e-14);
    CHECK(std::abs(lfun::hurwitz_zeta(0.5, 1.0) - (-1.46035450880958681289)) < 1e-13);
    CHECK(std::abs(lfun::hurwitz_zeta(0.5, 1.0 / 3) - (-0.11808332793422171909)) < 1e-13);
    // zeta(s, 1/2) = (2^s - 1) zeta(s)
    const cplx s(0.5, 14.0);
    CHECK(std::abs(lfun::hurwitz_zeta(s, 0.5) - (std::pow(2.0, s) - 1.0) * lfun::hurwitz_zeta(s, 1.0)) < 1e-12);
    CHECK(std::abs(lfun::hurwitz_zeta(0.5, 0.01, 50, 8) - lfun::hurwitz_zeta(0.5, 0.01, 100, 16)) < 1e-12);
    CHECK_THROWS_AS(lfun::hurwitz_zeta(1.0, 0.5), std::domain_error);
}

TEST_CASE("dirichlet L at 1/2") {
    auto g5 = chars::build_group(5);
    for (auto chi : g5.primitive_indices()) {
        const auto v = lfun::dirichlet_L_half(g5, chi);
        const auto w = lfun::dirichlet_L_half(g5, chi, 100, 16);
        CHECK(std::abs(v - w) < 1e-9);
        if (g5.conjugate(chi) == chi) {
            // quadratic character mod 5
            CHECK(std::abs(v.imag()) < 1e-10);
            CHECK(std::abs(v.real() - 0.231750947504015755883) < 1e-10);
        }
    }
    for (arith::u64 q = 3; q <= 40; ++q) {
        if (!arith::is_admissible(q)) continue;
        auto g = chars::build_group(q);
        for (auto chi : g.primitive_indices()) {
            const auto rn = lfun::root_numbers(g, chi, delta());
            const auto lhs = lfun::dirichlet_L_half(g, chi);
            const auto rhs = rn.eps_dirichlet * lfun::dirichlet_L_half(g, g.conjugate(chi));
            CHECK(std::abs(lhs - rhs) <= 1e-8);
        }
    }
    CHECK_THROWS_AS(lfun::dirichlet_L_half(g5, 0), std::invalid_argument);
    // deterministic
    CHECK(lfun::dirichlet_L_half(g5, 1) == lfun::dirichlet_L_half(g5, 1));
}

TEST_CASE("twisted L at 1/2") {
    for (arith::u64 q : {5ull, 7ull, 13ull, 21ull}) {
        auto g = chars::build_group(q);
        for (auto chi : g.primitive_indices()) {
            const auto v = lfun::twisted_L_half(g, chi, delta(), 1.0);
            // balance independence is the functional equation
            CHECK(std::abs(v - lfun::twisted_L_half(g, chi, delta(), 0.6)) < 1e-8);
            CHECK(std::abs(v - lfun::twisted_L_half(g, chi, delta(), 1.7)) < 1e-8);
            if (g.conjugate(chi) == chi) CHECK(std::abs(v.imag()) < 1e-8);
        }
    }
}

TEST_CASE("L(1, Delta) and zeta(2)") {
    CHECK(lfun::zeta_two() == kPi * kPi / 6);
    const auto a = lfun::L_one_f(delta(), 1e4);
    const auto b = lfun::L_one_f(delta(), 4e4);
    const auto c = lfun::L_one_f(delta(), 1.0);
    CHECK(a.value > 0.0);
    CHECK(std::abs(a.value - b.value) < 1e-8);
    CHECK(std::abs(a.value - c.value) < 1e-12);
    CHECK(std::abs(a.value - 0.8393455120319427) < 1e-12);
    CHECK(a.tail_bound < 1e-12);
    const auto m = lfun::L_one_mellin(delta());
    CHECK(std::abs(m.value - a.value) < 1e-11);
    CHECK(m.tail_bound < 1e-15);
    CHECK_THROWS_AS(lfun::L_one_f(forms::delta_coefficients(100), 1e4), std::out_of_range);
}

TEST_CASE("afe triple product against the oracle routes") {
    for (arith::u64 q : {5ull, 7ull, 13ull}) {
        auto g = chars::build_group(q);
        int used = 0;
        for (auto chi : g.primitive_indices()) {
            const auto rn = lfun::root_numbers(g, chi, delta());
            if (rn.eps_pair != 1) {
                CHECK_THROWS_AS(lfun::afe_triple_product(g, chi, delta(), afe_weight(1)), lfun::ParityVanishing);
                continue;
            }
            const auto& V = afe_weight(0);
            const auto afe = lfun::afe_triple_product(g, chi, delta(), V);
            const auto lb = lfun::dirichlet_L_half(g, g.conjugate(chi));
            const auto oracle = lfun::twisted_L_half(g, chi, delta()) * lb * lb;
            CHECK(std::abs(afe - oracle) <= 1e-6 * (1.0 + std::abs(oracle)));
            const auto afeb = lfun::afe_triple_product(g, g.conjugate(chi), delta(), V);
            CHECK(std::abs(afeb - std::conj(afe)) < 1e-12);
            ++used;
        }
        CHECK(used > 0);
    }
    auto g1 = chars::build_group(1);
    CHECK_THROWS_AS(lfun::afe_triple_product(g1, 0, delta(), afe_weight(0)), std::invalid_argument);
}

TEST_CASE("afe kernels agree") {
    const arith::u64 q = 11;
    auto g = chars::build_group(q);
    const auto& V = afe_weight(0);
    const auto S = lfun::afe_buckets(delta(), V, q, lfun::Exec::Serial);
    const auto P = lfun::afe_buckets(delta(), V, q, lfun::Exec::Parallel);
    for (arith::u64 r = 0; r < q; ++r) CHECK(std::abs(S.C[r] - P.C[r]) < 1e-12);
    CHECK(S.tail_estimate < 1e-6);
    for (auto chi : g.primitive_indices(1)) {
        const auto b = lfun::afe_from_buckets(S, g, chi);
        const auto d = lfun::afe_direct(delta(), V, g, chi);
        CHECK(std::abs(b - d) < 1e-10);
        const auto bs = lfun::afe_from_buckets(S, g, chi, -1);
        const auto ds = lfun::afe_direct(delta(), V, g, chi, -1);
        CHECK(std::abs(bs - ds) < 1e-10);
        CHECK(std::abs(b.imag()) < 1e-12);
    }
}
