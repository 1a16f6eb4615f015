#include "momentlab/kernels.hpp"

#include <chrono>
#include <random>
#include <stdexcept>

#include "momentlab/expsums.hpp"
#include "momentlab/voronoi.hpp"

namespace momentlab::kernels {

using arith::u64;

namespace {

std::shared_ptr<const forms::EigenformData> form(int size) { return forms::shared_delta(size ? 1 << 20 : 200000); }

double afe(Exec exec, int size) {
    const auto f = form(size);
    static const auto V = lfun::WeightFunction::afe(*forms::shared_delta(200000), 0);
    const auto B = lfun::afe_buckets(*f, V, size ? 101 : 13, exec);
    double s = 0.0;
    for (const auto& c : B.C) s += std::abs(c);
    return s;
}

double weil(Exec exec, int size) { return expsums::weil_certify(size ? 300 : 60, exec).max_ratio; }

double profile(Exec exec, int size) {
    const voronoi::HankelProfile H(12, size ? 4000.0 : 200.0, exec);
    double s = 0.0;
    for (double z = 0.5; z < H.z_max(); z *= 1.7) s += H(z);
    return s;
}

double dual(Exec exec, int size) {
    const auto f = form(size);
    const auto& H = voronoi::shared_profile(12);
    const u64 n = size ? 1000000 : 50000;
    return std::abs(voronoi::dual_sum(*f, H, H.z_max() / static_cast<double>(n + 1), n, 2, 5, exec));
}

double bilinear(Exec exec, int size) {
    const std::size_t A = size ? 3000 : 300;
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::vector<expsums::cplx> alpha(A), beta(A);
    for (auto& x : alpha) x = {U(rng), U(rng)};
    for (auto& x : beta) x = {U(rng), U(rng)};
    return std::abs(expsums::bilinear_incomplete(alpha, beta, 3, size ? 10007 : 1009, exec).value);
}

double aq(Exec exec, int size) {
    const auto f = form(size);
    const std::vector<u64> qs = size ? std::vector<u64>{1009, 4001, 10007} : std::vector<u64>{101, 211};
    const auto cells = expsums::thmAq_grid(qs, {0.5, 2.0, 8.0}, {0.5, 1.0, 4.0}, 1, 1, *f, exec);
    double s = 0.0;
    for (const auto& c : cells) s += c.value;
    return s;
}

}  // namespace

const std::vector<Kernel>& all() {
    static const std::vector<Kernel> k = {Kernel::AfeBuckets, Kernel::WeilScan, Kernel::HankelProfile,
                                          Kernel::DualSum,    Kernel::Bilinear, Kernel::AqGrid};
    return k;
}

std::string name(Kernel k) {
    switch (k) {
        case Kernel::AfeBuckets: return "afe_buckets";
        case Kernel::WeilScan: return "weil_scan";
        case Kernel::HankelProfile: return "hankel_profile";
        case Kernel::DualSum: return "dual_sum";
        case Kernel::Bilinear: return "bilinear";
        case Kernel::AqGrid: return "aq_grid";
    }
    throw std::invalid_argument("kernels: unknown kernel");
}

Outcome run(Kernel k, Exec exec, int size) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    switch (k) {
        case Kernel::AfeBuckets: o.checksum = afe(exec, size); break;
        case Kernel::WeilScan: o.checksum = weil(exec, size); break;
        case Kernel::HankelProfile: o.checksum = profile(exec, size); break;
        case Kernel::DualSum: o.checksum = dual(exec, size); break;
        case Kernel::Bilinear: o.checksum = bilinear(exec, size); break;
        case Kernel::AqGrid: o.checksum = aq(exec, size); break;
    }
    o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return o;
}

}  // namespace momentlab::kernels
