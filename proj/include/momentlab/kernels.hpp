#pragma once

#include <string>
#include <vector>

#include "momentlab/lfunctions.hpp"

namespace momentlab::kernels {

using lfun::Exec;

// Hot loops that exist in a serial reference form and an OpenMP form.
enum class Kernel {
    AfeBuckets,     // residue buckets of lambda(n) d-convolution times V
    WeilScan,       // Kloosterman sums for every c against the sample grid
    HankelProfile,  // Chebyshev nodes of the Voronoi transform
    DualSum,        // dual side of the Voronoi identity
    Bilinear,       // incomplete Kloosterman bilinear form
    AqGrid,         // shifted convolution cells
};

const std::vector<Kernel>& all();
std::string name(Kernel k);

struct Outcome {
    double checksum = 0.0;  // comparable between Serial and Parallel
    double seconds = 0.0;
};

// size 0 is the test size, 1 the benchmark size
Outcome run(Kernel k, Exec exec, int size = 0);

}  // namespace momentlab::kernels
