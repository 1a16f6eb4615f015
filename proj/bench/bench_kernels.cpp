#include <benchmark/benchmark.h>

#include "momentlab/kernels.hpp"
#include "momentlab/voronoi.hpp"

using namespace momentlab;

namespace {

void run(benchmark::State& state, kernels::Kernel k, kernels::Exec exec) {
    double sum = 0.0;
    for (auto _ : state) {
        sum += kernels::run(k, exec, 1).checksum;
        benchmark::DoNotOptimize(sum);
    }
}

}  // namespace

int main(int argc, char** argv) {
    // shared tables outside the timed region
    voronoi::shared_profile(12);
    forms::shared_delta(1 << 20);
    for (auto k : kernels::all()) {
        const std::string n = kernels::name(k);
        benchmark::RegisterBenchmark((n + "/serial").c_str(), run, k, kernels::Exec::Serial)
            ->Unit(benchmark::kMillisecond);
        benchmark::RegisterBenchmark((n + "/openmp").c_str(), run, k, kernels::Exec::Parallel)
            ->Unit(benchmark::kMillisecond);
    }
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}
