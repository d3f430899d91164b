#include "bvx/bratteli.hpp"
#include "bvx/extension.hpp"
#include "bvx/ifs.hpp"
#include "bvx/vershik.hpp"

#include <benchmark/benchmark.h>

using namespace bvx;

namespace {

void BM_VershikSuccessor(benchmark::State& state) {
    auto d = make_odometer(3);
    PathPoint x = min_path_point(d, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto s = successor(d, x);
        x = s ? std::move(*s) : min_path_point(d, static_cast<int>(state.range(0)));
        benchmark::DoNotOptimize(x.prefix.edges.data());
    }
}
BENCHMARK(BM_VershikSuccessor)->Arg(4)->Arg(16);

void BM_ExtendedStepExact(benchmark::State& state) {
    LabeledSystem ls = auto_label(make_odometer(3), preset("interval2"));
    FinitePath prefix = path_from_ranks(ls.diagram, std::vector<int>{0});
    PathPoint base = make_path_point(ls.diagram, prefix, make_id_tail(ls.diagram, ls.labeling, prefix));
    ExtendedPoint p = exact_point(ls.diagram, ls.labeling, base,
                                  similitude_point({Rational(BigInt(1), BigInt(2))}));
    for (auto _ : state) {
        p = extended_step(ls.diagram, p, ls.labeling);
        benchmark::DoNotOptimize(p.split_depth);
    }
}
BENCHMARK(BM_ExtendedStepExact);

void BM_ExtendedStepBounded(benchmark::State& state) {
    LabeledSystem ls = auto_label(make_odometer(3), preset("cube2(2)"));
    ExtendedPoint p = bounded_point(ls.diagram, ls.labeling, min_path_point(ls.diagram, 4));
    for (auto _ : state) {
        p = extended_step(ls.diagram, p, ls.labeling);
        benchmark::DoNotOptimize(p.base.prefix.edges.data());
    }
}
BENCHMARK(BM_ExtendedStepBounded);

void BM_CylinderMeasure(benchmark::State& state) {
    auto d = make_odometer(3);
    Cylinder c{extreme_path(d, Extreme::Min, static_cast<int>(state.range(0)))};
    for (auto _ : state) {
        auto m = cylinder_measure(d, c);
        benchmark::DoNotOptimize(m.value.num());
    }
}
BENCHMARK(BM_CylinderMeasure)->Arg(2)->Arg(8);

void BM_AttractorSample(benchmark::State& state) {
    auto sys = preset("carpet");
    for (auto _ : state) {
        auto boxes = attractor_sample(sys, static_cast<int>(state.range(0)));
        benchmark::DoNotOptimize(boxes.size());
    }
}
BENCHMARK(BM_AttractorSample)->Arg(1)->Arg(2)->Arg(3);

void BM_CoverCheck(benchmark::State& state) {
    auto sys = preset("cube2(2)");
    for (auto _ : state) {
        bool covered = cover_check_all(sys);
        benchmark::DoNotOptimize(covered);
    }
}
BENCHMARK(BM_CoverCheck);

}  // namespace

BENCHMARK_MAIN();
