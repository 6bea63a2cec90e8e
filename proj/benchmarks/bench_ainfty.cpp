#include "ainfty/contraction.hpp"
#include "ainfty/examples.hpp"
#include "ainfty/strictify.hpp"

#include <benchmark/benchmark.h>

using namespace ainfty;
namespace ex = ainfty::examples;

namespace {

StructurePtr share(Structure s) { return std::make_shared<const Structure>(std::move(s)); }

Structure transported(const Ring& r) {
    std::mt19937_64 rng(17);
    return ex::transport(ex::dual_numbers(r), rng, 4);
}

}  // namespace

static void BM_StasheffLiteral(benchmark::State& state) {
    const Structure s = transported(Ring::Q());
    const int arity = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(check_stasheff(s, arity).ok);
}
BENCHMARK(BM_StasheffLiteral)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

static void BM_StasheffShifted(benchmark::State& state) {
    const Structure s = transported(Ring::Q());
    const int arity = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(check_stasheff_shifted(s, arity).ok);
}
BENCHMARK(BM_StasheffShifted)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

static void BM_BarSquare(benchmark::State& state) {
    const Structure s = ex::m3_example(Ring::Fp(5));
    const int len = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(check_bar(s, len).ok);
}
BENCHMARK(BM_BarSquare)->DenseRange(3, 6)->Unit(benchmark::kMillisecond);

static void BM_PieceHomotopy(benchmark::State& state) {
    std::mt19937_64 rng(3);
    const Ring r = Ring::Fp(5);
    Cobar c({share(ex::random_dg(rng, r, 1, 2)), share(ex::random_dg(rng, r, 1, 2))});
    PieceHomotopy h(c);
    const int total = static_cast<int>(state.range(0));
    std::vector<CobarWord> words;
    for (int m = 0; m <= total; ++m)
        for (const CobarWord& w : c.basis({0, 0}, {0, 0}, {m, total - m})) words.push_back(w);
    for (auto _ : state)
        for (const CobarWord& w : words) benchmark::DoNotOptimize(h(w).empty());
    state.counters["words"] = static_cast<double>(words.size());
}
BENCHMARK(BM_PieceHomotopy)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

static void BM_EtaCertificate(benchmark::State& state) {
    auto d = share(ex::dual_numbers(Ring::Q()));
    const int len = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(eta_certificate(d, 0, 0, len).target.size());
}
BENCHMARK(BM_EtaCertificate)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

static void BM_VerifyCertificate(benchmark::State& state) {
    auto d = share(ex::dual_numbers(Ring::Q()));
    const ContractionCertificate cert = eta_certificate(d, 0, 0, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(verify_certificate(cert).ok);
}
BENCHMARK(BM_VerifyCertificate)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

static void BM_StrictifyZeroFunctor(benchmark::State& state) {
    const Ring r = Ring::Q();
    auto k = share(ex::ground(r));
    auto b = share(ex::endomorphisms(r, {ex::contractible(r)}));
    Functor z;
    z.source = k;
    z.target = b;
    z.obj_map = {0};
    z.strict = true;
    SplitUnitWitness w;
    w.retraction[0].add(k->quiver.hom(0, 0).front(), Elem::one(r));
    const int arity = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(strictify_functor(z, w, {}, arity).chain.size());
}
BENCHMARK(BM_StrictifyZeroFunctor)->DenseRange(2, 5)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
