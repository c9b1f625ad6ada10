#include <benchmark/benchmark.h>

#include "sovlab/fusion.hpp"
#include "sovlab/gl12.hpp"
#include "sovlab/hubbard.hpp"
#include "sovlab/sov_basis.hpp"

using namespace sovlab;

namespace {

const GradingSignature kS12(1, 2);

ChainParams chain(int n, bool khat = false) {
    std::vector<cplx> xi;
    for (int a = 0; a < n; ++a) xi.push_back(cplx(0.31 * a - 0.2, 0.17 * a + 0.05));
    Mat k = Mat::Zero(3, 3);
    k(0, 0) = khat ? cplx(0.0) : cplx(1.2, 0.3);
    k(1, 1) = cplx(-0.4, 0.6);
    k(1, 2) = 0.35;
    k(2, 1) = cplx(0.1, -0.2);
    k(2, 2) = cplx(0.8, -0.5);
    return make_chain(kS12, cplx(0.55, 0.2), xi, validate_twist(k, kS12));
}

void BM_Transfer(benchmark::State& st) {
    const auto p = chain(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(transfer(p, cplx(0.3, 0.4)).data.data());
}
BENCHMARK(BM_Transfer)->DenseRange(1, 4);

void BM_FusedColumn(benchmark::State& st) {
    const auto p = chain(static_cast<int>(st.range(0)));
    for (auto _ : st) {
        TransferTower tower(p);
        benchmark::DoNotOptimize(tower.column(3, cplx(0.3, 0.4)).data());
    }
}
BENCHMARK(BM_FusedColumn)->DenseRange(1, 3);

void BM_SovBasis(benchmark::State& st) {
    const auto p = chain(static_cast<int>(st.range(0)));
    const auto src = default_source_covector(p);
    for (auto _ : st) benchmark::DoNotOptimize(build_sov_basis(p, src).sigma_min);
}
BENCHMARK(BM_SovBasis)->DenseRange(1, 3);

void BM_SpectrumHomotopy(benchmark::State& st) {
    const auto p = chain(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(solve_spectrum(p, SpectrumMethod::homotopy).complete);
}
BENCHMARK(BM_SpectrumHomotopy)->DenseRange(1, 2)->Unit(benchmark::kMillisecond);

void BM_SpectrumCubic(benchmark::State& st) {
    const auto p = chain(static_cast<int>(st.range(0)), true);
    for (auto _ : st) benchmark::DoNotOptimize(solve_spectrum(p, SpectrumMethod::cubic).complete);
}
BENCHMARK(BM_SpectrumCubic)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

void BM_ShastryR(benchmark::State& st) {
    const cplx eta(0.0, -1.2);
    for (auto _ : st) benchmark::DoNotOptimize(shastry_r(cplx(0.3, 0.1), cplx(-0.2, 0.25), eta).data());
}
BENCHMARK(BM_ShastryR);

void BM_HubbardTransfer(benchmark::State& st) {
    HubbardParams p;
    p.sites = static_cast<int>(st.range(0));
    p.eta = cplx(0.0, -1.2);
    for (int a = 0; a < p.sites; ++a) p.xi.push_back(cplx(0.2 + 0.3 * a, 0.1));
    p.family = 2;
    p.alpha = cplx(1.1, 0.2);
    p.beta = cplx(-0.5, 0.4);
    p.gamma = cplx(0.7, -0.3);
    for (auto _ : st) benchmark::DoNotOptimize(hubbard_transfer(p, cplx(0.41, -0.13)).data());
}
BENCHMARK(BM_HubbardTransfer)->DenseRange(1, 3);

}  // namespace

BENCHMARK_MAIN();
