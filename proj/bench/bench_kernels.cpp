#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "sament/kernels.hpp"

using namespace sament;

namespace {

std::vector<double> random_values(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<double> v(n);
  for (auto& x : v) x = g(rng);
  return v;
}

void BM_StepBankSerial(benchmark::State& st) {
  const std::size_t r = 32, len = 1024, P = static_cast<std::size_t>(st.range(0));
  const auto rows = random_values(r * len, 1);
  std::vector<double> out(r * P);
  for (auto _ : st) {
    kernels::step_bank_serial(rows, r, len, P, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_StepBankFft(benchmark::State& st) {
  const std::size_t r = 32, len = 1024, P = static_cast<std::size_t>(st.range(0));
  const auto rows = random_values(r * len, 1);
  std::vector<double> out(r * P);
  for (auto _ : st) {
    kernels::step_bank_fft(rows, r, len, P, out);
    benchmark::DoNotOptimize(out.data());
  }
}

struct ScanFixture {
  std::size_t configs = 64, atoms = 3, rows_n = 2048;
  std::vector<double> rows, gram, lin;
  kernels::ScanRequest req;

  ScanFixture() {
    rows = random_values(rows_n * atoms, 2);
    lin = random_values(configs * atoms, 3);
    gram.assign(configs * atoms * atoms, 0.0);
    for (std::size_t c = 0; c < configs; ++c)
      for (std::size_t a = 0; a < atoms; ++a) gram[(c * atoms + a) * atoms + a] = 1.0 + 0.1 * a;
    req.configs = configs;
    req.atoms = atoms;
    req.set_size = rows_n;
    req.row_count = rows_n;
    req.rows = rows;
    req.primary = {gram, lin, 1.0};
  }
};

void BM_ScanSerial(benchmark::State& st) {
  ScanFixture f;
  for (auto _ : st) benchmark::DoNotOptimize(kernels::scan_serial(f.req));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(f.configs * f.rows_n));
}

void BM_ScanParallel(benchmark::State& st) {
  ScanFixture f;
  for (auto _ : st) benchmark::DoNotOptimize(kernels::scan_parallel(f.req));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(f.configs * f.rows_n));
}

void BM_PairwiseSerial(benchmark::State& st) {
  const std::size_t m = static_cast<std::size_t>(st.range(0)), d = 512, n = 167;
  const auto pts = random_values(m * d, 4), proj = random_values(m * n, 5);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::pairwise_distortion_serial(pts, proj, m, d, n, 0.0));
}

void BM_PairwiseParallel(benchmark::State& st) {
  const std::size_t m = static_cast<std::size_t>(st.range(0)), d = 512, n = 167;
  const auto pts = random_values(m * d, 4), proj = random_values(m * n, 5);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::pairwise_distortion_parallel(pts, proj, m, d, n, 0.0));
}

}  // namespace

BENCHMARK(BM_StepBankSerial)->Arg(256)->Arg(1024);
BENCHMARK(BM_StepBankFft)->Arg(256)->Arg(1024)->Arg(16384);
BENCHMARK(BM_ScanSerial);
BENCHMARK(BM_ScanParallel);
BENCHMARK(BM_PairwiseSerial)->Arg(64)->Arg(256);
BENCHMARK(BM_PairwiseParallel)->Arg(64)->Arg(256);

BENCHMARK_MAIN();
