// Serial reference vs OpenMP kernels, plus the two heaviest library paths.
#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "parastat/fockspace.hpp"
#include "parastat/kernels.hpp"
#include "parastat/spinchain.hpp"

using namespace parastat;

namespace {

CMatrix random_tensors(Eigen::Index rows, Eigen::Index cols) {
  std::mt19937 rng(1);
  std::normal_distribution<double> g;
  CMatrix x(rows, cols);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = cplx(g(rng), g(rng));
  return x;
}

// args: d, n, columns
void BM_TwoSlotSerial(benchmark::State& st) {
  const int d = static_cast<int>(st.range(0)), n = static_cast<int>(st.range(1));
  const CMatrix op = builtin(Builtin::ex4, d).matrix();
  const CMatrix x = random_tensors(static_cast<Eigen::Index>(std::pow(d, n)), st.range(2));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::serial::apply_two_slot(op, d, n, n / 2, x));
}

void BM_TwoSlotParallel(benchmark::State& st) {
  const int d = static_cast<int>(st.range(0)), n = static_cast<int>(st.range(1));
  const CMatrix op = builtin(Builtin::ex4, d).matrix();
  const CMatrix x = random_tensors(static_cast<Eigen::Index>(std::pow(d, n)), st.range(2));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::apply_two_slot(op, d, n, n / 2, x));
}

std::vector<SparseOp> site_ops(int sites) {
  const LocalOps ops = build_local_ops(builtin(Builtin::ex4, 3));
  std::vector<SparseOp> out;
  for (int s = 0; s < sites; ++s) out.push_back(CMatrix(s % 2 ? ops.S(0, 1) : ops.y_plus[1]).sparseView());
  return out;
}

void BM_KronChainSerial(benchmark::State& st) {
  const auto ops = site_ops(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::serial::sparse_kron_chain(ops));
}

void BM_KronChainParallel(benchmark::State& st) {
  const auto ops = site_ops(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::sparse_kron_chain(ops));
}

void BM_BuildBasis(benchmark::State& st) {
  const RMatrix r = builtin(Builtin::ex4, 3);
  for (auto _ : st) benchmark::DoNotOptimize(build_basis(r, 4, static_cast<int>(st.range(0))));
}

void BM_ChainHamiltonian(benchmark::State& st) {
  const RMatrix r = builtin(Builtin::ex4, 3);
  const int sites = static_cast<int>(st.range(0));
  const SpinChainSpec spec =
      SpinChainSpec::make(r, sites, std::vector<double>(sites - 1, 0.7), std::vector<double>(sites, 0.1));
  const LocalOps ops = build_local_ops(r);
  for (auto _ : st) benchmark::DoNotOptimize(build_hamiltonian_spin(spec, ops));
}

}  // namespace

BENCHMARK(BM_TwoSlotSerial)->Args({3, 6, 16})->Args({5, 5, 16})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TwoSlotParallel)->Args({3, 6, 16})->Args({5, 5, 16})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KronChainSerial)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KronChainParallel)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BuildBasis)->Arg(2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ChainHamiltonian)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
