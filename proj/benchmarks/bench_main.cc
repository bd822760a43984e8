// Copyright 2026 The bosloc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdint>

#include <benchmark/benchmark.h>

#include "bosloc/eigensolver.h"
#include "bosloc/fock_oracle.h"
#include "bosloc/grid.h"
#include "bosloc/hamiltonian.h"
#include "bosloc/potential.h"

namespace {

using namespace bosloc;

PotentialField disorder(const Grid& g) {
  RandomPotentialSpec s;
  s.seed = 7;
  return sample_random_potential(s, g, 0);
}

void BM_SampleField(benchmark::State& state) {
  const Grid g = grid_with_resolution(1, static_cast<double>(state.range(0)), 16);
  RandomPotentialSpec s;
  s.seed = 7;
  std::uint64_t r = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_random_potential(s, g, r++));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.size()));
}
BENCHMARK(BM_SampleField)->Arg(64)->Arg(256)->Arg(1024);

void eigen_bench(benchmark::State& state, SolverMethod method) {
  const Grid g = grid_with_resolution(1, static_cast<double>(state.range(0)), 16);
  const auto op = assemble_hamiltonian(g, disorder(g));
  EigenOptions opts;
  opts.method = method;
  const auto m = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(lowest_eigenpairs(op, m, 1e-9, opts));
}

void BM_DenseEigen(benchmark::State& state) { eigen_bench(state, SolverMethod::kDense); }
void BM_IterativeEigen(benchmark::State& state) { eigen_bench(state, SolverMethod::kIterative); }
BENCHMARK(BM_DenseEigen)->Args({64, 16})->Args({256, 64})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_IterativeEigen)->Args({64, 16})->Args({256, 64})->Unit(benchmark::kMillisecond);

void BM_OracleEnumeration(benchmark::State& state) {
  DiagonalModelSpec s;
  for (int i = 0; i < state.range(0); ++i) s.energies.push_back(0.5 + 0.25 * i);
  s.beta = 2.0;
  s.lambda = 0.5;
  s.volume = 4.0;
  s.n_max = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_gibbs(s));
}
BENCHMARK(BM_OracleEnumeration)->Args({2, 60})->Args({3, 40})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
