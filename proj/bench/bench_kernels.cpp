// Serial reference kernels vs the OpenMP kernels, and one full circuit
// evaluation, over register sizes.

#include <benchmark/benchmark.h>

#include "dcqaoa/ansatz.hpp"
#include "dcqaoa/problems.hpp"
#include "dcqaoa/simulator.hpp"

using namespace dcqaoa;

namespace {

sim::DiagonalOperator sk_diagonal(std::size_t n) {
  return problems::cost_hamiltonian(problems::gen_sk(n, 1));
}

void DiagonalPhase(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto op = sk_diagonal(n);
  auto psi = sim::init_plus_state(n);
  for (auto _ : st) sim::apply_diagonal_phase(psi, op, 0.3);
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(psi.dim()));
}

void DiagonalPhaseSerial(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto op = sk_diagonal(n);
  auto psi = sim::init_plus_state(n);
  for (auto _ : st) sim::serial::apply_diagonal_phase(psi, op, 0.3);
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(psi.dim()));
}

void RxAll(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  auto psi = sim::init_plus_state(n);
  for (auto _ : st) sim::apply_rx_all(psi, 0.2);
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(psi.dim() * n));
}

void RxAllSerial(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  auto psi = sim::init_plus_state(n);
  for (auto _ : st) sim::serial::apply_rx_all(psi, 0.2);
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(psi.dim() * n));
}

sim::PauliMask zy_mask() {
  const std::pair<pauli::Letter, std::size_t> letters[] = {{pauli::Letter::Z, 0},
                                                           {pauli::Letter::Y, 3}};
  return sim::PauliMask::from_letters(letters);
}

void PauliRotation(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  auto psi = sim::init_plus_state(n);
  const auto mask = zy_mask();
  for (auto _ : st) sim::apply_pauli_rotation(psi, mask, 0.1);
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(psi.dim()));
}

void PauliRotationSerial(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  auto psi = sim::init_plus_state(n);
  const auto mask = zy_mask();
  for (auto _ : st) sim::serial::apply_pauli_rotation(psi, mask, 0.1);
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(psi.dim()));
}

void Expectation(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto op = sk_diagonal(n);
  const auto psi = sim::init_plus_state(n);
  for (auto _ : st) benchmark::DoNotOptimize(sim::expectation_diagonal(psi, op));
}

void ExpectationSerial(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto op = sk_diagonal(n);
  const auto psi = sim::init_plus_state(n);
  for (auto _ : st) benchmark::DoNotOptimize(sim::serial::expectation_diagonal(psi, op));
}

void CircuitCost(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto kind = problems::ProblemKind::MaxCut3Regular;
  const ansatz::CircuitEvaluator circuit(problems::generate(kind, n, 1),
                                         ansatz::make_config(kind, ansatz::Algorithm::DCQAOA, 2));
  const std::vector<double> params = {0.4, 0.3, 0.1, 0.7, 0.2, -0.1};
  for (auto _ : st) benchmark::DoNotOptimize(circuit.cost(params));
}

}  // namespace

#define KERNEL_SIZES DenseRange(10, 20, 2)->Unit(benchmark::kMicrosecond)
BENCHMARK(DiagonalPhase)->KERNEL_SIZES;
BENCHMARK(DiagonalPhaseSerial)->KERNEL_SIZES;
BENCHMARK(RxAll)->KERNEL_SIZES;
BENCHMARK(RxAllSerial)->KERNEL_SIZES;
BENCHMARK(PauliRotation)->KERNEL_SIZES;
BENCHMARK(PauliRotationSerial)->KERNEL_SIZES;
BENCHMARK(Expectation)->KERNEL_SIZES;
BENCHMARK(ExpectationSerial)->KERNEL_SIZES;
BENCHMARK(CircuitCost)->KERNEL_SIZES;
BENCHMARK_MAIN();
