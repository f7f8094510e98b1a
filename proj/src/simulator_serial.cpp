#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "dcqaoa/simulator.hpp"

namespace dcqaoa::sim::serial {

void apply_diagonal_phase(StateVector& state, const DiagonalOperator& op,
                          double gamma) {
  if (state.dim() != op.dim())
    throw std::invalid_argument("apply_diagonal_phase: dimension mismatch");
  for (std::size_t k = 0; k < state.dim(); ++k)
    state[k] *= Complex{std::cos(gamma * op[k]), -std::sin(gamma * op[k])};
}

void apply_rx_all(StateVector& state, double beta) {
  const double c = std::cos(beta);
  const double s = std::sin(beta);
  for (std::size_t q = 0; q < state.n_qubits(); ++q) {
    const std::size_t b = std::size_t{1} << q;
    for (std::size_t k = 0; k < state.dim(); ++k) {
      if (k & b) continue;
      const Complex a0 = state[k], a1 = state[k | b];
      state[k] = c * a0 - Complex{0.0, s} * a1;
      state[k | b] = c * a1 - Complex{0.0, s} * a0;
    }
  }
}

void apply_pauli_rotation(StateVector& state, const PauliMask& pauli,
                          double theta) {
  const std::uint64_t limit = std::uint64_t{1} << state.n_qubits();
  if (pauli.x_mask >= limit || pauli.z_mask >= limit)
    throw std::out_of_range("apply_pauli_rotation: qubit out of range");
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Complex y_phase{1.0, 0.0};
  for (int k = 0; k < pauli.y_count; ++k) y_phase *= Complex{0.0, 1.0};

  // (P psi)[k] = i^y (-1)^{popcount(m & z)} psi[m], m = k ^ x.
  std::vector<Complex> p_psi(state.dim());
  for (std::size_t k = 0; k < state.dim(); ++k) {
    const std::size_t m = k ^ pauli.x_mask;
    const double sign = (std::popcount(m & pauli.z_mask) & 1) ? -1.0 : 1.0;
    p_psi[k] = y_phase * sign * state[m];
  }
  for (std::size_t k = 0; k < state.dim(); ++k)
    state[k] = c * state[k] - Complex{0.0, s} * p_psi[k];
}

double expectation_diagonal(const StateVector& state,
                            const DiagonalOperator& op) {
  if (state.dim() != op.dim())
    throw std::invalid_argument("expectation_diagonal: dimension mismatch");
  double total = 0.0;
  for (std::size_t k = 0; k < state.dim(); ++k)
    total += op[k] * std::norm(state[k]);
  return std::clamp(total, op.min(), op.max());
}

}  // namespace dcqaoa::sim::serial
