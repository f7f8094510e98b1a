#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "dcqaoa/pauli.hpp"

namespace dcqaoa::sim {

using Complex = std::complex<double>;

inline constexpr std::size_t kMaxQubits = 24;

/// Dense 2^n amplitude vector. Qubit q is bit q of the basis index
/// (qubit 0 is the least-significant bit).
class StateVector {
 public:
  explicit StateVector(std::size_t n_qubits);

  std::size_t n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return amplitudes_.size(); }

  std::span<Complex> amplitudes() { return amplitudes_; }
  std::span<const Complex> amplitudes() const { return amplitudes_; }
  Complex& operator[](std::size_t k) { return amplitudes_[k]; }
  const Complex& operator[](std::size_t k) const { return amplitudes_[k]; }

  double norm_squared() const;

 private:
  std::size_t n_qubits_;
  std::vector<Complex> amplitudes_;
};

/**
 * Real diagonal operator, one value per computational basis state.
 *
 * When the diagonal takes few distinct values (integer-weighted cost
 * functions) a level table is kept so phase kernels evaluate one sincos
 * per level instead of one per amplitude.
 */
class DiagonalOperator {
 public:
  DiagonalOperator(std::size_t n_qubits, std::vector<double> values);

  std::size_t n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t k) const { return values_[k]; }
  double min() const { return min_; }
  double max() const { return max_; }

  bool has_levels() const { return !levels_.empty(); }
  std::span<const double> levels() const { return levels_; }
  std::span<const std::uint32_t> level_index() const { return level_index_; }

 private:
  std::size_t n_qubits_;
  std::vector<double> values_;
  std::vector<double> levels_;
  std::vector<std::uint32_t> level_index_;
  double min_ = 0.0;
  double max_ = 0.0;
};

/// A unit-coefficient Pauli string in bitmask form:
/// P|m> = i^{y_count} (-1)^{popcount(m & z_mask)} |m ^ x_mask>.
struct PauliMask {
  std::uint64_t x_mask = 0;
  std::uint64_t z_mask = 0;
  int y_count = 0;

  static PauliMask from_letters(std::span<const std::pair<pauli::Letter, std::size_t>> letters);
  static PauliMask from_term(const pauli::PauliTerm& term);
};

StateVector init_plus_state(std::size_t n_qubits);

/// amplitude_k <- exp(-i gamma values_k) amplitude_k.
void apply_diagonal_phase(StateVector& state, const DiagonalOperator& op,
                          double gamma);

/// exp(-i beta X) on every qubit.
void apply_rx_all(StateVector& state, double beta);

/// exp(-i theta P) = cos(theta) I - i sin(theta) P for a Pauli string P.
void apply_pauli_rotation(StateVector& state, const PauliMask& pauli,
                          double theta);

/// exp(-i theta sigma^a_i sigma^b_j); letters from {X, Y, Z}, i != j.
void apply_two_local_pauli_rotation(StateVector& state,
                                    std::pair<pauli::Letter, pauli::Letter> letters,
                                    std::pair<std::size_t, std::size_t> qubits,
                                    double theta);

/// exp(-i theta sigma^a_q).
void apply_single_qubit_pauli_rotation(StateVector& state, pauli::Letter letter,
                                       std::size_t qubit, double theta);

/// Sum_k values_k |amplitude_k|^2, clamped into [min, max] of the diagonal.
double expectation_diagonal(const StateVector& state, const DiagonalOperator& op);

/// Single-threaded reference kernels. One amplitude pass per gate, one
/// sincos per amplitude, a plain left-to-right reduction. Kept for tests and
/// the kernel benchmark; the OpenMP kernels above must agree with them.
namespace serial {

void apply_diagonal_phase(StateVector& state, const DiagonalOperator& op,
                          double gamma);
void apply_rx_all(StateVector& state, double beta);
void apply_pauli_rotation(StateVector& state, const PauliMask& pauli,
                          double theta);
double expectation_diagonal(const StateVector& state, const DiagonalOperator& op);

}  // namespace serial

}  // namespace dcqaoa::sim
