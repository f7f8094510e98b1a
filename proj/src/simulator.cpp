#include "dcqaoa/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dcqaoa::sim {

namespace {

// Below this many amplitudes the fork/join cost outweighs the loop body.
constexpr std::size_t kParallelThreshold = std::size_t{1} << 14;

// Fixed reduction block: partial sums do not depend on the thread count.
constexpr std::size_t kReductionBlock = std::size_t{1} << 12;

constexpr std::size_t kMaxLevels = 4096;

void require_match(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                std::to_string(a) + " vs " +
                                std::to_string(b) + ")");
  }
}

inline std::int64_t signed_dim(std::size_t n) {
  return static_cast<std::int64_t>(n);
}

// Insert a zero bit at position `bit` of j.
inline std::size_t insert_zero(std::size_t j, unsigned bit) {
  const std::size_t low = j & ((std::size_t{1} << bit) - 1);
  return ((j >> bit) << (bit + 1)) | low;
}

inline Complex i_pow(int k) {
  switch (k & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace

StateVector::StateVector(std::size_t n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw std::out_of_range("StateVector: qubit count " +
                            std::to_string(n_qubits) + " outside [1, " +
                            std::to_string(kMaxQubits) + "]");
  }
  amplitudes_.assign(std::size_t{1} << n_qubits, Complex{0.0, 0.0});
  amplitudes_[0] = 1.0;
}

double StateVector::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amplitudes_) s += std::norm(a);
  return s;
}

DiagonalOperator::DiagonalOperator(std::size_t n_qubits,
                                   std::vector<double> values)
    : n_qubits_(n_qubits), values_(std::move(values)) {
  if (n_qubits < 1 || n_qubits > kMaxQubits)
    throw std::out_of_range("DiagonalOperator: qubit count out of range");
  require_match(values_.size(), std::size_t{1} << n_qubits, "DiagonalOperator");
  const auto [lo, hi] = std::minmax_element(values_.begin(), values_.end());
  min_ = *lo;
  max_ = *hi;

  std::unordered_map<double, std::uint32_t> seen;
  std::vector<std::uint32_t> index(values_.size());
  for (std::size_t k = 0; k < values_.size(); ++k) {
    auto [it, inserted] =
        seen.try_emplace(values_[k], static_cast<std::uint32_t>(levels_.size()));
    if (inserted) {
      if (levels_.size() == kMaxLevels) {
        levels_.clear();
        return;
      }
      levels_.push_back(values_[k]);
    }
    index[k] = it->second;
  }
  level_index_ = std::move(index);
}

PauliMask PauliMask::from_letters(
    std::span<const std::pair<pauli::Letter, std::size_t>> letters) {
  PauliMask m;
  for (const auto& [l, q] : letters) {
    const std::uint64_t bit = std::uint64_t{1} << q;
    if ((m.x_mask | m.z_mask) & bit)
      throw std::invalid_argument("PauliMask: repeated qubit");
    switch (l) {
      case pauli::Letter::I: break;
      case pauli::Letter::X: m.x_mask |= bit; break;
      case pauli::Letter::Y:
        m.x_mask |= bit;
        m.z_mask |= bit;
        ++m.y_count;
        break;
      case pauli::Letter::Z: m.z_mask |= bit; break;
    }
  }
  return m;
}

PauliMask PauliMask::from_term(const pauli::PauliTerm& term) {
  std::vector<std::pair<pauli::Letter, std::size_t>> letters;
  for (std::size_t q = 0; q < term.n_qubits(); ++q)
    letters.emplace_back(term.letters()[q], q);
  return from_letters(letters);
}

StateVector init_plus_state(std::size_t n_qubits) {
  StateVector s(n_qubits);
  const double a = std::pow(2.0, -0.5 * static_cast<double>(n_qubits));
  std::fill(s.amplitudes().begin(), s.amplitudes().end(), Complex{a, 0.0});
  return s;
}

void apply_diagonal_phase(StateVector& state, const DiagonalOperator& op,
                          double gamma) {
  require_match(state.dim(), op.dim(), "apply_diagonal_phase");
  Complex* amp = state.amplitudes().data();
  const std::int64_t dim = signed_dim(state.dim());
  if (op.has_levels()) {
    const auto levels = op.levels();
    std::vector<Complex> phase(levels.size());
    for (std::size_t l = 0; l < levels.size(); ++l)
      phase[l] = {std::cos(gamma * levels[l]), -std::sin(gamma * levels[l])};
    const std::uint32_t* idx = op.level_index().data();
    const Complex* ph = phase.data();
#pragma omp parallel for schedule(static) if (state.dim() >= kParallelThreshold)
    for (std::int64_t k = 0; k < dim; ++k) amp[k] *= ph[idx[k]];
  } else {
    const double* v = op.values().data();
#pragma omp parallel for schedule(static) if (state.dim() >= kParallelThreshold)
    for (std::int64_t k = 0; k < dim; ++k)
      amp[k] *= Complex{std::cos(gamma * v[k]), -std::sin(gamma * v[k])};
  }
}

void apply_rx_all(StateVector& state, double beta) {
  const double c = std::cos(beta);
  const double s = std::sin(beta);
  const unsigned n = static_cast<unsigned>(state.n_qubits());
  Complex* amp = state.amplitudes().data();
  const bool parallel = state.dim() >= kParallelThreshold;

  // Two qubits per sweep; same arithmetic order as one sweep per qubit.
  unsigned q = 0;
  for (; q + 1 < n; q += 2) {
    const std::size_t b0 = std::size_t{1} << q;
    const std::size_t b1 = std::size_t{1} << (q + 1);
    const std::int64_t quarter = signed_dim(state.dim() >> 2);
#pragma omp parallel for schedule(static) if (parallel)
    for (std::int64_t j = 0; j < quarter; ++j) {
      const std::size_t k = insert_zero(insert_zero(static_cast<std::size_t>(j), q), q + 1);
      Complex a00 = amp[k], a01 = amp[k | b0], a10 = amp[k | b1],
              a11 = amp[k | b0 | b1];
      const Complex t00 = c * a00 - Complex{0.0, s} * a01;
      const Complex t01 = c * a01 - Complex{0.0, s} * a00;
      const Complex t10 = c * a10 - Complex{0.0, s} * a11;
      const Complex t11 = c * a11 - Complex{0.0, s} * a10;
      a00 = c * t00 - Complex{0.0, s} * t10;
      a10 = c * t10 - Complex{0.0, s} * t00;
      a01 = c * t01 - Complex{0.0, s} * t11;
      a11 = c * t11 - Complex{0.0, s} * t01;
      amp[k] = a00;
      amp[k | b0] = a01;
      amp[k | b1] = a10;
      amp[k | b0 | b1] = a11;
    }
  }
  if (q < n) {
    const std::size_t b = std::size_t{1} << q;
    const std::int64_t half = signed_dim(state.dim() >> 1);
#pragma omp parallel for schedule(static) if (parallel)
    for (std::int64_t j = 0; j < half; ++j) {
      const std::size_t k = insert_zero(static_cast<std::size_t>(j), q);
      const Complex a0 = amp[k], a1 = amp[k | b];
      amp[k] = c * a0 - Complex{0.0, s} * a1;
      amp[k | b] = c * a1 - Complex{0.0, s} * a0;
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
  Complex* amp = state.amplitudes().data();
  const bool parallel = state.dim() >= kParallelThreshold;
  // -i sin(theta) i^{y_count}, the sign of (-1)^{popcount} applied per index.
  const Complex off = Complex{0.0, -s} * i_pow(pauli.y_count);
  const std::uint64_t z = pauli.z_mask;

  if (pauli.x_mask == 0) {
    const Complex even = c + off;
    const Complex odd = c - off;
    const std::int64_t dim = signed_dim(state.dim());
#pragma omp parallel for schedule(static) if (parallel)
    for (std::int64_t k = 0; k < dim; ++k)
      amp[k] *= (std::popcount(static_cast<std::uint64_t>(k) & z) & 1) ? odd : even;
    return;
  }

  const std::uint64_t x = pauli.x_mask;
  const unsigned pivot = static_cast<unsigned>(std::countr_zero(x));
  const std::int64_t half = signed_dim(state.dim() >> 1);
#pragma omp parallel for schedule(static) if (parallel)
  for (std::int64_t j = 0; j < half; ++j) {
    const std::size_t k = insert_zero(static_cast<std::size_t>(j), pivot);
    const std::size_t m = k ^ x;
    const Complex ak = amp[k], am = amp[m];
    const Complex ph_k = (std::popcount(k & z) & 1) ? -off : off;
    const Complex ph_m = (std::popcount(m & z) & 1) ? -off : off;
    amp[k] = c * ak + ph_m * am;
    amp[m] = c * am + ph_k * ak;
  }
}

void apply_two_local_pauli_rotation(
    StateVector& state, std::pair<pauli::Letter, pauli::Letter> letters,
    std::pair<std::size_t, std::size_t> qubits, double theta) {
  const auto [i, j] = qubits;
  if (i >= state.n_qubits() || j >= state.n_qubits())
    throw std::out_of_range("two-local rotation: qubit index out of range");
  if (i == j) throw std::invalid_argument("two-local rotation: i == j");
  if (letters.first == pauli::Letter::I || letters.second == pauli::Letter::I)
    throw std::invalid_argument("two-local rotation: letters must be X, Y or Z");
  const std::pair<pauli::Letter, std::size_t> spec[] = {{letters.first, i},
                                                        {letters.second, j}};
  apply_pauli_rotation(state, PauliMask::from_letters(spec), theta);
}

void apply_single_qubit_pauli_rotation(StateVector& state, pauli::Letter letter,
                                       std::size_t qubit, double theta) {
  if (qubit >= state.n_qubits())
    throw std::out_of_range("single-qubit rotation: qubit index out of range");
  const std::pair<pauli::Letter, std::size_t> spec[] = {{letter, qubit}};
  apply_pauli_rotation(state, PauliMask::from_letters(spec), theta);
}

double expectation_diagonal(const StateVector& state,
                            const DiagonalOperator& op) {
  require_match(state.dim(), op.dim(), "expectation_diagonal");
  const Complex* amp = state.amplitudes().data();
  const double* v = op.values().data();
  const std::size_t n_blocks =
      (state.dim() + kReductionBlock - 1) / kReductionBlock;
  std::vector<double> partial(n_blocks, 0.0);
  const std::int64_t nb = signed_dim(n_blocks);
  const std::size_t dim = state.dim();
#pragma omp parallel for schedule(static) if (dim >= kParallelThreshold)
  for (std::int64_t b = 0; b < nb; ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kReductionBlock;
    const std::size_t hi = std::min(dim, lo + kReductionBlock);
    double s = 0.0;
    for (std::size_t k = lo; k < hi; ++k) s += v[k] * std::norm(amp[k]);
    partial[static_cast<std::size_t>(b)] = s;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return std::clamp(total, op.min(), op.max());
}

}  // namespace dcqaoa::sim
