#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dcqaoa::pauli {

using Complex = std::complex<double>;

enum class Letter : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char to_char(Letter l);
Letter letter_from_char(char c);

/**
 * A coefficient times a tensor product of single-qubit Paulis.
 *
 * letters[q] acts on qubit q. Products of two terms are again a single term,
 * with the phase in {+1, -1, +i, -i} accumulated into the coefficient.
 */
class PauliTerm {
 public:
  PauliTerm(std::vector<Letter> letters, Complex coefficient = 1.0);

  /// Parses "XIZ" style strings; character q acts on qubit q.
  static PauliTerm from_string(std::string_view letters,
                               Complex coefficient = 1.0);

  /// Single letter on `qubit`, identity elsewhere.
  static PauliTerm single(std::size_t n_qubits, std::size_t qubit, Letter l,
                          Complex coefficient = 1.0);
  static PauliTerm pair(std::size_t n_qubits, std::size_t i, Letter li,
                        std::size_t j, Letter lj, Complex coefficient = 1.0);

  std::size_t n_qubits() const { return letters_.size(); }
  const std::vector<Letter>& letters() const { return letters_; }
  Complex coefficient() const { return coefficient_; }
  void set_coefficient(Complex c) { coefficient_ = c; }

  /// Number of non-identity letters.
  std::size_t locality() const;
  bool is_diagonal() const;
  std::string letter_string() const;

  /// Non-identity letters in ascending qubit order, e.g. Z on qubit 1 and
  /// Y on qubit 4 gives "ZY". Orientation is kept: "ZY" != "YZ".
  std::string pattern() const;

  /// True when the letter strings (not coefficients) commute.
  bool commutes_with(const PauliTerm& other) const;

 private:
  std::vector<Letter> letters_;
  Complex coefficient_;
};

/// Operator product a*b including the accumulated phase.
PauliTerm multiply(const PauliTerm& a, const PauliTerm& b);

/**
 * Linear combination of Pauli terms in canonical form: sorted by letter
 * string, duplicates merged, and terms with |coefficient| < kDropTolerance
 * removed.
 */
class PauliSum {
 public:
  static constexpr double kDropTolerance = 1e-12;

  explicit PauliSum(std::size_t n_qubits) : n_qubits_(n_qubits) {}
  PauliSum(std::size_t n_qubits, std::vector<PauliTerm> terms);

  std::size_t n_qubits() const { return n_qubits_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  PauliSum& operator+=(const PauliSum& other);
  PauliSum& operator-=(const PauliSum& other);
  PauliSum& operator*=(Complex scale);

  friend PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }
  friend PauliSum operator-(PauliSum a, const PauliSum& b) { return a -= b; }
  friend PauliSum operator*(Complex s, PauliSum a) { return a *= s; }

  friend bool operator==(const PauliSum& a, const PauliSum& b);

  std::string to_string() const;

 private:
  void canonicalize();

  std::size_t n_qubits_;
  std::vector<PauliTerm> terms_;
};

/// ab - ba, canonical. Exactly empty when every term pair commutes.
PauliSum commutator(const PauliSum& a, const PauliSum& b);

/// Sum_i X_i.
PauliSum transverse_field_mixer(std::size_t n_qubits);

/// Sum_{(i,j,w)} w Z_i Z_j + Sum_i h_i Z_i (fields may be empty).
struct Coupling {
  std::size_t i;
  std::size_t j;
  double weight;
};
PauliSum ising_hamiltonian(std::size_t n_qubits,
                           const std::vector<Coupling>& couplings,
                           const std::vector<double>& fields = {});

/**
 * Counterdiabatic operator pool from the nested-commutator expansion of the
 * adiabatic gauge potential along H(l) = (1-l) h_mixer + l h_cost.
 *
 * For every order k = 1..order the (2k-1)-fold nested commutator
 * [H, [H, ... [H, dH/dl]]] is expanded with l kept as a formal symbol.
 * A Pauli pattern is kept when any coefficient of its l-polynomial is
 * nonzero and its locality is <= locality_cap. Returns the distinct
 * patterns (see PauliTerm::pattern), sorted.
 */
std::vector<std::string> nested_commutator_pool(const PauliSum& h_mixer,
                                                const PauliSum& h_cost,
                                                int order, int locality_cap);

}  // namespace dcqaoa::pauli
