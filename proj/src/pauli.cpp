#include "dcqaoa/pauli.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace dcqaoa::pauli {

namespace {

// Product of two single-qubit letters: result letter and power of i.
// With X=1, Y=2, Z=3 the product letter is a^b, and XY=iZ, YZ=iX, ZX=iY.
struct LetterProduct {
  Letter letter;
  int i_power;
};

LetterProduct multiply_letters(Letter a, Letter b) {
  const auto ua = static_cast<unsigned>(a);
  const auto ub = static_cast<unsigned>(b);
  const Letter out = static_cast<Letter>(ua ^ ub);
  if (ua == 0 || ub == 0 || ua == ub) return {out, 0};
  return {out, ((ub + 3 - ua) % 3 == 1) ? 1 : 3};
}

Complex i_pow(int k) {
  switch (k & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) +
                                ": qubit count mismatch (" +
                                std::to_string(a) + " vs " +
                                std::to_string(b) + ")");
  }
}

// Lexicographic order on (letters, re, im) of the canonical term lists.
bool sum_less_equal(const PauliSum& a, const PauliSum& b) {
  const auto& ta = a.terms();
  const auto& tb = b.terms();
  const std::size_t m = std::min(ta.size(), tb.size());
  for (std::size_t k = 0; k < m; ++k) {
    if (ta[k].letters() != tb[k].letters())
      return ta[k].letters() < tb[k].letters();
    const Complex ca = ta[k].coefficient();
    const Complex cb = tb[k].coefficient();
    if (ca.real() != cb.real()) return ca.real() < cb.real();
    if (ca.imag() != cb.imag()) return ca.imag() < cb.imag();
  }
  return ta.size() <= tb.size();
}

PauliSum commutator_direct(const PauliSum& a, const PauliSum& b) {
  std::map<std::vector<Letter>, Complex> acc;
  for (const auto& s : a.terms()) {
    for (const auto& t : b.terms()) {
      if (s.commutes_with(t)) continue;
      // Anticommuting strings: st - ts = 2 st.
      PauliTerm prod = multiply(s, t);
      acc[prod.letters()] += 2.0 * prod.coefficient();
    }
  }
  std::vector<PauliTerm> terms;
  terms.reserve(acc.size());
  for (auto& [letters, c] : acc) terms.emplace_back(letters, c);
  return PauliSum(a.n_qubits(), std::move(terms));
}

using LambdaPolynomial = std::vector<PauliSum>;

// [H(l), C(l)] with H(l) = mixer + l * delta.
LambdaPolynomial commutator_with_path(const PauliSum& mixer,
                                      const PauliSum& delta,
                                      const LambdaPolynomial& c) {
  LambdaPolynomial out(c.size() + 1, PauliSum(mixer.n_qubits()));
  for (std::size_t p = 0; p < c.size(); ++p) {
    if (c[p].empty()) continue;
    out[p] += commutator(mixer, c[p]);
    out[p + 1] += commutator(delta, c[p]);
  }
  while (out.size() > 1 && out.back().empty()) out.pop_back();
  return out;
}

}  // namespace

char to_char(Letter l) {
  static constexpr char kChars[] = {'I', 'X', 'Y', 'Z'};
  return kChars[static_cast<int>(l)];
}

Letter letter_from_char(char c) {
  switch (c) {
    case 'I': case 'i': return Letter::I;
    case 'X': case 'x': return Letter::X;
    case 'Y': case 'y': return Letter::Y;
    case 'Z': case 'z': return Letter::Z;
    default:
      throw std::invalid_argument(std::string("invalid Pauli letter '") + c +
                                  "'");
  }
}

PauliTerm::PauliTerm(std::vector<Letter> letters, Complex coefficient)
    : letters_(std::move(letters)), coefficient_(coefficient) {
  if (letters_.empty())
    throw std::invalid_argument("PauliTerm needs at least one qubit");
}

PauliTerm PauliTerm::from_string(std::string_view letters,
                                 Complex coefficient) {
  std::vector<Letter> out;
  out.reserve(letters.size());
  for (char c : letters) out.push_back(letter_from_char(c));
  return PauliTerm(std::move(out), coefficient);
}

PauliTerm PauliTerm::single(std::size_t n_qubits, std::size_t qubit, Letter l,
                            Complex coefficient) {
  if (qubit >= n_qubits) throw std::out_of_range("qubit index out of range");
  std::vector<Letter> letters(n_qubits, Letter::I);
  letters[qubit] = l;
  return PauliTerm(std::move(letters), coefficient);
}

PauliTerm PauliTerm::pair(std::size_t n_qubits, std::size_t i, Letter li,
                          std::size_t j, Letter lj, Complex coefficient) {
  if (i >= n_qubits || j >= n_qubits)
    throw std::out_of_range("qubit index out of range");
  if (i == j) throw std::invalid_argument("pair term needs distinct qubits");
  std::vector<Letter> letters(n_qubits, Letter::I);
  letters[i] = li;
  letters[j] = lj;
  return PauliTerm(std::move(letters), coefficient);
}

std::size_t PauliTerm::locality() const {
  return static_cast<std::size_t>(std::count_if(
      letters_.begin(), letters_.end(), [](Letter l) { return l != Letter::I; }));
}

bool PauliTerm::is_diagonal() const {
  return std::all_of(letters_.begin(), letters_.end(), [](Letter l) {
    return l == Letter::I || l == Letter::Z;
  });
}

std::string PauliTerm::letter_string() const {
  std::string s;
  s.reserve(letters_.size());
  for (Letter l : letters_) s.push_back(to_char(l));
  return s;
}

std::string PauliTerm::pattern() const {
  std::string s;
  for (Letter l : letters_)
    if (l != Letter::I) s.push_back(to_char(l));
  return s;
}

bool PauliTerm::commutes_with(const PauliTerm& other) const {
  require_same_size(n_qubits(), other.n_qubits(), "commutes_with");
  int anticommuting = 0;
  for (std::size_t q = 0; q < letters_.size(); ++q) {
    const Letter a = letters_[q];
    const Letter b = other.letters_[q];
    if (a != Letter::I && b != Letter::I && a != b) ++anticommuting;
  }
  return anticommuting % 2 == 0;
}

PauliTerm multiply(const PauliTerm& a, const PauliTerm& b) {
  require_same_size(a.n_qubits(), b.n_qubits(), "multiply");
  std::vector<Letter> letters(a.n_qubits());
  int i_power = 0;
  for (std::size_t q = 0; q < letters.size(); ++q) {
    const auto p = multiply_letters(a.letters()[q], b.letters()[q]);
    letters[q] = p.letter;
    i_power += p.i_power;
  }
  return PauliTerm(std::move(letters),
                   i_pow(i_power) * a.coefficient() * b.coefficient());
}

PauliSum::PauliSum(std::size_t n_qubits, std::vector<PauliTerm> terms)
    : n_qubits_(n_qubits), terms_(std::move(terms)) {
  for (const auto& t : terms_) require_same_size(n_qubits_, t.n_qubits(), "PauliSum");
  canonicalize();
}

void PauliSum::canonicalize() {
  std::stable_sort(terms_.begin(), terms_.end(),
                   [](const PauliTerm& a, const PauliTerm& b) {
                     return a.letters() < b.letters();
                   });
  std::vector<PauliTerm> merged;
  merged.reserve(terms_.size());
  for (auto& t : terms_) {
    if (!merged.empty() && merged.back().letters() == t.letters()) {
      merged.back().set_coefficient(merged.back().coefficient() +
                                    t.coefficient());
    } else {
      merged.push_back(std::move(t));
    }
  }
  std::erase_if(merged, [](const PauliTerm& t) {
    return std::abs(t.coefficient()) < kDropTolerance;
  });
  terms_ = std::move(merged);
}

PauliSum& PauliSum::operator+=(const PauliSum& other) {
  require_same_size(n_qubits_, other.n_qubits_, "PauliSum::+=");
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  canonicalize();
  return *this;
}

PauliSum& PauliSum::operator-=(const PauliSum& other) {
  require_same_size(n_qubits_, other.n_qubits_, "PauliSum::-=");
  for (const auto& t : other.terms_)
    terms_.emplace_back(t.letters(), -t.coefficient());
  canonicalize();
  return *this;
}

PauliSum& PauliSum::operator*=(Complex scale) {
  for (auto& t : terms_) t.set_coefficient(t.coefficient() * scale);
  canonicalize();
  return *this;
}

bool operator==(const PauliSum& a, const PauliSum& b) {
  if (a.n_qubits_ != b.n_qubits_ || a.terms_.size() != b.terms_.size())
    return false;
  for (std::size_t k = 0; k < a.terms_.size(); ++k) {
    if (a.terms_[k].letters() != b.terms_[k].letters() ||
        a.terms_[k].coefficient() != b.terms_[k].coefficient())
      return false;
  }
  return true;
}

std::string PauliSum::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    if (k) os << " + ";
    os << terms_[k].coefficient() << "*" << terms_[k].letter_string();
  }
  return os.str();
}

PauliSum commutator(const PauliSum& a, const PauliSum& b) {
  require_same_size(a.n_qubits(), b.n_qubits(), "commutator");
  // Evaluate in a fixed argument order so [a,b] = -[b,a] holds bitwise.
  if (sum_less_equal(a, b)) return commutator_direct(a, b);
  PauliSum out = commutator_direct(b, a);
  return -1.0 * std::move(out);
}

PauliSum transverse_field_mixer(std::size_t n_qubits) {
  std::vector<PauliTerm> terms;
  for (std::size_t q = 0; q < n_qubits; ++q)
    terms.push_back(PauliTerm::single(n_qubits, q, Letter::X));
  return PauliSum(n_qubits, std::move(terms));
}

PauliSum ising_hamiltonian(std::size_t n_qubits,
                           const std::vector<Coupling>& couplings,
                           const std::vector<double>& fields) {
  if (!fields.empty() && fields.size() != n_qubits)
    throw std::invalid_argument("ising_hamiltonian: fields size mismatch");
  std::vector<PauliTerm> terms;
  for (const auto& c : couplings)
    terms.push_back(
        PauliTerm::pair(n_qubits, c.i, Letter::Z, c.j, Letter::Z, c.weight));
  for (std::size_t q = 0; q < fields.size(); ++q)
    terms.push_back(PauliTerm::single(n_qubits, q, Letter::Z, fields[q]));
  return PauliSum(n_qubits, std::move(terms));
}

std::vector<std::string> nested_commutator_pool(const PauliSum& h_mixer,
                                                const PauliSum& h_cost,
                                                int order, int locality_cap) {
  if (order < 1) throw std::invalid_argument("pool order must be >= 1");
  if (locality_cap < 1) throw std::invalid_argument("locality cap must be >= 1");
  if (h_mixer.empty() || h_cost.empty())
    throw std::invalid_argument("pool needs non-empty Hamiltonians");
  require_same_size(h_mixer.n_qubits(), h_cost.n_qubits(),
                    "nested_commutator_pool");

  const PauliSum delta = h_cost - h_mixer;  // dH/dl
  std::set<std::string> patterns;

  // nested[m] holds the m-fold nested commutator as a polynomial in l.
  LambdaPolynomial nested{delta};
  for (int k = 1; k <= order; ++k) {
    const int target = 2 * k - 1;
    const int have = (k == 1) ? 0 : 2 * k - 3;
    for (int m = have; m < target; ++m)
      nested = commutator_with_path(h_mixer, delta, nested);
    for (const auto& coeff : nested) {
      for (const auto& t : coeff.terms()) {
        if (static_cast<int>(t.locality()) <= locality_cap && t.locality() > 0)
          patterns.insert(t.pattern());
      }
    }
  }
  return {patterns.begin(), patterns.end()};
}

}  // namespace dcqaoa::pauli
