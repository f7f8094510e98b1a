#include "dcqaoa/problems.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

#include "dcqaoa/rng.hpp"

namespace dcqaoa::problems {

namespace {

void sort_edges(std::vector<Edge>& edges) {
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return std::pair(a.i, a.j) < std::pair(b.i, b.j);
  });
}

}  // namespace

std::string_view to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::MaxCut3Regular: return "maxcut3r";
    case ProblemKind::MaxCutCompleteWeighted: return "maxcutw";
    case ProblemKind::SK: return "sk";
  }
  return "?";
}

ProblemKind parse_problem_kind(std::string_view name) {
  if (name == "maxcut3r") return ProblemKind::MaxCut3Regular;
  if (name == "maxcutw") return ProblemKind::MaxCutCompleteWeighted;
  if (name == "sk") return ProblemKind::SK;
  throw std::invalid_argument("unknown problem kind '" + std::string(name) + "'");
}

ProblemInstance gen_3regular(std::size_t n, std::uint64_t seed) {
  if (n < 4 || n % 2 != 0)
    throw std::invalid_argument("3-regular graphs need an even n >= 4");
  SplitMix64 rng(seed);
  std::vector<std::size_t> stubs(3 * n);
  for (std::size_t k = 0; k < stubs.size(); ++k) stubs[k] = k / 3;

  for (;;) {
    std::vector<std::size_t> perm = stubs;
    for (std::size_t k = perm.size() - 1; k > 0; --k)
      std::swap(perm[k], perm[rng.below(k + 1)]);

    std::set<std::pair<std::size_t, std::size_t>> seen;
    bool simple = true;
    for (std::size_t k = 0; k < perm.size(); k += 2) {
      const auto [a, b] = std::minmax(perm[k], perm[k + 1]);
      if (a == b || !seen.emplace(a, b).second) {
        simple = false;
        break;
      }
    }
    if (!simple) continue;

    ProblemInstance inst{ProblemKind::MaxCut3Regular, n, {}, seed};
    for (const auto& [a, b] : seen) inst.edges.push_back({a, b, 1.0});
    sort_edges(inst.edges);
    return inst;
  }
}

ProblemInstance gen_complete_weighted(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("complete graphs need n >= 2");
  SplitMix64 rng(seed);
  ProblemInstance inst{ProblemKind::MaxCutCompleteWeighted, n, {}, seed};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      inst.edges.push_back({i, j, rng.uniform_open_closed()});
  return inst;
}

ProblemInstance gen_sk(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("SK instances need n >= 2");
  SplitMix64 rng(seed);
  ProblemInstance inst{ProblemKind::SK, n, {}, seed};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      inst.edges.push_back({i, j, static_cast<double>(rng.rademacher())});
  return inst;
}

ProblemInstance generate(ProblemKind kind, std::size_t n, std::uint64_t seed) {
  switch (kind) {
    case ProblemKind::MaxCut3Regular: return gen_3regular(n, seed);
    case ProblemKind::MaxCutCompleteWeighted: return gen_complete_weighted(n, seed);
    case ProblemKind::SK: return gen_sk(n, seed);
  }
  throw std::invalid_argument("unknown problem kind");
}

void validate(const ProblemInstance& inst) {
  const std::size_t n = inst.n;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::vector<int> degree(n, 0);
  for (const auto& e : inst.edges) {
    if (e.i >= e.j || e.j >= n)
      throw std::invalid_argument("edge indices must satisfy i < j < n");
    if (!seen.emplace(e.i, e.j).second)
      throw std::invalid_argument("duplicate edge");
    ++degree[e.i];
    ++degree[e.j];
  }
  if (!std::is_sorted(inst.edges.begin(), inst.edges.end(),
                      [](const Edge& a, const Edge& b) {
                        return std::pair(a.i, a.j) < std::pair(b.i, b.j);
                      }))
    throw std::invalid_argument("edges must be sorted lexicographically");

  const std::size_t complete = n * (n - 1) / 2;
  switch (inst.kind) {
    case ProblemKind::MaxCut3Regular:
      if (n < 4 || n % 2)
        throw std::invalid_argument("3-regular instance needs even n >= 4");
      for (int d : degree)
        if (d != 3) throw std::invalid_argument("vertex degree != 3");
      for (const auto& e : inst.edges)
        if (e.weight != 1.0) throw std::invalid_argument("3-regular weights must be 1");
      break;
    case ProblemKind::MaxCutCompleteWeighted:
      if (inst.edges.size() != complete)
        throw std::invalid_argument("complete instance needs n(n-1)/2 edges");
      for (const auto& e : inst.edges)
        if (!(e.weight > 0.0 && e.weight <= 1.0))
          throw std::invalid_argument("weights must lie in (0, 1]");
      break;
    case ProblemKind::SK:
      if (inst.edges.size() != complete)
        throw std::invalid_argument("SK instance needs n(n-1)/2 couplings");
      for (const auto& e : inst.edges)
        if (e.weight != 1.0 && e.weight != -1.0)
          throw std::invalid_argument("SK couplings must be +-1");
      break;
  }
}

sim::DiagonalOperator cost_hamiltonian(const ProblemInstance& inst) {
  if (inst.n < 1 || inst.n > sim::kMaxQubits)
    throw std::out_of_range("cost_hamiltonian: node count out of range");
  const std::size_t dim = std::size_t{1} << inst.n;
  std::vector<double> values(dim);
  const bool maxcut = inst.kind != ProblemKind::SK;
  for (std::size_t k = 0; k < dim; ++k) {
    double acc = 0.0;
    for (const auto& e : inst.edges) {
      const bool differ = ((k >> e.i) ^ (k >> e.j)) & 1;
      if (maxcut) {
        // 1/2 w (1 - z_i z_j) is w on cut edges and 0 otherwise.
        if (differ) acc += e.weight;
      } else {
        acc += differ ? -e.weight : e.weight;
      }
    }
    values[k] = 0.0 - acc;
  }
  return sim::DiagonalOperator(inst.n, std::move(values));
}

GroundState exact_ground_energy(const sim::DiagonalOperator& op) {
  if (op.n_qubits() > sim::kMaxQubits)
    throw std::out_of_range("exact_ground_energy: too many qubits to enumerate");
  const auto values = op.values();
  const auto it = std::min_element(values.begin(), values.end());
  return {*it, static_cast<std::uint64_t>(it - values.begin())};
}

std::string bitstring(std::uint64_t index, std::size_t n_qubits) {
  std::string s(n_qubits, '0');
  for (std::size_t q = 0; q < n_qubits; ++q)
    if ((index >> q) & 1) s[n_qubits - 1 - q] = '1';
  return s;
}

double relative_error(double cost, double ground_energy) {
  if (ground_energy == 0.0)
    throw std::domain_error("relative_error: ground energy is zero");
  return (cost - ground_energy) / std::abs(ground_energy);
}

double cd_prefactor(ProblemKind kind) {
  return kind == ProblemKind::SK ? 1.0 : 0.5;
}

}  // namespace dcqaoa::problems
