#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dcqaoa/simulator.hpp"

namespace dcqaoa::problems {

enum class ProblemKind { MaxCut3Regular, MaxCutCompleteWeighted, SK };

/// CLI/file names: "maxcut3r", "maxcutw", "sk".
std::string_view to_string(ProblemKind kind);
ProblemKind parse_problem_kind(std::string_view name);

struct Edge {
  std::size_t i;
  std::size_t j;
  double weight;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// A benchmark instance. Edges are canonical: i < j, lexicographically
/// sorted. For the SK kind the edges carry the couplings J_ij.
struct ProblemInstance {
  ProblemKind kind;
  std::size_t n;
  std::vector<Edge> edges;
  std::uint64_t seed;

  friend bool operator==(const ProblemInstance&, const ProblemInstance&) = default;
};

/// Uniform simple 3-regular graph by configuration-model rejection sampling.
ProblemInstance gen_3regular(std::size_t n, std::uint64_t seed);

/// K_n with i.i.d. weights uniform on (0, 1].
ProblemInstance gen_complete_weighted(std::size_t n, std::uint64_t seed);

/// All-to-all couplings J_ij uniform over {-1, +1}.
ProblemInstance gen_sk(std::size_t n, std::uint64_t seed);

ProblemInstance generate(ProblemKind kind, std::size_t n, std::uint64_t seed);

/// Throws std::invalid_argument when an instance violates its kind's
/// structural invariants (degrees, edge count, weight range).
void validate(const ProblemInstance& instance);

/**
 * Diagonal of the cost Hamiltonian, z_i = +1 when bit i of k is 0.
 *   MaxCut kinds: -1/2 sum_{(i,j)} w_ij (1 - z_i z_j)
 *   SK:           -sum_{i<j} J_ij z_i z_j
 */
sim::DiagonalOperator cost_hamiltonian(const ProblemInstance& instance);

struct GroundState {
  double energy;
  std::uint64_t index;  // lowest minimizing basis index
};

GroundState exact_ground_energy(const sim::DiagonalOperator& op);

/// Basis index as a binary string, most significant qubit first.
std::string bitstring(std::uint64_t index, std::size_t n_qubits);

/// (F - E0) / |E0|. Throws std::domain_error when E0 == 0.
double relative_error(double cost, double ground_energy);

/// Scale applied to the edge weights inside the counterdiabatic unitary:
/// 1/2 for the MaxCut kinds, 1 for SK.
double cd_prefactor(ProblemKind kind);

}  // namespace dcqaoa::problems
