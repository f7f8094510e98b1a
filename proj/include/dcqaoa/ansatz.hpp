#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "dcqaoa/problems.hpp"
#include "dcqaoa/simulator.hpp"

namespace dcqaoa::ansatz {

enum class Algorithm { QAOA, DCQAOA };

/// Counterdiabatic pool classes. Two-letter classes name the letter on the
/// lower-indexed qubit first: ZY on edge (i, j), i < j, is sigma^z_i sigma^y_j.
enum class CdClass { Y, ZY, YZ, XY, YX };

std::string_view to_string(Algorithm a);
Algorithm parse_algorithm(std::string_view name);
std::string_view to_string(CdClass c);  // "y", "zy", ...
CdClass parse_cd_class(std::string_view name);
inline constexpr CdClass kAllCdClasses[] = {CdClass::Y, CdClass::ZY, CdClass::YZ,
                                            CdClass::XY, CdClass::YX};

struct AnsatzConfig {
  Algorithm algorithm = Algorithm::DCQAOA;
  std::size_t p = 1;
  CdClass cd_class = CdClass::ZY;  // ignored for QAOA
  double cd_prefactor = 0.5;

  std::size_t params_per_layer() const {
    return algorithm == Algorithm::QAOA ? 2 : 3;
  }
  std::size_t n_params() const { return p * params_per_layer(); }
};

/// Config with the prefactor matching the problem kind.
AnsatzConfig make_config(problems::ProblemKind kind, Algorithm algorithm,
                         std::size_t p, CdClass cd_class = CdClass::ZY);

/// Layer-major: gamma_1, beta_1[, alpha_1], gamma_2, ...
using ParameterVector = std::vector<double>;

inline constexpr double kGradientStep = 1e-4;

/**
 * Circuit evaluator bound to one instance: caches the cost diagonal and
 * ground energy so repeated evaluations only pay for the gate sweeps.
 * Immutable after construction; evaluations may run concurrently.
 */
class CircuitEvaluator {
 public:
  CircuitEvaluator(const problems::ProblemInstance& instance, AnsatzConfig config);

  const problems::ProblemInstance& instance() const { return instance_; }
  const AnsatzConfig& config() const { return config_; }
  const sim::DiagonalOperator& cost_operator() const { return cost_op_; }
  double ground_energy() const { return ground_.energy; }

  /// |+>^n followed by p layers of U_c(gamma), U_m(beta)[, U_D(alpha)].
  sim::StateVector prepare(std::span<const double> params) const;

  double cost(std::span<const double> params) const;

  /// Central differences, step h per component.
  std::vector<double> gradient(std::span<const double> params,
                               double h = kGradientStep) const;

  double relative_error(double cost) const;

  /// U_D(alpha) for one layer, applied in canonical edge order.
  void apply_cd_unitary(sim::StateVector& state, double alpha) const;

 private:
  problems::ProblemInstance instance_;
  AnsatzConfig config_;
  sim::DiagonalOperator cost_op_;
  problems::GroundState ground_;
};

sim::StateVector prepare_final_state(const problems::ProblemInstance& instance,
                                     const AnsatzConfig& config,
                                     std::span<const double> params);
double evaluate_cost(const problems::ProblemInstance& instance,
                     const AnsatzConfig& config, std::span<const double> params);
std::vector<double> gradient(const problems::ProblemInstance& instance,
                             const AnsatzConfig& config,
                             std::span<const double> params);

}  // namespace dcqaoa::ansatz
