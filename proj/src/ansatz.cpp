#include "dcqaoa/ansatz.hpp"

#include <stdexcept>
#include <string>

namespace dcqaoa::ansatz {

using pauli::Letter;

namespace {

std::pair<Letter, Letter> class_letters(CdClass c) {
  switch (c) {
    case CdClass::ZY: return {Letter::Z, Letter::Y};
    case CdClass::YZ: return {Letter::Y, Letter::Z};
    case CdClass::XY: return {Letter::X, Letter::Y};
    case CdClass::YX: return {Letter::Y, Letter::X};
    case CdClass::Y: break;
  }
  return {Letter::Y, Letter::I};
}

}  // namespace

std::string_view to_string(Algorithm a) {
  return a == Algorithm::QAOA ? "qaoa" : "dcqaoa";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "qaoa") return Algorithm::QAOA;
  if (name == "dcqaoa") return Algorithm::DCQAOA;
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

std::string_view to_string(CdClass c) {
  switch (c) {
    case CdClass::Y: return "y";
    case CdClass::ZY: return "zy";
    case CdClass::YZ: return "yz";
    case CdClass::XY: return "xy";
    case CdClass::YX: return "yx";
  }
  return "?";
}

CdClass parse_cd_class(std::string_view name) {
  for (CdClass c : kAllCdClasses)
    if (to_string(c) == name) return c;
  throw std::invalid_argument("unknown CD class '" + std::string(name) + "'");
}

AnsatzConfig make_config(problems::ProblemKind kind, Algorithm algorithm,
                         std::size_t p, CdClass cd_class) {
  if (p < 1) throw std::invalid_argument("layer count must be >= 1");
  return {algorithm, p, cd_class, problems::cd_prefactor(kind)};
}

CircuitEvaluator::CircuitEvaluator(const problems::ProblemInstance& instance,
                                   AnsatzConfig config)
    : instance_(instance),
      config_(config),
      cost_op_(problems::cost_hamiltonian(instance)),
      ground_(problems::exact_ground_energy(cost_op_)) {
  if (config_.p < 1) throw std::invalid_argument("layer count must be >= 1");
}

void CircuitEvaluator::apply_cd_unitary(sim::StateVector& state,
                                        double alpha) const {
  if (config_.cd_class == CdClass::Y) {
    for (std::size_t q = 0; q < instance_.n; ++q)
      sim::apply_single_qubit_pauli_rotation(state, Letter::Y, q, alpha);
    return;
  }
  const auto letters = class_letters(config_.cd_class);
  for (const auto& e : instance_.edges) {
    sim::apply_two_local_pauli_rotation(
        state, letters, {e.i, e.j}, alpha * config_.cd_prefactor * e.weight);
  }
}

sim::StateVector CircuitEvaluator::prepare(std::span<const double> params) const {
  if (params.size() != config_.n_params()) {
    throw std::invalid_argument("parameter vector has length " +
                                std::to_string(params.size()) + ", expected " +
                                std::to_string(config_.n_params()));
  }
  sim::StateVector state = sim::init_plus_state(instance_.n);
  const std::size_t stride = config_.params_per_layer();
  for (std::size_t layer = 0; layer < config_.p; ++layer) {
    const double* theta = params.data() + layer * stride;
    sim::apply_diagonal_phase(state, cost_op_, theta[0]);
    sim::apply_rx_all(state, theta[1]);
    if (config_.algorithm == Algorithm::DCQAOA) apply_cd_unitary(state, theta[2]);
  }
  return state;
}

double CircuitEvaluator::cost(std::span<const double> params) const {
  return sim::expectation_diagonal(prepare(params), cost_op_);
}

std::vector<double> CircuitEvaluator::gradient(std::span<const double> params,
                                               double h) const {
  const std::size_t dim = params.size();
  std::vector<double> shifted(2 * dim, 0.0);
  const auto n_eval = static_cast<std::int64_t>(2 * dim);
#pragma omp parallel for schedule(static)
  for (std::int64_t e = 0; e < n_eval; ++e) {
    std::vector<double> theta(params.begin(), params.end());
    const auto j = static_cast<std::size_t>(e) / 2;
    theta[j] += (e % 2 == 0) ? h : -h;
    shifted[static_cast<std::size_t>(e)] = cost(theta);
  }
  std::vector<double> grad(dim);
  for (std::size_t j = 0; j < dim; ++j)
    grad[j] = (shifted[2 * j] - shifted[2 * j + 1]) / (2.0 * h);
  return grad;
}

double CircuitEvaluator::relative_error(double cost) const {
  return problems::relative_error(cost, ground_.energy);
}

sim::StateVector prepare_final_state(const problems::ProblemInstance& instance,
                                     const AnsatzConfig& config,
                                     std::span<const double> params) {
  return CircuitEvaluator(instance, config).prepare(params);
}

double evaluate_cost(const problems::ProblemInstance& instance,
                     const AnsatzConfig& config, std::span<const double> params) {
  return CircuitEvaluator(instance, config).cost(params);
}

std::vector<double> gradient(const problems::ProblemInstance& instance,
                             const AnsatzConfig& config,
                             std::span<const double> params) {
  return CircuitEvaluator(instance, config).gradient(params);
}

}  // namespace dcqaoa::ansatz
