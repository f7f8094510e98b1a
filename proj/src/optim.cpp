#include "dcqaoa/optim.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "dcqaoa/errors.hpp"

namespace dcqaoa::optim {

namespace {

void check_inputs(std::span<double> params, std::span<const double> grad,
                  std::size_t state_dim) {
  if (params.size() != grad.size() || params.size() != state_dim) {
    throw std::invalid_argument("optimizer: dimension mismatch (params " +
                                std::to_string(params.size()) + ", grad " +
                                std::to_string(grad.size()) + ", state " +
                                std::to_string(state_dim) + ")");
  }
  for (std::size_t k = 0; k < grad.size(); ++k) {
    if (!std::isfinite(grad[k]))
      throw NumericalError("optimizer: non-finite gradient entry " +
                           std::to_string(k));
  }
}

}  // namespace

std::string_view to_string(OptimizerKind kind) {
  return kind == OptimizerKind::Adam ? "adam" : "adagrad";
}

OptimizerKind parse_optimizer_kind(std::string_view name) {
  if (name == "adam") return OptimizerKind::Adam;
  if (name == "adagrad") return OptimizerKind::Adagrad;
  throw std::invalid_argument("unknown optimizer '" + std::string(name) + "'");
}

OptimizerState make_optimizer(OptimizerKind kind, double learning_rate,
                              std::size_t dim) {
  if (!(learning_rate > 0.0))
    throw std::invalid_argument("learning rate must be positive");
  OptimizerState s;
  s.kind = kind;
  s.learning_rate = learning_rate;
  if (kind == OptimizerKind::Adam) {
    s.first_moment.assign(dim, 0.0);
    s.second_moment.assign(dim, 0.0);
  } else {
    s.accumulated_square.assign(dim, 0.0);
  }
  return s;
}

void adam_step(OptimizerState& s, std::span<double> params,
               std::span<const double> grad) {
  check_inputs(params, grad, s.first_moment.size());
  if (s.second_moment.size() != s.first_moment.size())
    throw std::invalid_argument("adam: moment buffers differ in size");
  ++s.step_count;
  const double t = static_cast<double>(s.step_count);
  const double c1 = 1.0 - std::pow(s.beta1, t);
  const double c2 = 1.0 - std::pow(s.beta2, t);
  for (std::size_t k = 0; k < params.size(); ++k) {
    const double g = grad[k];
    s.first_moment[k] = s.beta1 * s.first_moment[k] + (1.0 - s.beta1) * g;
    s.second_moment[k] = s.beta2 * s.second_moment[k] + (1.0 - s.beta2) * g * g;
    const double m_hat = s.first_moment[k] / c1;
    const double v_hat = s.second_moment[k] / c2;
    params[k] -= s.learning_rate * m_hat / (std::sqrt(v_hat) + s.adam_epsilon);
  }
}

void adagrad_step(OptimizerState& s, std::span<double> params,
                  std::span<const double> grad) {
  check_inputs(params, grad, s.accumulated_square.size());
  ++s.step_count;
  for (std::size_t k = 0; k < params.size(); ++k) {
    const double g = grad[k];
    s.accumulated_square[k] += g * g;
    params[k] -= s.learning_rate * g /
                 std::sqrt(s.accumulated_square[k] + s.adagrad_epsilon);
  }
}

void step(OptimizerState& s, std::span<double> params,
          std::span<const double> grad) {
  if (s.kind == OptimizerKind::Adam)
    adam_step(s, params, grad);
  else
    adagrad_step(s, params, grad);
}

}  // namespace dcqaoa::optim
