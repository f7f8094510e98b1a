#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace dcqaoa::optim {

enum class OptimizerKind { Adam, Adagrad };

std::string_view to_string(OptimizerKind kind);
OptimizerKind parse_optimizer_kind(std::string_view name);

/// Moment buffers for one optimization loop. Not shared between loops.
struct OptimizerState {
  OptimizerKind kind = OptimizerKind::Adam;
  double learning_rate = 0.1;
  std::size_t step_count = 0;

  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;
  double adagrad_epsilon = 1e-10;

  std::vector<double> first_moment;        // Adam
  std::vector<double> second_moment;       // Adam
  std::vector<double> accumulated_square;  // Adagrad
};

OptimizerState make_optimizer(OptimizerKind kind, double learning_rate,
                              std::size_t dim);

/// Bias-corrected Adam: params -= lr * m_hat / (sqrt(v_hat) + eps).
void adam_step(OptimizerState& state, std::span<double> params,
               std::span<const double> grad);

/// acc += g^2; params -= lr * g / sqrt(acc + eps).
void adagrad_step(OptimizerState& state, std::span<double> params,
                  std::span<const double> grad);

/// Dispatches on state.kind.
void step(OptimizerState& state, std::span<double> params,
          std::span<const double> grad);

}  // namespace dcqaoa::optim
