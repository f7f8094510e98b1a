#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "dcqaoa/ansatz.hpp"
#include "dcqaoa/cells.hpp"
#include "dcqaoa/optim.hpp"
#include "dcqaoa/problems.hpp"

namespace dcqaoa::metalearn {

struct TrainConfig {
  std::size_t horizon = 6;
  std::size_t max_epochs = 10;
  double tolerance = 0.01;
  /// Per-step loss weights; empty means all ones. Length must equal horizon.
  std::vector<double> loss_weights;
  optim::OptimizerKind trainer = optim::OptimizerKind::Adam;
  double learning_rate = 0.1;
  std::size_t train_set_size = 100;
  std::uint64_t seed = 0;
  /// Propose the lowest-cost iterate of the unroll instead of the last one.
  bool propose_argmin = false;

  std::vector<double> resolved_loss_weights() const;
  void validate() const;
};

/// Trainer defaults per problem: Adam 0.1 / 100 graphs (3-regular),
/// Adagrad 0.1 / 300 graphs (weighted), Adam 0.01 / 200 instances (SK).
TrainConfig default_train_config(problems::ProblemKind kind);

/// theta[0] is the near-zero start; theta[t], cost[t-1] for t = 1..T.
struct Trajectory {
  std::vector<std::vector<double>> theta;
  std::vector<double> cost;
};

/// Initial angles uniform(-0.01, 0.01), deterministic in (instance, seed).
std::vector<double> initial_angles(std::size_t dim, std::uint64_t instance_seed,
                                   std::uint64_t seed);

/// Runs the cell for T steps from a zero state, feeding each output back in.
Trajectory unroll(const CellWeights& weights,
                  const ansatz::CircuitEvaluator& circuit,
                  const TrainConfig& cfg, std::uint64_t seed);

/// Sum_t w_t F_t.
double meta_loss(std::span<const double> costs, std::span<const double> weights);

struct MetaGradient {
  double loss = 0.0;
  std::vector<double> grad;  // layout of CellWeights::flat()
  Trajectory trajectory;
};

/**
 * Reverse-mode gradient of the meta-loss with respect to every cell weight.
 * The circuit gradient dF/dtheta_t enters as a leaf (central differences);
 * the cell equations and the output map are differentiated exactly through
 * time.
 */
MetaGradient bptt_gradient(const CellWeights& weights,
                           const ansatz::CircuitEvaluator& circuit,
                           const TrainConfig& cfg, std::uint64_t seed);

struct TrainedCell {
  CellWeights weights;
  problems::ProblemKind problem;
  std::size_t n;
  ansatz::AnsatzConfig ansatz;
  TrainConfig config;
  std::vector<double> epoch_losses;
};

using TrainProgress = std::function<void(std::size_t epoch, double loss)>;

/// Uniform(-0.1, 0.1) weight init.
CellWeights init_weights(CellKind kind, std::size_t dim, std::uint64_t seed);

/// The training set used by train(): instance k has seed
/// derive_seed(cfg.seed, "train", k).
std::vector<problems::ProblemInstance> training_instances(
    problems::ProblemKind kind, std::size_t n, const TrainConfig& cfg);

TrainedCell train(CellKind kind, problems::ProblemKind problem, std::size_t n,
                  const ansatz::AnsatzConfig& ansatz, const TrainConfig& cfg,
                  const TrainProgress& progress = {});

/// Final proposal of one unroll (theta_T, or the argmin if configured).
ansatz::ParameterVector propose_init(const CellWeights& weights,
                                     const ansatz::CircuitEvaluator& circuit,
                                     const TrainConfig& cfg, std::uint64_t seed);

/// 8d^2 + 4d (LSTM) or 6d^2 + 6d (GRU), d = params_per_layer * p.
std::size_t trainable_param_count(CellKind kind, ansatz::Algorithm algorithm,
                                  std::size_t p);

}  // namespace dcqaoa::metalearn
