#include "dcqaoa/metalearn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "dcqaoa/errors.hpp"
#include "dcqaoa/rng.hpp"

namespace dcqaoa::metalearn {

namespace {

void require_dim(const CellWeights& weights, const ansatz::CircuitEvaluator& c) {
  if (weights.dim() != c.config().n_params()) {
    throw std::invalid_argument(
        "cell dimension " + std::to_string(weights.dim()) +
        " does not match circuit parameter count " +
        std::to_string(c.config().n_params()));
  }
}

}  // namespace

std::vector<double> TrainConfig::resolved_loss_weights() const {
  if (loss_weights.empty()) return std::vector<double>(horizon, 1.0);
  return loss_weights;
}

void TrainConfig::validate() const {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be > 0");
  if (!loss_weights.empty() && loss_weights.size() != horizon)
    throw std::invalid_argument("loss weights must have one entry per step");
  if (!(learning_rate > 0.0))
    throw std::invalid_argument("learning rate must be > 0");
}

TrainConfig default_train_config(problems::ProblemKind kind) {
  TrainConfig cfg;
  switch (kind) {
    case problems::ProblemKind::MaxCut3Regular:
      cfg.trainer = optim::OptimizerKind::Adam;
      cfg.learning_rate = 0.1;
      cfg.train_set_size = 100;
      break;
    case problems::ProblemKind::MaxCutCompleteWeighted:
      cfg.trainer = optim::OptimizerKind::Adagrad;
      cfg.learning_rate = 0.1;
      cfg.train_set_size = 300;
      break;
    case problems::ProblemKind::SK:
      cfg.trainer = optim::OptimizerKind::Adam;
      cfg.learning_rate = 0.01;
      cfg.train_set_size = 200;
      break;
  }
  return cfg;
}

std::vector<double> initial_angles(std::size_t dim, std::uint64_t instance_seed,
                                   std::uint64_t seed) {
  SplitMix64 rng(derive_seed(seed, "theta0", instance_seed));
  std::vector<double> theta(dim);
  for (auto& v : theta) v = rng.uniform(-0.01, 0.01);
  return theta;
}

Trajectory unroll(const CellWeights& weights,
                  const ansatz::CircuitEvaluator& circuit,
                  const TrainConfig& cfg, std::uint64_t seed) {
  require_dim(weights, circuit);
  cfg.validate();
  Trajectory traj;
  traj.theta.push_back(
      initial_angles(weights.dim(), circuit.instance().seed, seed));
  CellState state = zero_state(weights.kind(), weights.dim());
  for (std::size_t t = 1; t <= cfg.horizon; ++t) {
    CellOutput out = cell_forward(weights, traj.theta.back(), state);
    state = std::move(out.state);
    traj.cost.push_back(circuit.cost(out.theta));
    traj.theta.push_back(std::move(out.theta));
  }
  return traj;
}

double meta_loss(std::span<const double> costs, std::span<const double> weights) {
  if (costs.size() != weights.size())
    throw std::invalid_argument("meta_loss: cost and weight lengths differ");
  double loss = 0.0;
  for (std::size_t t = 0; t < costs.size(); ++t) loss += weights[t] * costs[t];
  return loss;
}

MetaGradient bptt_gradient(const CellWeights& weights,
                           const ansatz::CircuitEvaluator& circuit,
                           const TrainConfig& cfg, std::uint64_t seed) {
  require_dim(weights, circuit);
  cfg.validate();
  const std::size_t d = weights.dim();
  const std::size_t T = cfg.horizon;
  const std::vector<double> omega = cfg.resolved_loss_weights();

  MetaGradient out;
  out.grad.assign(weights.size(), 0.0);
  Trajectory& traj = out.trajectory;
  traj.theta.push_back(initial_angles(d, circuit.instance().seed, seed));

  std::vector<StepTape> tapes;
  tapes.reserve(T);
  std::vector<std::vector<double>> cost_grads(T);
  CellState state = zero_state(weights.kind(), d);
  for (std::size_t t = 0; t < T; ++t) {
    tapes.push_back(forward_step(weights, traj.theta.back(), state));
    const StepTape& tape = tapes.back();
    state.h = tape.h;
    state.c = tape.c;
    std::vector<double> theta = output_map(tape.h);
    traj.cost.push_back(circuit.cost(theta));
    if (omega[t] != 0.0) cost_grads[t] = circuit.gradient(theta);
    traj.theta.push_back(std::move(theta));
  }
  out.loss = meta_loss(traj.cost, omega);

  std::vector<double> dx_next(d, 0.0), dh_next(d, 0.0), dc_next;
  if (weights.kind() == CellKind::LSTM) dc_next.assign(d, 0.0);
  std::vector<double> dh(d);
  for (std::size_t t = T; t-- > 0;) {
    for (std::size_t k = 0; k < d; ++k) {
      double dtheta = dx_next[k];
      if (omega[t] != 0.0) dtheta += omega[t] * cost_grads[t][k];
      dh[k] = std::numbers::pi * dtheta + dh_next[k];
    }
    StepGradients g = backward_step(weights, tapes[t], dh, dc_next, out.grad);
    dx_next = std::move(g.dx);
    dh_next = std::move(g.dh_prev);
    dc_next = std::move(g.dc_prev);
  }
  return out;
}

CellWeights init_weights(CellKind kind, std::size_t dim, std::uint64_t seed) {
  CellWeights w(kind, dim);
  SplitMix64 rng(derive_seed(seed, "weights"));
  for (auto& v : w.flat()) v = rng.uniform(-0.1, 0.1);
  return w;
}

std::vector<problems::ProblemInstance> training_instances(
    problems::ProblemKind kind, std::size_t n, const TrainConfig& cfg) {
  std::vector<problems::ProblemInstance> out;
  out.reserve(cfg.train_set_size);
  for (std::size_t k = 0; k < cfg.train_set_size; ++k)
    out.push_back(problems::generate(kind, n, derive_seed(cfg.seed, "train", k)));
  return out;
}

TrainedCell train(CellKind kind, problems::ProblemKind problem, std::size_t n,
                  const ansatz::AnsatzConfig& ansatz, const TrainConfig& cfg,
                  const TrainProgress& progress) {
  cfg.validate();
  if (cfg.train_set_size < 1)
    throw std::invalid_argument("training set must not be empty");
  const std::size_t d = ansatz.n_params();
  TrainedCell result{init_weights(kind, d, cfg.seed), problem, n, ansatz, cfg, {}};

  std::vector<ansatz::CircuitEvaluator> circuits;
  circuits.reserve(cfg.train_set_size);
  for (const auto& inst : training_instances(problem, n, cfg))
    circuits.emplace_back(inst, ansatz);

  optim::OptimizerState opt = optim::make_optimizer(cfg.trainer, cfg.learning_rate,
                                                    result.weights.size());
  for (std::size_t epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    double total = 0.0;
    for (std::size_t k = 0; k < circuits.size(); ++k) {
      MetaGradient g = bptt_gradient(result.weights, circuits[k], cfg, cfg.seed);
      if (!std::isfinite(g.loss)) {
        throw NumericalError("training: non-finite meta-loss at epoch " +
                             std::to_string(epoch) + ", instance " +
                             std::to_string(k));
      }
      total += g.loss;
      optim::step(opt, result.weights.flat(), g.grad);
    }
    const double epoch_loss = total / static_cast<double>(circuits.size());
    result.epoch_losses.push_back(epoch_loss);
    if (progress) progress(epoch, epoch_loss);
    const auto& losses = result.epoch_losses;
    if (losses.size() >= 2 &&
        std::abs(losses.back() - losses[losses.size() - 2]) <= cfg.tolerance)
      break;
  }
  return result;
}

ansatz::ParameterVector propose_init(const CellWeights& weights,
                                     const ansatz::CircuitEvaluator& circuit,
                                     const TrainConfig& cfg, std::uint64_t seed) {
  Trajectory traj = unroll(weights, circuit, cfg, seed);
  if (!cfg.propose_argmin) return traj.theta.back();
  const auto best = std::min_element(traj.cost.begin(), traj.cost.end());
  return traj.theta[static_cast<std::size_t>(best - traj.cost.begin()) + 1];
}

std::size_t trainable_param_count(CellKind kind, ansatz::Algorithm algorithm,
                                  std::size_t p) {
  if (p < 1) throw std::invalid_argument("layer count must be >= 1");
  const std::size_t d = (algorithm == ansatz::Algorithm::QAOA ? 2 : 3) * p;
  return CellWeights::count(kind, d);
}

}  // namespace dcqaoa::metalearn
