#include "dcqaoa/experiments.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include "dcqaoa/errors.hpp"
#include "dcqaoa/optim.hpp"
#include "dcqaoa/rng.hpp"

#ifndef DCQAOA_VERSION
#define DCQAOA_VERSION "0.1.0"
#endif

namespace dcqaoa::experiments {

using ansatz::Algorithm;
using metalearn::CellKind;
using problems::ProblemKind;

namespace {

struct Task {
  std::size_t instance_index;
  Algorithm algorithm;
  InitStrategy init;
};

void emit(const Logger& log, const std::string& msg) {
  if (log) log(msg);
}

void append_trace(std::vector<RunRecord>& out, const std::string& experiment,
                  const ansatz::CircuitEvaluator& circuit, Algorithm algorithm,
                  InitStrategy init, const OptimizationTrace& trace) {
  for (std::size_t k = 0; k < trace.costs.size(); ++k) {
    out.push_back({experiment, circuit.instance().kind, algorithm, init,
                   circuit.instance().seed, k, trace.costs[k],
                   circuit.relative_error(trace.costs[k])});
  }
}

// Runs tasks on the worker pool; results land in per-task slots so the
// output order never depends on scheduling.
template <typename Fn>
std::vector<std::vector<RunRecord>> run_tasks(std::size_t n_tasks, Fn&& fn) {
  std::vector<std::vector<RunRecord>> slots(n_tasks);
  const auto n = static_cast<std::int64_t>(n_tasks);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t t = 0; t < n; ++t) slots[static_cast<std::size_t>(t)] = fn(static_cast<std::size_t>(t));
  return slots;
}

std::vector<double> componentwise_mean(const std::vector<ansatz::ParameterVector>& vs) {
  std::vector<double> mean(vs.front().size(), 0.0);
  for (const auto& v : vs)
    for (std::size_t k = 0; k < v.size(); ++k) mean[k] += v[k];
  for (auto& m : mean) m /= static_cast<double>(vs.size());
  return mean;
}

}  // namespace

std::string_view version() { return DCQAOA_VERSION; }

std::string_view to_string(InitStrategy s) {
  switch (s) {
    case InitStrategy::Random: return "random";
    case InitStrategy::LSTM: return "lstm";
    case InitStrategy::GRU: return "gru";
    case InitStrategy::Transferred: return "transferred";
  }
  return "?";
}

InitStrategy parse_init_strategy(std::string_view name) {
  for (auto s : {InitStrategy::Random, InitStrategy::LSTM, InitStrategy::GRU,
                 InitStrategy::Transferred})
    if (to_string(s) == name) return s;
  throw std::invalid_argument("unknown init strategy '" + std::string(name) + "'");
}

CellKind cell_for(InitStrategy s) {
  if (s == InitStrategy::LSTM) return CellKind::LSTM;
  if (s == InitStrategy::GRU) return CellKind::GRU;
  throw std::invalid_argument("init strategy has no recurrent cell");
}

std::vector<SummaryRow> aggregate(const std::vector<RunRecord>& records) {
  if (records.empty()) throw std::invalid_argument("aggregate: no records");
  using Key = std::tuple<std::string, Algorithm, InitStrategy, std::size_t>;
  std::map<Key, std::vector<double>> groups;
  for (const auto& r : records)
    groups[{r.experiment, r.algorithm, r.init, r.iteration}].push_back(r.rel_error);

  std::vector<SummaryRow> rows;
  rows.reserve(groups.size());
  for (const auto& [key, values] : groups) {
    const double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double se = 0.0;
    if (values.size() > 1) {
      double ss = 0.0;
      for (double v : values) ss += (v - mean) * (v - mean);
      se = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    }
    rows.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key),
                    std::get<3>(key), mean, se, values.size()});
  }
  return rows;
}

std::vector<SummaryRow> final_rows(const std::vector<SummaryRow>& summary) {
  std::vector<SummaryRow> out;
  for (std::size_t k = 0; k < summary.size(); ++k) {
    const bool last = k + 1 == summary.size() ||
                      summary[k + 1].experiment != summary[k].experiment ||
                      summary[k + 1].algorithm != summary[k].algorithm ||
                      summary[k + 1].init != summary[k].init;
    if (last) out.push_back(summary[k]);
  }
  return out;
}

OptimizationTrace optimize(const ansatz::CircuitEvaluator& circuit,
                           ansatz::ParameterVector init, std::size_t iterations,
                           double learning_rate) {
  OptimizationTrace trace;
  trace.final_params = std::move(init);
  auto opt = optim::make_optimizer(optim::OptimizerKind::Adagrad, learning_rate,
                                   trace.final_params.size());
  trace.costs.reserve(iterations);
  for (std::size_t k = 0; k < iterations; ++k) {
    const double f = circuit.cost(trace.final_params);
    if (!std::isfinite(f)) throw NumericalError("optimize: non-finite cost");
    trace.costs.push_back(f);
    const auto grad = circuit.gradient(trace.final_params);
    optim::adagrad_step(opt, trace.final_params, grad);
  }
  return trace;
}

ansatz::ParameterVector random_init(std::size_t dim, std::uint64_t seed,
                                    std::uint64_t instance_seed,
                                    Algorithm algorithm) {
  SplitMix64 rng(derive_seed(seed, algorithm == Algorithm::QAOA ? "random-qaoa"
                                                                 : "random-dcqaoa",
                             instance_seed));
  ansatz::ParameterVector theta(dim);
  for (auto& v : theta) v = rng.uniform(-std::numbers::pi, std::numbers::pi);
  return theta;
}

std::size_t default_iterations(ProblemKind kind) {
  return kind == ProblemKind::MaxCutCompleteWeighted ? 200 : 100;
}

problems::ProblemInstance evaluation_instance(ProblemKind kind, std::size_t n,
                                              std::uint64_t seed, std::size_t k) {
  return problems::generate(kind, n, derive_seed(seed, "eval", k));
}

CellLibrary train_cells(const BenchmarkConfig& cfg,
                        const metalearn::TrainConfig& train_cfg,
                        const Logger& log) {
  CellLibrary lib;
  for (InitStrategy init : cfg.inits) {
    if (init != InitStrategy::LSTM && init != InitStrategy::GRU) continue;
    for (Algorithm alg : cfg.algorithms) {
      const auto key = std::pair(cell_for(init), alg);
      if (lib.contains(key)) continue;
      const auto ac = ansatz::make_config(cfg.problem, alg, cfg.p, cfg.cd_class);
      emit(log, fmt::format("training {} for {} on {} (n={}, p={})", to_string(init),
                            ansatz::to_string(alg), problems::to_string(cfg.problem),
                            cfg.n, cfg.p));
      lib.emplace(key, metalearn::train(key.first, cfg.problem, cfg.n, ac, train_cfg,
                                        [&](std::size_t epoch, double loss) {
                                          emit(log, fmt::format("  epoch {} loss {:.6f}",
                                                                epoch, loss));
                                        }));
    }
  }
  return lib;
}

std::vector<RunRecord> run_benchmark(const BenchmarkConfig& cfg,
                                     const CellLibrary& cells, const Logger& log) {
  if (cfg.instances < 1 || cfg.iterations < 1)
    throw std::invalid_argument("benchmark needs instances and iterations >= 1");
  for (InitStrategy init : cfg.inits) {
    if (init == InitStrategy::Transferred)
      throw std::invalid_argument("transferred init is only used by concentration");
    if (init == InitStrategy::Random) continue;
    for (Algorithm alg : cfg.algorithms) {
      auto it = cells.find({cell_for(init), alg});
      if (it == cells.end())
        throw ArtifactError(fmt::format("no trained {} weights for {}", to_string(init),
                                        ansatz::to_string(alg)));
      if (it->second.ansatz.p != cfg.p || it->second.ansatz.algorithm != alg)
        throw std::invalid_argument("trained cell does not match algorithm/p");
    }
  }

  std::vector<problems::ProblemInstance> instances;
  for (std::size_t k = 0; k < cfg.instances; ++k)
    instances.push_back(evaluation_instance(cfg.problem, cfg.n, cfg.seed, k));

  std::vector<Task> tasks;
  for (Algorithm alg : cfg.algorithms)
    for (InitStrategy init : cfg.inits)
      for (std::size_t k = 0; k < instances.size(); ++k) tasks.push_back({k, alg, init});

  emit(log, fmt::format("{}: {} runs of {} iterations", cfg.experiment, tasks.size(),
                        cfg.iterations));
  auto slots = run_tasks(tasks.size(), [&](std::size_t t) {
    const Task& task = tasks[t];
    const auto ac = ansatz::make_config(cfg.problem, task.algorithm, cfg.p, cfg.cd_class);
    const ansatz::CircuitEvaluator circuit(instances[task.instance_index], ac);
    ansatz::ParameterVector init;
    if (task.init == InitStrategy::Random) {
      init = random_init(ac.n_params(), cfg.seed, circuit.instance().seed, task.algorithm);
    } else {
      const auto& cell = cells.at({cell_for(task.init), task.algorithm});
      init = metalearn::propose_init(cell.weights, circuit, cell.config, cfg.seed);
    }
    std::vector<RunRecord> out;
    append_trace(out, cfg.experiment, circuit, task.algorithm, task.init,
                 optimize(circuit, std::move(init), cfg.iterations, cfg.learning_rate));
    return out;
  });

  std::vector<RunRecord> records;
  for (auto& s : slots) records.insert(records.end(), s.begin(), s.end());
  return records;
}

std::string cd_compare_id(ProblemKind problem, ansatz::CdClass c) {
  return fmt::format("cd-compare/{}/{}", problems::to_string(problem), ansatz::to_string(c));
}

std::vector<RunRecord> run_cd_compare(const CdCompareConfig& cfg, const Logger& log) {
  const InitStrategy init =
      cfg.cell == CellKind::LSTM ? InitStrategy::LSTM : InitStrategy::GRU;
  std::vector<RunRecord> records;
  for (ProblemKind problem : cfg.problems) {
    for (ansatz::CdClass cls : cfg.classes) {
      const std::string id = cd_compare_id(problem, cls);
      const auto ac = ansatz::make_config(problem, Algorithm::DCQAOA, cfg.p, cls);
      metalearn::TrainConfig tc = metalearn::default_train_config(problem);
      tc.train_set_size = cfg.train_size;
      tc.max_epochs = cfg.max_epochs;
      tc.seed = derive_seed(cfg.seed, "cd-compare-train",
                            static_cast<std::uint64_t>(problem));
      emit(log, fmt::format("{}: training {}", id, metalearn::to_string(cfg.cell)));
      const auto cell = metalearn::train(cfg.cell, problem, cfg.n, ac, tc);

      const std::uint64_t eval_seed =
          derive_seed(cfg.seed, "cd-compare-eval", static_cast<std::uint64_t>(problem));
      auto slots = run_tasks(cfg.eval_instances, [&](std::size_t k) {
        const ansatz::CircuitEvaluator circuit(
            evaluation_instance(problem, cfg.n, eval_seed, k), ac);
        auto theta = metalearn::propose_init(cell.weights, circuit, tc, cfg.seed);
        std::vector<RunRecord> out;
        append_trace(out, id, circuit, Algorithm::DCQAOA, init,
                     optimize(circuit, std::move(theta), cfg.iterations, 0.1));
        return out;
      });
      for (auto& s : slots) records.insert(records.end(), s.begin(), s.end());
    }
  }
  return records;
}

std::string concentration_id(std::size_t nodes) {
  return fmt::format("concentration/n={}", nodes);
}

ConcentrationResult run_concentration(const ConcentrationConfig& cfg,
                                      const CellLibrary& lstm_cells,
                                      const Logger& log) {
  for (std::size_t n : cfg.nodes)
    if (n > sim::kMaxQubits)
      throw std::out_of_range(fmt::format("concentration: n={} exceeds the {}-qubit limit",
                                          n, sim::kMaxQubits));
  const auto kind = ProblemKind::MaxCut3Regular;
  ConcentrationResult result;

  // Source parameters: LSTM proposal refined by Adagrad on source_n instances.
  for (Algorithm alg : cfg.algorithms) {
    auto it = lstm_cells.find({CellKind::LSTM, alg});
    if (it == lstm_cells.end())
      throw ArtifactError(fmt::format("no trained lstm weights for {}", ansatz::to_string(alg)));
    const auto& cell = it->second;
    const auto ac = ansatz::make_config(kind, alg, cfg.p, cfg.cd_class);
    const std::uint64_t src_seed = derive_seed(cfg.seed, "concentration-source");
    std::vector<ansatz::ParameterVector> optimized(cfg.instances);
    const auto n_inst = static_cast<std::int64_t>(cfg.instances);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t k = 0; k < n_inst; ++k) {
      const ansatz::CircuitEvaluator circuit(
          evaluation_instance(kind, cfg.source_n, src_seed, static_cast<std::size_t>(k)), ac);
      auto theta = metalearn::propose_init(cell.weights, circuit, cell.config, cfg.seed);
      optimized[static_cast<std::size_t>(k)] =
          optimize(circuit, std::move(theta), cfg.iterations, cfg.learning_rate).final_params;
    }
    result.transferred[alg] = componentwise_mean(optimized);
  }

  for (std::size_t n : cfg.nodes) {
    const std::string id = concentration_id(n);
    const std::uint64_t eval_seed = derive_seed(cfg.seed, "concentration-eval", n);
    std::vector<problems::ProblemInstance> instances;
    for (std::size_t k = 0; k < cfg.instances; ++k)
      instances.push_back(evaluation_instance(kind, n, eval_seed, k));
    std::vector<Task> tasks;
    for (Algorithm alg : cfg.algorithms)
      for (InitStrategy init : {InitStrategy::Random, InitStrategy::Transferred})
        for (std::size_t k = 0; k < instances.size(); ++k) tasks.push_back({k, alg, init});
    emit(log, fmt::format("{}: {} runs", id, tasks.size()));

    auto slots = run_tasks(tasks.size(), [&](std::size_t t) {
      const Task& task = tasks[t];
      const auto ac = ansatz::make_config(kind, task.algorithm, cfg.p, cfg.cd_class);
      const ansatz::CircuitEvaluator circuit(instances[task.instance_index], ac);
      ansatz::ParameterVector theta =
          task.init == InitStrategy::Random
              ? random_init(ac.n_params(), cfg.seed, circuit.instance().seed, task.algorithm)
              : result.transferred.at(task.algorithm);
      std::vector<RunRecord> out;
      append_trace(out, id, circuit, task.algorithm, task.init,
                   optimize(circuit, std::move(theta), cfg.iterations, cfg.learning_rate));
      return out;
    });
    for (auto& s : slots) result.records.insert(result.records.end(), s.begin(), s.end());
  }
  return result;
}

std::string records_csv(const std::vector<RunRecord>& records) {
  std::string out = "experiment,problem,algorithm,init,instance_seed,iteration,cost,rel_error\n";
  for (const auto& r : records) {
    out += fmt::format("{},{},{},{},{},{},{:.10g},{:.10g}\n", r.experiment,
                       problems::to_string(r.problem), ansatz::to_string(r.algorithm),
                       to_string(r.init), r.instance_seed, r.iteration, r.cost, r.rel_error);
  }
  return out;
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::string out = "experiment,algorithm,init,iteration,mean_rel_error,stderr\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{:.10g},{:.10g}\n", r.experiment,
                       ansatz::to_string(r.algorithm), to_string(r.init), r.iteration,
                       r.mean_rel_error, r.std_error);
  }
  return out;
}

}  // namespace dcqaoa::experiments
