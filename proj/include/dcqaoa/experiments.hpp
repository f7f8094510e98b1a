#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dcqaoa/ansatz.hpp"
#include "dcqaoa/metalearn.hpp"
#include "dcqaoa/problems.hpp"

namespace dcqaoa::experiments {

/// git-describe style version baked in at configure time.
std::string_view version();

enum class InitStrategy { Random, LSTM, GRU, Transferred };

std::string_view to_string(InitStrategy s);
InitStrategy parse_init_strategy(std::string_view name);

/// Cell kind backing an RNN init strategy (LSTM or GRU only).
metalearn::CellKind cell_for(InitStrategy s);

struct RunRecord {
  std::string experiment;
  problems::ProblemKind problem;
  ansatz::Algorithm algorithm;
  InitStrategy init;
  std::uint64_t instance_seed;
  std::size_t iteration;
  double cost;
  double rel_error;
};

struct SummaryRow {
  std::string experiment;
  ansatz::Algorithm algorithm;
  InitStrategy init;
  std::size_t iteration;
  double mean_rel_error;
  double std_error;  // sample stddev / sqrt(instances); 0 for one instance
  std::size_t instances;
};

/// Mean and standard error per (experiment, algorithm, init, iteration),
/// sorted by that key. Throws on empty input.
std::vector<SummaryRow> aggregate(const std::vector<RunRecord>& records);

/// Rows of the last iteration of every (experiment, algorithm, init) group.
std::vector<SummaryRow> final_rows(const std::vector<SummaryRow>& summary);

using Logger = std::function<void(const std::string&)>;

/// F(theta_k) for k = 0..iterations-1 where theta_k has had k optimizer
/// updates, plus the parameters after all `iterations` updates.
struct OptimizationTrace {
  std::vector<double> costs;
  ansatz::ParameterVector final_params;
};

OptimizationTrace optimize(const ansatz::CircuitEvaluator& circuit,
                           ansatz::ParameterVector init, std::size_t iterations,
                           double learning_rate);

/// Angles uniform on [-pi, pi], deterministic per (seed, instance, algorithm).
ansatz::ParameterVector random_init(std::size_t dim, std::uint64_t seed,
                                    std::uint64_t instance_seed,
                                    ansatz::Algorithm algorithm);

/// Trained cells keyed by (cell kind, algorithm).
using CellLibrary =
    std::map<std::pair<metalearn::CellKind, ansatz::Algorithm>, metalearn::TrainedCell>;

struct BenchmarkConfig {
  problems::ProblemKind problem = problems::ProblemKind::MaxCut3Regular;
  std::size_t n = 10;
  std::size_t p = 2;
  std::size_t iterations = 100;
  std::size_t instances = 10;
  std::vector<ansatz::Algorithm> algorithms = {ansatz::Algorithm::QAOA,
                                               ansatz::Algorithm::DCQAOA};
  std::vector<InitStrategy> inits = {InitStrategy::Random, InitStrategy::LSTM,
                                     InitStrategy::GRU};
  ansatz::CdClass cd_class = ansatz::CdClass::ZY;
  double learning_rate = 0.1;  // Adagrad, final refinement
  std::uint64_t seed = 0;
  std::string experiment = "bench";
};

/// Iteration budget per problem: 100 (3-regular), 200 (weighted), 100 (SK).
std::size_t default_iterations(problems::ProblemKind kind);

/// Held-out evaluation instance k of an experiment.
problems::ProblemInstance evaluation_instance(problems::ProblemKind kind,
                                              std::size_t n, std::uint64_t seed,
                                              std::size_t k);

/// Trains every cell the benchmark's RNN inits need. The training set is
/// disjoint from the evaluation instances.
CellLibrary train_cells(const BenchmarkConfig& cfg,
                        const metalearn::TrainConfig& train_cfg,
                        const Logger& log = {});

/// Every (instance, algorithm, init) combination, Adagrad-refined.
/// Throws ArtifactError when an RNN init has no cell in `cells`.
std::vector<RunRecord> run_benchmark(const BenchmarkConfig& cfg,
                                     const CellLibrary& cells,
                                     const Logger& log = {});

struct CdCompareConfig {
  std::size_t n = 8;
  std::size_t p = 1;
  std::size_t train_size = 100;
  std::size_t eval_instances = 5;
  std::size_t iterations = 100;
  std::size_t max_epochs = 10;
  metalearn::CellKind cell = metalearn::CellKind::LSTM;
  std::vector<problems::ProblemKind> problems = {
      problems::ProblemKind::MaxCut3Regular,
      problems::ProblemKind::MaxCutCompleteWeighted, problems::ProblemKind::SK};
  std::vector<ansatz::CdClass> classes = {std::begin(ansatz::kAllCdClasses),
                                          std::end(ansatz::kAllCdClasses)};
  std::uint64_t seed = 0;
};

/// Experiment id "cd-compare/<problem>/<class>".
std::string cd_compare_id(problems::ProblemKind problem, ansatz::CdClass c);

/// Trains one cell per (problem, CD class) and records RNN-initialized
/// DC-QAOA runs on held-out instances.
std::vector<RunRecord> run_cd_compare(const CdCompareConfig& cfg,
                                      const Logger& log = {});

struct ConcentrationConfig {
  std::vector<std::size_t> nodes = {10, 14, 16, 18};
  std::size_t source_n = 10;
  std::size_t p = 2;
  std::size_t instances = 10;
  std::size_t iterations = 100;
  std::vector<ansatz::Algorithm> algorithms = {ansatz::Algorithm::QAOA,
                                               ansatz::Algorithm::DCQAOA};
  ansatz::CdClass cd_class = ansatz::CdClass::ZY;
  double learning_rate = 0.1;
  std::uint64_t seed = 0;
};

/// Experiment id "concentration/n=<nodes>".
std::string concentration_id(std::size_t nodes);

struct ConcentrationResult {
  std::vector<RunRecord> records;
  /// Componentwise mean of the optimized source parameters, per algorithm.
  std::map<ansatz::Algorithm, ansatz::ParameterVector> transferred;
};

/// Transfers optimized source_n parameters (LSTM init + Adagrad, averaged
/// over instances) to fresh larger instances and compares with random init.
/// `lstm_cells` must hold an LSTM for every algorithm.
ConcentrationResult run_concentration(const ConcentrationConfig& cfg,
                                      const CellLibrary& lstm_cells,
                                      const Logger& log = {});

/// CSV writers; floats with 10 significant digits.
std::string records_csv(const std::vector<RunRecord>& records);
std::string summary_csv(const std::vector<SummaryRow>& rows);

}  // namespace dcqaoa::experiments
