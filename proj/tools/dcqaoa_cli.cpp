#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dcqaoa/errors.hpp"
#include "dcqaoa/experiments.hpp"
#include "dcqaoa/metalearn.hpp"
#include "dcqaoa/serialization.hpp"

namespace fs = std::filesystem;
using namespace dcqaoa;
using ansatz::Algorithm;
using experiments::InitStrategy;
using metalearn::CellKind;
using problems::ProblemKind;

namespace {

enum Exit { kOk = 0, kBadArgs = 2, kMissingArtifact = 3, kNumerical = 4 };

struct Options {
  std::optional<std::string> problem, algorithm, cell, cd_term, optimizer;
  std::optional<std::size_t> qubits, layers, instances, iterations, horizon, epochs, train_size;
  std::optional<double> tol, lr;
  std::uint64_t seed = 0;
  std::vector<std::string> weights;
  std::vector<std::size_t> nodes;
  std::string out = ".";
  bool quiet = false;
};

void add_common(CLI::App* app, Options& o) {
  app->add_option("--problem", o.problem, "Problem kind")
      ->check(CLI::IsMember({"maxcut3r", "maxcutw", "sk"}));
  app->add_option("--qubits", o.qubits, "Number of qubits / graph nodes")
      ->check(CLI::Range(1, 24));
  app->add_option("--layers", o.layers, "Circuit depth p")->check(CLI::Range(1, 64));
  app->add_option("--algorithm", o.algorithm, "Ansatz")->check(CLI::IsMember({"qaoa", "dcqaoa"}));
  app->add_option("--cell", o.cell, "Recurrent cell")->check(CLI::IsMember({"lstm", "gru"}));
  app->add_option("--cd-term", o.cd_term, "Counterdiabatic pool class")
      ->check(CLI::IsMember({"y", "zy", "yz", "xy", "yx"}));
  app->add_option("--instances", o.instances, "Evaluation instances")->check(CLI::PositiveNumber);
  app->add_option("--iterations", o.iterations, "Adagrad iterations per run")
      ->check(CLI::PositiveNumber);
  app->add_option("--horizon", o.horizon, "Unrolled steps T")->check(CLI::PositiveNumber);
  app->add_option("--epochs", o.epochs, "Maximum training epochs")->check(CLI::PositiveNumber);
  app->add_option("--tol", o.tol, "Relative loss-change stopping tolerance")
      ->check(CLI::NonNegativeNumber);
  app->add_option("--lr", o.lr, "Learning rate")->check(CLI::PositiveNumber);
  app->add_option("--optimizer", o.optimizer, "Meta-training optimizer")
      ->check(CLI::IsMember({"adam", "adagrad"}));
  app->add_option("--train-size", o.train_size, "Training instances")->check(CLI::PositiveNumber);
  app->add_option("--seed", o.seed, "Base seed");
  app->add_option("--weights", o.weights, "Trained weights file (repeatable)");
  app->add_option("--out", o.out, "Output directory");
  app->add_flag("--quiet", o.quiet, "No progress on stderr");
}

// Flat config echo for run_meta.json; values are JSON literals.
class Meta {
 public:
  void str(std::string key, std::string_view v) {
    kv_.emplace_back(std::move(key), fmt::format("\"{}\"", v));
  }
  void num(std::string key, std::size_t v) { kv_.emplace_back(std::move(key), fmt::format("{}", v)); }
  void real(std::string key, double v) { kv_.emplace_back(std::move(key), io::format_double(v)); }
  void raw(std::string key, std::string v) { kv_.emplace_back(std::move(key), std::move(v)); }

  std::string json(std::string_view command) const {
    std::string s = fmt::format("{{\n  \"command\": \"{}\",\n  \"version\": \"{}\",\n  \"config\": {{",
                                command, experiments::version());
    for (std::size_t k = 0; k < kv_.size(); ++k)
      s += fmt::format("{}\n    \"{}\": {}", k ? "," : "", kv_[k].first, kv_[k].second);
    return s + "\n  }\n}\n";
  }

 private:
  std::vector<std::pair<std::string, std::string>> kv_;
};

std::string string_list(const std::vector<std::string>& v) {
  std::string s = "[";
  for (std::size_t k = 0; k < v.size(); ++k) s += fmt::format("{}\"{}\"", k ? ", " : "", v[k]);
  return s + "]";
}

experiments::Logger logger(const Options& o) {
  if (o.quiet) return {};
  return [](const std::string& msg) { std::cerr << msg << '\n'; };
}

ProblemKind problem_of(const Options& o, ProblemKind fallback = ProblemKind::MaxCut3Regular) {
  return o.problem ? problems::parse_problem_kind(*o.problem) : fallback;
}

std::vector<Algorithm> algorithms_of(const Options& o) {
  if (o.algorithm) return {ansatz::parse_algorithm(*o.algorithm)};
  return {Algorithm::QAOA, Algorithm::DCQAOA};
}

metalearn::TrainConfig train_config(const Options& o, ProblemKind kind) {
  auto cfg = metalearn::default_train_config(kind);
  if (o.horizon) cfg.horizon = *o.horizon;
  if (o.epochs) cfg.max_epochs = *o.epochs;
  if (o.tol) cfg.tolerance = *o.tol;
  if (o.optimizer) cfg.trainer = optim::parse_optimizer_kind(*o.optimizer);
  if (o.train_size) cfg.train_set_size = *o.train_size;
  cfg.seed = o.seed;
  return cfg;
}

void echo_training(Meta& m, const metalearn::TrainConfig& t) {
  m.num("horizon", t.horizon);
  m.num("epochs", t.max_epochs);
  m.real("tol", t.tolerance);
  m.str("optimizer", optim::to_string(t.trainer));
  m.real("train_lr", t.learning_rate);
  m.num("train_size", t.train_set_size);
}

void write_results(const fs::path& out, const std::vector<experiments::RunRecord>& records) {
  io::write_file(out / "records.csv", experiments::records_csv(records));
  io::write_file(out / "summary.csv", experiments::summary_csv(experiments::aggregate(records)));
}

std::string weights_name(CellKind kind, Algorithm alg) {
  return fmt::format("weights_{}_{}.json", metalearn::to_string(kind), ansatz::to_string(alg));
}

experiments::CellLibrary load_cells(const Options& o, ProblemKind problem, std::size_t n) {
  experiments::CellLibrary lib;
  for (const auto& path : o.weights) {
    auto cell = io::load_weights(path);
    if (cell.problem != problem || cell.n != n)
      throw std::invalid_argument(fmt::format("{} was trained for {} with n={}", path,
                                              problems::to_string(cell.problem), cell.n));
    const auto key = std::pair(cell.weights.kind(), cell.ansatz.algorithm);
    lib.insert_or_assign(key, std::move(cell));
  }
  return lib;
}

// ---------------------------------------------------------------------------

int cmd_gen(const Options& o) {
  const auto kind = problem_of(o);
  const std::size_t n = o.qubits.value_or(10);
  const std::size_t count = o.instances.value_or(10);
  const fs::path out = o.out;
  for (std::size_t k = 0; k < count; ++k) {
    const auto inst = experiments::evaluation_instance(kind, n, o.seed, k);
    io::write_file(out / fmt::format("instance_{}.json", k), io::graph_to_json(inst));
  }
  Meta m;
  m.str("problem", problems::to_string(kind));
  m.num("qubits", n);
  m.num("instances", count);
  m.num("seed", o.seed);
  io::write_file(out / "run_meta.json", m.json("gen"));
  return kOk;
}

int cmd_train(const Options& o) {
  const auto kind = problem_of(o);
  const std::size_t n = o.qubits.value_or(10);
  const auto alg = o.algorithm ? ansatz::parse_algorithm(*o.algorithm) : Algorithm::DCQAOA;
  const auto cell = o.cell ? metalearn::parse_cell_kind(*o.cell) : CellKind::LSTM;
  const auto cd = o.cd_term ? ansatz::parse_cd_class(*o.cd_term) : ansatz::CdClass::ZY;
  const auto ac = ansatz::make_config(kind, alg, o.layers.value_or(2), cd);
  auto tc = train_config(o, kind);
  if (o.lr) tc.learning_rate = *o.lr;
  const auto log = logger(o);
  const auto trained = metalearn::train(cell, kind, n, ac, tc, [&](std::size_t e, double loss) {
    if (log) log(fmt::format("epoch {} loss {:.8f}", e, loss));
  });
  const fs::path out = o.out;
  io::save_weights(out / "weights.json", trained);
  Meta m;
  m.str("problem", problems::to_string(kind));
  m.num("qubits", n);
  m.num("layers", ac.p);
  m.str("algorithm", ansatz::to_string(alg));
  m.str("cell", metalearn::to_string(cell));
  m.str("cd_term", ansatz::to_string(cd));
  echo_training(m, tc);
  m.num("seed", o.seed);
  m.num("epochs_run", trained.epoch_losses.size());
  io::write_file(out / "run_meta.json", m.json("train"));
  return kOk;
}

int cmd_bench(const Options& o) {
  experiments::BenchmarkConfig cfg;
  cfg.problem = problem_of(o);
  cfg.n = o.qubits.value_or(10);
  cfg.p = o.layers.value_or(2);
  cfg.instances = o.instances.value_or(10);
  cfg.iterations = o.iterations.value_or(experiments::default_iterations(cfg.problem));
  cfg.algorithms = algorithms_of(o);
  cfg.inits = {InitStrategy::Random};
  if (!o.cell || *o.cell == "lstm") cfg.inits.push_back(InitStrategy::LSTM);
  if (!o.cell || *o.cell == "gru") cfg.inits.push_back(InitStrategy::GRU);
  if (o.cd_term) cfg.cd_class = ansatz::parse_cd_class(*o.cd_term);
  if (o.lr) cfg.learning_rate = *o.lr;
  cfg.seed = o.seed;
  cfg.experiment = fmt::format("bench/{}", problems::to_string(cfg.problem));

  const fs::path out = o.out;
  const auto log = logger(o);
  const auto tc = train_config(o, cfg.problem);
  auto cells = load_cells(o, cfg.problem, cfg.n);
  if (o.weights.empty()) {
    cells = experiments::train_cells(cfg, tc, log);
    for (const auto& [key, cell] : cells)
      io::save_weights(out / weights_name(key.first, key.second), cell);
  }
  write_results(out, experiments::run_benchmark(cfg, cells, log));

  Meta m;
  m.str("problem", problems::to_string(cfg.problem));
  m.num("qubits", cfg.n);
  m.num("layers", cfg.p);
  m.num("instances", cfg.instances);
  m.num("iterations", cfg.iterations);
  std::vector<std::string> algs, inits;
  for (auto a : cfg.algorithms) algs.emplace_back(ansatz::to_string(a));
  for (auto s : cfg.inits) inits.emplace_back(experiments::to_string(s));
  m.raw("algorithms", string_list(algs));
  m.raw("inits", string_list(inits));
  m.str("cd_term", ansatz::to_string(cfg.cd_class));
  m.str("refine_optimizer", "adagrad");
  m.real("lr", cfg.learning_rate);
  m.num("seed", cfg.seed);
  if (o.weights.empty()) echo_training(m, tc);
  m.raw("weights", string_list(o.weights));
  io::write_file(out / "run_meta.json", m.json("bench"));
  return kOk;
}

int cmd_cd_compare(const Options& o) {
  experiments::CdCompareConfig cfg;
  if (o.qubits) cfg.n = *o.qubits;
  if (o.layers) cfg.p = *o.layers;
  if (o.train_size) cfg.train_size = *o.train_size;
  if (o.instances) cfg.eval_instances = *o.instances;
  if (o.iterations) cfg.iterations = *o.iterations;
  if (o.epochs) cfg.max_epochs = *o.epochs;
  if (o.cell) cfg.cell = metalearn::parse_cell_kind(*o.cell);
  if (o.problem) cfg.problems = {problems::parse_problem_kind(*o.problem)};
  if (o.cd_term) cfg.classes = {ansatz::parse_cd_class(*o.cd_term)};
  cfg.seed = o.seed;
  const fs::path out = o.out;
  write_results(out, experiments::run_cd_compare(cfg, logger(o)));

  Meta m;
  m.num("qubits", cfg.n);
  m.num("layers", cfg.p);
  m.num("train_size", cfg.train_size);
  m.num("instances", cfg.eval_instances);
  m.num("iterations", cfg.iterations);
  m.num("epochs", cfg.max_epochs);
  m.str("cell", metalearn::to_string(cfg.cell));
  std::vector<std::string> kinds, classes;
  for (auto k : cfg.problems) kinds.emplace_back(problems::to_string(k));
  for (auto c : cfg.classes) classes.emplace_back(ansatz::to_string(c));
  m.raw("problems", string_list(kinds));
  m.raw("cd_terms", string_list(classes));
  m.num("seed", cfg.seed);
  io::write_file(out / "run_meta.json", m.json("cd-compare"));
  return kOk;
}

int cmd_concentration(const Options& o) {
  experiments::ConcentrationConfig cfg;
  if (!o.nodes.empty()) cfg.nodes = o.nodes;
  if (o.qubits) cfg.source_n = *o.qubits;
  if (o.layers) cfg.p = *o.layers;
  if (o.instances) cfg.instances = *o.instances;
  if (o.iterations) cfg.iterations = *o.iterations;
  if (o.lr) cfg.learning_rate = *o.lr;
  if (o.cd_term) cfg.cd_class = ansatz::parse_cd_class(*o.cd_term);
  cfg.algorithms = algorithms_of(o);
  cfg.seed = o.seed;
  for (std::size_t n : cfg.nodes)
    if (n > 24) throw std::out_of_range(fmt::format("node count {} exceeds 24", n));

  const fs::path out = o.out;
  const auto log = logger(o);
  const auto tc = train_config(o, ProblemKind::MaxCut3Regular);
  auto cells = load_cells(o, ProblemKind::MaxCut3Regular, cfg.source_n);
  if (o.weights.empty()) {
    experiments::BenchmarkConfig source;
    source.n = cfg.source_n;
    source.p = cfg.p;
    source.algorithms = cfg.algorithms;
    source.inits = {InitStrategy::LSTM};
    source.cd_class = cfg.cd_class;
    cells = experiments::train_cells(source, tc, log);
    for (const auto& [key, cell] : cells)
      io::save_weights(out / weights_name(key.first, key.second), cell);
  }
  const auto res = experiments::run_concentration(cfg, cells, log);
  write_results(out, res.records);
  std::string transferred = "{";
  bool first = true;
  for (const auto& [alg, params] : res.transferred) {
    std::vector<std::string> vals;
    for (double v : params) vals.push_back(io::format_double(v));
    transferred += fmt::format("{}\n  \"{}\": [{}]", first ? "" : ",", ansatz::to_string(alg),
                               fmt::join(vals, ", "));
    first = false;
  }
  io::write_file(out / "transferred.json", transferred + "\n}\n");

  Meta m;
  std::vector<std::string> nodes;
  for (auto n : cfg.nodes) nodes.push_back(fmt::format("{}", n));
  m.raw("nodes", fmt::format("[{}]", fmt::join(nodes, ", ")));
  m.num("source_qubits", cfg.source_n);
  m.num("layers", cfg.p);
  m.num("instances", cfg.instances);
  m.num("iterations", cfg.iterations);
  m.str("cd_term", ansatz::to_string(cfg.cd_class));
  m.real("lr", cfg.learning_rate);
  m.num("seed", cfg.seed);
  if (o.weights.empty()) echo_training(m, tc);
  m.raw("weights", string_list(o.weights));
  io::write_file(out / "run_meta.json", m.json("concentration"));
  return kOk;
}

int cmd_param_count(const Options& o) {
  const std::size_t max_p = o.layers.value_or(10);
  std::string csv = "cell,algorithm,p,d,params\n";
  for (CellKind kind : {CellKind::LSTM, CellKind::GRU})
    for (Algorithm alg : {Algorithm::QAOA, Algorithm::DCQAOA})
      for (std::size_t p = 1; p <= max_p; ++p)
        csv += fmt::format("{},{},{},{},{}\n", metalearn::to_string(kind), ansatz::to_string(alg),
                           p, (alg == Algorithm::QAOA ? 2 : 3) * p,
                           metalearn::trainable_param_count(kind, alg, p));
  std::cout << csv;
  if (!o.out.empty() && o.out != ".") {
    io::write_file(fs::path(o.out) / "param_counts.csv", csv);
    Meta m;
    m.num("layers", max_p);
    io::write_file(fs::path(o.out) / "run_meta.json", m.json("param-count"));
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Counterdiabatic QAOA simulator with recurrent meta-learned initialization"};
  app.set_version_flag("--version", std::string(experiments::version()));
  app.require_subcommand(1);

  Options o;
  const std::pair<const char*, const char*> commands[] = {
      {"gen", "Write held-out problem instances as JSON"},
      {"train", "Meta-train one recurrent cell"},
      {"bench", "Random vs LSTM/GRU initialization, QAOA vs DC-QAOA"},
      {"cd-compare", "Compare counterdiabatic pool classes"},
      {"concentration", "Transfer optimized parameters to larger graphs"},
      {"param-count", "Trainable parameter counts of the cells"}};
  std::vector<CLI::App*> subs;
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    add_common(sub, o);
    subs.push_back(sub);
  }
  subs[4]->add_option("--nodes", o.nodes, "Target node counts")->check(CLI::Range(2, 64));

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kBadArgs;
  }

  try {
    if (!subs[5]->parsed()) fs::create_directories(o.out);
    if (subs[0]->parsed()) return cmd_gen(o);
    if (subs[1]->parsed()) return cmd_train(o);
    if (subs[2]->parsed()) return cmd_bench(o);
    if (subs[3]->parsed()) return cmd_cd_compare(o);
    if (subs[4]->parsed()) return cmd_concentration(o);
    return cmd_param_count(o);
  } catch (const ArtifactError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kMissingArtifact;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadArgs;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadArgs;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
