// Acceptance runner: one PASS/FAIL line per criterion.
// Usage: dcqaoa_acceptance [criterion ...]   (default: all)

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "dcqaoa/experiments.hpp"
#include "dcqaoa/metalearn.hpp"
#include "dcqaoa/pauli.hpp"
#include "dcqaoa/rng.hpp"
#include "dcqaoa/serialization.hpp"
#include "dense_oracle.hpp"

using namespace dcqaoa;
using ansatz::Algorithm;
using ansatz::CdClass;
using experiments::InitStrategy;
using metalearn::CellKind;
using problems::ProblemInstance;
using problems::ProblemKind;
namespace oracle = dcqaoa::testing;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, std::string what) {
    if (!ok) pass = false;
    notes.push_back(fmt::format("{} {}", ok ? "ok  " : "FAIL", what));
  }
  void note(std::string what) { notes.push_back("     " + std::move(what)); }
};

void log_stderr(const std::string& msg) { std::cerr << "  | " << msg << '\n'; }

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t dim, double range) {
  std::uniform_real_distribution<double> u(-range, range);
  std::vector<double> v(dim);
  for (auto& x : v) x = u(rng);
  return v;
}

ProblemInstance small_instance(ProblemKind kind, std::size_t n, std::uint64_t seed) {
  if (n < 2) return ProblemInstance{kind, n, {}, seed};
  if (kind == ProblemKind::MaxCut3Regular && n < 4) {
    ProblemInstance inst{kind, n, {}, seed};
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) inst.edges.push_back({i, j, 1.0});
    return inst;
  }
  return problems::generate(kind, n, seed);
}

// Final-iteration (mean, stderr) keyed by (experiment, algorithm, init).
using FinalKey = std::tuple<std::string, Algorithm, InitStrategy>;
std::map<FinalKey, experiments::SummaryRow> final_table(
    const std::vector<experiments::RunRecord>& records) {
  std::map<FinalKey, experiments::SummaryRow> out;
  for (const auto& r : experiments::final_rows(experiments::aggregate(records)))
    out.emplace(FinalKey{r.experiment, r.algorithm, r.init}, r);
  return out;
}

std::string label(Algorithm a, InitStrategy s) {
  return fmt::format("{}/{}", ansatz::to_string(a), experiments::to_string(s));
}

// Cells are shared by criteria that train on the same problem and seed.
std::map<std::pair<ProblemKind, std::uint64_t>, experiments::CellLibrary> g_cells;

const experiments::CellLibrary& trained_cells(const experiments::BenchmarkConfig& cfg) {
  const auto key = std::pair(cfg.problem, cfg.seed);
  if (auto it = g_cells.find(key); it != g_cells.end()) return it->second;
  auto train = metalearn::default_train_config(cfg.problem);
  train.seed = derive_seed(cfg.seed, "acceptance-train", static_cast<std::uint64_t>(cfg.problem));
  return g_cells.emplace(key, experiments::train_cells(cfg, train, log_stderr)).first->second;
}

experiments::BenchmarkConfig benchmark_config(ProblemKind kind, std::uint64_t seed) {
  experiments::BenchmarkConfig cfg;
  cfg.problem = kind;
  cfg.n = 10;
  cfg.p = 2;
  cfg.instances = 10;
  cfg.iterations = experiments::default_iterations(kind);
  cfg.seed = seed;
  cfg.experiment = fmt::format("acceptance/{}", problems::to_string(kind));
  return cfg;
}

// Mean curve per (algorithm, init) indexed by iteration.
std::map<std::pair<Algorithm, InitStrategy>, std::vector<double>> mean_curves(
    const std::vector<experiments::RunRecord>& records) {
  std::map<std::pair<Algorithm, InitStrategy>, std::vector<double>> curves;
  for (const auto& row : experiments::aggregate(records)) {
    auto& c = curves[{row.algorithm, row.init}];
    if (c.size() <= row.iteration) c.resize(row.iteration + 1);
    c[row.iteration] = row.mean_rel_error;
  }
  return curves;
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
  Outcome out;
  std::mt19937_64 rng(20240501);
  std::uniform_int_distribution<std::size_t> pick_n(1, 3), pick_p(1, 3), pick(0, 99);
  const ProblemKind kinds[] = {ProblemKind::MaxCut3Regular,
                               ProblemKind::MaxCutCompleteWeighted, ProblemKind::SK};
  double worst = 0.0;
  for (int c = 0; c < 500; ++c) {
    const std::size_t n = pick_n(rng);
    const ProblemKind kind = kinds[pick(rng) % 3];
    const auto inst = small_instance(kind, n, pick(rng));
    const auto alg = pick(rng) % 2 ? Algorithm::DCQAOA : Algorithm::QAOA;
    const auto cd = ansatz::kAllCdClasses[pick(rng) % 5];
    const auto cfg = ansatz::make_config(kind, alg, pick_p(rng), cd);
    const auto params = random_vector(rng, cfg.n_params(), kPi);
    const auto state = ansatz::prepare_final_state(inst, cfg, params);
    worst = std::max(worst, oracle::max_abs_diff(oracle::dense_circuit(inst, cfg, params), state));
  }
  out.require(worst <= 1e-10, fmt::format("500 random circuits, max |diff| = {:.3e} (tol 1e-10)", worst));
  return out;
}

Outcome criterion2() {
  Outcome out;
  // Ising cost with longitudinal fields; see README for why fields are needed.
  const auto cost = pauli::ising_hamiltonian(3, {{0, 1, 1.0}, {0, 2, -0.4}, {1, 2, 0.7}},
                                             {0.3, -0.5, 0.8});
  const auto pool = pauli::nested_commutator_pool(pauli::transverse_field_mixer(3), cost, 2, 2);
  const std::vector<std::string> expected = {"XY", "Y", "YX", "YZ", "ZY"};
  out.require(pool == expected,
              fmt::format("order-2 two-local pool = {{{}}}", fmt::join(pool, ", ")));
  return out;
}

double fd_meta_derivative(metalearn::CellWeights w, const ansatz::CircuitEvaluator& circuit,
                          const metalearn::TrainConfig& cfg, std::size_t coord, double h) {
  const double orig = w.flat()[coord];
  const auto omega = cfg.resolved_loss_weights();
  w.flat()[coord] = orig + h;
  const double up = metalearn::meta_loss(metalearn::unroll(w, circuit, cfg, cfg.seed).cost, omega);
  w.flat()[coord] = orig - h;
  const double down = metalearn::meta_loss(metalearn::unroll(w, circuit, cfg, cfg.seed).cost, omega);
  return (up - down) / (2.0 * h);
}

Outcome criterion3() {
  Outcome out;
  {
    const metalearn::CellWeights w(CellKind::LSTM, 3);
    auto st = metalearn::zero_state(CellKind::LSTM, 3);
    st.c.assign(3, 1.0);
    const auto r = metalearn::lstm_forward(w, std::vector<double>(3, 0.0), st);
    double err = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
      err = std::max(err, std::abs(r.state.h[k] - 0.231058578630005));
      err = std::max(err, std::abs(r.theta[k] - 0.7258919331729229));
    }
    out.require(err <= 1e-9, fmt::format("LSTM hand evaluation, max err {:.2e}", err));
  }
  {
    const metalearn::CellWeights w(CellKind::GRU, 2);
    auto st = metalearn::zero_state(CellKind::GRU, 2);
    st.h.assign(2, 1.0);
    const auto r = metalearn::gru_forward(w, std::vector<double>(2, 0.0), st);
    double err = 0.0;
    for (std::size_t k = 0; k < 2; ++k) {
      err = std::max(err, std::abs(r.state.h[k] - 0.5));
      err = std::max(err, std::abs(r.theta[k] - kPi / 2));
    }
    out.require(err <= 1e-9, fmt::format("GRU hand evaluation, max err {:.2e}", err));
  }
  std::mt19937_64 rng(7);
  for (CellKind kind : {CellKind::LSTM, CellKind::GRU}) {
    for (ProblemKind problem : {ProblemKind::MaxCut3Regular,
                                ProblemKind::MaxCutCompleteWeighted, ProblemKind::SK}) {
      for (Algorithm alg : {Algorithm::QAOA, Algorithm::DCQAOA}) {
        const ansatz::CircuitEvaluator circuit(problems::generate(problem, 4, 3),
                                               ansatz::make_config(problem, alg, 1));
        metalearn::CellWeights w(kind, circuit.config().n_params());
        for (auto& v : w.flat()) v = std::uniform_real_distribution<double>(-0.5, 0.5)(rng);
        metalearn::TrainConfig cfg;
        cfg.horizon = 2;
        cfg.seed = 5;
        const auto g = metalearn::bptt_gradient(w, circuit, cfg, cfg.seed);
        double worst = 0.0;
        for (std::size_t coord = 0; coord < w.size(); ++coord) {
          const double fd = fd_meta_derivative(w, circuit, cfg, coord, 1e-5);
          worst = std::max(worst, std::abs(g.grad[coord] - fd) / (std::abs(fd) + 1e-8));
        }
        out.require(worst <= 1e-3,
                    fmt::format("BPTT vs FD {} {} {}: max rel err {:.2e} over {} weights",
                                metalearn::to_string(kind), problems::to_string(problem),
                                ansatz::to_string(alg), worst, w.size()));
      }
    }
  }
  return out;
}

Outcome criterion4() {
  Outcome out;
  bool formula = true, gru_less = true, ratio_up = true;
  for (CellKind kind : {CellKind::LSTM, CellKind::GRU}) {
    double prev_ratio = 0.0;
    for (std::size_t p = 1; p <= 10; ++p) {
      for (Algorithm a : {Algorithm::QAOA, Algorithm::DCQAOA}) {
        const std::size_t d = (a == Algorithm::QAOA ? 2 : 3) * p;
        const std::size_t expect = kind == CellKind::LSTM ? 8 * d * d + 4 * d : 6 * d * d + 6 * d;
        formula &= metalearn::trainable_param_count(kind, a, p) == expect;
        formula &= metalearn::CellWeights(kind, d).size() == expect;
        if (kind == CellKind::GRU)
          gru_less &= metalearn::trainable_param_count(CellKind::GRU, a, p) <
                      metalearn::trainable_param_count(CellKind::LSTM, a, p);
      }
      const double ratio =
          static_cast<double>(metalearn::trainable_param_count(kind, Algorithm::DCQAOA, p)) /
          static_cast<double>(metalearn::trainable_param_count(kind, Algorithm::QAOA, p));
      ratio_up &= ratio > 1.0 && ratio > prev_ratio;
      prev_ratio = ratio;
    }
  }
  out.require(formula, "counts equal 8d^2+4d (LSTM) and 6d^2+6d (GRU), p = 1..10");
  out.require(gru_less, "GRU < LSTM for every p and algorithm");
  out.require(ratio_up, "DC-QAOA/QAOA ratio > 1 and increasing in p");
  out.require(metalearn::trainable_param_count(CellKind::LSTM, Algorithm::DCQAOA, 1) == 84 &&
                  metalearn::trainable_param_count(CellKind::GRU, Algorithm::DCQAOA, 1) == 72,
              "p = 1 DC-QAOA: LSTM 84, GRU 72");
  return out;
}

Outcome criterion5() {
  Outcome out;
  const std::uint64_t seeds[] = {1, 2, 3};
  std::vector<experiments::RunRecord> pooled;
  for (std::uint64_t seed : seeds) {
    const auto cfg = benchmark_config(ProblemKind::MaxCut3Regular, seed);
    auto recs = experiments::run_benchmark(cfg, trained_cells(cfg), log_stderr);
    const auto fin = final_table(recs);
    for (const auto& [key, row] : fin)
      out.note(fmt::format("seed {} {:<16} final E = {:.5f} +- {:.5f}", seed,
                           label(std::get<1>(key), std::get<2>(key)), row.mean_rel_error,
                           row.std_error));
    for (auto& r : recs) r.experiment = "pooled";
    pooled.insert(pooled.end(), recs.begin(), recs.end());
  }
  const auto fin = final_table(pooled);
  const double lstm = fin.at({"pooled", Algorithm::DCQAOA, InitStrategy::LSTM}).mean_rel_error;
  const double rnd = fin.at({"pooled", Algorithm::DCQAOA, InitStrategy::Random}).mean_rel_error;
  out.require(lstm < rnd, fmt::format("30 runs: LSTM-init DC-QAOA {:.5f} < random-init {:.5f}",
                                      lstm, rnd));
  for (const auto& [key, curve] : mean_curves(pooled)) {
    if (key.second == InitStrategy::Random) continue;
    const double final_e = curve.back();
    std::size_t reached = curve.size();
    for (std::size_t k = 0; k < curve.size(); ++k) {
      if (std::abs(curve[k] - final_e) <= 0.1 * final_e) {
        reached = k;
        break;
      }
    }
    out.require(reached <= 20,
                fmt::format("{} within 10% of final ({:.5f}) at iteration {}",
                            label(key.first, key.second), final_e, reached));
  }
  return out;
}

Outcome criterion6() {
  Outcome out;
  const auto cfg = benchmark_config(ProblemKind::MaxCutCompleteWeighted, 1);
  const auto fin = final_table(experiments::run_benchmark(cfg, trained_cells(cfg), log_stderr));
  std::vector<std::pair<double, std::string>> ranked;
  for (const auto& [key, row] : fin) {
    ranked.emplace_back(row.mean_rel_error, label(std::get<1>(key), std::get<2>(key)));
    out.note(fmt::format("{:<16} final E = {:.5f} +- {:.5f}", ranked.back().second,
                         row.mean_rel_error, row.std_error));
  }
  std::sort(ranked.begin(), ranked.end());
  const std::set<std::string> lowest = {ranked[0].second, ranked[1].second};
  out.require(lowest == std::set<std::string>{"dcqaoa/lstm", "dcqaoa/gru"},
              fmt::format("two lowest after 200 iterations: {}, {}", ranked[0].second,
                          ranked[1].second));
  return out;
}

Outcome criterion7() {
  Outcome out;
  const auto cfg = benchmark_config(ProblemKind::SK, 1);
  const auto fin = final_table(experiments::run_benchmark(cfg, trained_cells(cfg), log_stderr));
  auto e = [&](Algorithm a, InitStrategy s) {
    return fin.at({cfg.experiment, a, s}).mean_rel_error;
  };
  for (const auto& [key, row] : fin)
    out.note(fmt::format("{:<16} final E = {:.5f} +- {:.5f}",
                         label(std::get<1>(key), std::get<2>(key)), row.mean_rel_error,
                         row.std_error));
  for (InitStrategy s : {InitStrategy::Random, InitStrategy::LSTM, InitStrategy::GRU})
    out.require(e(Algorithm::DCQAOA, s) < e(Algorithm::QAOA, s),
                fmt::format("{} init: DC-QAOA < QAOA", experiments::to_string(s)));
  for (Algorithm a : {Algorithm::QAOA, Algorithm::DCQAOA})
    for (InitStrategy s : {InitStrategy::LSTM, InitStrategy::GRU})
      out.require(e(a, s) < e(a, InitStrategy::Random),
                  fmt::format("{}: {} init < random init", ansatz::to_string(a),
                              experiments::to_string(s)));
  return out;
}

Outcome criterion8() {
  Outcome out;
  auto source = benchmark_config(ProblemKind::MaxCut3Regular, 1);
  const auto& cells = trained_cells(source);
  experiments::ConcentrationConfig cfg;
  cfg.seed = 1;
  const auto res = experiments::run_concentration(cfg, cells, log_stderr);
  const auto fin = final_table(res.records);
  for (std::size_t n : cfg.nodes) {
    const auto id = experiments::concentration_id(n);
    auto e = [&](Algorithm a, InitStrategy s) { return fin.at({id, a, s}).mean_rel_error; };
    for (Algorithm a : cfg.algorithms)
      for (InitStrategy s : {InitStrategy::Random, InitStrategy::Transferred})
        out.note(fmt::format("n={:<2} {:<20} final E = {:.5f} +- {:.5f}", n, label(a, s), e(a, s),
                             fin.at({id, a, s}).std_error));
    if (n == cfg.source_n) continue;
    for (Algorithm a : cfg.algorithms)
      out.require(e(a, InitStrategy::Transferred) < e(a, InitStrategy::Random),
                  fmt::format("n={} {}: transferred < random", n, ansatz::to_string(a)));
    const double dc_t = e(Algorithm::DCQAOA, InitStrategy::Transferred);
    out.require(dc_t < e(Algorithm::QAOA, InitStrategy::Transferred) &&
                    dc_t < e(Algorithm::QAOA, InitStrategy::Random) &&
                    dc_t < e(Algorithm::DCQAOA, InitStrategy::Random),
                fmt::format("n={} DC-QAOA transferred lowest", n));
  }
  return out;
}

Outcome criterion9() {
  Outcome out;
  experiments::CdCompareConfig cfg;
  cfg.seed = 1;
  const auto fin = final_table(experiments::run_cd_compare(cfg, log_stderr));
  for (ProblemKind kind : cfg.problems) {
    auto row = [&](CdClass c) {
      return fin.at({experiments::cd_compare_id(kind, c), Algorithm::DCQAOA,
                     experiments::InitStrategy::LSTM});
    };
    const double zy = row(CdClass::ZY).mean_rel_error;
    bool ok = true;
    std::string line;
    for (CdClass c : cfg.classes) {
      const auto r = row(c);
      line += fmt::format(" {}={:.4f}+-{:.4f}", ansatz::to_string(c), r.mean_rel_error, r.std_error);
      ok &= zy <= r.mean_rel_error + r.std_error;
    }
    out.require(ok, fmt::format("{}: ZY <= every class mean + stderr;{}",
                                problems::to_string(kind), line));
  }
  return out;
}

Outcome criterion10() {
  Outcome out;
  std::mt19937_64 rng(99);
  const ProblemKind kinds[] = {ProblemKind::MaxCut3Regular,
                               ProblemKind::MaxCutCompleteWeighted, ProblemKind::SK};
  double norm_dev = 0.0, below_ground = 0.0, min_rel = 0.0, alpha_zero = 0.0, fd_rel = 0.0;
  bool flip_exact = true;
  for (ProblemKind kind : kinds) {
    for (std::uint64_t s = 0; s < 5; ++s) {
      const auto inst = problems::generate(kind, 10, 1000 + s);
      const auto op = problems::cost_hamiltonian(inst);
      if (kind == ProblemKind::SK) {
        const std::size_t mask = op.dim() - 1;
        for (std::size_t k = 0; k < op.dim(); ++k) flip_exact &= op[k] == op[k ^ mask];
      }
      for (CdClass c : ansatz::kAllCdClasses) {
        const ansatz::CircuitEvaluator dc(inst, ansatz::make_config(kind, Algorithm::DCQAOA, 2, c));
        const ansatz::CircuitEvaluator qa(inst, ansatz::make_config(kind, Algorithm::QAOA, 2));
        for (int trial = 0; trial < 4; ++trial) {
          auto params = random_vector(rng, 6, kPi);
          const auto state = dc.prepare(params);
          norm_dev = std::max(norm_dev, std::abs(std::sqrt(state.norm_squared()) - 1.0));
          const double f = dc.cost(params);
          below_ground = std::max(below_ground, dc.ground_energy() - f);
          min_rel = std::min(min_rel, dc.relative_error(f));
          params[2] = params[5] = 0.0;
          const std::vector<double> q = {params[0], params[1], params[3], params[4]};
          alpha_zero = std::max(alpha_zero, std::abs(dc.cost(params) - qa.cost(q)));
          const auto g4 = dc.gradient(params, 1e-4);
          const auto g5 = dc.gradient(params, 1e-5);
          double num = 0.0, den = 0.0;
          for (std::size_t k = 0; k < g4.size(); ++k) {
            num += (g4[k] - g5[k]) * (g4[k] - g5[k]);
            den += g5[k] * g5[k];
          }
          if (den > 1e-12) fd_rel = std::max(fd_rel, std::sqrt(num / den));
        }
      }
    }
  }
  out.require(norm_dev <= 1e-9, fmt::format("norm preserved, max dev {:.2e}", norm_dev));
  out.require(below_ground <= 1e-9, fmt::format("F >= E0, max violation {:.2e}", below_ground));
  out.require(min_rel >= -1e-9, fmt::format("relative error >= 0, min {:.2e}", min_rel));
  out.require(fd_rel <= 1e-3, fmt::format("FD h=1e-4 vs 1e-5, max rel diff {:.2e}", fd_rel));
  out.require(alpha_zero <= 1e-12, fmt::format("DC-QAOA(alpha=0) = QAOA, max diff {:.2e}", alpha_zero));
  out.require(flip_exact, "SK spin-flip symmetry exact");

  experiments::BenchmarkConfig bench;
  bench.n = 8;
  bench.iterations = 20;
  bench.instances = 3;
  bench.seed = 42;
  auto train = metalearn::default_train_config(bench.problem);
  train.train_set_size = 10;
  train.max_epochs = 2;
  auto run = [&] {
    const auto cells = experiments::train_cells(bench, train);
    std::string blob = experiments::records_csv(experiments::run_benchmark(bench, cells));
    for (const auto& [key, cell] : cells) blob += io::weights_to_json(cell);
    return blob;
  };
  const auto first = run();
  out.require(first == run(), "byte-identical reruns (records CSV and weights JSON)");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria = {
      criterion1, criterion2, criterion3, criterion4, criterion5,
      criterion6, criterion7, criterion8, criterion9, criterion10};
  std::vector<std::size_t> selected;
  for (int a = 1; a < argc; ++a) {
    const int k = std::atoi(argv[a]);
    if (k < 1 || k > static_cast<int>(criteria.size())) {
      std::cerr << "unknown criterion " << argv[a] << '\n';
      return 2;
    }
    selected.push_back(static_cast<std::size_t>(k));
  }
  if (selected.empty())
    for (std::size_t k = 1; k <= criteria.size(); ++k) selected.push_back(k);

  bool all = true;
  std::vector<std::string> lines;
  for (std::size_t k : selected) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k - 1]();
    } catch (const std::exception& e) {
      o.require(false, fmt::format("exception: {}", e.what()));
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (const auto& n : o.notes) std::cout << "  " << n << '\n';
    const auto line = fmt::format("criterion {:>2}: {} ({:.1f} s)", k, o.pass ? "PASS" : "FAIL", secs);
    std::cout << line << std::endl;
    lines.push_back(line);
    all &= o.pass;
  }
  std::cout << "\n";
  for (const auto& l : lines) std::cout << l << '\n';
  return all ? 0 : 1;
}
