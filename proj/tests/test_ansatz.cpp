#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "dcqaoa/ansatz.hpp"
#include "dense_oracle.hpp"

using namespace dcqaoa;
using namespace dcqaoa::ansatz;
using problems::ProblemInstance;
using problems::ProblemKind;
namespace oracle = dcqaoa::testing;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr ProblemKind kKinds[] = {ProblemKind::MaxCut3Regular,
                                  ProblemKind::MaxCutCompleteWeighted, ProblemKind::SK};

ProblemInstance single_edge() {
  return ProblemInstance{ProblemKind::MaxCut3Regular, 2, {{0, 1, 1.0}}, 0};
}

// Small hand-built instances so every kind can be exercised at n <= 3.
ProblemInstance small_instance(ProblemKind kind, std::size_t n, std::uint64_t seed) {
  if (kind == ProblemKind::MaxCut3Regular && n < 4) {
    ProblemInstance inst{kind, n, {}, seed};
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) inst.edges.push_back({i, j, 1.0});
    return inst;
  }
  return problems::generate(kind, n, seed);
}

ParameterVector random_params(std::mt19937_64& rng, std::size_t dim, double range = kPi) {
  std::uniform_real_distribution<double> u(-range, range);
  ParameterVector v(dim);
  for (auto& x : v) x = u(rng);
  return v;
}

double norm(const std::vector<double>& v) {
  return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

double diff_norm(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

// gcd of the pairwise gaps of an integer-valued diagonal; 0 if not integer.
long long integer_gap_gcd(const sim::DiagonalOperator& op) {
  long long g = 0;
  const double base = op[0];
  for (double v : op.values()) {
    const double d = v - base;
    if (d != std::round(d)) return 0;
    g = std::gcd(g, static_cast<long long>(std::llabs(std::llround(d))));
  }
  return g;
}

}  // namespace

TEST(Config, ParameterCounts) {
  const auto q = make_config(ProblemKind::SK, Algorithm::QAOA, 3);
  EXPECT_EQ(q.params_per_layer(), 2u);
  EXPECT_EQ(q.n_params(), 6u);
  const auto d = make_config(ProblemKind::SK, Algorithm::DCQAOA, 3);
  EXPECT_EQ(d.n_params(), 9u);
  EXPECT_EQ(d.cd_prefactor, 1.0);
  EXPECT_EQ(make_config(ProblemKind::MaxCut3Regular, Algorithm::DCQAOA, 1).cd_prefactor, 0.5);
  EXPECT_THROW(make_config(ProblemKind::SK, Algorithm::QAOA, 0), std::invalid_argument);
  for (CdClass c : kAllCdClasses) EXPECT_EQ(parse_cd_class(to_string(c)), c);
  EXPECT_THROW(parse_cd_class("zz"), std::invalid_argument);
  EXPECT_EQ(parse_algorithm("dcqaoa"), Algorithm::DCQAOA);
}

TEST(PrepareFinalState, ZeroParamsGivePlusState) {
  const auto inst = problems::gen_sk(4, 2);
  for (Algorithm alg : {Algorithm::QAOA, Algorithm::DCQAOA}) {
    const auto cfg = make_config(inst.kind, alg, 2);
    const auto s = prepare_final_state(inst, cfg, ParameterVector(cfg.n_params(), 0.0));
    for (std::size_t k = 0; k < s.dim(); ++k) EXPECT_LT(std::abs(s[k] - 0.25), 1e-15);
  }
  const auto cfg = make_config(ProblemKind::MaxCut3Regular, Algorithm::QAOA, 1);
  EXPECT_DOUBLE_EQ(evaluate_cost(single_edge(), cfg, {{0.0, 0.0}}), -0.5);
}

TEST(PrepareFinalState, SingleEdgeMatchesDenseChain) {
  const auto inst = single_edge();
  const auto cfg = make_config(inst.kind, Algorithm::QAOA, 1);
  const ParameterVector params = {0.7, 0.3};
  const auto s = prepare_final_state(inst, cfg, params);
  EXPECT_LT(oracle::max_abs_diff(oracle::dense_circuit(inst, cfg, params), s), 1e-12);
}

TEST(EvaluateCost, SingleEdgeMatchesDenseValue) {
  const auto inst = single_edge();
  const auto cfg = make_config(inst.kind, Algorithm::QAOA, 1);
  const ParameterVector params = {kPi / 2, kPi / 8};
  EXPECT_NEAR(evaluate_cost(inst, cfg, params), oracle::dense_cost(inst, cfg, params), 1e-12);
}

TEST(PrepareFinalState, RandomCircuitsMatchDenseOracle) {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t n = 2 + trial % 2;
    const ProblemKind kind = kKinds[trial % 3];
    const auto inst = small_instance(kind, n, static_cast<std::uint64_t>(trial));
    const Algorithm alg = trial % 4 == 0 ? Algorithm::QAOA : Algorithm::DCQAOA;
    const auto cfg = make_config(kind, alg, 1 + trial % 3, kAllCdClasses[trial % 5]);
    const auto params = random_params(rng, cfg.n_params(), 2 * kPi);
    const auto s = prepare_final_state(inst, cfg, params);
    EXPECT_LT(oracle::max_abs_diff(oracle::dense_circuit(inst, cfg, params), s), 1e-10)
        << "trial " << trial;
  }
}

TEST(PrepareFinalState, DcqaoaWithZeroAlphaEqualsQaoa) {
  std::mt19937_64 rng(7);
  for (ProblemKind kind : kKinds) {
    const auto inst = problems::generate(kind, 8, 5);
    for (CdClass c : kAllCdClasses) {
      const auto qcfg = make_config(kind, Algorithm::QAOA, 2);
      const auto dcfg = make_config(kind, Algorithm::DCQAOA, 2, c);
      const auto q = random_params(rng, 4);
      const ParameterVector d = {q[0], q[1], 0.0, q[2], q[3], 0.0};
      const auto a = prepare_final_state(inst, qcfg, q);
      const auto b = prepare_final_state(inst, dcfg, d);
      for (std::size_t k = 0; k < a.dim(); ++k) EXPECT_LE(std::abs(a[k] - b[k]), 1e-12);
    }
  }
}

TEST(PrepareFinalState, RejectsWrongParameterLength) {
  const auto cfg = make_config(ProblemKind::MaxCut3Regular, Algorithm::DCQAOA, 2);
  EXPECT_THROW(prepare_final_state(single_edge(), cfg, ParameterVector(4, 0.0)),
               std::invalid_argument);
}

TEST(EvaluateCost, VariationalBound) {
  std::mt19937_64 rng(9);
  for (ProblemKind kind : kKinds) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const CircuitEvaluator circuit(problems::generate(kind, 8, seed),
                                     make_config(kind, Algorithm::DCQAOA, 2));
      for (int trial = 0; trial < 20; ++trial) {
        const double f = circuit.cost(random_params(rng, 6, 10.0));
        EXPECT_GE(f, circuit.ground_energy() - 1e-9);
        EXPECT_GE(circuit.relative_error(f), -1e-9);
      }
    }
  }
}

TEST(EvaluateCost, PeriodicInAnglesWithPeriodFromSpectrum) {
  std::mt19937_64 rng(19);
  for (ProblemKind kind : {ProblemKind::MaxCut3Regular, ProblemKind::SK}) {
    const CircuitEvaluator circuit(problems::generate(kind, 8, 1),
                                   make_config(kind, Algorithm::DCQAOA, 2));
    const long long gap = integer_gap_gcd(circuit.cost_operator());
    ASSERT_GT(gap, 0);
    const double gamma_period = 2 * kPi / static_cast<double>(gap);
    // exp(-i pi P) = -I for any Pauli string: every CD factor picks up a
    // global sign once alpha * prefactor * |w| reaches pi.
    const double alpha_period = kPi / circuit.config().cd_prefactor;
    for (int trial = 0; trial < 10; ++trial) {
      const auto theta = random_params(rng, 6);
      const double f = circuit.cost(theta);
      for (std::size_t j = 0; j < 6; ++j) {
        const double period = j % 3 == 0 ? gamma_period : (j % 3 == 1 ? kPi : alpha_period);
        auto shifted = theta;
        shifted[j] += period;
        EXPECT_NEAR(circuit.cost(shifted), f, 1e-9) << "component " << j;
      }
    }
  }
  // Unit edges give integer gaps with gcd 1; SK gaps are even.
  EXPECT_EQ(integer_gap_gcd(problems::cost_hamiltonian(problems::gen_3regular(10, 3))), 1);
  EXPECT_EQ(integer_gap_gcd(problems::cost_hamiltonian(problems::gen_sk(10, 3))), 2);
}

TEST(Gradient, VanishesAlongPhaseOnlyDirection) {
  // With beta = 0 the cost layer only rephases a diagonal expectation.
  const CircuitEvaluator circuit(problems::gen_3regular(6, 1),
                                 make_config(ProblemKind::MaxCut3Regular, Algorithm::QAOA, 1));
  for (double gamma : {-1.0, 0.2, 2.5}) {
    EXPECT_NEAR(circuit.gradient(std::vector<double>{gamma, 0.0})[0], 0.0, 1e-6);
  }
}

TEST(Gradient, MatchesSmallerCentralStep) {
  std::mt19937_64 rng(29);
  for (ProblemKind kind : kKinds) {
    const CircuitEvaluator circuit(problems::generate(kind, 6, 2),
                                   make_config(kind, Algorithm::DCQAOA, 2));
    for (int trial = 0; trial < 20; ++trial) {
      const auto theta = random_params(rng, 6);
      const auto g4 = circuit.gradient(theta, 1e-4);
      const auto g5 = circuit.gradient(theta, 1e-5);
      EXPECT_LE(diff_norm(g4, g5), 1e-3 * norm(g4));
    }
  }
}

TEST(Gradient, MatchesOneSidedDifference) {
  std::mt19937_64 rng(31);
  const CircuitEvaluator circuit(problems::gen_3regular(4, 0),
                                 make_config(ProblemKind::MaxCut3Regular, Algorithm::DCQAOA, 2));
  const double h = 1e-6;
  for (int trial = 0; trial < 100; ++trial) {
    const auto theta = random_params(rng, 6);
    const auto g = circuit.gradient(theta);
    const double f = circuit.cost(theta);
    std::vector<double> one_sided(6);
    for (std::size_t j = 0; j < 6; ++j) {
      auto t = theta;
      t[j] += h;
      one_sided[j] = (circuit.cost(t) - f) / h;
    }
    EXPECT_LE(diff_norm(g, one_sided), 1e-2 * norm(g)) << "trial " << trial;
  }
}

TEST(Gradient, SmallAtLocatedMinimum) {
  const CircuitEvaluator circuit(problems::gen_3regular(6, 4),
                                 make_config(ProblemKind::MaxCut3Regular, Algorithm::QAOA, 1));
  // Coarse grid over one period, then plain gradient descent.
  std::vector<double> best = {0.0, 0.0};
  double best_f = circuit.cost(best);
  for (int a = 0; a < 64; ++a) {
    for (int b = 0; b < 32; ++b) {
      const std::vector<double> t = {2 * kPi * a / 64.0, kPi * b / 32.0};
      const double f = circuit.cost(t);
      if (f < best_f) {
        best_f = f;
        best = t;
      }
    }
  }
  for (int it = 0; it < 3000; ++it) {
    const auto g = circuit.gradient(best);
    for (std::size_t j = 0; j < 2; ++j) best[j] -= 0.05 * g[j];
  }
  EXPECT_LT(norm(circuit.gradient(best)), 1e-3);
  EXPECT_LE(circuit.cost(best), best_f);
}

TEST(Gradient, FreeFunctionMatchesEvaluator) {
  const auto inst = problems::gen_sk(5, 3);
  const auto cfg = make_config(inst.kind, Algorithm::DCQAOA, 1, CdClass::XY);
  const std::vector<double> theta = {0.3, -0.2, 0.5};
  EXPECT_EQ(gradient(inst, cfg, theta), CircuitEvaluator(inst, cfg).gradient(theta));
}
