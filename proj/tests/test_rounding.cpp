#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "asymcc/generators.hpp"
#include "asymcc/instance.hpp"
#include "asymcc/metric_lp.hpp"
#include "asymcc/random.hpp"
#include "asymcc/rounding.hpp"

using namespace asymcc;

namespace {

MetricSolution constant_solution(int n, double value) {
  MetricSolution sol;
  sol.n = n;
  sol.x.assign(static_cast<std::size_t>(n) * (n - 1) / 2, value);
  return sol;
}

// Exact expected pivot-clustering cost by recursion over active subsets.
// For each pivot the radius axis splits at the sorted membership thresholds,
// the cluster is constant in between, and the remaining subset recurses.
double exact_expected_cost(const Instance& inst, const MetricSolution& sol,
                           const RoundingFunction& f) {
  int n = inst.n();
  std::vector<double> memo(std::size_t(1) << n, -1.0);
  memo[0] = 0.0;
  auto solve = [&](auto&& self, unsigned mask) -> double {
    double& slot = memo[mask];
    if (slot >= 0.0) return slot;
    int size = __builtin_popcount(mask);
    if (size <= 1) return slot = 0.0;
    double total = 0.0;
    for (int p = 0; p < n; ++p) {
      if (!(mask >> p & 1)) continue;
      std::vector<std::pair<double, int>> thr;  // membership threshold, vertex
      for (int u = 0; u < n; ++u)
        if (u != p && (mask >> u & 1)) thr.emplace_back(f(sol.at(p, u)), u);
      std::sort(thr.begin(), thr.end());
      // Radius segments: cluster = p plus every vertex with threshold <= R.
      double prev = 0.0;
      unsigned cluster = 1u << p;
      std::size_t k = 0;
      double pivot_value = 0.0;
      while (true) {
        while (k < thr.size() && thr[k].first <= prev)
          cluster |= 1u << thr[k++].second;
        double next = k < thr.size() ? thr[k].first : 1.0;
        double len = next - prev;
        if (len > 0.0) {
          double step_cost = 0.0;
          for (int u = 0; u < n; ++u) {
            if (!(mask >> u & 1)) continue;
            for (int v = u + 1; v < n; ++v) {
              if (!(mask >> v & 1)) continue;
              bool inu = cluster >> u & 1, inv = cluster >> v & 1;
              Sign s = inst.sign(u, v);
              if (s == Sign::positive && inu != inv)
                step_cost += inst.weight(u, v);
              else if (s == Sign::negative && inu && inv)
                step_cost += inst.weight(u, v);
            }
          }
          pivot_value += len * (step_cost + self(self, mask & ~cluster));
        }
        if (k >= thr.size() && next >= 1.0) break;
        prev = next;
      }
      total += pivot_value;
    }
    return slot = total / size;
  };
  return solve(solve, (1u << n) - 1);
}

}  // namespace

TEST_CASE("closed-form factors match the published values") {
  CHECK(approximation_factor(1.0, Topology::complete) == doctest::Approx(3.0));
  CHECK(approximation_factor(0.01, Topology::complete) ==
        doctest::Approx(12.21).epsilon(1e-3));
  CHECK(approximation_factor(0.001, Topology::complete) ==
        doctest::Approx(16.82).epsilon(1e-3));
  CHECK(approximation_factor(0.1, Topology::bipartite) ==
        doctest::Approx(5.0 + 2.0 * std::log(10.0)).epsilon(1e-12));
  CHECK_THROWS_AS(approximation_factor(0.0, Topology::complete),
                  std::invalid_argument);
  CHECK_THROWS_AS(approximation_factor(1.5, Topology::complete),
                  std::invalid_argument);
}

TEST_CASE("small-alpha variant matches the truncated exponential") {
  RoundingFunction f = make_f(0.01, Topology::complete);
  CHECK(f.kind() == RoundingFunction::Kind::small_alpha);
  CHECK(f.a() == doctest::Approx(12.210340371976184).epsilon(1e-15));
  CHECK(f.tau() == doctest::Approx(0.45905).epsilon(1e-4));
  CHECK(f(0.0) == 0.0);
  CHECK(f(0.1) == doctest::Approx(0.70513).epsilon(1e-4));
  CHECK(f(0.1) == doctest::Approx(1.0 - std::exp(-f.a() * 0.1)).epsilon(1e-14));
  CHECK(f(f.tau() + 1e-9) == 1.0);
  CHECK(f(1.0) == 1.0);
}

TEST_CASE("large-alpha variant is the two-level step") {
  RoundingFunction f = make_f(0.5, Topology::complete);
  CHECK(f.kind() == RoundingFunction::Kind::large_alpha);
  CHECK(f.a() == doctest::Approx(4.386294361119891).epsilon(1e-15));
  CHECK(f(0.2) == 0.0);                           // below 1/A ~ 0.228
  CHECK(f(0.25) == doctest::Approx(1.0 / 6.0));   // (1 - alpha)/3
  CHECK(f(f.tau()) == 1.0);
  CHECK(f(0.0) == 0.0);
  CHECK(f(1.0) == 1.0);
}

TEST_CASE("boundary alpha takes the exponential and bipartite always does") {
  CHECK(make_f(0.169, Topology::complete).kind() ==
        RoundingFunction::Kind::small_alpha);
  CHECK(make_f(0.168, Topology::complete).kind() ==
        RoundingFunction::Kind::small_alpha);
  CHECK(make_f(0.17, Topology::complete).kind() ==
        RoundingFunction::Kind::large_alpha);
  RoundingFunction b = make_f(0.5, Topology::bipartite);
  CHECK(b.kind() == RoundingFunction::Kind::bipartite);
  CHECK(b.a() == doctest::Approx(5.0 + 2.0 * std::log(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(make_f(0.0, Topology::complete), std::invalid_argument);
}

TEST_CASE("every variant is monotone, zero at zero, one past tau") {
  Rng rng(424242);
  for (int trial = 0; trial < 12; ++trial) {
    double alpha = std::min(1.0, rng.uniform01() + 1e-3);
    Topology topo = trial % 3 == 2 ? Topology::bipartite : Topology::complete;
    RoundingFunction f = make_f(alpha, topo);
    CHECK(f(0.0) == 0.0);
    double prev = 0.0;
    for (int i = 1; i <= 10000; ++i) {
      double y = f(i / 10000.0);
      CHECK(y >= prev);
      prev = y;
    }
    CHECK(f(f.tau() + 1e-12) == 1.0);
    CHECK(prev == 1.0);
  }
}

TEST_CASE("left limits differ from values exactly at the jumps") {
  RoundingFunction f = make_f(0.5, Topology::complete);
  std::vector<double> jumps = f.breakpoints();
  REQUIRE(jumps.size() == 2);  // 1/A and tau
  CHECK(f.eval_left(jumps[0]) < f(jumps[0]));
  CHECK(f.eval_left(jumps[1]) < f(jumps[1]));
  CHECK(f.eval_left(0.1) == f(0.1));
}

TEST_CASE("tabulated wrapper looks up the step value at or below x") {
  std::vector<std::pair<double, double>> table = {
      {0.0, 0.0}, {0.25, 0.2}, {0.5, 1.0}, {0.75, 1.0}, {1.0, 1.0}};
  RoundingFunction f = RoundingFunction::tabulated(0.5, 3.5, table);
  CHECK(f(0.0) == 0.0);
  CHECK(f(0.1) == 0.0);
  CHECK(f(0.25) == doctest::Approx(0.2));
  CHECK(f(0.49) == doctest::Approx(0.2));
  CHECK(f(0.5) == 1.0);
  CHECK(f.eval_left(0.25) == 0.0);
  CHECK(f.eval_left(0.5) == doctest::Approx(0.2));
  std::vector<double> jumps = f.breakpoints();
  REQUIRE(jumps.size() == 2);
  CHECK(jumps[0] == doctest::Approx(0.25));
  CHECK(jumps[1] == doctest::Approx(0.5));
}

TEST_CASE("zero distances collapse to one cluster") {
  Instance inst = Instance::complete(5, 1.0, 1.0);
  for (int u = 0; u < 5; ++u)
    for (int v = u + 1; v < 5; ++v) inst.set_pair(u, v, Sign::positive, 1.0);
  MetricSolution sol = constant_solution(5, 0.0);
  RoundingFunction f = make_f(1.0, Topology::complete);
  for (std::uint64_t seed : {1u, 9u, 77u}) {
    PivotResult res = pivot_round(sol, f, seed);
    CHECK(res.trace.size() == 1);
    CHECK(res.trace[0].members.size() == 5);
    for (int v = 1; v < 5; ++v) CHECK(res.labels[v] == res.labels[0]);
  }
}

TEST_CASE("unit distances give all singletons") {
  MetricSolution sol = constant_solution(6, 1.0);
  RoundingFunction f = make_f(0.3, Topology::complete);
  REQUIRE(f(1.0) == 1.0);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    PivotResult res = pivot_round(sol, f, seed);
    for (int u = 0; u < 6; ++u)
      for (int v = u + 1; v < 6; ++v) CHECK(res.labels[u] != res.labels[v]);
  }
}

TEST_CASE("pivot rounding is bit-exact per seed and well-formed") {
  Instance inst = random_instance(9, 0.2, 0.5, 4);
  MetricSolution sol = solve_metric_lp(inst);
  RoundingFunction f = make_f(0.2, Topology::complete);
  PivotResult a = pivot_round(sol, f, 123456);
  PivotResult b = pivot_round(sol, f, 123456);
  CHECK(a.labels == b.labels);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t s = 0; s < a.trace.size(); ++s) {
    CHECK(a.trace[s].pivot == b.trace[s].pivot);
    CHECK(a.trace[s].r == b.trace[s].r);
    CHECK(a.trace[s].members == b.trace[s].members);
  }

  // Every vertex appears in exactly one traced cluster, which contains its
  // pivot, and the labels mirror the trace.
  std::vector<int> seen(9, 0);
  for (const PivotStep& st : a.trace) {
    CHECK(std::binary_search(st.members.begin(), st.members.end(), st.pivot));
    for (int v : st.members) seen[v] += 1;
  }
  for (int v = 0; v < 9; ++v) CHECK(seen[v] == 1);
}

TEST_CASE("two-vertex step expectations in closed form") {
  Instance inst = Instance::complete(2, 1.0, 1.0);
  inst.set_pair(0, 1, Sign::positive, 0.8);
  MetricSolution sol = constant_solution(2, 0.37);
  RoundingFunction f = make_f(0.01, Topology::complete);
  StepExpectation e = expected_step_cost(inst, sol, f, {0, 1});
  CHECK(e.alg == doctest::Approx(0.8 * f(0.37)).epsilon(1e-12));
  CHECK(e.lp == doctest::Approx(0.8 * 0.37).epsilon(1e-12));
}

TEST_CASE("zero distances with positive signs cost nothing in expectation") {
  Instance inst = Instance::complete(4, 1.0, 1.0);
  for (int u = 0; u < 4; ++u)
    for (int v = u + 1; v < 4; ++v) inst.set_pair(u, v, Sign::positive, 1.0);
  MetricSolution sol = constant_solution(4, 0.0);
  RoundingFunction f = make_f(1.0, Topology::complete);
  StepExpectation e = expected_step_cost(inst, sol, f, {0, 1, 2, 3});
  CHECK(e.alg == doctest::Approx(0.0));
  CHECK(e.lp == doctest::Approx(0.0));
}

TEST_CASE("expected step cost rejects an empty active set") {
  Instance inst = Instance::complete(3, 1.0, 1.0);
  for (int u = 0; u < 3; ++u)
    for (int v = u + 1; v < 3; ++v) inst.set_pair(u, v, Sign::positive, 1.0);
  MetricSolution sol = constant_solution(3, 0.5);
  RoundingFunction f = make_f(1.0, Topology::complete);
  CHECK_THROWS_AS(expected_step_cost(inst, sol, f, {}), std::invalid_argument);
}

TEST_CASE("sampled rounding reproduces the exact subset recursion") {
  // Oracle: integrate the radius analytically over its breakpoints per pivot
  // and recurse over the 2^n active subsets; the sampled mean must agree.
  Instance inst = random_instance(4, 0.01, 0.5, 31);
  MetricSolution sol = solve_metric_lp(inst);
  RoundingFunction f = make_f(0.01, Topology::complete);
  double expect = exact_expected_cost(inst, sol, f);

  const int trials = 100000;
  double sum = 0.0, sumsq = 0.0;
  for (int t = 0; t < trials; ++t) {
    PivotResult res = pivot_round(sol, f, 900000 + t);
    double c = disagreement_cost(inst, res.labels);
    sum += c;
    sumsq += c * c;
  }
  double mean = sum / trials;
  double var = std::max(0.0, sumsq / trials - mean * mean);
  double se = std::sqrt(var / trials);
  CHECK(std::abs(mean - expect) <= 3.0 * se + 1e-9);
}

TEST_CASE("mean rounded cost stays within the guarantee on small instances") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    double alpha = seed % 2 ? 0.5 : 0.05;
    Instance inst = random_instance(8, alpha, 0.5, 600 + seed);
    MetricSolution sol = solve_metric_lp(inst);
    RoundingFunction f = make_f(alpha, Topology::complete);
    double a_thm = approximation_factor(alpha, Topology::complete);
    const int trials = 50;
    double sum = 0.0, sumsq = 0.0;
    for (int t = 0; t < trials; ++t) {
      double c = disagreement_cost(
          inst, pivot_round(sol, f, 7000 + 100 * seed + t).labels);
      sum += c;
      sumsq += c * c;
    }
    double mean = sum / trials;
    double var = std::max(0.0, sumsq / trials - mean * mean);
    double se = std::sqrt(var / trials);
    CHECK(mean <= a_thm * sol.objective + 3.0 * se + 1e-9);
  }
}
