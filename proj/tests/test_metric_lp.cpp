#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "asymcc/exact.hpp"
#include "asymcc/generators.hpp"
#include "asymcc/instance.hpp"
#include "asymcc/metric_lp.hpp"

using namespace asymcc;

namespace {

Instance triangle_pp_n() {
  Instance inst = Instance::complete(3, 1.0, 1.0);
  inst.set_pair(0, 1, Sign::positive, 1.0);
  inst.set_pair(0, 2, Sign::positive, 1.0);
  inst.set_pair(1, 2, Sign::negative, 1.0);
  return inst;
}

MetricSolution constant_solution(int n, double value) {
  MetricSolution sol;
  sol.n = n;
  sol.x.assign(static_cast<std::size_t>(n) * (n - 1) / 2, value);
  return sol;
}

}  // namespace

TEST_CASE("lp objective at the two constant solutions") {
  Instance inst = random_instance(6, 0.3, 0.5, 3);
  double pos = 0.0, neg = 0.0;
  for (int u = 0; u < 6; ++u)
    for (int v = u + 1; v < 6; ++v) {
      if (inst.sign(u, v) == Sign::positive)
        pos += inst.weight(u, v);
      else
        neg += inst.weight(u, v);
    }
  CHECK(lp_objective(inst, constant_solution(6, 0.0)) == doctest::Approx(neg));
  CHECK(lp_objective(inst, constant_solution(6, 1.0)) == doctest::Approx(pos));
}

TEST_CASE("lp objective on the triangle vertex solution") {
  Instance inst = triangle_pp_n();
  MetricSolution sol = constant_solution(3, 0.0);
  sol.x[triangular_index(3, 0, 1)] = 0.0;
  sol.x[triangular_index(3, 0, 2)] = 1.0;
  sol.x[triangular_index(3, 1, 2)] = 1.0;
  CHECK(lp_objective(inst, sol) == doctest::Approx(1.0));
}

TEST_CASE("lp objective rejects a dimension mismatch") {
  Instance inst = triangle_pp_n();
  MetricSolution sol = constant_solution(4, 0.0);
  CHECK_THROWS_AS(lp_objective(inst, sol), std::invalid_argument);
}

TEST_CASE("two-vertex solves sit at the unconstrained optimum") {
  Instance pos = Instance::complete(2, 1.0, 1.0);
  pos.set_pair(0, 1, Sign::positive, 1.0);
  MetricSolution sp = solve_metric_lp(pos);
  CHECK(sp.at(0, 1) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(sp.objective == doctest::Approx(0.0).epsilon(1e-9));

  Instance neg = Instance::complete(2, 1.0, 1.0);
  neg.set_pair(0, 1, Sign::negative, 1.0);
  MetricSolution sn = solve_metric_lp(neg);
  CHECK(sn.at(0, 1) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(sn.objective == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("triangle optimum is one") {
  // On three vertices the cost x_ab + x_ac + (1 - x_bc) is at least 1
  // because x_bc <= x_ab + x_ac, and the vertex solution (0, 1, 1) meets it.
  Instance inst = triangle_pp_n();
  MetricSolution sol = solve_metric_lp(inst);
  CHECK(sol.objective == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(lp_objective(inst, sol) == doctest::Approx(sol.objective).epsilon(1e-9));
  CHECK(check_metric_feasibility(sol).ok(1e-7));
}

TEST_CASE("metric feasibility scanner finds the worst triple") {
  MetricSolution zero = constant_solution(4, 0.0);
  CHECK(check_metric_feasibility(zero).max_violation == doctest::Approx(0.0));

  MetricSolution sol = constant_solution(3, 0.0);
  sol.x[triangular_index(3, 0, 1)] = 1.0;
  sol.x[triangular_index(3, 0, 2)] = 0.2;
  sol.x[triangular_index(3, 1, 2)] = 0.2;
  MetricCheck chk = check_metric_feasibility(sol);
  CHECK(chk.max_violation == doctest::Approx(0.6));
  CHECK(chk.v == 2);  // the middle vertex of the violated path
  CHECK_FALSE(chk.ok(1e-7));
}

TEST_CASE("truncated scaled graph metrics stay feasible") {
  GapParams params;
  params.n = 20;
  params.alpha = 0.1;
  params.seed = 5;
  GapInstance gap = gap_instance(params);
  CHECK(check_metric_feasibility(gap.fractional).max_violation <= 1e-12);
}

TEST_CASE("lp lower-bounds the exact optimum on small instances") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    int n = 5 + static_cast<int>(seed % 4);
    Instance inst = random_instance(n, 0.2, 0.55, 1000 + seed);
    MetricSolution sol = solve_metric_lp(inst);
    ExactResult opt = exact_opt(inst);
    CHECK(sol.objective <= opt.opt_cost + 1e-6);
    CHECK(check_metric_feasibility(sol).ok(1e-7));
  }
}

TEST_CASE("full and lazy modes agree") {
  MetricLpOptions full;
  full.mode = LpMode::full;
  MetricLpOptions lazy;
  lazy.mode = LpMode::lazy;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    Instance inst = random_instance(7, 0.3, 0.5, 2000 + seed);
    MetricSolution a = solve_metric_lp(inst, full);
    MetricSolution b = solve_metric_lp(inst, lazy);
    CHECK(a.objective == doctest::Approx(b.objective).epsilon(2e-6));
  }
}

TEST_CASE("solves are deterministic") {
  Instance inst = random_instance(8, 0.25, 0.5, 77);
  MetricSolution a = solve_metric_lp(inst);
  MetricSolution b = solve_metric_lp(inst);
  REQUIRE(a.x.size() == b.x.size());
  for (std::size_t i = 0; i < a.x.size(); ++i) CHECK(a.x[i] == b.x[i]);
  CHECK(a.objective == b.objective);
}

TEST_CASE("metric csv round-trips") {
  Instance inst = random_instance(6, 0.3, 0.5, 42);
  MetricSolution sol = solve_metric_lp(inst);
  std::stringstream buf;
  write_metric_csv(buf, sol);
  MetricSolution back = read_metric_csv(buf);
  CHECK(back.n == sol.n);
  REQUIRE(back.x.size() == sol.x.size());
  for (std::size_t i = 0; i < sol.x.size(); ++i)
    CHECK(back.x[i] == doctest::Approx(sol.x[i]).epsilon(1e-12));
  CHECK(back.objective == doctest::Approx(sol.objective).epsilon(1e-9));
}
