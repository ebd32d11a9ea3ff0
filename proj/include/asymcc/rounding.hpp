#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "asymcc/instance.hpp"
#include "asymcc/metric_lp.hpp"

namespace asymcc {

/// Guaranteed approximation factor of the pivot rounding for the given
/// setting: 3 + 2 ln(1/alpha) on complete instances, 5 + 2 ln(1/alpha) on
/// bipartite ones.
double approximation_factor(double alpha, Topology topo);

/// Probability transform applied to LP distances before the pivot membership
/// test. All variants are nondecreasing, 0 at 0, and identically 1 from
/// tau = 1/2 - 1/(2A) on.
class RoundingFunction {
 public:
  enum class Kind { small_alpha, large_alpha, bipartite, tabulated };

  double operator()(double x) const;
  /// Limit from below, which differs from operator() exactly at the jumps.
  double eval_left(double x) const;

  Kind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  double a() const { return a_; }
  double tau() const { return tau_; }

  /// Discontinuity locations that grid sweeps must pin exactly.
  std::vector<double> breakpoints() const;

  static RoundingFunction tabulated(
      double alpha, double a, std::vector<std::pair<double, double>> table);
  const std::vector<std::pair<double, double>>& table() const {
    return table_;
  }

 private:
  friend RoundingFunction make_f(double, Topology);
  RoundingFunction(Kind k, double alpha, double a);

  Kind kind_;
  double alpha_;
  double a_;
  double tau_;
  std::vector<std::pair<double, double>> table_;  // tabulated kind only
};

/// Selects the analysis function for the regime: the truncated exponential
/// 1 - e^(-Ax) for alpha <= 0.169 and for all bipartite instances, the
/// two-level step function otherwise.
RoundingFunction make_f(double alpha, Topology topo);

struct PivotStep {
  int pivot = -1;
  double r = 0.0;
  std::vector<int> members;  // ascending vertex ids, pivot included
};

struct PivotResult {
  Clustering labels;
  std::vector<PivotStep> trace;
};

/// Randomized pivot clustering: repeatedly pick a uniform pivot among the
/// active vertices, draw one radius R, and carve out every active u with
/// f(x_pu) <= R. Deterministic for a fixed seed.
PivotResult pivot_round(const MetricSolution& sol, const RoundingFunction& f,
                        std::uint64_t seed);

struct StepExpectation {
  double alg = 0.0;
  double lp = 0.0;
};

/// Exact conditional expectations of the cost the next pivot step settles and
/// of the LP budget it consumes, given the set of still-active vertices.
StepExpectation expected_step_cost(const Instance& inst,
                                   const MetricSolution& sol,
                                   const RoundingFunction& f,
                                   const std::vector<int>& active);

}  // namespace asymcc
