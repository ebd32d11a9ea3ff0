#pragma once

#include <utility>
#include <vector>

namespace asymcc {

/// Minimize cost . x subject to sparse inequality rows (terms . x <= rhs) and
/// per-variable bounds. Upper bounds may be +infinity.
struct LinearProgram {
  int num_vars = 0;
  std::vector<double> cost;
  std::vector<double> lower;
  std::vector<double> upper;

  struct Row {
    std::vector<std::pair<int, double>> terms;
    double rhs = 0.0;
  };
  std::vector<Row> rows;

  int add_var(double c, double lo, double hi);
  void add_row(std::vector<std::pair<int, double>> terms, double rhs);
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

struct LpSolution {
  LpStatus status = LpStatus::iteration_limit;
  std::vector<double> x;
  double objective = 0.0;
  long pivots = 0;
};

struct SimplexOptions {
  double tol = 1e-9;        // reduced-cost and feasibility tolerance
  long max_pivots = -1;     // -1 picks a size-based default
  bool start_at_lower = false;  // start every variable at its lower bound
};

/// Dense bounded-variable primal simplex with a Phase I fallback for starts
/// that violate some rows. Deterministic for a fixed input: entering by
/// largest reduced cost with index tie-breaks, Bland's rule after a
/// degeneracy stall.
LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& opts = {});

}  // namespace asymcc
