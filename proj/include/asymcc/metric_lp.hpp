#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "asymcc/instance.hpp"

namespace asymcc {

/// Flat index of {u, v} in an upper triangular array over n vertices.
inline std::size_t triangular_index(int n, int u, int v) {
  if (u > v) { int t = u; u = v; v = t; }
  std::size_t uu = static_cast<std::size_t>(u);
  return uu * n - uu * (uu + 1) / 2 + static_cast<std::size_t>(v - u - 1);
}

struct SolverStats {
  long pivots = 0;
  int rounds = 0;             // separation rounds (1 for a single solve)
  double max_violation = 0.0; // worst triangle violation at return
};

/// Symmetric pairwise distances in [0, 1] with zero diagonal, stored as the
/// upper triangle.
struct MetricSolution {
  int n = 0;
  std::vector<double> x;  // n*(n-1)/2 entries
  double objective = 0.0;
  SolverStats stats;

  double at(int u, int v) const {
    return u == v ? 0.0 : x[triangular_index(n, u, v)];
  }
};

enum class LpMode { full, lazy };

struct MetricLpOptions {
  LpMode mode = LpMode::lazy;
  double feas_tol = 1e-7;   // stop separating below this violation
  double opt_tol = 1e-6;    // quality documented for the returned objective
  int max_rounds = 200;
  int cuts_per_round_factor = 5;  // adds at most factor*n cuts per round
};

/// Fractional relaxation cost: sum of w*x over positive pairs plus w*(1-x)
/// over negative pairs. Missing pairs carry weight zero.
double lp_objective(const Instance& inst, const MetricSolution& sol);

/// Minimizes lp_objective over [0,1] pair variables subject to the triangle
/// inequalities. Full mode materializes all 3*C(n,3) rows; lazy mode starts
/// from the box and adds most-violated rows per round. Throws
/// std::runtime_error if the round cap is hit.
MetricSolution solve_metric_lp(const Instance& inst,
                               const MetricLpOptions& opts = {});

struct MetricCheck {
  double max_violation = 0.0;  // worst x_uw - x_uv - x_vw over ordered triples
  int u = -1, v = -1, w = -1;  // argmax triple, v is the middle vertex
  double box_violation = 0.0;
  bool ok(double tol) const {
    return max_violation <= tol && box_violation <= tol;
  }
};

/// Exact maximum violation scan over all ordered triples, O(n^3).
MetricCheck check_metric_feasibility(const MetricSolution& sol);

/// One JSON header line {objective, rounds, max_violation}, then "u,v,x" rows.
void write_metric_csv(std::ostream& out, const MetricSolution& sol);
MetricSolution read_metric_csv(std::istream& in);
void write_metric_csv_file(const std::string& path, const MetricSolution& sol);
MetricSolution read_metric_csv_file(const std::string& path);

}  // namespace asymcc
