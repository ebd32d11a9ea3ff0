#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "asymcc/instance.hpp"
#include "asymcc/rounding.hpp"

namespace asymcc {

/// Certification tolerance: a sweep passes when every margin is >= -kCertEps.
constexpr double kCertEps = 1e-9;

/// Probability that the pivot step separates u from v, given their membership
/// thresholds y_u, y_v and one shared radius R ~ U[0,1]. Positive (and
/// missing) pairs pay when exactly one endpoint joins, negative pairs pay
/// when both do.
double cost_given_pivot(Sign s, double y_u, double y_v);

/// LP budget the step consumes for the pair: the pair's LP contribution times
/// the probability that at least one endpoint is settled this step.
double lp_given_pivot(Sign s, double x_uv, double y_u, double y_v);

/// Edge signs of a triangle, index-aligned with the sorted side lengths.
using Signature = std::array<Sign, 3>;

/// Compact form for reports: '+', '-', 'o' per edge, e.g. "++-".
std::string signature_string(const Signature& sigma);

/// Slack pair of every edge of one triple: tp assumes the edge is positive
/// (or missing), tn assumes it is negative. Raw building block shared by the
/// sweeps; no validation, inputs must already be sorted ascending.
struct EdgeSlacks {
  double tp[3];
  double tn[3];
};

inline EdgeSlacks edge_slacks_sorted(const double* x, const double* y,
                                     double rho) {
  EdgeSlacks s;
  for (int i = 0; i < 3; ++i) {
    double lo = y[i == 0 ? 1 : 0];
    double hi = y[i == 2 ? 1 : 2];
    double budget = rho * (1.0 - lo);
    s.tp[i] = budget * x[i] - (hi - lo);
    s.tn[i] = budget * (1.0 - x[i]) - (1.0 - hi);
  }
  return s;
}

/// Slacks t_i = rho*lp - cost for each edge, conditioned on the vertex
/// opposite that edge pivoting. Lengths must be sorted ascending, lie in
/// [0,1], and satisfy the triangle inequality; throws std::invalid_argument
/// otherwise. y_i = f(x_i).
std::array<double, 3> t_values(const std::array<double, 3>& x,
                               const Signature& sigma,
                               const RoundingFunction& f, double rho);

/// Same slacks with caller-supplied y values, for probing one-sided limits at
/// the jumps of f. Requires y sorted ascending alongside x.
std::array<double, 3> t_values_xy(const std::array<double, 3>& x,
                                  const std::array<double, 3>& y,
                                  const Signature& sigma, double rho);

/// Minimum of sum_i w_i t_i over admissible weights for one signature:
/// positive weights range over [alpha, 1] (minimized at an endpoint),
/// negative weights are unbounded above so a negative slack gives -inf,
/// missing edges carry weight 0.
double worst_case_margin(const std::array<double, 3>& x,
                         const Signature& sigma, const RoundingFunction& f,
                         double rho, double alpha);

double worst_case_margin_xy(const std::array<double, 3>& x,
                            const std::array<double, 3>& y,
                            const Signature& sigma, double rho, double alpha);

struct TripleMargin {
  double margin = std::numeric_limits<double>::infinity();
  Signature sigma = {Sign::positive, Sign::positive, Sign::positive};
};

/// Minimum worst-case margin over every signature the topology admits: all
/// eight sign patterns for complete instances, the twelve one-missing
/// patterns for bipartite ones (an all-missing triangle contributes zero and
/// is never the minimizer below zero). x and y must both be sorted ascending.
TripleMargin min_margin_xy(const std::array<double, 3>& x,
                           const std::array<double, 3>& y, double rho,
                           double alpha, Topology topo);

/// One evaluation point of a sweep. A node with left = true stands for the
/// limit of f from below at x, used where f jumps.
struct GridNode {
  double x = 0.0;
  double y = 0.0;
  bool left = false;
};

/// Sorted unique positions {0, step, 2*step, ..., 1} with the extra points
/// spliced in unless one already sits within 1e-12.
std::vector<double> grid_positions(double step,
                                   const std::vector<double>& extra);

/// Evaluation nodes for f on the step grid: every position, with an extra
/// left-limit node wherever f jumps. Sorted by (x, y).
std::vector<GridNode> certification_nodes(const RoundingFunction& f,
                                          double step);

/// Whether side lengths (a.x <= b.x <= c.x) with the given one-sided limits
/// arise from triangles satisfying the metric constraint. Only the boundary
/// c.x = a.x + b.x is delicate: approaching a or b from below shrinks the
/// right side, so some limit combinations are unreachable there.
bool realizable_triple(const GridNode& a, const GridNode& b,
                       const GridNode& c);

struct CertReport {
  double alpha = 0.0;
  double rho = 0.0;
  double step = 0.0;
  std::int64_t triangles_checked = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  std::array<double, 3> argmin_x = {0.0, 0.0, 0.0};
  Signature argmin_sigma = {Sign::positive, Sign::positive, Sign::positive};
  bool pass(double eps = kCertEps) const { return min_margin >= -eps; }
};

/// Sweeps every realizable node triple and reports the minimum worst-case
/// margin over admissible signatures, with rho in place of the factor. Cells
/// whose margin falls below 10*kCertEps are re-swept on a 10x finer grid
/// around them, so a minimum squeezed between coarse points still surfaces.
/// Margins strictly between the refined points remain unchecked and that
/// limitation should accompany any published report.
CertReport certify_grid(double alpha, const RoundingFunction& f, double rho,
                        double step, Topology mode, int threads = 1);

}  // namespace asymcc
