#pragma once

#include <cstdint>
#include <vector>

#include "asymcc/instance.hpp"
#include "asymcc/metric_lp.hpp"

namespace asymcc {

/// Ground-truth model parameters: vertices come in blocks of the given sizes,
/// a within-block pair turns positive with probability p_plus, and a
/// cross-block pair turns negative with probability q_minus. The model only
/// carries signal when p_plus + q_minus > 1.
struct PlantedParams {
  std::vector<int> cluster_sizes;
  double p_plus = 0.0;
  double q_minus = 0.0;
  std::uint64_t seed = 0;
};

struct PlantedInstance {
  Instance instance;
  Clustering truth;
  double w_pos = 0.0;  // weight of every positive pair, ln(p/(1-q))
  double w_neg = 0.0;  // weight of every negative pair, ln(q/(1-p))
};

/// Samples signs from the planted model and weights every pair with the
/// log-likelihood ratio of its sign, so that minimizing disagreement is
/// maximum-likelihood recovery. The instance gets w_scale = w_pos and
/// alpha = min(w_pos, w_neg)/w_pos capped at 1, which keeps both weight
/// bands satisfied. Throws std::invalid_argument naming the violated
/// parameter inequality.
PlantedInstance planted_instance(const PlantedParams& params);

/// Integrality-gap construction parameters. n must be even so 3-regular
/// graphs exist; the bipartite variant splits vertices into equal sides.
struct GapParams {
  int n = 0;
  double alpha = 0.0;
  bool bipartite = false;
  std::uint64_t seed = 0;
};

struct GapInstance {
  Instance instance;
  MetricSolution fractional;
  double epsilon = 0.0;  // 2 / log3(n)
  int resamples = 0;     // graphs rejected before the returned one
};

/// Samples a simple connected random 3-regular graph (configuration model,
/// resampling on loops, repeated edges, or disconnection), weights its edges
/// +1 and every remaining pair -alpha, and pairs the instance with the
/// fractional solution x_uv = min(epsilon * d(u,v), 1) built from
/// breadth-first graph distances. The truncated scaled metric satisfies the
/// triangle inequalities, while rounding it integrally costs noticeably more
/// than its fractional objective. Throws std::runtime_error if no acceptable
/// graph appears within the retry cap.
GapInstance gap_instance(const GapParams& params);

/// Smallest even n >= 1/(alpha^2 * ln^2(1/alpha)), never below 4. The
/// leading constant is fixed at 1; callers wanting a different scale pick n
/// themselves.
int suggested_gap_n(double alpha);

/// Uniform test instance: each pair positive with probability
/// positive_density and negative otherwise, positive weights uniform in
/// [alpha, 1], negative uniform in [alpha, 2], w_scale 1. Deterministic per
/// seed.
Instance random_instance(int n, double alpha, double positive_density,
                         std::uint64_t seed);

}  // namespace asymcc
