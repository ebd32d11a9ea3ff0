#include "asymcc/generators.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <utility>

#include "asymcc/random.hpp"

namespace asymcc {

namespace {

constexpr int kGraphRetryCap = 10000;

void shuffle_stubs(std::vector<int>& stubs, Rng& rng) {
  for (std::size_t i = stubs.size(); i > 1; --i)
    std::swap(stubs[i - 1], stubs[rng.below(i)]);
}

// Pairs up stubs of a 3-regular degree sequence and reports the edge list,
// or failure when a loop or repeated edge shows up. In bipartite mode the
// left stubs match against an independently shuffled right stub list.
bool sample_cubic_graph(int n, bool bipartite, Rng& rng,
                        std::vector<std::pair<int, int>>& edges,
                        std::vector<char>& seen) {
  edges.clear();
  std::fill(seen.begin(), seen.end(), 0);
  auto try_edge = [&](int u, int v) {
    if (u == v) return false;
    std::size_t id = static_cast<std::size_t>(std::min(u, v)) * n +
                     static_cast<std::size_t>(std::max(u, v));
    if (seen[id]) return false;
    seen[id] = 1;
    edges.emplace_back(u, v);
    return true;
  };
  if (bipartite) {
    int side = n / 2;
    std::vector<int> right(3 * static_cast<std::size_t>(side));
    for (int i = 0; i < 3 * side; ++i) right[i] = side + i / 3;
    shuffle_stubs(right, rng);
    for (int i = 0; i < 3 * side; ++i)
      if (!try_edge(i / 3, right[i])) return false;
    return true;
  }
  std::vector<int> stubs(3 * static_cast<std::size_t>(n));
  for (int i = 0; i < 3 * n; ++i) stubs[i] = i / 3;
  shuffle_stubs(stubs, rng);
  for (std::size_t i = 0; i < stubs.size(); i += 2)
    if (!try_edge(stubs[i], stubs[i + 1])) return false;
  return true;
}

// Breadth-first distances from src over the adjacency lists; -1 stays where
// src does not reach.
void bfs_distances(const std::vector<std::vector<int>>& adj, int src,
                   std::vector<int>& dist) {
  std::fill(dist.begin(), dist.end(), -1);
  dist[src] = 0;
  std::queue<int> frontier;
  frontier.push(src);
  while (!frontier.empty()) {
    int u = frontier.front();
    frontier.pop();
    for (int v : adj[u])
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        frontier.push(v);
      }
  }
}

}  // namespace

PlantedInstance planted_instance(const PlantedParams& params) {
  if (params.cluster_sizes.empty())
    throw std::invalid_argument("planted model needs at least one cluster");
  for (int s : params.cluster_sizes)
    if (s < 1)
      throw std::invalid_argument("planted cluster sizes must be >= 1");
  double p = params.p_plus;
  double q = params.q_minus;
  if (!(p > 0.0) || p >= 1.0)
    throw std::invalid_argument("planted model requires 0 < p_plus < 1");
  if (!(q > 0.0) || q >= 1.0)
    throw std::invalid_argument("planted model requires 0 < q_minus < 1");
  if (!(p + q > 1.0))
    throw std::invalid_argument("planted model requires p_plus + q_minus > 1");

  double w_pos = std::log(p / (1.0 - q));
  double w_neg = std::log(q / (1.0 - p));
  double alpha = std::min(1.0, std::min(w_pos, w_neg) / w_pos);

  int n = 0;
  for (int s : params.cluster_sizes) n += s;
  PlantedInstance out;
  out.w_pos = w_pos;
  out.w_neg = w_neg;
  out.truth.reserve(n);
  for (std::size_t b = 0; b < params.cluster_sizes.size(); ++b)
    out.truth.insert(out.truth.end(), params.cluster_sizes[b],
                     static_cast<int>(b));

  out.instance = Instance::complete(n, alpha, w_pos);
  Rng rng(params.seed);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      bool positive = out.truth[u] == out.truth[v]
                          ? rng.uniform01() < p
                          : !(rng.uniform01() < q);
      if (positive)
        out.instance.set_pair(u, v, Sign::positive, w_pos);
      else
        out.instance.set_pair(u, v, Sign::negative, w_neg);
    }
  return out;
}

GapInstance gap_instance(const GapParams& params) {
  int n = params.n;
  if (n < 4 || n % 2 != 0)
    throw std::invalid_argument("gap construction needs an even n >= 4");
  if (!(params.alpha > 0.0) || params.alpha >= 1.0)
    throw std::invalid_argument("gap construction needs alpha in (0, 1)");
  if (params.bipartite && n / 2 < 3)
    throw std::invalid_argument(
        "bipartite gap construction needs at least 3 vertices per side");

  Rng rng(params.seed);
  std::vector<std::pair<int, int>> edges;
  std::vector<char> seen(static_cast<std::size_t>(n) * n, 0);
  std::vector<std::vector<int>> adj(n);
  std::vector<int> dist(n);
  GapInstance out;

  int attempt = 0;
  for (;; ++attempt) {
    if (attempt >= kGraphRetryCap)
      throw std::runtime_error(
          "no simple connected 3-regular graph found within the retry cap");
    if (!sample_cubic_graph(n, params.bipartite, rng, edges, seen)) continue;
    for (auto& a : adj) a.clear();
    for (auto [u, v] : edges) {
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
    bfs_distances(adj, 0, dist);
    if (std::find(dist.begin(), dist.end(), -1) == dist.end()) break;
  }
  out.resamples = attempt;

  out.epsilon = 2.0 * std::log(3.0) / std::log(static_cast<double>(n));
  out.instance = params.bipartite
                     ? Instance::bipartite(n / 2, n / 2, params.alpha, 1.0)
                     : Instance::complete(n, params.alpha, 1.0);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (!out.instance.same_part(u, v))
        out.instance.set_pair(u, v, Sign::negative, params.alpha);
  for (auto [u, v] : edges) out.instance.set_pair(u, v, Sign::positive, 1.0);

  out.fractional.n = n;
  out.fractional.x.assign(static_cast<std::size_t>(n) * (n - 1) / 2, 1.0);
  for (int u = 0; u < n; ++u) {
    bfs_distances(adj, u, dist);
    for (int v = u + 1; v < n; ++v)
      out.fractional.x[triangular_index(n, u, v)] =
          std::min(1.0, out.epsilon * dist[v]);
  }
  out.fractional.objective = lp_objective(out.instance, out.fractional);
  return out;
}

int suggested_gap_n(double alpha) {
  if (!(alpha > 0.0) || alpha > 0.5)
    throw std::invalid_argument("suggested_gap_n needs alpha in (0, 0.5]");
  double l = std::log(1.0 / alpha);
  double target = 1.0 / (alpha * alpha * l * l);
  int n = 4;
  if (target > 4.0) {
    n = static_cast<int>(std::ceil(target));
    n += n % 2;
  }
  return n;
}

Instance random_instance(int n, double alpha, double positive_density,
                         std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("random instance needs n >= 2");
  if (!(alpha > 0.0) || alpha > 1.0)
    throw std::invalid_argument("alpha must lie in (0, 1]");
  if (positive_density < 0.0 || positive_density > 1.0)
    throw std::invalid_argument("positive density must lie in [0, 1]");
  Instance inst = Instance::complete(n, alpha, 1.0);
  Rng rng(seed);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      if (rng.uniform01() < positive_density)
        inst.set_pair(u, v, Sign::positive, rng.uniform(alpha, 1.0));
      else
        inst.set_pair(u, v, Sign::negative, rng.uniform(alpha, 2.0));
    }
  return inst;
}

}  // namespace asymcc
