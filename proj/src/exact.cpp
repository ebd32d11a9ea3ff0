#include "asymcc/exact.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace asymcc {

namespace {

// Shared state of the depth-first walk over restricted growth strings. At
// depth i the vertex i joins one of the used blocks or opens a new one;
// add_cost caches, per block, the price of that join against the prefix.
struct SearchState {
  const Instance* inst = nullptr;
  int n = 0;
  std::vector<int> labels;
  std::vector<double> prefix_cost;        // cost after assigning 0..i-1
  std::vector<std::vector<double>> add_cost;  // [depth][block]
  double best_cost = 0.0;
  Clustering best_labels;
  std::uint64_t leaves = 0;
};

void walk(SearchState& st, int depth, int used) {
  if (depth == st.n) {
    ++st.leaves;
    if (st.best_labels.empty() || st.prefix_cost[depth] < st.best_cost) {
      st.best_cost = st.prefix_cost[depth];
      st.best_labels = st.labels;
    }
    return;
  }
  // Price of putting vertex depth into each block: a positive pair to any
  // other block disagrees, a negative pair to the same block disagrees. One
  // scan of the prefix fills every block at once.
  std::vector<double>& add = st.add_cost[depth];
  double pos_total = 0.0;
  for (int b = 0; b <= used; ++b) add[b] = 0.0;
  const std::vector<Sign>& signs = st.inst->signs();
  const std::vector<double>& weights = st.inst->weights();
  for (int j = 0; j < depth; ++j) {
    std::size_t id = st.inst->pair_index(j, depth);
    if (signs[id] == Sign::positive) {
      pos_total += weights[id];
      add[st.labels[j]] -= weights[id];
    } else if (signs[id] == Sign::negative) {
      add[st.labels[j]] += weights[id];
    }
  }
  for (int b = 0; b <= used; ++b) {
    st.labels[depth] = b;
    st.prefix_cost[depth + 1] = st.prefix_cost[depth] + pos_total + add[b];
    walk(st, depth + 1, b == used ? used + 1 : used);
  }
}

}  // namespace

ExactResult exact_opt(const Instance& inst, int n_cap) {
  int n = inst.n();
  if (n > n_cap)
    throw std::invalid_argument("exact search over set partitions capped at n <= " +
                                std::to_string(n_cap) + ", got n = " +
                                std::to_string(n));
  SearchState st;
  st.inst = &inst;
  st.n = n;
  st.labels.assign(n, 0);
  st.prefix_cost.assign(n + 1, 0.0);
  st.add_cost.assign(n, std::vector<double>(n + 1, 0.0));
  walk(st, 0, 0);
  ExactResult out;
  out.opt_cost = st.best_cost;
  out.opt_clustering = std::move(st.best_labels);
  out.partitions_enumerated = st.leaves;
  return out;
}

}  // namespace asymcc
