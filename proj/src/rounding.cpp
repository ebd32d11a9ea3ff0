#include "asymcc/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "asymcc/random.hpp"
#include "asymcc/triple_check.hpp"

namespace asymcc {

namespace {

void require_alpha(double alpha) {
  if (!(alpha > 0.0) || alpha > 1.0)
    throw std::invalid_argument("alpha must lie in (0, 1]");
}

// Regime split for complete instances; ties go to the exponential branch.
constexpr double kRegimeSplit = 0.169;

}  // namespace

double approximation_factor(double alpha, Topology topo) {
  require_alpha(alpha);
  double base = topo == Topology::bipartite ? 5.0 : 3.0;
  return base + 2.0 * std::log(1.0 / alpha);
}

RoundingFunction::RoundingFunction(Kind k, double alpha, double a)
    : kind_(k), alpha_(alpha), a_(a), tau_(0.5 - 0.5 / a) {}

RoundingFunction make_f(double alpha, Topology topo) {
  require_alpha(alpha);
  if (topo == Topology::bipartite)
    return RoundingFunction(RoundingFunction::Kind::bipartite, alpha,
                            approximation_factor(alpha, topo));
  double a = approximation_factor(alpha, topo);
  if (alpha <= kRegimeSplit)
    return RoundingFunction(RoundingFunction::Kind::small_alpha, alpha, a);
  return RoundingFunction(RoundingFunction::Kind::large_alpha, alpha, a);
}

RoundingFunction RoundingFunction::tabulated(
    double alpha, double a, std::vector<std::pair<double, double>> table) {
  require_alpha(alpha);
  if (table.empty()) throw std::invalid_argument("empty rounding table");
  if (table.front().first != 0.0)
    throw std::invalid_argument("rounding table must start at x = 0");
  for (std::size_t i = 1; i < table.size(); ++i)
    if (table[i].first <= table[i - 1].first ||
        table[i].second < table[i - 1].second - 1e-12)
      throw std::invalid_argument("rounding table must increase in x and y");
  RoundingFunction f(Kind::tabulated, alpha, a);
  f.table_ = std::move(table);
  return f;
}

double RoundingFunction::operator()(double x) const {
  switch (kind_) {
    case Kind::small_alpha:
    case Kind::bipartite:
      if (x >= tau_) return 1.0;
      return -std::expm1(-a_ * x);
    case Kind::large_alpha:
      if (x >= tau_) return 1.0;
      if (x >= 1.0 / a_) return (1.0 - alpha_) / 3.0;
      return 0.0;
    case Kind::tabulated: {
      // Value of the nearest table point at or below x.
      auto it = std::upper_bound(
          table_.begin(), table_.end(), x,
          [](double v, const std::pair<double, double>& p) {
            return v < p.first;
          });
      if (it == table_.begin()) return 0.0;
      return std::prev(it)->second;
    }
  }
  return 0.0;
}

double RoundingFunction::eval_left(double x) const {
  switch (kind_) {
    case Kind::small_alpha:
    case Kind::bipartite:
      if (x > tau_) return 1.0;
      return -std::expm1(-a_ * x);
    case Kind::large_alpha:
      if (x > tau_) return 1.0;
      if (x > 1.0 / a_) return (1.0 - alpha_) / 3.0;
      return 0.0;
    case Kind::tabulated: {
      // Value just below x: nearest table point strictly below.
      auto it = std::lower_bound(
          table_.begin(), table_.end(), x,
          [](const std::pair<double, double>& p, double v) {
            return p.first < v;
          });
      if (it == table_.begin()) return 0.0;
      return std::prev(it)->second;
    }
  }
  return 0.0;
}

std::vector<double> RoundingFunction::breakpoints() const {
  switch (kind_) {
    case Kind::small_alpha:
    case Kind::bipartite:
      return {tau_};
    case Kind::large_alpha: {
      double inv = 1.0 / a_;
      if (std::abs(inv - tau_) < 1e-12) return {tau_};
      return {inv, tau_};
    }
    case Kind::tabulated: {
      // A step table jumps wherever consecutive values differ.
      std::vector<double> out;
      for (std::size_t i = 1; i < table_.size(); ++i)
        if (table_[i].second > table_[i - 1].second)
          out.push_back(table_[i].first);
      return out;
    }
  }
  return {};
}

PivotResult pivot_round(const MetricSolution& sol, const RoundingFunction& f,
                        std::uint64_t seed) {
  int n = sol.n;
  PivotResult out;
  out.labels.assign(n, -1);
  Rng rng(seed);
  std::vector<int> active(n);
  for (int i = 0; i < n; ++i) active[i] = i;

  int next_label = 0;
  while (!active.empty()) {
    int pivot = active[rng.index(active.size())];
    double r = rng.uniform01();
    PivotStep step;
    step.pivot = pivot;
    step.r = r;
    std::vector<int> rest;
    rest.reserve(active.size());
    for (int u : active) {
      double y = u == pivot ? 0.0 : f(sol.at(pivot, u));
      if (y <= r) {
        out.labels[u] = next_label;
        step.members.push_back(u);
      } else {
        rest.push_back(u);
      }
    }
    out.trace.push_back(std::move(step));
    active = std::move(rest);
    ++next_label;
  }
  return out;
}

StepExpectation expected_step_cost(const Instance& inst,
                                   const MetricSolution& sol,
                                   const RoundingFunction& f,
                                   const std::vector<int>& active) {
  if (inst.n() != sol.n)
    throw std::invalid_argument("metric solution size != instance size");
  if (active.empty())
    throw std::invalid_argument("active set must not be empty");
  std::vector<char> seen(inst.n(), 0);
  for (int u : active) {
    if (u < 0 || u >= inst.n())
      throw std::invalid_argument("active vertex out of range");
    if (seen[u]) throw std::invalid_argument("duplicate active vertex");
    seen[u] = 1;
  }

  StepExpectation e;
  std::size_t t = active.size();
  for (std::size_t a = 0; a < t; ++a) {
    int u = active[a];
    for (std::size_t b = a + 1; b < t; ++b) {
      int v = active[b];
      Sign s = inst.sign(u, v);
      double wt = inst.weight(u, v);
      if (wt == 0.0) continue;
      double xuv = sol.at(u, v);
      double alg = 0.0, lp = 0.0;
      for (int w : active) {
        double yu = w == u ? 0.0 : f(sol.at(w, u));
        double yv = w == v ? 0.0 : f(sol.at(w, v));
        alg += cost_given_pivot(s, yu, yv);
        lp += lp_given_pivot(s, xuv, yu, yv);
      }
      e.alg += wt * alg;
      e.lp += wt * lp;
    }
  }
  // The inner sum ranged over every possible pivot; each is picked with
  // probability 1/|active|.
  e.alg /= static_cast<double>(t);
  e.lp /= static_cast<double>(t);
  return e;
}

}  // namespace asymcc
