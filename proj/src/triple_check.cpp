#include "asymcc/triple_check.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <utility>

namespace asymcc {

namespace {

constexpr double kSnapTol = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_lengths(const std::array<double, 3>& x) {
  if (x[0] < -kSnapTol || x[2] > 1.0 + kSnapTol)
    throw std::invalid_argument("side lengths must lie in [0, 1]");
  if (x[0] > x[1] + kSnapTol || x[1] > x[2] + kSnapTol)
    throw std::invalid_argument("side lengths must be sorted ascending");
  if (x[2] > x[0] + x[1] + kSnapTol)
    throw std::invalid_argument("side lengths must satisfy x3 <= x1 + x2");
}

void check_thresholds(const std::array<double, 3>& y) {
  for (double v : y)
    if (v < -1e-9 || v > 1.0 + 1e-9)
      throw std::invalid_argument("thresholds must lie in [0, 1]");
  if (y[0] > y[1] + 1e-9 || y[1] > y[2] + 1e-9)
    throw std::invalid_argument("thresholds must be sorted ascending");
}

inline double positive_contrib(double tp, double alpha) {
  return tp < 0.0 ? tp : alpha * tp;
}

inline double negative_contrib(double tn, double alpha) {
  return tn < 0.0 ? -kInf : alpha * tn;
}

// Margin and minimizing signature for one triple; shared by the public entry
// point and the sweep so both always agree bit for bit.
inline TripleMargin triple_min_margin(const double* x, const double* y,
                                      double rho, double alpha,
                                      Topology topo) {
  EdgeSlacks s = edge_slacks_sorted(x, y, rho);
  double m[3];
  Sign pick[3];
  for (int i = 0; i < 3; ++i) {
    double cp = positive_contrib(s.tp[i], alpha);
    double cn = negative_contrib(s.tn[i], alpha);
    if (cn < cp) {
      m[i] = cn;
      pick[i] = Sign::negative;
    } else {
      m[i] = cp;
      pick[i] = Sign::positive;
    }
  }
  TripleMargin out;
  if (topo == Topology::complete) {
    out.margin = m[0] + m[1] + m[2];
    out.sigma = {pick[0], pick[1], pick[2]};
    return out;
  }
  // Bipartite: exactly one edge of the triangle is a within-part pair and
  // drops out; minimize over which one.
  out.margin = m[1] + m[2];
  out.sigma = {Sign::missing, pick[1], pick[2]};
  for (int miss = 1; miss < 3; ++miss) {
    double sum = m[(miss + 1) % 3] + m[(miss + 2) % 3];
    if (sum < out.margin) {
      out.margin = sum;
      out.sigma = {pick[0], pick[1], pick[2]};
      out.sigma[miss] = Sign::missing;
    }
  }
  return out;
}

int sigma_rank(const Signature& sigma) {
  int r = 0;
  for (Sign s : sigma) r = r * 3 + static_cast<int>(s);
  return r;
}

// Deterministic reduction order for sweeps: lower margin first, then
// lexicographic lengths, then signature. Independent of thread layout.
struct SweepBest {
  double margin = kInf;
  std::array<double, 3> x = {0.0, 0.0, 0.0};
  Signature sigma = {Sign::positive, Sign::positive, Sign::positive};
};

bool improves(double margin, const std::array<double, 3>& x,
              const Signature& sigma, const SweepBest& cur) {
  if (margin < cur.margin) return true;
  if (margin > cur.margin) return false;
  if (x != cur.x) return x < cur.x;
  return sigma_rank(sigma) < sigma_rank(cur.sigma);
}

struct SweepResult {
  SweepBest best;
  std::int64_t count = 0;
  std::vector<std::array<double, 3>> low;
};

SweepResult sweep_slice(const std::vector<GridNode>& nodes, double rho,
                        double alpha, Topology topo, std::size_t first,
                        std::size_t stride, bool collect_low,
                        double low_threshold) {
  SweepResult res;
  std::size_t n = nodes.size();
  for (std::size_t i = first; i < n; i += stride) {
    const GridNode& a = nodes[i];
    for (std::size_t j = i; j < n; ++j) {
      const GridNode& b = nodes[j];
      double reach = a.x + b.x + kSnapTol;
      for (std::size_t k = j; k < n; ++k) {
        const GridNode& c = nodes[k];
        if (c.x > reach) break;
        double slack = a.x + b.x - c.x;
        if (slack <= kSnapTol && a.left && b.left && !c.left) continue;
        double x[3] = {a.x, b.x, c.x};
        double y[3] = {a.y, b.y, c.y};
        TripleMargin tm = triple_min_margin(x, y, rho, alpha, topo);
        ++res.count;
        if (collect_low && tm.margin < low_threshold)
          res.low.push_back({a.x, b.x, c.x});
        if (improves(tm.margin, {a.x, b.x, c.x}, tm.sigma, res.best)) {
          res.best.margin = tm.margin;
          res.best.x = {a.x, b.x, c.x};
          res.best.sigma = tm.sigma;
        }
      }
    }
  }
  return res;
}

SweepResult sweep_nodes(const std::vector<GridNode>& nodes, double rho,
                        double alpha, Topology topo, int threads,
                        bool collect_low, double low_threshold) {
  std::size_t stride = static_cast<std::size_t>(std::max(threads, 1));
  if (stride <= 1 || nodes.size() < 64)
    return sweep_slice(nodes, rho, alpha, topo, 0, 1, collect_low,
                       low_threshold);
  std::vector<SweepResult> parts(stride);
  std::vector<std::thread> pool;
  pool.reserve(stride - 1);
  for (std::size_t t = 1; t < stride; ++t)
    pool.emplace_back([&, t] {
      parts[t] = sweep_slice(nodes, rho, alpha, topo, t, stride, collect_low,
                             low_threshold);
    });
  parts[0] =
      sweep_slice(nodes, rho, alpha, topo, 0, stride, collect_low,
                  low_threshold);
  for (auto& th : pool) th.join();
  SweepResult total = std::move(parts[0]);
  for (std::size_t t = 1; t < stride; ++t) {
    total.count += parts[t].count;
    if (improves(parts[t].best.margin, parts[t].best.x, parts[t].best.sigma,
                 total.best))
      total.best = parts[t].best;
    total.low.insert(total.low.end(), parts[t].low.begin(),
                     parts[t].low.end());
  }
  return total;
}

// Splices extra points into a sorted position list. A point landing within
// 1e-12 of an existing position replaces it, so breakpoints stay exact.
void splice_positions(std::vector<double>& pos,
                      const std::vector<double>& extra) {
  for (double b : extra) {
    if (b < -kSnapTol || b > 1.0 + kSnapTol) continue;
    b = std::min(1.0, std::max(0.0, b));
    auto it = std::lower_bound(pos.begin(), pos.end(), b - kSnapTol);
    if (it != pos.end() && std::abs(*it - b) <= kSnapTol)
      *it = b;
    else
      pos.insert(it, b);
  }
}

std::vector<GridNode> nodes_from_positions(const RoundingFunction& f,
                                           const std::vector<double>& pos) {
  std::vector<GridNode> nodes;
  nodes.reserve(pos.size() * 2);
  for (double x : pos) {
    double yr = f(x);
    double yl = f.eval_left(x);
    if (yl < yr) nodes.push_back({x, yl, true});
    nodes.push_back({x, yr, false});
  }
  return nodes;
}

// Nodes for one refinement window [lo, hi]: a 10x finer lattice anchored at
// lo, the window end, and any jump of f that falls inside.
std::vector<GridNode> window_nodes(const RoundingFunction& f, double lo,
                                   double hi, double fine,
                                   const std::vector<double>& breakpoints) {
  std::vector<double> pos;
  for (int m = 0;; ++m) {
    double v = lo + m * fine;
    if (v >= hi - kSnapTol) break;
    pos.push_back(v);
  }
  pos.push_back(hi);
  std::vector<double> inside;
  for (double b : breakpoints)
    if (b >= lo - kSnapTol && b <= hi + kSnapTol) inside.push_back(b);
  splice_positions(pos, inside);
  return nodes_from_positions(f, pos);
}

bool node_before(const GridNode& a, const GridNode& b) {
  if (a.x != b.x) return a.x < b.x;
  return a.left && !b.left;
}

// Re-sweeps the box one coarse step around a flagged cell. Probes draw one
// node per coordinate window and get sorted per draw, since windows overlap
// whenever the cell coordinates are close together.
void refine_cell(const RoundingFunction& f, const std::array<double, 3>& cell,
                 double step, double rho, double alpha, Topology topo,
                 const std::vector<double>& breakpoints, SweepResult& res) {
  double lo0 = std::max(0.0, cell[0] - step);
  // Thresholds only grow across the box, so once the smallest one reaches 1
  // every slack in the box is exactly zero and so is every margin.
  if (f.eval_left(lo0) >= 1.0 && f(lo0) >= 1.0) return;
  double fine = step / 10.0;
  std::vector<GridNode> w[3];
  for (int i = 0; i < 3; ++i)
    w[i] = window_nodes(f, std::max(0.0, cell[i] - step),
                        std::min(1.0, cell[i] + step), fine, breakpoints);
  for (const GridNode& p : w[0])
    for (const GridNode& q : w[1])
      for (const GridNode& r : w[2]) {
        const GridNode* a = &p;
        const GridNode* b = &q;
        const GridNode* c = &r;
        if (node_before(*b, *a)) std::swap(a, b);
        if (node_before(*c, *b)) std::swap(b, c);
        if (node_before(*b, *a)) std::swap(a, b);
        if (!realizable_triple(*a, *b, *c)) continue;
        if (a->y >= 1.0) continue;
        double x[3] = {a->x, b->x, c->x};
        double y[3] = {a->y, b->y, c->y};
        TripleMargin tm = triple_min_margin(x, y, rho, alpha, topo);
        ++res.count;
        if (improves(tm.margin, {x[0], x[1], x[2]}, tm.sigma, res.best)) {
          res.best.margin = tm.margin;
          res.best.x = {x[0], x[1], x[2]};
          res.best.sigma = tm.sigma;
        }
      }
}

SweepResult refine_cells(const RoundingFunction& f,
                         const std::vector<std::array<double, 3>>& cells,
                         double step, double rho, double alpha, Topology topo,
                         int threads) {
  std::vector<double> breakpoints = f.breakpoints();
  auto run = [&](std::size_t first, std::size_t stride) {
    SweepResult res;
    for (std::size_t i = first; i < cells.size(); i += stride)
      refine_cell(f, cells[i], step, rho, alpha, topo, breakpoints, res);
    return res;
  };
  std::size_t stride = static_cast<std::size_t>(std::max(threads, 1));
  if (stride <= 1 || cells.size() < 8) return run(0, 1);
  std::vector<SweepResult> parts(stride);
  std::vector<std::thread> pool;
  pool.reserve(stride - 1);
  for (std::size_t t = 1; t < stride; ++t)
    pool.emplace_back([&, t] { parts[t] = run(t, stride); });
  parts[0] = run(0, stride);
  for (auto& th : pool) th.join();
  SweepResult total = std::move(parts[0]);
  for (std::size_t t = 1; t < stride; ++t) {
    total.count += parts[t].count;
    if (improves(parts[t].best.margin, parts[t].best.x, parts[t].best.sigma,
                 total.best))
      total.best = parts[t].best;
  }
  return total;
}

}  // namespace

double cost_given_pivot(Sign s, double y_u, double y_v) {
  if (s == Sign::negative) return 1.0 - std::max(y_u, y_v);
  return std::abs(y_u - y_v);
}

double lp_given_pivot(Sign s, double x_uv, double y_u, double y_v) {
  double settled = 1.0 - std::min(y_u, y_v);
  if (s == Sign::negative) return (1.0 - x_uv) * settled;
  return x_uv * settled;
}

std::string signature_string(const Signature& sigma) {
  std::string out;
  for (Sign s : sigma) {
    switch (s) {
      case Sign::positive:
        out += '+';
        break;
      case Sign::negative:
        out += '-';
        break;
      case Sign::missing:
        out += 'o';
        break;
    }
  }
  return out;
}

std::array<double, 3> t_values_xy(const std::array<double, 3>& x,
                                  const std::array<double, 3>& y,
                                  const Signature& sigma, double rho) {
  check_lengths(x);
  check_thresholds(y);
  EdgeSlacks s = edge_slacks_sorted(x.data(), y.data(), rho);
  std::array<double, 3> t;
  for (int i = 0; i < 3; ++i)
    t[i] = sigma[i] == Sign::negative ? s.tn[i] : s.tp[i];
  return t;
}

std::array<double, 3> t_values(const std::array<double, 3>& x,
                               const Signature& sigma,
                               const RoundingFunction& f, double rho) {
  return t_values_xy(x, {f(x[0]), f(x[1]), f(x[2])}, sigma, rho);
}

double worst_case_margin_xy(const std::array<double, 3>& x,
                            const std::array<double, 3>& y,
                            const Signature& sigma, double rho, double alpha) {
  check_lengths(x);
  check_thresholds(y);
  EdgeSlacks s = edge_slacks_sorted(x.data(), y.data(), rho);
  double total = 0.0;
  for (int i = 0; i < 3; ++i) {
    switch (sigma[i]) {
      case Sign::positive:
        total += positive_contrib(s.tp[i], alpha);
        break;
      case Sign::negative:
        if (s.tn[i] < 0.0) return -kInf;
        total += alpha * s.tn[i];
        break;
      case Sign::missing:
        break;
    }
  }
  return total;
}

double worst_case_margin(const std::array<double, 3>& x,
                         const Signature& sigma, const RoundingFunction& f,
                         double rho, double alpha) {
  return worst_case_margin_xy(x, {f(x[0]), f(x[1]), f(x[2])}, sigma, rho,
                              alpha);
}

TripleMargin min_margin_xy(const std::array<double, 3>& x,
                           const std::array<double, 3>& y, double rho,
                           double alpha, Topology topo) {
  check_lengths(x);
  check_thresholds(y);
  return triple_min_margin(x.data(), y.data(), rho, alpha, topo);
}

std::vector<double> grid_positions(double step,
                                   const std::vector<double>& extra) {
  if (!(step > 0.0) || step > 1.0)
    throw std::invalid_argument("grid step must lie in (0, 1]");
  std::vector<double> pos;
  pos.reserve(static_cast<std::size_t>(1.0 / step) + extra.size() + 2);
  for (int i = 0;; ++i) {
    double v = i * step;
    if (v >= 1.0 - kSnapTol) break;
    pos.push_back(v);
  }
  pos.push_back(1.0);
  splice_positions(pos, extra);
  return pos;
}

std::vector<GridNode> certification_nodes(const RoundingFunction& f,
                                          double step) {
  return nodes_from_positions(f, grid_positions(step, f.breakpoints()));
}

bool realizable_triple(const GridNode& a, const GridNode& b,
                       const GridNode& c) {
  double slack = a.x + b.x - c.x;
  if (slack < -kSnapTol) return false;
  if (slack > kSnapTol) return true;
  // On the boundary the lost length of a one-sided limit must be recovered
  // elsewhere: shrinking c or growing the other short side both work, so the
  // only unreachable combination shrinks both short sides at once.
  return !(a.left && b.left && !c.left);
}

CertReport certify_grid(double alpha, const RoundingFunction& f, double rho,
                        double step, Topology mode, int threads) {
  if (!(alpha > 0.0) || alpha > 1.0)
    throw std::invalid_argument("alpha must lie in (0, 1]");
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");
  if (!(step > 0.0) || step > 0.1)
    throw std::invalid_argument("step must lie in (0, 0.1]");

  CertReport report;
  report.alpha = alpha;
  report.rho = rho;
  report.step = step;

  std::vector<GridNode> nodes = certification_nodes(f, step);
  double low_threshold = 10.0 * kCertEps;
  SweepResult coarse =
      sweep_nodes(nodes, rho, alpha, mode, threads, true, low_threshold);
  report.triangles_checked = coarse.count;
  report.min_margin = coarse.best.margin;
  report.argmin_x = coarse.best.x;
  report.argmin_sigma = coarse.best.sigma;

  if (!coarse.low.empty()) {
    SweepResult fine =
        refine_cells(f, coarse.low, step, rho, alpha, mode, threads);
    report.triangles_checked += fine.count;
    if (improves(fine.best.margin, fine.best.x, fine.best.sigma,
                 coarse.best)) {
      report.min_margin = fine.best.margin;
      report.argmin_x = fine.best.x;
      report.argmin_sigma = fine.best.sigma;
    }
  }
  return report;
}

}  // namespace asymcc
