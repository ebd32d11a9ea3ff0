#include "asymcc/metric_lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "asymcc/simplex.hpp"

namespace asymcc {

double lp_objective(const Instance& inst, const MetricSolution& sol) {
  if (sol.n != inst.n())
    throw std::invalid_argument("metric solution size != instance size");
  const auto& signs = inst.signs();
  const auto& weights = inst.weights();
  double obj = 0.0;
  for (std::size_t i = 0; i < signs.size(); ++i) {
    if (signs[i] == Sign::negative)
      obj += weights[i] * (1.0 - sol.x[i]);
    else
      obj += weights[i] * sol.x[i];
  }
  return obj;
}

namespace {

struct Cut {
  double violation;
  int u, v, w;  // x_uw <= x_uv + x_vw, middle v
};

void add_triangle_row(LinearProgram& lp, int n, int u, int v, int w) {
  int uw = static_cast<int>(triangular_index(n, u, w));
  int uv = static_cast<int>(triangular_index(n, u, v));
  int vw = static_cast<int>(triangular_index(n, v, w));
  lp.add_row({{uw, 1.0}, {uv, -1.0}, {vw, -1.0}}, 0.0);
}

// Scans ordered triples (u, v, w), u < w, v the middle vertex, and returns
// the most violated cuts in deterministic order.
std::vector<Cut> separate(const MetricSolution& sol, double tol,
                          std::size_t max_cuts) {
  std::vector<Cut> cuts;
  int n = sol.n;
  for (int u = 0; u < n; ++u) {
    for (int w = u + 1; w < n; ++w) {
      double xuw = sol.at(u, w);
      for (int v = 0; v < n; ++v) {
        if (v == u || v == w) continue;
        double viol = xuw - sol.at(u, v) - sol.at(v, w);
        if (viol > tol) cuts.push_back({viol, u, v, w});
      }
    }
  }
  std::sort(cuts.begin(), cuts.end(), [](const Cut& a, const Cut& b) {
    return std::tie(b.violation, a.u, a.v, a.w) <
           std::tie(a.violation, b.u, b.v, b.w);
  });
  if (cuts.size() > max_cuts) cuts.resize(max_cuts);
  return cuts;
}

MetricSolution extract(const Instance& inst, const LpSolution& lp_sol,
                       long pivots, int rounds) {
  MetricSolution sol;
  sol.n = inst.n();
  sol.x = lp_sol.x;
  for (double& v : sol.x) v = std::min(1.0, std::max(0.0, v));
  sol.objective = lp_objective(inst, sol);
  sol.stats.pivots = pivots;
  sol.stats.rounds = rounds;
  MetricCheck check = check_metric_feasibility(sol);
  sol.stats.max_violation = std::max(check.max_violation, check.box_violation);
  return sol;
}

}  // namespace

MetricSolution solve_metric_lp(const Instance& inst,
                               const MetricLpOptions& opts) {
  int n = inst.n();
  LinearProgram lp;
  const auto& signs = inst.signs();
  const auto& weights = inst.weights();
  for (std::size_t i = 0; i < signs.size(); ++i) {
    double c = signs[i] == Sign::negative ? -weights[i] : weights[i];
    lp.add_var(c, 0.0, 1.0);
  }

  SimplexOptions sopts;
  sopts.start_at_lower = true;  // the all-zero point satisfies every triangle

  if (opts.mode == LpMode::full || n < 3) {
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        for (int w = v + 1; w < n; ++w) {
          add_triangle_row(lp, n, u, v, w);  // x_uw <= x_uv + x_vw
          add_triangle_row(lp, n, v, u, w);  // x_vw <= x_uv + x_uw
          add_triangle_row(lp, n, u, w, v);  // x_uv <= x_uw + x_vw
        }
    LpSolution s = solve_lp(lp, sopts);
    if (s.status != LpStatus::optimal)
      throw std::runtime_error("metric LP solve failed (full mode)");
    return extract(inst, s, s.pivots, 1);
  }

  // Lazy separation: box only, then rounds of most-violated triangle cuts.
  std::size_t cuts_per_round =
      static_cast<std::size_t>(opts.cuts_per_round_factor) * n;
  long pivots = 0;
  LpSolution s;
  int round = 0;
  while (true) {
    ++round;
    if (round > opts.max_rounds)
      throw std::runtime_error(
          "metric LP separation did not converge within " +
          std::to_string(opts.max_rounds) + " rounds");
    s = solve_lp(lp, sopts);
    if (s.status != LpStatus::optimal)
      throw std::runtime_error("metric LP solve failed (lazy mode)");
    pivots += s.pivots;

    MetricSolution cur;
    cur.n = n;
    cur.x = s.x;
    std::vector<Cut> cuts = separate(cur, opts.feas_tol, cuts_per_round);
    if (cuts.empty()) break;
    for (const Cut& c : cuts) add_triangle_row(lp, n, c.u, c.v, c.w);

    // Keep the working set bounded: drop slack rows once it grows large.
    if (lp.rows.size() > 6 * static_cast<std::size_t>(lp.num_vars)) {
      std::vector<LinearProgram::Row> kept;
      for (const auto& row : lp.rows) {
        double act = 0.0;
        for (auto [j, a] : row.terms) act += a * s.x[j];
        if (row.rhs - act < 1e-4) kept.push_back(row);
      }
      lp.rows = std::move(kept);
    }
  }
  return extract(inst, s, pivots, round);
}

MetricCheck check_metric_feasibility(const MetricSolution& sol) {
  MetricCheck out;
  int n = sol.n;
  for (double v : sol.x) {
    double bv = std::max(v - 1.0, -v);
    if (bv > out.box_violation) out.box_violation = std::max(bv, 0.0);
  }
  if (n < 3) return out;

  // Dense mirror so both row accesses in the inner loop are contiguous; the
  // diagonal is poisoned so u and w never win as the middle vertex.
  const double kBig = 1e300;
  std::vector<double> full(static_cast<std::size_t>(n) * n, kBig);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      double val = sol.x[triangular_index(n, u, v)];
      full[static_cast<std::size_t>(u) * n + v] = val;
      full[static_cast<std::size_t>(v) * n + u] = val;
    }
  double max_viol = -kBig;
  for (int u = 0; u < n; ++u) {
    const double* ru = full.data() + static_cast<std::size_t>(u) * n;
    for (int w = u + 1; w < n; ++w) {
      const double* rw = full.data() + static_cast<std::size_t>(w) * n;
      double best = kBig;
      for (int v = 0; v < n; ++v) {
        double s = ru[v] + rw[v];
        best = s < best ? s : best;
      }
      double viol = ru[w] - best;
      if (viol > max_viol) {
        max_viol = viol;
        out.u = u;
        out.w = w;
      }
    }
  }
  out.max_violation = max_viol;
  // Recover the middle vertex of the worst triple.
  const double* ru = full.data() + static_cast<std::size_t>(out.u) * n;
  const double* rw = full.data() + static_cast<std::size_t>(out.w) * n;
  double best = kBig;
  for (int v = 0; v < n; ++v) {
    double s = ru[v] + rw[v];
    if (s < best) {
      best = s;
      out.v = v;
    }
  }
  return out;
}

void write_metric_csv(std::ostream& out, const MetricSolution& sol) {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "{\"objective\": %.17g, \"rounds\": %d, \"max_violation\": "
                "%.17g}",
                sol.objective, sol.stats.rounds, sol.stats.max_violation);
  out << buf << "\n";
  out << "u,v,x\n";
  for (int u = 0; u < sol.n; ++u)
    for (int v = u + 1; v < sol.n; ++v) {
      std::snprintf(buf, sizeof(buf), "%d,%d,%.17g", u, v, sol.at(u, v));
      out << buf << "\n";
    }
}

MetricSolution read_metric_csv(std::istream& in) {
  MetricSolution sol;
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty metric csv stream");
  auto grab = [&line](const char* key) {
    auto pos = line.find(key);
    if (pos == std::string::npos)
      throw std::runtime_error("metric csv header misses field");
    pos = line.find(':', pos);
    return std::stod(line.substr(pos + 1));
  };
  if (line.empty() || line[0] != '{')
    throw std::runtime_error("metric csv must start with a JSON header line");
  sol.objective = grab("objective");
  sol.stats.rounds = static_cast<int>(grab("rounds"));
  sol.stats.max_violation = grab("max_violation");

  if (!std::getline(in, line) || line.rfind("u,v,x", 0) != 0)
    throw std::runtime_error("metric csv misses the u,v,x column line");

  struct Entry { int u, v; double x; };
  std::vector<Entry> entries;
  int maxid = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Entry e;
    char comma;
    std::istringstream ls(line);
    ls >> e.u >> comma >> e.v >> comma >> e.x;
    if (ls.fail()) throw std::runtime_error("bad metric csv row: " + line);
    entries.push_back(e);
    maxid = std::max(maxid, std::max(e.u, e.v));
  }
  int n = maxid + 1;
  if (n < 1 || entries.size() != static_cast<std::size_t>(n) * (n - 1) / 2)
    throw std::runtime_error("metric csv row count does not match any n");
  sol.n = n;
  sol.x.assign(entries.size(), -1.0);
  for (const Entry& e : entries) {
    std::size_t idx = triangular_index(n, e.u, e.v);
    if (sol.x[idx] >= 0.0)
      throw std::runtime_error("duplicate metric csv pair");
    sol.x[idx] = e.x;
  }
  return sol;
}

void write_metric_csv_file(const std::string& path, const MetricSolution& sol) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  write_metric_csv(out, sol);
}

MetricSolution read_metric_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open metric csv: " + path);
  return read_metric_csv(in);
}

}  // namespace asymcc
