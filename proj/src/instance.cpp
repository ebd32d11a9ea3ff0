#include "asymcc/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace asymcc {

namespace {
constexpr double kBandTol = 1e-9;
}

const char* to_string(Sign s) {
  switch (s) {
    case Sign::positive: return "+";
    case Sign::negative: return "-";
    case Sign::missing: return "o";
  }
  return "?";
}

const char* to_string(Topology t) {
  return t == Topology::complete ? "complete" : "bipartite";
}

Instance::Instance(int n, Topology topo, int left, double alpha, double w_scale)
    : n_(n), left_(left), topo_(topo), alpha_(alpha), w_scale_(w_scale) {
  if (n < 1) throw std::invalid_argument("instance needs at least one vertex");
  std::size_t pairs = static_cast<std::size_t>(n) * (n - 1) / 2;
  sign_.assign(pairs, Sign::missing);
  weight_.assign(pairs, 0.0);
}

Instance Instance::complete(int n, double alpha, double w_scale) {
  Instance inst(n, Topology::complete, 0, alpha, w_scale);
  return inst;
}

Instance Instance::bipartite(int left_size, int right_size, double alpha,
                             double w_scale) {
  if (left_size < 1 || right_size < 1)
    throw std::invalid_argument("both parts need at least one vertex");
  Instance inst(left_size + right_size, Topology::bipartite, left_size, alpha,
                w_scale);
  return inst;
}

std::size_t Instance::pair_index(int u, int v) const {
  if (u == v || u < 0 || v < 0 || u >= n_ || v >= n_)
    throw std::out_of_range("bad vertex pair (" + std::to_string(u) + ", " +
                            std::to_string(v) + ")");
  if (u > v) std::swap(u, v);
  std::size_t uu = static_cast<std::size_t>(u);
  return uu * n_ - uu * (uu + 1) / 2 + static_cast<std::size_t>(v - u - 1);
}

void Instance::set_pair(int u, int v, Sign s, double w) {
  std::size_t i = pair_index(u, v);
  sign_[i] = s;
  weight_[i] = w;
}

bool Instance::same_part(int u, int v) const {
  if (topo_ != Topology::bipartite) return false;
  return (u < left_) == (v < left_);
}

ValidationReport validate(const Instance& inst) {
  ValidationReport rep;
  auto flag = [&rep](int u, int v, std::string msg) {
    rep.issues.push_back({u, v, std::move(msg)});
  };
  if (inst.n() < 1) flag(-1, -1, "empty instance");
  if (!(inst.alpha() > 0.0) || inst.alpha() > 1.0 + kBandTol)
    flag(-1, -1, "alpha outside (0, 1]");
  if (!(inst.w_scale() > 0.0)) flag(-1, -1, "w_scale must be positive");
  if (inst.topology() == Topology::bipartite &&
      (inst.left_size() < 1 || inst.left_size() >= inst.n()))
    flag(-1, -1, "bipartite split out of range");
  if (!rep.ok()) return rep;

  const double w = inst.w_scale();
  const double lo = inst.alpha() * w;
  for (int u = 0; u < inst.n(); ++u) {
    for (int v = u + 1; v < inst.n(); ++v) {
      Sign s = inst.sign(u, v);
      double wt = inst.weight(u, v);
      bool within = inst.same_part(u, v);
      if (within && s != Sign::missing) {
        flag(u, v, "within-part pair must be missing");
        continue;
      }
      if (!within && s == Sign::missing) {
        flag(u, v, inst.topology() == Topology::complete
                       ? "complete instance has a missing pair"
                       : "cross pair marked missing");
        continue;
      }
      switch (s) {
        case Sign::positive:
          if (wt < lo - kBandTol || wt > w + kBandTol)
            flag(u, v, "positive weight outside [alpha*w, w]");
          break;
        case Sign::negative:
          if (wt < lo - kBandTol)
            flag(u, v, "negative weight below alpha*w");
          break;
        case Sign::missing:
          if (std::abs(wt) > kBandTol) flag(u, v, "missing pair with weight");
          break;
      }
    }
  }
  return rep;
}

void normalize(Instance& inst) {
  double w = inst.w_scale();
  if (!(w > 0.0))
    throw std::invalid_argument("cannot normalize: w_scale <= 0");
  for (double& wt : inst.weights()) wt /= w;
  inst.set_w_scale(1.0);
}

double disagreement_cost(const Instance& inst, const Clustering& labels) {
  if (static_cast<int>(labels.size()) != inst.n())
    throw std::invalid_argument("label vector length != n");
  double cost = 0.0;
  const auto& signs = inst.signs();
  const auto& weights = inst.weights();
  std::size_t i = 0;
  for (int u = 0; u < inst.n(); ++u) {
    for (int v = u + 1; v < inst.n(); ++v, ++i) {
      bool together = labels[u] == labels[v];
      if (signs[i] == Sign::negative) {
        if (together) cost += weights[i];
      } else {  // positive and missing pairs pay when split; missing weigh 0
        if (!together) cost += weights[i];
      }
    }
  }
  return cost;
}

namespace {

[[noreturn]] void parse_fail(int line, const std::string& what) {
  throw std::runtime_error("cc-instance parse error at line " +
                           std::to_string(line) + ": " + what);
}

// Strips comments and whitespace-only lines; returns false at end of input.
bool next_payload_line(std::istream& in, std::string& out, int& lineno) {
  std::string raw;
  while (std::getline(in, raw)) {
    ++lineno;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    auto first = raw.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto last = raw.find_last_not_of(" \t\r");
    out = raw.substr(first, last - first + 1);
    return true;
  }
  return false;
}

}  // namespace

Instance read_instance(std::istream& in) {
  int lineno = 0;
  std::string line;
  if (!next_payload_line(in, line, lineno) || line != "cc-instance v1")
    parse_fail(lineno, "expected header 'cc-instance v1'");

  if (!next_payload_line(in, line, lineno)) parse_fail(lineno, "missing size line");
  std::istringstream sz(line);
  std::string kw;
  int n = 0;
  sz >> kw >> n;
  if (kw != "n" || sz.fail() || n < 1) parse_fail(lineno, "bad size line");
  int left = 0;
  bool bip = false;
  if (sz >> kw) {
    if (kw != "bipartite") parse_fail(lineno, "unknown size-line keyword");
    sz >> left;
    if (sz.fail() || left < 1 || left >= n)
      parse_fail(lineno, "bad bipartite split");
    bip = true;
  }

  if (!next_payload_line(in, line, lineno))
    parse_fail(lineno, "missing alpha line");
  std::istringstream al(line);
  double alpha = 0.0, w_scale = 0.0;
  al >> kw >> alpha;
  if (kw != "alpha" || al.fail()) parse_fail(lineno, "bad alpha line");
  al >> kw >> w_scale;
  if (kw != "w" || al.fail()) parse_fail(lineno, "bad alpha line");

  Instance inst = bip ? Instance::bipartite(left, n - left, alpha, w_scale)
                      : Instance::complete(n, alpha, w_scale);
  std::vector<char> seen(inst.num_pairs(), 0);

  while (next_payload_line(in, line, lineno)) {
    std::istringstream es(line);
    std::string sgn;
    int u = 0, v = 0;
    double wt = 0.0;
    es >> kw >> u >> v >> sgn >> wt;
    if (kw != "e" || es.fail()) parse_fail(lineno, "bad edge line");
    if (u == v || u < 0 || v < 0 || u >= n || v >= n)
      parse_fail(lineno, "vertex id out of range");
    Sign s;
    if (sgn == "+") s = Sign::positive;
    else if (sgn == "-") s = Sign::negative;
    else parse_fail(lineno, "edge sign must be + or -");
    if (inst.same_part(u, v))
      parse_fail(lineno, "bipartite file lists a within-part pair");
    std::size_t idx = inst.pair_index(u, v);
    if (seen[idx]) parse_fail(lineno, "duplicate pair");
    seen[idx] = 1;
    inst.signs()[idx] = s;
    inst.weights()[idx] = wt;
  }

  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      if (inst.same_part(u, v)) continue;  // stays missing with weight 0
      if (!seen[inst.pair_index(u, v)])
        throw std::runtime_error("cc-instance is incomplete: pair (" +
                                 std::to_string(u) + ", " + std::to_string(v) +
                                 ") not listed");
    }
  return inst;
}

Instance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);
  return read_instance(in);
}

void write_instance(std::ostream& out, const Instance& inst) {
  out << "cc-instance v1\n";
  out << "n " << inst.n();
  if (inst.topology() == Topology::bipartite)
    out << " bipartite " << inst.left_size();
  out << "\n";
  out.precision(17);
  out << "alpha " << inst.alpha() << " w " << inst.w_scale() << "\n";
  for (int u = 0; u < inst.n(); ++u)
    for (int v = u + 1; v < inst.n(); ++v) {
      Sign s = inst.sign(u, v);
      if (s == Sign::missing) continue;
      out << "e " << u << " " << v << " " << to_string(s) << " "
          << inst.weight(u, v) << "\n";
    }
}

void write_instance_file(const std::string& path, const Instance& inst) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  write_instance(out, inst);
}

}  // namespace asymcc
