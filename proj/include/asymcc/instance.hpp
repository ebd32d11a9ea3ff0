#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace asymcc {

enum class Sign : std::uint8_t { positive, negative, missing };
enum class Topology : std::uint8_t { complete, bipartite };

const char* to_string(Sign s);
const char* to_string(Topology t);

/// Edge-signed, edge-weighted clustering instance on vertices 0..n-1.
///
/// Pair data lives in a flat upper triangular array indexed by (min, max).
/// Weights are interpreted against the scale w: positive pairs must lie in
/// [alpha*w, w], negative pairs in [alpha*w, inf). Bipartite instances put
/// vertices [0, left_size) in the left part; within-part pairs are stored as
/// missing with weight 0 and behave like zero-weight positive pairs.
class Instance {
 public:
  Instance() = default;

  static Instance complete(int n, double alpha, double w_scale);
  static Instance bipartite(int left_size, int right_size, double alpha,
                            double w_scale);

  int n() const { return n_; }
  Topology topology() const { return topo_; }
  int left_size() const { return left_; }
  double alpha() const { return alpha_; }
  double w_scale() const { return w_scale_; }

  void set_alpha(double a) { alpha_ = a; }
  void set_w_scale(double w) { w_scale_ = w; }

  std::size_t num_pairs() const { return sign_.size(); }

  /// Flat index of the unordered pair {u, v}; accepts either argument order.
  std::size_t pair_index(int u, int v) const;

  Sign sign(int u, int v) const { return sign_[pair_index(u, v)]; }
  double weight(int u, int v) const { return weight_[pair_index(u, v)]; }
  void set_pair(int u, int v, Sign s, double w);

  bool same_part(int u, int v) const;

  const std::vector<Sign>& signs() const { return sign_; }
  const std::vector<double>& weights() const { return weight_; }
  std::vector<Sign>& signs() { return sign_; }
  std::vector<double>& weights() { return weight_; }

 private:
  Instance(int n, Topology topo, int left, double alpha, double w_scale);

  int n_ = 0;
  int left_ = 0;  // size of the left part when bipartite
  Topology topo_ = Topology::complete;
  double alpha_ = 1.0;
  double w_scale_ = 1.0;
  std::vector<Sign> sign_;
  std::vector<double> weight_;
};

/// Cluster label per vertex. Labels are arbitrary ids; equality of labels is
/// what defines co-clustering.
using Clustering = std::vector<int>;

struct ValidationIssue {
  int u = -1, v = -1;  // -1,-1 for instance-level issues
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
};

/// Checks the weight bands, the alpha range, and the bipartite missing-pair
/// pattern. Band boundaries get a 1e-9 tolerance.
ValidationReport validate(const Instance& inst);

/// Divides all weights by w_scale and sets w_scale to 1. Throws
/// std::invalid_argument when w_scale <= 0.
void normalize(Instance& inst);

/// Total weight of positive pairs split across clusters plus negative pairs
/// kept together. Throws std::invalid_argument on a label vector of the
/// wrong length.
double disagreement_cost(const Instance& inst, const Clustering& labels);

/// Reads the "cc-instance v1" text format. Complete instances must list every
/// pair; bipartite instances list only cross pairs and the loader fills in
/// the within-part missing pairs. Errors throw std::runtime_error with a line
/// reference.
Instance read_instance(std::istream& in);
Instance read_instance_file(const std::string& path);

void write_instance(std::ostream& out, const Instance& inst);
void write_instance_file(const std::string& path, const Instance& inst);

}  // namespace asymcc
