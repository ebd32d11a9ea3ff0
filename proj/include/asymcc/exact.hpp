#pragma once

#include <cstdint>

#include "asymcc/instance.hpp"

namespace asymcc {

struct ExactResult {
  double opt_cost = 0.0;
  Clustering opt_clustering;
  std::uint64_t partitions_enumerated = 0;  // always the Bell number of n
};

/// Exhaustive minimum-disagreement search over all set partitions, encoded
/// as restricted growth strings so each partition appears exactly once. Ties
/// go to the first minimizer in enumeration order. The default cap keeps the
/// search below 3e7 partitions; pass a larger n_cap knowingly. Throws
/// std::invalid_argument when n exceeds the cap.
ExactResult exact_opt(const Instance& inst, int n_cap = 13);

}  // namespace asymcc
