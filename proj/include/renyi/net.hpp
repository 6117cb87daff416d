#pragma once

// Greedy delta-nets: scan the pool and keep every element at distance >= delta
// from all elements kept so far. The result is a maximal delta-separated
// subset, so every pool element lies within distance < delta of it.

#include <cmath>
#include <cstddef>
#include <vector>

#include "renyi/errors.hpp"

namespace renyi {

/// Indices into pool of the net elements.
template <class T, class Dist>
std::vector<std::size_t> greedy_net(const std::vector<T>& pool, double delta, Dist&& dist) {
  if (pool.empty()) throw RangeError("greedy_net: empty pool");
  if (!(delta > 0.0)) throw RangeError("greedy_net: delta must be positive");
  std::vector<std::size_t> net;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    bool separated = true;
    for (std::size_t j : net)
      if (dist(pool[i], pool[j]) < delta) {
        separated = false;
        break;
      }
    if (separated) net.push_back(i);
  }
  return net;
}

/// (1 + 2/delta)^D, the cardinality bound for nets inside the unit ball of a
/// D-dimensional real normed space.
inline double net_size_bound(double delta, double real_dim) { return std::pow(1.0 + 2.0 / delta, real_dim); }

}  // namespace renyi
