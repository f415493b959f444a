#pragma once

#include <vector>

#include "dualtree/dataset.hpp"
#include "dualtree/kernels.hpp"

namespace dualtree {

struct NeighborAnswer {
  int neighbor = -1;
  double dist = 0.0;
};

// Exhaustive-scan oracles. These never touch the tree code paths; the
// drivers and tests compare dual-tree output against them.

std::vector<NeighborAnswer> brute_force_nn(const Dataset& queries,
                                           const Dataset& refs,
                                           bool exclude_self);

/// Multiplicity-weighted exact kernel density values.
std::vector<double> brute_force_kde(const Dataset& queries,
                                    const Dataset& refs, const Kernel& kernel);

/// Per-query sorted reference ids with distance in [lower, upper].
std::vector<std::vector<int>> brute_force_range(const Dataset& queries,
                                                const Dataset& refs,
                                                double lower, double upper);

}  // namespace dualtree
