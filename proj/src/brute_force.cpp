#include "dualtree/brute_force.hpp"

#include <limits>

namespace dualtree {

std::vector<NeighborAnswer> brute_force_nn(const Dataset& queries,
                                           const Dataset& refs,
                                           bool exclude_self) {
  std::vector<NeighborAnswer> out(queries.size());
  for (int q = 0; q < queries.size(); ++q) {
    double best = std::numeric_limits<double>::infinity();
    int best_id = -1;
    for (int r = 0; r < refs.size(); ++r) {
      if (exclude_self && q == r) continue;
      const double d = distance(queries.point(q), refs.point(r));
      if (d < best) {
        best = d;
        best_id = r;
      }
    }
    out[q] = {best_id, best};
  }
  return out;
}

std::vector<double> brute_force_kde(const Dataset& queries, const Dataset& refs,
                                    const Kernel& kernel) {
  std::vector<double> out(queries.size(), 0.0);
  for (int q = 0; q < queries.size(); ++q) {
    double sum = 0.0;
    for (int r = 0; r < refs.size(); ++r)
      sum += static_cast<double>(refs.weight(r)) *
             kernel_value(kernel, distance(queries.point(q), refs.point(r)));
    out[q] = sum;
  }
  return out;
}

std::vector<std::vector<int>> brute_force_range(const Dataset& queries,
                                                const Dataset& refs,
                                                double lower, double upper) {
  std::vector<std::vector<int>> out(queries.size());
  for (int q = 0; q < queries.size(); ++q) {
    for (int r = 0; r < refs.size(); ++r) {
      const double d = distance(queries.point(q), refs.point(r));
      if (d >= lower && d <= upper) out[q].push_back(r);
    }
  }
  return out;
}

}  // namespace dualtree
