#pragma once

#include <random>
#include <vector>

#include "dualtree/dataset.hpp"

namespace dualtree::testing {

inline Dataset make_dataset(std::vector<double> coords, int dim,
                            DuplicatePolicy policy = DuplicatePolicy::reject) {
  return Dataset(std::move(coords), dim, policy);
}

inline Dataset random_cube(int n, int dim, std::uint64_t seed,
                           double side = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(0.0, side);
  std::vector<double> coords(static_cast<size_t>(n) * dim);
  for (double& v : coords) v = coord(rng);
  return Dataset(std::move(coords), dim);
}

}  // namespace dualtree::testing
