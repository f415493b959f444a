#pragma once

#include <cstdint>
#include <string>

#include "dualtree/dataset.hpp"

namespace dualtree {

// Parsed form of a generator descriptor such as
//   uniform-ball:N=1000,d=5
//   gaussian-mixture:N=500,d=3,k=4
//   grid:N=16,d=2
//   outlier-chain:N=100,d=2,num_outliers=3,spacing_factor=10
struct GeneratorSpec {
  enum class Kind { uniform_ball, gaussian_mixture, grid, outlier_chain };
  Kind kind = Kind::uniform_ball;
  int n = 0;
  int dim = 0;
  int k = 1;                    // mixture components
  int num_outliers = 0;         // outlier-chain
  double spacing_factor = 10.0; // outlier-chain

  static GeneratorSpec parse(const std::string& text);
  std::string to_string() const;
};

/// Deterministic synthetic dataset for a (spec, seed) pair.
Dataset generate_dataset(const GeneratorSpec& spec, std::uint64_t seed);

inline Dataset generate_dataset(const std::string& spec, std::uint64_t seed) {
  return generate_dataset(GeneratorSpec::parse(spec), seed);
}

}  // namespace dualtree
