#include "dualtree/generators.hpp"

#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

namespace dualtree {
namespace {

std::map<std::string, std::string> parse_kv(const std::string& text) {
  std::map<std::string, std::string> kv;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = text.substr(pos, comma - pos);
    const size_t eq = item.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("generator spec: expected key=value, got '" +
                                  item + "'");
    kv[item.substr(0, eq)] = item.substr(eq + 1);
    pos = comma + 1;
  }
  return kv;
}

int require_int(const std::map<std::string, std::string>& kv,
                const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end())
    throw std::invalid_argument("generator spec: missing '" + key + "'");
  return std::stoi(it->second);
}

// Uniform point in the unit d-ball: gaussian direction scaled by u^(1/d).
void unit_ball_point(std::mt19937_64& rng, int dim, double* out) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double norm_sq = 0.0;
  for (int i = 0; i < dim; ++i) {
    out[i] = gauss(rng);
    norm_sq += out[i] * out[i];
  }
  const double norm = std::sqrt(norm_sq);
  const double r =
      norm > 0.0 ? std::pow(unif(rng), 1.0 / dim) / norm : 0.0;
  for (int i = 0; i < dim; ++i) out[i] *= r;
}

}  // namespace

GeneratorSpec GeneratorSpec::parse(const std::string& text) {
  const size_t colon = text.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("generator spec: expected '<kind>:<params>'");
  const std::string kind = text.substr(0, colon);
  const auto kv = parse_kv(text.substr(colon + 1));

  GeneratorSpec spec;
  spec.n = require_int(kv, "N");
  spec.dim = require_int(kv, "d");
  if (spec.n <= 0 || spec.dim <= 0)
    throw std::invalid_argument("generator spec: N and d must be positive");
  if (kind == "uniform-ball") {
    spec.kind = Kind::uniform_ball;
  } else if (kind == "gaussian-mixture") {
    spec.kind = Kind::gaussian_mixture;
    spec.k = require_int(kv, "k");
    if (spec.k <= 0)
      throw std::invalid_argument("generator spec: k must be positive");
  } else if (kind == "grid") {
    spec.kind = Kind::grid;
  } else if (kind == "outlier-chain") {
    spec.kind = Kind::outlier_chain;
    spec.num_outliers = require_int(kv, "num_outliers");
    auto it = kv.find("spacing_factor");
    if (it != kv.end()) spec.spacing_factor = std::stod(it->second);
    if (spec.num_outliers < 0 || spec.num_outliers >= spec.n)
      throw std::invalid_argument(
          "generator spec: num_outliers must be in [0, N)");
    if (spec.spacing_factor <= 1.0)
      throw std::invalid_argument("generator spec: spacing_factor must be > 1");
  } else {
    throw std::invalid_argument("generator spec: unknown kind '" + kind + "'");
  }
  return spec;
}

std::string GeneratorSpec::to_string() const {
  std::string out;
  switch (kind) {
    case Kind::uniform_ball: out = "uniform-ball"; break;
    case Kind::gaussian_mixture: out = "gaussian-mixture"; break;
    case Kind::grid: out = "grid"; break;
    case Kind::outlier_chain: out = "outlier-chain"; break;
  }
  out += ":N=" + std::to_string(n) + ",d=" + std::to_string(dim);
  if (kind == Kind::gaussian_mixture) out += ",k=" + std::to_string(k);
  if (kind == Kind::outlier_chain) {
    out += ",num_outliers=" + std::to_string(num_outliers);
    out += ",spacing_factor=" + std::to_string(spacing_factor);
  }
  return out;
}

Dataset generate_dataset(const GeneratorSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> coords(static_cast<size_t>(spec.n) * spec.dim, 0.0);

  switch (spec.kind) {
    case GeneratorSpec::Kind::uniform_ball: {
      for (int i = 0; i < spec.n; ++i)
        unit_ball_point(rng, spec.dim, &coords[static_cast<size_t>(i) * spec.dim]);
      break;
    }
    case GeneratorSpec::Kind::gaussian_mixture: {
      std::normal_distribution<double> gauss(0.0, 1.0);
      std::uniform_int_distribution<int> pick(0, spec.k - 1);
      std::vector<double> centers(static_cast<size_t>(spec.k) * spec.dim);
      std::uniform_real_distribution<double> center_coord(-5.0, 5.0);
      for (double& v : centers) v = center_coord(rng);
      for (int i = 0; i < spec.n; ++i) {
        const int comp = pick(rng);
        for (int j = 0; j < spec.dim; ++j)
          coords[static_cast<size_t>(i) * spec.dim + j] =
              centers[static_cast<size_t>(comp) * spec.dim + j] + gauss(rng);
      }
      break;
    }
    case GeneratorSpec::Kind::grid: {
      const int side = static_cast<int>(
          std::ceil(std::pow(static_cast<double>(spec.n), 1.0 / spec.dim)));
      for (int i = 0; i < spec.n; ++i) {
        int rem = i;
        for (int j = 0; j < spec.dim; ++j) {
          coords[static_cast<size_t>(i) * spec.dim + j] = rem % side;
          rem /= side;
        }
      }
      break;
    }
    case GeneratorSpec::Kind::outlier_chain: {
      const int bulk = spec.n - spec.num_outliers;
      for (int i = 0; i < bulk; ++i)
        unit_ball_point(rng, spec.dim, &coords[static_cast<size_t>(i) * spec.dim]);
      // Each outlier sits a multiplicative factor farther out along the
      // first axis, forcing a chain of nearly point-free top levels.
      double dist = 4.0;
      for (int i = 0; i < spec.num_outliers; ++i) {
        dist *= spec.spacing_factor;
        coords[static_cast<size_t>(bulk + i) * spec.dim] = dist;
      }
      break;
    }
  }
  return Dataset(std::move(coords), spec.dim);
}

}  // namespace dualtree
