#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "hullspace/ndmesh.hpp"

namespace hullspace {

/// PCG32 (XSH-RR). Satisfies UniformRandomBitGenerator, but callers that
/// need cross-platform reproducibility use uniform()/normal() rather than
/// <random> distributions.
class Pcg32 {
 public:
  using result_type = std::uint32_t;
  explicit Pcg32(std::uint64_t seed, std::uint64_t stream = 0xda3e39cb94b95bdbull);

  result_type operator()();
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal via Box-Muller.
  double normal();

 private:
  std::uint64_t state_ = 0;
  std::uint64_t inc_ = 0;
};

enum class PointDistribution {
  UniformBall,    // density uniform over the unit ball
  UniformRadius,  // uniform direction, radius uniform in [0, 1)
};

/// Distribution reproducing the published random hull benchmarks:
/// uniform ball in 3D, uniform radius from 4D up.
PointDistribution benchmark_distribution(std::size_t dim);

std::vector<NVector> random_points(std::size_t n, std::size_t dim, std::uint64_t seed,
                                   PointDistribution dist = PointDistribution::UniformBall);

/// Axis-aligned box hull (corners through Quickhull).
NMesh make_box(const NVector& center, const NVector& extents);
NMesh make_hypercube(std::size_t dim, double side = 1.0, const NVector* center = nullptr);
/// Box with axis 0 stretched 4x.
NMesh make_pole(std::size_t dim, double side = 1.0);
/// Hull of `n` seeded points in a ball of radius `radius`.
NMesh make_random_convex(std::size_t dim, std::size_t n, std::uint64_t seed, double radius = 0.6);
/// Side-`outer` box minus a concentric side-`inner` box, built with the
/// Boolean pipeline.
NMesh make_hollow_cube(std::size_t dim, double outer = 1.0, double inner = 0.7);

NMesh translated(const NMesh& m, const NVector& offset);

}  // namespace hullspace
