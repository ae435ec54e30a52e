#include "hullspace/primitives.hpp"

#include <bit>
#include <cmath>
#include <numbers>

#include "hullspace/boolean.hpp"
#include "hullspace/errors.hpp"
#include "hullspace/hull.hpp"

namespace hullspace {

Pcg32::Pcg32(std::uint64_t seed, std::uint64_t stream) : inc_((stream << 1u) | 1u) {
  (*this)();
  state_ += seed;
  (*this)();
}

Pcg32::result_type Pcg32::operator()() {
  const std::uint64_t old = state_;
  state_ = old * 6364136223846793005ull + inc_;
  const auto xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
  const auto rot = static_cast<int>(old >> 59u);
  return std::rotr(xorshifted, rot);
}

double Pcg32::uniform() {
  const std::uint64_t hi = (*this)();
  const std::uint64_t lo = (*this)();
  const std::uint64_t bits = ((hi << 32) | lo) >> 11;
  return static_cast<double>(bits) * 0x1.0p-53;
}

double Pcg32::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

PointDistribution benchmark_distribution(std::size_t dim) {
  return dim <= 3 ? PointDistribution::UniformBall : PointDistribution::UniformRadius;
}

std::vector<NVector> random_points(std::size_t n, std::size_t dim, std::uint64_t seed,
                                   PointDistribution dist) {
  if (dim < 1) throw ArgumentError("random_points: dimension must be positive");
  Pcg32 rng(seed);
  std::vector<NVector> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    NVector d(dim);
    double len = 0.0;
    while (len < 1e-12) {
      for (std::size_t k = 0; k < dim; ++k) d[k] = rng.normal();
      len = d.norm();
    }
    const double u = rng.uniform();
    const double r = dist == PointDistribution::UniformBall ? std::pow(u, 1.0 / static_cast<double>(dim)) : u;
    pts.push_back(d * (r / len));
  }
  return pts;
}

NMesh make_box(const NVector& center, const NVector& extents) {
  const std::size_t dim = center.dim();
  if (extents.dim() != dim) throw ArgumentError("make_box: dimension mismatch");
  std::vector<NVector> corners;
  for (std::size_t code = 0; code < (std::size_t{1} << dim); ++code) {
    NVector c = center;
    for (std::size_t k = 0; k < dim; ++k) c[k] += ((code >> k) & 1u ? 0.5 : -0.5) * extents[k];
    corners.push_back(std::move(c));
  }
  return build_hull(corners, dim).mesh;
}

NMesh make_hypercube(std::size_t dim, double side, const NVector* center) {
  const NVector c = center ? *center : NVector(dim);
  return make_box(c, NVector(dim, side));
}

NMesh make_pole(std::size_t dim, double side) {
  NVector ext(dim, side);
  ext[0] *= 4.0;
  return make_box(NVector(dim), ext);
}

NMesh make_random_convex(std::size_t dim, std::size_t n, std::uint64_t seed, double radius) {
  std::vector<NVector> pts = random_points(n, dim, seed, PointDistribution::UniformBall);
  for (NVector& p : pts) p *= radius;
  return build_hull(pts, dim).mesh;
}

NMesh make_hollow_cube(std::size_t dim, double outer, double inner) {
  const NMesh a = make_hypercube(dim, outer);
  const NMesh b = make_hypercube(dim, inner);
  return boolean_op(a, b, BooleanKind::Difference);
}

NMesh translated(const NMesh& m, const NVector& offset) {
  std::vector<NVector> v = m.vertices();
  for (NVector& p : v) p += offset;
  NMesh out = m;
  out.set_vertices(std::move(v));
  return out;
}

}  // namespace hullspace
