#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hullspace/errors.hpp"
#include "hullspace/ga.hpp"
#include "oracles.hpp"

using namespace hullspace;
using oracle::near;

namespace {
constexpr double kPi = std::numbers::pi;

double max_abs_blade_except_scalar(const Rotor& r) {
  double m = 0.0;
  for (std::size_t k = 1; k < r.blades().size(); ++k) m = std::max(m, std::abs(r.blades()[k]));
  return m;
}
}  // namespace

TEST_CASE("wedge normal of coordinate planes") {
  const NVector e1{1, 0, 0}, e2{0, 1, 0};
  const NVector n = wedge_normal(std::vector{e1, e2}, 3);
  CHECK(n == NVector{0, 0, 1});

  const NVector n4 = wedge_normal(std::vector{NVector::basis(4, 0), NVector::basis(4, 1), NVector::basis(4, 2)}, 4);
  CHECK(std::abs(n4[3]) == doctest::Approx(1.0));
  CHECK(n4[0] == 0.0);
  CHECK(n4[1] == 0.0);
  CHECK(n4[2] == 0.0);
}

TEST_CASE("wedge normal matches the cross product with one global sign") {
  const NVector n = wedge_normal(std::vector{NVector{1, 2, 3}, NVector{4, 5, 6}}, 3);
  CHECK(near(n, NVector{-3, 6, -3}, 1e-12));

  oracle::Rng rng(7);
  for (int t = 0; t < 500; ++t) {
    const NVector a = rng.vec(3), b = rng.vec(3);
    const auto c = oracle::cross({a[0], a[1], a[2]}, {b[0], b[1], b[2]});
    const NVector w = wedge_normal(std::vector{a, b}, 3);
    CHECK(near(w, NVector{c[0], c[1], c[2]}, 1e-12));
  }
}

TEST_CASE("wedge normal is orthogonal to its inputs in dims 3 to 6") {
  oracle::Rng rng(11);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t dim = 3 + static_cast<std::size_t>(t % 4);
    std::vector<NVector> vs;
    for (std::size_t k = 0; k + 1 < dim; ++k) vs.push_back(rng.vec(dim));
    const NVector n = wedge_normal(vs, dim);
    for (const NVector& v : vs) CHECK(std::abs(n.dot(v)) <= 1e-9 * n.norm() * v.norm());
  }
}

TEST_CASE("wedge normal magnitude is the parallelotope volume") {
  oracle::Rng rng(12);
  for (std::size_t dim = 3; dim <= 6; ++dim) {
    std::vector<NVector> vs;
    for (std::size_t k = 0; k + 1 < dim; ++k) vs.push_back(rng.vec(dim));
    const NVector n = wedge_normal(vs, dim);
    // det of [n/|n|; vs] is the (N-1)-volume
    oracle::Mat m;
    const NVector u = n / n.norm();
    for (std::size_t c = 0; c < dim; ++c) m.push_back(u[c]);
    for (const NVector& v : vs)
      for (std::size_t c = 0; c < dim; ++c) m.push_back(v[c]);
    CHECK(n.norm() == doctest::Approx(std::abs(oracle::det(m, dim))).epsilon(1e-9));
  }
}

TEST_CASE("wedge normal of dependent vectors is zero") {
  const NVector n = wedge_normal(std::vector{NVector{1, 2, 3}, NVector{2, 4, 6}}, 3);
  CHECK(n.norm() == 0.0);
}

TEST_CASE("wedge normal rejects bad shapes") {
  CHECK_THROWS_AS(wedge_normal(std::vector{NVector{1, 0, 0}}, 3), ArgumentError);
  CHECK_THROWS_AS(wedge_normal(std::vector{NVector{1, 0, 0}, NVector{0, 1}}, 3), ArgumentError);
}

TEST_CASE("determinant agrees with elimination") {
  oracle::Rng rng(3);
  for (std::size_t n = 1; n <= 7; ++n)
    for (int t = 0; t < 20; ++t) {
      oracle::Mat m(n * n);
      for (double& x : m) x = rng.uniform(-2, 2);
      CHECK(determinant(m, n) == doctest::Approx(oracle::det(m, n)).epsilon(1e-9));
    }
}

TEST_CASE("rotor from plane") {
  const Rotor id = rotor_from_plane(0, 1, 0.0, 4);
  CHECK(id.scalar() == 1.0);
  CHECK(max_abs_blade_except_scalar(id) == 0.0);

  const Rotor half = rotor_from_plane(0, 1, kPi, 2);
  CHECK(std::abs(half.scalar()) < 1e-15);
  CHECK(std::abs(half.plane_coeff(0, 1)) == doctest::Approx(1.0));

  const Rotor q = rotor_from_plane(0, 3, kPi / 2, 4);
  CHECK(q.scalar() == doctest::Approx(std::sqrt(2.0) / 2));
  CHECK(q.plane_coeff(0, 3) == doctest::Approx(std::sqrt(2.0) / 2));
  CHECK(q.norm() == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(rotor_from_plane(1, 1, 0.3, 4), ArgumentError);
  CHECK_THROWS_AS(rotor_from_plane(2, 1, 0.3, 4), ArgumentError);
  CHECK_THROWS_AS(rotor_from_plane(0, 4, 0.3, 4), ArgumentError);
}

TEST_CASE("rotor apply against Givens rotations") {
  const NVector v{1, 2, 3, 4};
  CHECK(rotor_apply(Rotor(4), v) == v);

  CHECK(near(rotor_apply(rotor_from_plane(0, 1, kPi / 2, 2), NVector{1, 0}), NVector{0, 1}, 1e-15));
  CHECK(near(rotor_apply(rotor_from_plane(0, 3, kPi / 2, 4), NVector::basis(4, 0)), NVector::basis(4, 3), 1e-15));

  oracle::Rng rng(5);
  for (std::size_t dim = 2; dim <= 6; ++dim)
    for (int t = 0; t < 30; ++t) {
      const int i = static_cast<int>(rng.next() % (dim - 1));
      const int j = i + 1 + static_cast<int>(rng.next() % (dim - 1 - i));
      const double th = rng.uniform(-kPi, kPi);
      const NVector x = rng.vec(dim);
      const NVector got = rotor_apply(rotor_from_plane(i, j, th, dim), x);
      CHECK(near(got, oracle::matvec(oracle::givens(dim, i, j, th), x), 1e-12));
    }
}

TEST_CASE("rotor apply is an isometry in dims 2 to 6") {
  oracle::Rng rng(9);
  for (std::size_t dim = 2; dim <= 6; ++dim)
    for (int t = 0; t < 50; ++t) {
      PoseParams p;
      for (int i = 0; i < static_cast<int>(dim); ++i)
        for (int j = i + 1; j < static_cast<int>(dim); ++j)
          if (rng.uniform() < 0.5) p.set(i, j, rng.uniform(-3, 3));
      const Rotor r = pose_to_rotor(p, dim);
      const NVector a = rng.vec(dim), b = rng.vec(dim);
      const NVector ra = rotor_apply(r, a), rb = rotor_apply(r, b);
      CHECK(ra.norm() == doctest::Approx(a.norm()).epsilon(1e-9));
      CHECK(ra.dot(rb) == doctest::Approx(a.dot(b)).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("rotation matrix reproduces rotor apply") {
  oracle::Rng rng(10);
  PoseParams p;
  p.set(0, 1, 0.3);
  p.set(0, 3, -1.1);
  p.set(2, 3, 0.7);
  const Rotor r = pose_to_rotor(p, 4);
  const std::vector<double> m = rotation_matrix(r);
  for (int t = 0; t < 20; ++t) {
    const NVector v = rng.vec(4);
    CHECK(near(oracle::matvec(m, v), rotor_apply(r, v), 1e-12));
  }
}

TEST_CASE("pose to rotor composes planes lexicographically") {
  CHECK(pose_to_rotor(PoseParams{}, 4) == Rotor(4));

  PoseParams one;
  one.set(0, 1, kPi / 2);
  CHECK(pose_to_rotor(one, 4) == rotor_from_plane(0, 1, kPi / 2, 4));

  PoseParams two;
  two.set(0, 1, kPi / 2);
  two.set(0, 2, kPi / 2);
  const NVector e1 = NVector::basis(3, 0);
  const oracle::Mat m = oracle::matmul(oracle::givens(3, 0, 2, kPi / 2), oracle::givens(3, 0, 1, kPi / 2), 3);
  CHECK(near(rotor_apply(pose_to_rotor(two, 3), e1), oracle::matvec(m, e1), 1e-12));

  // general case, all six planes in 4D
  oracle::Rng rng(21);
  for (int t = 0; t < 20; ++t) {
    PoseParams p;
    oracle::Mat acc = oracle::identity(4);
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        const double th = rng.uniform(-2, 2);
        p.set(i, j, th);
        acc = oracle::matmul(oracle::givens(4, i, j, th), acc, 4);
      }
    const NVector v = rng.vec(4);
    CHECK(near(rotor_apply(pose_to_rotor(p, 4), v), oracle::matvec(acc, v), 1e-12));
  }
}

TEST_CASE("pose to rotor is deterministic and validates keys") {
  PoseParams p;
  p.set(0, 2, 0.123);
  p.set(1, 3, -0.77);
  const Rotor a = pose_to_rotor(p, 4), b = pose_to_rotor(p, 4);
  CHECK(std::equal(a.blades().begin(), a.blades().end(), b.blades().begin()));

  PoseParams bad;
  bad.set(2, 1, 0.1);
  CHECK_THROWS_AS(pose_to_rotor(bad, 4), ArgumentError);
  PoseParams out;
  out.set(0, 3, 0.1);
  CHECK_THROWS_AS(pose_to_rotor(out, 3), ArgumentError);
}

TEST_CASE("disjoint-plane products stay unit and handle grade four") {
  PoseParams p;
  p.set(0, 1, 0.9);
  p.set(2, 3, 1.3);
  const Rotor r = pose_to_rotor(p, 4);
  CHECK(r.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(r.blade(0b1111)) > 0.1);
  const NVector v{0.2, -0.4, 1.0, 0.5};
  CHECK(rotor_apply(r, v).norm() == doctest::Approx(v.norm()).epsilon(1e-12));
}

TEST_CASE("camera state keeps its rotor in sync") {
  CameraState cam(4);
  PoseParams p;
  p.set(0, 2, 0.4);
  cam.set_pose(p);
  CHECK(cam.rotor() == pose_to_rotor(p, 4));
  p.set(1, 3, -0.2);
  cam.set_pose(p);
  CHECK(cam.rotor() == pose_to_rotor(p, 4));
  CHECK(near(cam.axis(2), rotor_apply(cam.rotor(), NVector::basis(4, 2)), 0.0));
  CHECK_THROWS_AS(cam.set_position(NVector{1, 2}), ArgumentError);
}

TEST_CASE("view transform") {
  const CameraState id(4);
  CHECK(view_transform(id, NVector{3, 1, 4, 1}) == NVector{3, 1, 4, 1});

  PoseParams p;
  p.set(0, 1, 0.5);
  p.set(1, 3, 0.8);
  const CameraState cam(NVector{1, 2, 3, 4}, p);
  CHECK(near(view_transform(cam, NVector{1, 2, 3, 4}), NVector(4), 1e-15));

  // 2D: camera at (1,0) rotated by 90 degrees sees (0,1) relative offset
  PoseParams q;
  q.set(0, 1, kPi / 2);
  const CameraState cam2(NVector{1, 0}, q);
  const oracle::Mat g = oracle::givens(2, 0, 1, kPi / 2);
  const NVector rel{0, 1};
  const NVector b0{g[0], g[2]}, b1{g[1], g[3]};  // columns of G
  CHECK(near(view_transform(cam2, NVector{1, 1}), NVector{rel.dot(b0), rel.dot(b1)}, 1e-15));

  CHECK_THROWS_AS(view_transform(id, NVector{1, 2, 3}), ArgumentError);
}

TEST_CASE("view transform at the origin is the reverse rotation") {
  oracle::Rng rng(33);
  for (int t = 0; t < 50; ++t) {
    PoseParams p;
    p.set(0, 1, rng.uniform(-3, 3));
    p.set(0, 2, rng.uniform(-3, 3));
    p.set(1, 3, rng.uniform(-3, 3));
    const CameraState cam(NVector(4), p);
    const NVector x = rng.vec(4);
    CHECK(near(view_transform(cam, x), rotor_apply(cam.rotor().reverse(), x), 1e-9));
    const std::vector<double> v = view_matrix(cam);
    CHECK(near(oracle::matvec(v, x), view_transform(cam, x), 1e-12));
  }
}

TEST_CASE("vector arithmetic checks dimensions") {
  CHECK_THROWS_AS(NVector(2) + NVector(3), ArgumentError);
  CHECK_THROWS_AS(NVector(3).normalized(), NumericalFailure);
  CHECK_THROWS_AS(NVector::basis(3, 3), ArgumentError);
  CHECK(NVector{3, 4}.norm() == 5.0);
}
