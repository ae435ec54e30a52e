#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "hullspace/boolean.hpp"
#include "hullspace/errors.hpp"
#include "hullspace/hull.hpp"
#include "hullspace/primitives.hpp"
#include "oracles.hpp"

using namespace hullspace;
using oracle::near;

namespace {

FacetGeom tri(NVector a, NVector b, NVector c) {
  std::vector<NVector> pts{a, b, c};
  NVector n = wedge_normal(std::vector{b - a, c - a}, 3);
  return FacetGeom::from_points(pts, n / n.norm());
}

FacetGeom tet4(std::vector<NVector> pts) {
  std::vector<NVector> span;
  for (std::size_t k = 1; k < 4; ++k) span.push_back(pts[k] - pts[0]);
  NVector n = wedge_normal(span, 4);
  return FacetGeom::from_points(std::move(pts), n / n.norm());
}

std::set<FacetPair> aabb_pairs(const NMesh& a, const NMesh& b) {
  std::set<FacetPair> out;
  for (std::uint32_t i = 0; i < a.facet_count(); ++i)
    for (std::uint32_t j = 0; j < b.facet_count(); ++j)
      if (facet_aabb(a, i).overlaps(facet_aabb(b, j))) out.insert({i, j});
  return out;
}

using P2 = std::array<double, 2>;

// Sutherland-Hodgman: clip convex `subject` by convex counter-clockwise `clip`
std::vector<P2> clip_polygon(std::vector<P2> subject, const std::vector<P2>& clip) {
  for (std::size_t e = 0; e < clip.size(); ++e) {
    const P2 a = clip[e], b = clip[(e + 1) % clip.size()];
    auto side = [&](const P2& p) { return (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]); };
    std::vector<P2> out;
    for (std::size_t i = 0; i < subject.size(); ++i) {
      const P2 p = subject[i], q = subject[(i + 1) % subject.size()];
      const double sp = side(p), sq = side(q);
      if (sp >= 0) out.push_back(p);
      if ((sp >= 0) != (sq >= 0)) {
        const double t = sp / (sp - sq);
        out.push_back({p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])});
      }
    }
    subject = out;
  }
  return subject;
}

double total_measure(const std::vector<std::vector<NVector>>& pieces) {
  double s = 0.0;
  for (const auto& p : pieces) {
    const NVector u = p[1] - p[0], v = p[2] - p[0];
    const auto c = oracle::cross({u[0], u[1], u[2]}, {v[0], v[1], v[2]});
    s += 0.5 * std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
  }
  return s;
}

NVector fill(std::size_t dim, double v) { return NVector(dim, v); }

}  // namespace

TEST_CASE("tolerances scale with the bounding box") {
  const BooleanTolerances t = BooleanTolerances::for_scale(10.0);
  CHECK(t.merge_eps == doctest::Approx(1e-6));
  CHECK(t.snap_eps == doctest::Approx(1e-5));
  CHECK(t.group_eps == doctest::Approx(1e-5));
  CHECK(t.eps_dot == 1e-9);
  CHECK(t.perturb == doctest::Approx(1e-4));
  CHECK(t.ray_margin == doctest::Approx(1e-2));
  CHECK(t.max_perturb == 8);
}

TEST_CASE("spatial grid registers every cell an aabb overlaps") {
  oracle::Rng rng(5);
  const double cell = 0.3;
  SpatialGrid grid(cell, 3);
  std::vector<Aabb> boxes;
  for (std::uint32_t id = 0; id < 50; ++id) {
    const NVector lo = rng.vec(3), ext = rng.vec(3, 0.0, 0.7);
    boxes.push_back({lo, lo + ext});
    grid.insert(id, boxes.back());
  }
  std::map<SpatialGrid::Key, std::set<std::uint32_t>> expect;
  for (std::uint32_t id = 0; id < boxes.size(); ++id) {
    const Aabb& b = boxes[id];
    std::array<std::int64_t, 3> lo{}, hi{};
    for (int k = 0; k < 3; ++k) {
      lo[k] = static_cast<std::int64_t>(std::floor(b.min[k] / cell));
      hi[k] = static_cast<std::int64_t>(std::floor(b.max[k] / cell));
    }
    for (auto x = lo[0]; x <= hi[0]; ++x)
      for (auto y = lo[1]; y <= hi[1]; ++y)
        for (auto z = lo[2]; z <= hi[2]; ++z) expect[{x, y, z}].insert(id);
  }
  CHECK(grid.cells().size() == expect.size());
  for (const auto& [key, ids] : grid.cells()) {
    REQUIRE(expect.count(key) == 1);
    CHECK(std::set<std::uint32_t>(ids.begin(), ids.end()) == expect[key]);
    CHECK(ids.size() == expect[key].size());
  }
  const auto q = grid.query(boxes[7]);
  CHECK(std::find(q.begin(), q.end(), 7u) != q.end());
  CHECK(std::is_sorted(q.begin(), q.end()));
}

TEST_CASE("broad phase") {
  const NMesh a = make_hypercube(3);
  CHECK(broad_phase(a, translated(a, NVector{5, 0, 0})).empty());

  const auto same = broad_phase(a, a);
  const std::set<FacetPair> got(same.begin(), same.end());
  CHECK(std::is_sorted(same.begin(), same.end()));
  for (const FacetPair& p : aabb_pairs(a, a)) CHECK(got.count(p) == 1);

  // cubes sharing only the corner (0.5, 0.5, 0.5)
  const NMesh b = translated(a, NVector{1, 1, 1});
  const auto corner = broad_phase(a, b);
  const std::set<FacetPair> cg(corner.begin(), corner.end());
  const std::set<FacetPair> touching = aabb_pairs(a, b);
  CHECK_FALSE(touching.empty());
  for (const FacetPair& p : touching) CHECK(cg.count(p) == 1);
}

TEST_CASE("broad phase covers every truly intersecting pair") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const std::size_t dim = seed % 2 ? 3 : 4;
    const NMesh a = make_random_convex(dim, 25, seed);
    const NMesh b = translated(make_random_convex(dim, 25, seed + 100), fill(dim, 0.3));
    REQUIRE(a.facet_count() <= 200);
    const BooleanTolerances tol = BooleanTolerances::for_meshes(a, b);
    const auto ga = facet_geometry(a), gb = facet_geometry(b);
    std::vector<FacetPair> all;
    for (std::uint32_t i = 0; i < ga.size(); ++i)
      for (std::uint32_t j = 0; j < gb.size(); ++j) all.push_back({i, j});
    const IntersectionRegister exact = reference::narrow_phase(ga, gb, all, tol.snap_eps);
    const auto cand = broad_phase(a, b);
    const std::set<FacetPair> cs(cand.begin(), cand.end());
    for (const auto& [i, partners] : exact.a_to_b)
      for (const Partner& p : partners) CHECK(cs.count({i, p.id}) == 1);
  }
}

TEST_CASE("facet intersection in 3D") {
  const FacetGeom a = tri({0, 0, 0}, {1, 0, 0}, {0, 1, 0});
  const FacetGeom above = tri({0, 0, 1}, {1, 0, 1}, {0, 1, 1});
  CHECK(facet_facet_intersect(a, above, 1e-9).kind == FacetIntersection::Kind::None);

  const FacetGeom big = tri({0, 0, 0}, {2, 0, 0}, {0, 2, 0});
  const FacetGeom cut = tri({0.5, 0.5, -1}, {0.5, 0.5, 1}, {1.5, 0.5, 0});
  const FacetIntersection r = facet_facet_intersect(big, cut, 1e-9);
  REQUIRE(r.kind == FacetIntersection::Kind::Overlap);
  REQUIRE(r.region.size() == 2);

  // oracle: intersect each triangle's edges with the other triangle's plane
  auto edge_hits = [](const FacetGeom& f, const NVector& n, double off) {
    std::vector<double> xs;
    for (std::size_t i = 0; i < 3; ++i) {
      const NVector& p = f.pts[i];
      const NVector& q = f.pts[(i + 1) % 3];
      const double sp = n.dot(p) - off, sq = n.dot(q) - off;
      if (sp == 0) xs.push_back(p[0]);
      if ((sp < 0 && sq > 0) || (sp > 0 && sq < 0)) xs.push_back(p[0] + sp / (sp - sq) * (q[0] - p[0]));
    }
    return std::pair{*std::min_element(xs.begin(), xs.end()), *std::max_element(xs.begin(), xs.end())};
  };
  const auto [a0, a1] = edge_hits(big, NVector{0, 1, 0}, 0.5);
  const auto [b0, b1] = edge_hits(cut, NVector{0, 0, 1}, 0.0);
  const double lo = std::max(a0, b0), hi = std::min(a1, b1);
  std::vector<double> xs{r.region[0][0], r.region[1][0]};
  std::sort(xs.begin(), xs.end());
  CHECK(xs[0] == doctest::Approx(lo));
  CHECK(xs[1] == doctest::Approx(hi));
  for (const NVector& p : r.region) {
    CHECK(p[1] == doctest::Approx(0.5));
    CHECK(std::abs(p[2]) < 1e-12);
  }

  const FacetGeom far = tri({5, 0, -1}, {5, 0, 1}, {6, 0, 0});
  CHECK(facet_facet_intersect(big, far, 1e-9).kind == FacetIntersection::Kind::None);

  const FacetGeom flat = tri({0.2, 0.2, 0}, {1, 0.2, 0}, {0.2, 1, 0});
  CHECK(facet_facet_intersect(big, flat, 1e-9).kind == FacetIntersection::Kind::Coplanar);
}

TEST_CASE("facet intersection in 4D overlaps a clipped polygon") {
  // A lies in w = 0; its section by z = 0 is the triangle x, y >= 0, x + y <= 3
  const FacetGeom a = tet4({{0, 0, -1, 0}, {4, 0, -1, 0}, {0, 4, -1, 0}, {0, 0, 3, 0}});
  // B lies in z = 0; its section by w = 0 is (2, 0.5), (3.5, 0.5), (2, 2)
  const FacetGeom b = tet4({{2, 0.5, 0, -1}, {4, 0.5, 0, -1}, {2, 2.5, 0, -1}, {2, 0.5, 0, 3}});
  const FacetIntersection r = facet_facet_intersect(a, b, 1e-9);
  REQUIRE(r.kind == FacetIntersection::Kind::Overlap);

  const std::vector<P2> ta{{0, 0}, {3, 0}, {0, 3}};
  const std::vector<P2> tb{{2, 0.5}, {3.5, 0.5}, {2, 2}};
  const std::vector<P2> expect = clip_polygon(tb, ta);
  CHECK(std::abs(oracle::shoelace(expect)) > 0.1);
  for (const NVector& p : r.region) {
    CHECK(std::abs(p[2]) < 1e-9);
    CHECK(std::abs(p[3]) < 1e-9);
  }
  // same vertex sets
  auto has = [](const std::vector<NVector>& pts, const P2& q) {
    return std::any_of(pts.begin(), pts.end(),
                       [&](const NVector& p) { return std::abs(p[0] - q[0]) < 1e-9 && std::abs(p[1] - q[1]) < 1e-9; });
  };
  std::size_t distinct = 0;
  for (std::size_t i = 0; i < expect.size(); ++i) {
    const P2& q = expect[i];
    const P2& prev = expect[(i + expect.size() - 1) % expect.size()];
    if (std::abs(q[0] - prev[0]) + std::abs(q[1] - prev[1]) < 1e-12) continue;
    ++distinct;
    CHECK(has(r.region, q));
  }
  CHECK(r.region.size() == distinct);

  // shifted further along x the sections are disjoint, SAT separates them
  const FacetGeom c = tet4({{3.2, 0.5, 0, -1}, {5, 0.5, 0, -1}, {3.2, 2.5, 0, -1}, {3.2, 0.5, 0, 3}});
  CHECK(facet_facet_intersect(a, c, 1e-9).kind == FacetIntersection::Kind::None);
}

TEST_CASE("facet intersection rejects other dimensions") {
  const FacetGeom a = FacetGeom::from_points({{0, 0}, {1, 0}}, {0, 1});
  CHECK_THROWS_AS(facet_facet_intersect(a, a, 1e-9), ArgumentError);
}

TEST_CASE("intersection register is symmetric") {
  IntersectionRegister reg;
  reg.add(1, 4, false);
  reg.add(1, 5, true);
  reg.add(2, 4, false);
  CHECK(reg.pair_count() == 3);
  for (const auto& [a, ps] : reg.a_to_b)
    for (const Partner& p : ps) {
      const auto& back = reg.b_to_a.at(p.id);
      CHECK(std::find(back.begin(), back.end(), Partner{a, p.coplanar}) != back.end());
    }
}

TEST_CASE("clip and tessellate") {
  const std::vector<NVector> t{{0, 0, 0}, {2, 0, 0}, {0, 2, 0}};
  const ClipResult miss = clip_and_tessellate(t, {{1, 0, 0}, 5.0}, 1e-7, 1e-6);
  CHECK_FALSE(miss.split);
  REQUIRE(miss.pieces.size() == 1);
  CHECK(miss.pieces[0] == t);

  const ClipResult half = clip_and_tessellate(t, {{1, 0, 0}, 1.0}, 1e-7, 1e-6);
  CHECK(half.split);
  CHECK(half.pieces.size() == 3);
  CHECK(total_measure(half.pieces) == doctest::Approx(2.0).epsilon(1e-9));
  int right = 0;
  for (const auto& p : half.pieces) {
    NVector c(3);
    for (const NVector& v : p) c += v;
    if (c[0] / 3 > 1.0) ++right;
  }
  CHECK(right == 1);

  // cut passing 1e-8 beyond (2,0,0): the vertex is kept bit-exactly on both sides
  NVector n{1, 2, 0};
  n = n / n.norm();
  const ClipResult snap = clip_and_tessellate(t, {n, n.dot(NVector{2 + 1e-8, 0, 0})}, 1e-7, 1e-6);
  CHECK(snap.split);
  CHECK(total_measure(snap.pieces) == doctest::Approx(2.0).epsilon(1e-9));
  std::size_t exact = 0;
  for (const auto& p : snap.pieces)
    for (const NVector& v : p) {
      if (v == NVector{2, 0, 0}) ++exact;
      CHECK_FALSE((v != NVector{2, 0, 0} && (v - NVector{2, 0, 0}).norm() < 1e-6));
    }
  CHECK(exact >= 2);
}

TEST_CASE("clip tiles random 4D facets") {
  oracle::Rng rng(14);
  for (int t = 0; t < 100; ++t) {
    std::vector<NVector> f;
    for (int k = 0; k < 4; ++k) f.push_back(rng.vec(4));
    NVector n = rng.vec(4);
    n = n / n.norm();
    NVector c(4);
    for (const NVector& v : f) c += v;
    const ClipResult r = clip_and_tessellate(f, {n, n.dot(c / 4.0)}, 1e-9, 1e-9);
    auto measure = [](const std::vector<NVector>& p) {
      std::vector<NVector> span;
      for (std::size_t k = 1; k < p.size(); ++k) span.push_back(p[k] - p[0]);
      return wedge_normal(span, 4).norm() / 6.0;
    };
    double sum = 0.0;
    for (const auto& p : r.pieces) sum += measure(p);
    CHECK(r.split);
    CHECK(sum == doctest::Approx(measure(f)).epsilon(1e-6));
  }
}

TEST_CASE("event classification") {
  // 2D analogue of a ray through a polygon vertex: opposite normal sides
  // are tangent, same sides pierce
  CHECK(classify_event(std::vector{0.6, -0.6}, 1e-9) == EventKind::Tangent);
  CHECK(classify_event(std::vector{0.6, 0.2}, 1e-9) == EventKind::Piercing);
  CHECK(classify_event(std::vector{-0.6, -0.2, -0.9}, 1e-9) == EventKind::Piercing);
  CHECK(classify_event(std::vector{0.6, 1e-12}, 1e-9) == EventKind::Degenerate);
  CHECK(classify_event(std::vector{0.5}, 1e-9) == EventKind::Piercing);
}

TEST_CASE("ray events through a vertex of a diamond") {
  // octahedron |x|+|y|+|z| <= 1: a +x ray from y = z = 0 meets the vertex (1,0,0)
  std::vector<NVector> pts{{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  const NMesh oct = build_hull(pts, 3).mesh;
  const Classifier cls(oct, BooleanTolerances::for_meshes(oct, oct));
  const auto ev = cls.cast(NVector{0.2, 0, 0});
  REQUIRE(ev.has_value());
  REQUIRE(ev->size() == 1);
  CHECK(ev->front().kind == EventKind::Piercing);
  CHECK(near(ev->front().position, NVector{1, 0, 0}, 1e-9));
  CHECK(ev->front().member_facets.size() == 4);
  CHECK(cls.classify(NVector{0.2, 0, 0}) == Side::Inside);

  // grazing the top vertex from outside: the ray only touches, so the
  // event is tangent and the point stays outside
  const auto graze = cls.cast(NVector{-2, 0, 1});
  if (graze) {
    for (const auto& e : *graze) CHECK(e.kind != EventKind::Piercing);
  }
  CHECK(cls.classify(NVector{-2, 0, 1}) == Side::Outside);
}

TEST_CASE("classify facet") {
  const NMesh cube = make_hypercube(4);
  CHECK(classify_facet(NVector(4), cube) == Side::Inside);
  CHECK(classify_facet(NVector{0.9, 0, 0, 0}, cube) == Side::Outside);
  CHECK(classify_facet(NVector{0.1, 0.2, -0.3, 0.4}, cube) == Side::Inside);
  CHECK(classify_facet(NVector{-3, 0.1, 0.1, 0.1}, cube) == Side::Outside);
  CHECK_THROWS_AS(classify_facet(NVector(3), cube), ArgumentError);
}

TEST_CASE("classifier agrees with the half-space oracle") {
  oracle::Rng rng(77);
  for (std::size_t dim : {3u, 4u}) {
    const NMesh m = make_random_convex(dim, 40, 5 + dim);
    const Classifier cls(m, BooleanTolerances::for_meshes(m, m));
    int checked = 0;
    for (int t = 0; t < 2000; ++t) {
      const NVector p = rng.vec(dim, -0.8, 0.8);
      if (std::abs(oracle::convex_depth(m, p)) < 1e-6) continue;
      ++checked;
      CHECK((cls.classify(p, t) == Side::Inside) == oracle::inside_convex(m, p));
    }
    CHECK(checked > 1900);
  }
}

TEST_CASE("serial and parallel kernels agree") {
  const NMesh a = make_random_convex(4, 30, 1);
  const NMesh b = translated(make_random_convex(4, 30, 2), fill(4, 0.2));
  const BooleanTolerances tol = BooleanTolerances::for_meshes(a, b);
  const auto ga = facet_geometry(a), gb = facet_geometry(b);
  const auto cand = broad_phase(ga, gb, tol.snap_eps);
  const IntersectionRegister p = narrow_phase(ga, gb, cand, tol.snap_eps);
  const IntersectionRegister s = reference::narrow_phase(ga, gb, cand, tol.snap_eps);
  CHECK(p.a_to_b == s.a_to_b);
  CHECK(p.b_to_a == s.b_to_a);
  CHECK(p.pair_count() > 0);

  int dropped = 0;
  const auto pieces = split_facets(ga, gb, p.a_to_b, tol, dropped);
  const Classifier cls(b, tol);
  const auto cp = classify_pieces(cls, pieces);
  const auto cs = reference::classify_pieces(cls, pieces);
  REQUIRE(cp.size() == cs.size());
  for (std::size_t i = 0; i < cp.size(); ++i) {
    CHECK(cp[i].side == cs[i].side);
    CHECK(cp[i].contact == cs[i].contact);
  }
}

TEST_CASE("split pieces tile their source facets") {
  const NMesh a = make_hypercube(3);
  const NMesh b = translated(a, fill(3, 0.5));
  const BooleanTolerances tol = BooleanTolerances::for_meshes(a, b);
  const auto ga = facet_geometry(a), gb = facet_geometry(b);
  const auto reg = narrow_phase(ga, gb, broad_phase(ga, gb, tol.snap_eps), tol.snap_eps);
  int dropped = 0;
  const auto pieces = split_facets(ga, gb, reg.a_to_b, tol, dropped);
  std::vector<double> area(a.facet_count(), 0.0);
  for (const Piece& p : pieces) area[p.source] += total_measure({p.pts});
  for (std::size_t f = 0; f < a.facet_count(); ++f) CHECK(area[f] == doctest::Approx(facet_measure(a, f)).epsilon(1e-9));
  CHECK(dropped == 0);
}

TEST_CASE("boolean of disjoint objects") {
  const NMesh a = make_hypercube(3);
  const NMesh b = translated(a, NVector{3, 0, 0});
  const NMesh i = boolean_op(a, b, BooleanKind::Intersection);
  CHECK(i.empty());
  CHECK(i.vertex_count() == 0);
  CHECK(i.dim() == 3);
  CHECK(mesh_volume(boolean_op(a, b, BooleanKind::Union)) == doctest::Approx(2.0));
  CHECK(mesh_volume(boolean_op(a, b, BooleanKind::Difference)) == doctest::Approx(1.0));
}

TEST_CASE("boolean of a cube with itself") {
  const NMesh a = make_hypercube(3);
  for (BooleanKind k : {BooleanKind::Union, BooleanKind::Intersection}) {
    const NMesh r = boolean_op(a, a, k);
    CHECK(mesh_volume(r) == doctest::Approx(1.0).epsilon(1e-4));
  }
  CHECK(std::abs(mesh_volume(boolean_op(a, a, BooleanKind::Difference))) < 1e-4);
}

TEST_CASE("offset cube fixtures") {
  for (std::size_t dim : {3u, 4u}) {
    const NMesh a = make_hypercube(dim);
    const NMesh b = translated(a, fill(dim, 0.5));
    const double overlap = std::pow(0.5, static_cast<double>(dim));
    const NMesh u = boolean_op(a, b, BooleanKind::Union);
    const NMesh i = boolean_op(a, b, BooleanKind::Intersection);
    const NMesh d = boolean_op(a, b, BooleanKind::Difference);
    CHECK(mesh_volume(i) == doctest::Approx(overlap).epsilon(1e-4));
    CHECK(mesh_volume(u) == doctest::Approx(2.0 - overlap).epsilon(1e-4));
    CHECK(mesh_volume(d) == doctest::Approx(1.0 - overlap).epsilon(1e-4));
    for (const NMesh* m : {&u, &i, &d}) CHECK_NOTHROW(m->validate());
    if (dim == 3) {
      CHECK(u.facet_count() >= 35);
      CHECK(u.facet_count() <= 65);
    }
  }
}

TEST_CASE("volume identities on random convex pairs") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const std::size_t dim = seed <= 5 ? 3 : 4;
    const NMesh a = make_random_convex(dim, 20, seed);
    const NMesh b = translated(make_random_convex(dim, 20, seed + 50), fill(dim, 0.25));
    const double va = mesh_volume(a), vb = mesh_volume(b);
    const double vu = mesh_volume(boolean_op(a, b, BooleanKind::Union));
    const double vi = mesh_volume(boolean_op(a, b, BooleanKind::Intersection));
    const double vd = mesh_volume(boolean_op(a, b, BooleanKind::Difference));
    CHECK(vu + vi == doctest::Approx(va + vb).epsilon(1e-4));
    CHECK(vd == doctest::Approx(va - vi).epsilon(1e-4).scale(va));
  }
}

TEST_CASE("boolean rejects unsupported input") {
  CHECK_THROWS_AS(boolean_op(make_hypercube(3), make_hypercube(4), BooleanKind::Union), ArgumentError);
  CHECK_THROWS_AS(boolean_op(make_hypercube(5), make_hypercube(5), BooleanKind::Union), ArgumentError);
}

TEST_CASE("mesh from pieces merges and drops collapsed facets") {
  std::vector<Piece> pieces;
  pieces.push_back({{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {0, 0, 1}, 0});
  pieces.push_back({{{1, 0, 0}, {1 + 1e-9, 1, 0}, {0, 1, 0}}, {0, 0, 1}, 1});
  pieces.push_back({{{5, 5, 5}, {5, 5, 5}, {6, 5, 5}}, {0, 0, 1}, 2});  // collapsed
  const NMesh m = mesh_from_pieces(3, pieces, 1e-7);
  CHECK(m.facet_count() == 2);
  CHECK(m.vertex_count() == 4);
}

TEST_CASE("hollow cube has the expected volume") {
  for (std::size_t dim : {3u, 4u}) {
    const NMesh h = make_hollow_cube(dim, 1.0, 0.7);
    CHECK(mesh_volume(h) == doctest::Approx(1.0 - std::pow(0.7, double(dim))).epsilon(1e-4));
  }
}
