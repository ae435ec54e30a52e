#include "hullspace/boolean.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "hullspace/errors.hpp"
#include "hullspace/hull.hpp"
#include "hullspace/primitives.hpp"

namespace hullspace {

BooleanTolerances BooleanTolerances::for_scale(double d) {
  if (!(d > 0.0)) d = 1.0;
  BooleanTolerances t;
  t.merge_eps = 1e-7 * d;
  t.snap_eps = 1e-6 * d;
  t.group_eps = 1e-6 * d;
  t.perturb = 1e-5 * d;
  t.ray_margin = 1e-3 * d;
  return t;
}

BooleanTolerances BooleanTolerances::for_meshes(const NMesh& a, const NMesh& b) {
  std::vector<NVector> corners;
  for (const NMesh* m : {&a, &b}) {
    if (m->vertex_count() == 0) continue;
    const Aabb box = mesh_aabb(*m);
    corners.push_back(box.min);
    corners.push_back(box.max);
  }
  return for_scale(corners.empty() ? 1.0 : points_aabb(corners).diagonal());
}

FacetGeom FacetGeom::from_points(std::vector<NVector> pts, NVector normal) {
  FacetGeom g;
  NVector c(pts[0].dim());
  for (const NVector& p : pts) c += p;
  c /= static_cast<double>(pts.size());
  g.offset = normal.dot(c);
  g.normal = std::move(normal);
  g.box = points_aabb(pts);
  g.pts = std::move(pts);
  return g;
}

FacetGeom FacetGeom::from_mesh(const NMesh& m, std::size_t f) {
  std::vector<NVector> pts;
  for (Index i : m.facet(f)) pts.push_back(m.vertex(i));
  return from_points(std::move(pts), m.normal(f));
}

std::vector<FacetGeom> facet_geometry(const NMesh& m) {
  std::vector<FacetGeom> out;
  out.reserve(m.facet_count());
  for (std::size_t f = 0; f < m.facet_count(); ++f) out.push_back(FacetGeom::from_mesh(m, f));
  return out;
}

// ---------------------------------------------------------------------------
// Broad phase

std::size_t SpatialGrid::KeyHash::operator()(const Key& k) const {
  std::size_t h = 0xcbf29ce484222325ull;
  for (std::int64_t v : k) {
    h ^= static_cast<std::size_t>(v);
    h *= 0x100000001b3ull;
  }
  return h;
}

SpatialGrid::SpatialGrid(double cell_size, std::size_t dim, std::vector<std::size_t> axes)
    : cell_(cell_size), dim_(dim), axes_(std::move(axes)) {
  if (!(cell_ > 0.0)) throw ArgumentError("grid cell size must be positive");
  if (axes_.empty()) {
    axes_.resize(dim_);
    std::iota(axes_.begin(), axes_.end(), std::size_t{0});
  }
}

SpatialGrid::Key SpatialGrid::key_of(const NVector& p) const {
  Key k(axes_.size());
  for (std::size_t a = 0; a < axes_.size(); ++a)
    k[a] = static_cast<std::int64_t>(std::floor(p[axes_[a]] / cell_));
  return k;
}

template <class F>
void SpatialGrid::for_each_cell(const Aabb& box, double pad, F&& f) const {
  const std::size_t n = axes_.size();
  Key lo(n), hi(n), cur(n);
  for (std::size_t a = 0; a < n; ++a) {
    lo[a] = static_cast<std::int64_t>(std::floor((box.min[axes_[a]] - pad) / cell_));
    hi[a] = static_cast<std::int64_t>(std::floor((box.max[axes_[a]] + pad) / cell_));
  }
  cur = lo;
  while (true) {
    f(cur);
    std::size_t a = 0;
    for (; a < n; ++a) {
      if (cur[a] < hi[a]) {
        ++cur[a];
        break;
      }
      cur[a] = lo[a];
    }
    if (a == n) break;
  }
}

void SpatialGrid::insert(std::uint32_t id, const Aabb& box, double pad) {
  for_each_cell(box, pad, [&](const Key& k) { cells_[k].push_back(id); });
}

std::vector<std::uint32_t> SpatialGrid::query(const Aabb& box, double pad) const {
  std::vector<std::uint32_t> out;
  for_each_cell(box, pad, [&](const Key& k) {
    const auto it = cells_.find(k);
    if (it != cells_.end()) out.insert(out.end(), it->second.begin(), it->second.end());
  });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::span<const std::uint32_t> SpatialGrid::at(const NVector& p) const {
  const auto it = cells_.find(key_of(p));
  if (it == cells_.end()) return {};
  return it->second;
}

double grid_cell_size(std::span<const FacetGeom> a, std::span<const FacetGeom> b) {
  double total = 0.0;
  std::size_t count = 0;
  for (auto facets : {a, b})
    for (const FacetGeom& g : facets) {
      const NVector e = g.box.extent();
      total += *std::max_element(e.coords().begin(), e.coords().end());
      ++count;
    }
  return count == 0 || total <= 0.0 ? 1.0 : total / static_cast<double>(count);
}

std::vector<FacetPair> broad_phase(std::span<const FacetGeom> a, std::span<const FacetGeom> b, double pad) {
  std::vector<FacetPair> out;
  if (a.empty() || b.empty()) return out;
  SpatialGrid grid(grid_cell_size(a, b), a[0].pts[0].dim());
  for (std::uint32_t j = 0; j < b.size(); ++j) grid.insert(j, b[j].box, pad);
  for (std::uint32_t i = 0; i < a.size(); ++i)
    for (std::uint32_t j : grid.query(a[i].box, pad)) out.emplace_back(i, j);
  return out;
}

std::vector<FacetPair> broad_phase(const NMesh& a, const NMesh& b) {
  if (a.dim() != b.dim()) throw ArgumentError("broad_phase: dimension mismatch");
  const auto ga = facet_geometry(a);
  const auto gb = facet_geometry(b);
  return broad_phase(ga, gb, BooleanTolerances::for_meshes(a, b).snap_eps);
}

// ---------------------------------------------------------------------------
// Narrow phase

namespace {

using P2 = std::array<double, 2>;

double cross2(const P2& o, const P2& a, const P2& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

double dist2(const P2& a, const P2& b) { return std::hypot(a[0] - b[0], a[1] - b[1]); }

// Convex hull, counter-clockwise, collinear points dropped. May return one
// or two points for degenerate input.
std::vector<P2> hull2d(std::vector<P2> pts, double tol) {
  std::sort(pts.begin(), pts.end());
  std::vector<P2> uniq;
  for (const P2& p : pts)
    if (std::none_of(uniq.begin(), uniq.end(), [&](const P2& q) { return dist2(p, q) <= tol; }))
      uniq.push_back(p);
  if (uniq.size() <= 2) return uniq;
  std::vector<P2> h(2 * uniq.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < uniq.size(); ++i) {
    while (k >= 2 && cross2(h[k - 2], h[k - 1], uniq[i]) <= tol * dist2(h[k - 2], uniq[i])) --k;
    h[k++] = uniq[i];
  }
  for (std::size_t i = uniq.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross2(h[k - 2], h[k - 1], uniq[i]) <= tol * dist2(h[k - 2], uniq[i])) --k;
    h[k++] = uniq[i];
  }
  h.resize(k - 1);
  if (h.size() < 2) h = {uniq.front(), uniq.back()};
  return h;
}

double seg_dist(const P2& p, const P2& a, const P2& b) {
  const double dx = b[0] - a[0], dy = b[1] - a[1];
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0.0 ? ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p[0] - a[0] - t * dx, p[1] - a[1] - t * dy);
}

bool contains2d(const std::vector<P2>& h, const P2& p, double tol) {
  if (h.size() == 1) return dist2(h[0], p) <= tol;
  if (h.size() == 2) return seg_dist(p, h[0], h[1]) <= tol;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const P2& a = h[i];
    const P2& b = h[(i + 1) % h.size()];
    if (cross2(a, b, p) < -tol * dist2(a, b)) return false;
  }
  return true;
}

std::vector<std::pair<P2, P2>> edges2d(const std::vector<P2>& h) {
  std::vector<std::pair<P2, P2>> e;
  if (h.size() == 2) e.emplace_back(h[0], h[1]);
  if (h.size() >= 3)
    for (std::size_t i = 0; i < h.size(); ++i) e.emplace_back(h[i], h[(i + 1) % h.size()]);
  return e;
}

bool separated2d(const std::vector<P2>& a, const std::vector<P2>& b, double tol) {
  std::vector<P2> axes;
  for (const auto* h : {&a, &b}) {
    for (const auto& [p, q] : edges2d(*h)) {
      const double dx = q[0] - p[0], dy = q[1] - p[1];
      axes.push_back({-dy, dx});
      if (h->size() == 2) axes.push_back({dx, dy});
    }
  }
  auto centroid = [](const std::vector<P2>& h) {
    P2 c{0, 0};
    for (const P2& p : h) c = {c[0] + p[0], c[1] + p[1]};
    return P2{c[0] / h.size(), c[1] / h.size()};
  };
  const P2 ca = centroid(a), cb = centroid(b);
  axes.push_back({cb[0] - ca[0], cb[1] - ca[1]});
  for (const P2& ax : axes) {
    const double len = std::hypot(ax[0], ax[1]);
    if (len <= 0.0) continue;
    double amin = INFINITY, amax = -INFINITY, bmin = INFINITY, bmax = -INFINITY;
    for (const P2& p : a) {
      const double s = (p[0] * ax[0] + p[1] * ax[1]) / len;
      amin = std::min(amin, s);
      amax = std::max(amax, s);
    }
    for (const P2& p : b) {
      const double s = (p[0] * ax[0] + p[1] * ax[1]) / len;
      bmin = std::min(bmin, s);
      bmax = std::max(bmax, s);
    }
    if (amax < bmin - tol || bmax < amin - tol) return true;
  }
  return false;
}

std::optional<P2> seg_seg(const P2& p, const P2& p2, const P2& q, const P2& q2) {
  const double rx = p2[0] - p[0], ry = p2[1] - p[1];
  const double sx = q2[0] - q[0], sy = q2[1] - q[1];
  const double den = rx * sy - ry * sx;
  if (std::abs(den) < 1e-300) return std::nullopt;
  const double t = ((q[0] - p[0]) * sy - (q[1] - p[1]) * sx) / den;
  const double u = ((q[0] - p[0]) * ry - (q[1] - p[1]) * rx) / den;
  if (t < 0.0 || t > 1.0 || u < 0.0 || u > 1.0) return std::nullopt;
  return P2{p[0] + t * rx, p[1] + t * ry};
}

// Cross-section of a simplex by a hyperplane given signed vertex distances.
std::vector<NVector> section(const std::vector<NVector>& pts, const std::vector<double>& s, double tol) {
  std::vector<NVector> out;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (std::abs(s[i]) <= tol) out.push_back(pts[i]);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const bool cross = (s[i] < -tol && s[j] > tol) || (s[i] > tol && s[j] < -tol);
      if (!cross) continue;
      const double t = s[i] / (s[i] - s[j]);
      out.push_back(pts[i] + (pts[j] - pts[i]) * t);
    }
  return out;
}

bool one_side(const std::vector<double>& s, double tol) {
  return std::all_of(s.begin(), s.end(), [&](double v) { return v > tol; }) ||
         std::all_of(s.begin(), s.end(), [&](double v) { return v < -tol; });
}

// Orthonormal basis of the directions orthogonal to every vector in `normals`.
std::vector<NVector> complement_basis(std::size_t dim, std::vector<NVector> normals) {
  std::vector<NVector> ortho;
  for (NVector n : normals) {
    for (const NVector& b : ortho) n -= b * n.dot(b);
    ortho.push_back(n.normalized());
  }
  std::vector<NVector> out;
  while (ortho.size() < dim) {
    NVector best;
    double best_len = -1.0;
    for (std::size_t k = 0; k < dim; ++k) {
      NVector e = NVector::basis(dim, k);
      for (const NVector& b : ortho) e -= b * e.dot(b);
      const double len = e.norm();
      if (len > best_len) {
        best_len = len;
        best = e;
      }
    }
    best /= best_len;
    ortho.push_back(best);
    out.push_back(best);
  }
  return out;
}

}  // namespace

FacetIntersection facet_facet_intersect(const FacetGeom& fa, const FacetGeom& fb, double tol) {
  const std::size_t n = fa.normal.dim();
  if (n != 3 && n != 4) throw ArgumentError("facet_facet_intersect supports N = 3 and N = 4 only");
  if (fb.normal.dim() != n) throw ArgumentError("facet_facet_intersect: dimension mismatch");
  FacetIntersection res;
  if (!fa.box.overlaps(fb.box, tol)) return res;

  std::vector<double> sb(fb.pts.size()), sa(fa.pts.size());
  for (std::size_t j = 0; j < fb.pts.size(); ++j) sb[j] = fa.normal.dot(fb.pts[j]) - fa.offset;
  if (one_side(sb, tol)) return res;
  for (std::size_t i = 0; i < fa.pts.size(); ++i) sa[i] = fb.normal.dot(fa.pts[i]) - fb.offset;
  if (one_side(sa, tol)) return res;

  const auto on_plane = [&](const std::vector<double>& s) {
    return std::all_of(s.begin(), s.end(), [&](double v) { return std::abs(v) <= tol; });
  };
  if (on_plane(sb) || on_plane(sa) || std::abs(fa.normal.dot(fb.normal)) > 1.0 - 1e-12) {
    res.kind = FacetIntersection::Kind::Coplanar;
    return res;
  }

  const std::vector<NVector> ib = section(fb.pts, sb, tol);
  const std::vector<NVector> ia = section(fa.pts, sa, tol);
  if (ia.empty() || ib.empty()) return res;

  const std::vector<NVector> basis = complement_basis(n, {fa.normal, fb.normal});
  const NVector& origin = ia[0];

  if (n == 3) {
    const NVector& d = basis[0];
    auto range = [&](const std::vector<NVector>& pts) {
      std::size_t lo = 0, hi = 0;
      std::vector<double> t(pts.size());
      for (std::size_t k = 0; k < pts.size(); ++k) {
        t[k] = d.dot(pts[k] - origin);
        if (t[k] < t[lo]) lo = k;
        if (t[k] > t[hi]) hi = k;
      }
      return std::tuple{t[lo], t[hi], lo, hi};
    };
    const auto [amin, amax, alo, ahi] = range(ia);
    const auto [bmin, bmax, blo, bhi] = range(ib);
    if (amax < bmin - tol || bmax < amin - tol) return res;
    res.kind = FacetIntersection::Kind::Overlap;
    res.region.push_back(amin >= bmin ? ia[alo] : ib[blo]);
    res.region.push_back(amax <= bmax ? ia[ahi] : ib[bhi]);
    return res;
  }

  auto project = [&](const std::vector<NVector>& pts) {
    std::vector<P2> out;
    for (const NVector& p : pts) {
      const NVector r = p - origin;
      out.push_back({r.dot(basis[0]), r.dot(basis[1])});
    }
    return out;
  };
  const std::vector<P2> ha = hull2d(project(ia), tol);
  const std::vector<P2> hb = hull2d(project(ib), tol);
  if (separated2d(ha, hb, tol)) return res;

  res.kind = FacetIntersection::Kind::Overlap;
  std::vector<P2> region;
  for (const P2& p : ha)
    if (contains2d(hb, p, tol)) region.push_back(p);
  for (const P2& p : hb)
    if (contains2d(ha, p, tol)) region.push_back(p);
  for (const auto& [p, p2] : edges2d(ha))
    for (const auto& [q, q2] : edges2d(hb))
      if (auto x = seg_seg(p, p2, q, q2)) region.push_back(*x);
  for (const P2& p : hull2d(region, tol))
    res.region.push_back(origin + basis[0] * p[0] + basis[1] * p[1]);
  return res;
}

void IntersectionRegister::add(std::uint32_t a, std::uint32_t b, bool coplanar) {
  a_to_b[a].push_back({b, coplanar});
  b_to_a[b].push_back({a, coplanar});
}

std::size_t IntersectionRegister::pair_count() const {
  std::size_t n = 0;
  for (const auto& [k, v] : a_to_b) n += v.size();
  return n;
}

// ---------------------------------------------------------------------------
// Clipping

namespace {

enum class CellCut { Positive, Negative, Split };

// Splits a convex cell (given by its vertices) by a hyperplane. Cut
// vertices come from every positive/negative vertex pair, so they cover the
// section even when the pair is not an edge; extra points are interior and
// vanish when the side is re-hulled.
CellCut cut_cell(std::span<const NVector> cell, const Hyperplane& plane, double merge_eps, double snap_eps,
                 std::vector<NVector>& pos, std::vector<NVector>& neg) {
  const std::size_t n = cell.size();
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = plane.normal.dot(cell[i]) - plane.offset;
  if (std::all_of(s.begin(), s.end(), [&](double v) { return v >= -snap_eps; })) return CellCut::Positive;
  if (std::all_of(s.begin(), s.end(), [&](double v) { return v <= snap_eps; })) return CellCut::Negative;

  std::vector<NVector> on, cut;
  pos.clear();
  neg.clear();
  for (std::size_t i = 0; i < n; ++i) {
    if (s[i] > snap_eps)
      pos.push_back(cell[i]);
    else if (s[i] < -snap_eps)
      neg.push_back(cell[i]);
    else
      on.push_back(cell[i]);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (!(s[i] > snap_eps && s[j] < -snap_eps)) continue;
      const double t = s[i] / (s[i] - s[j]);
      NVector x = cell[i] + (cell[j] - cell[i]) * t;
      // stage 1: unify nearby intersection vertices
      const bool dup = std::any_of(cut.begin(), cut.end(), [&](const NVector& c) { return (c - x).norm() <= merge_eps; });
      if (!dup) cut.push_back(std::move(x));
    }
  // stage 2: snap onto the cell's own vertices
  for (NVector& x : cut)
    for (const NVector& v : cell)
      if ((x - v).norm() <= snap_eps) {
        x = v;
        break;
      }
  for (auto* side : {&pos, &neg}) {
    for (const auto* extra : {&on, &cut})
      for (const NVector& p : *extra)
        if (std::find(side->begin(), side->end(), p) == side->end()) side->push_back(p);
  }
  return CellCut::Split;
}

// Simplices tiling a convex cell of dimension N-1; throws DegenerateInput
// for zero-measure cells.
std::vector<std::vector<NVector>> tessellate_cell(std::span<const NVector> cell) {
  const std::size_t n = cell[0].dim();
  if (cell.size() < n) throw DegenerateInput("cell has too few vertices");
  std::vector<std::vector<NVector>> out;
  for (const auto& simplex : tessellate_flat(cell, n - 1)) {
    std::vector<NVector> piece;
    for (Index k : simplex) piece.push_back(cell[k]);
    out.push_back(std::move(piece));
  }
  return out;
}

// Drops vertices that are not extreme; false for zero-measure cells.
bool prune_cell(std::vector<NVector>& cell) {
  const std::size_t n = cell[0].dim();
  if (cell.size() < n) return false;
  if (cell.size() == n) return true;
  std::vector<char> used(cell.size(), 0);
  try {
    for (const auto& simplex : tessellate_flat(cell, n - 1))
      for (Index k : simplex) used[k] = 1;
  } catch (const DegenerateInput&) {
    return false;
  }
  std::vector<NVector> kept;
  for (std::size_t i = 0; i < cell.size(); ++i)
    if (used[i]) kept.push_back(std::move(cell[i]));
  cell = std::move(kept);
  return true;
}

}  // namespace

ClipResult clip_and_tessellate(std::span<const NVector> facet, const Hyperplane& plane, double merge_eps,
                               double snap_eps) {
  ClipResult res;
  std::vector<NVector> pos, neg;
  if (cut_cell(facet, plane, merge_eps, snap_eps, pos, neg) != CellCut::Split) {
    res.pieces.emplace_back(facet.begin(), facet.end());
    return res;
  }
  res.split = true;
  for (auto* side : {&pos, &neg}) {
    try {
      for (auto& piece : tessellate_cell(*side)) res.pieces.push_back(std::move(piece));
    } catch (const DegenerateInput&) {
      ++res.dropped;
    }
  }
  return res;
}

namespace {

std::vector<Hyperplane> boundary_planes(const FacetGeom& g) {
  const std::size_t n = g.normal.dim();
  std::vector<Hyperplane> out;
  for (std::size_t skip = 0; skip < n; ++skip) {
    std::vector<NVector> ridge;
    for (std::size_t k = 0; k < n; ++k)
      if (k != skip) ridge.push_back(g.pts[k]);
    std::vector<NVector> span;
    for (std::size_t k = 1; k < ridge.size(); ++k) span.push_back(ridge[k] - ridge[0]);
    span.push_back(g.normal);
    NVector m = wedge_normal(span, n);
    const double len = m.norm();
    if (len == 0.0) continue;
    m /= len;
    out.push_back({m, m.dot(ridge[0])});
  }
  return out;
}

}  // namespace

std::vector<Piece> split_facets(std::span<const FacetGeom> mine, std::span<const FacetGeom> theirs,
                                const std::map<std::uint32_t, std::vector<Partner>>& partners,
                                const BooleanTolerances& tol, int& dropped) {
  std::vector<Piece> out;
  for (std::uint32_t f = 0; f < mine.size(); ++f) {
    const FacetGeom& g = mine[f];
    const auto it = partners.find(f);
    if (it == partners.end()) {
      out.push_back({g.pts, g.normal, f});
      continue;
    }
    std::vector<Partner> order = it->second;
    std::sort(order.begin(), order.end());
    std::vector<std::vector<NVector>> cells{g.pts};
    std::vector<NVector> pos, neg;
    for (const Partner& p : order) {
      const FacetGeom& other = theirs[p.id];
      const std::vector<Hyperplane> planes =
          p.coplanar ? boundary_planes(other) : std::vector<Hyperplane>{{other.normal, other.offset}};
      for (const Hyperplane& h : planes) {
        std::vector<std::vector<NVector>> next;
        for (auto& cell : cells) {
          if (!points_aabb(cell).overlaps(other.box, tol.snap_eps) ||
              (!p.coplanar && facet_facet_intersect(FacetGeom::from_points(cell, g.normal), other, tol.snap_eps).kind ==
                                  FacetIntersection::Kind::None) ||
              cut_cell(cell, h, tol.merge_eps, tol.snap_eps, pos, neg) != CellCut::Split) {
            next.push_back(std::move(cell));
            continue;
          }
          for (auto* side : {&pos, &neg}) {
            if (prune_cell(*side))
              next.push_back(std::move(*side));
            else
              ++dropped;
          }
        }
        cells = std::move(next);
      }
    }
    std::vector<std::vector<NVector>> pieces;
    for (const auto& cell : cells) {
      if (cell.size() == g.normal.dim()) {
        pieces.push_back(cell);
        continue;
      }
      try {
        for (auto& s : tessellate_cell(cell)) pieces.push_back(std::move(s));
      } catch (const DegenerateInput&) {
        ++dropped;
      }
    }
    for (auto& piece : pieces) out.push_back({std::move(piece), g.normal, f});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Classification

EventKind classify_event(std::span<const double> ray_dot_normals, double eps_dot) {
  bool pos = false, neg = false;
  for (double d : ray_dot_normals) {
    if (std::abs(d) < eps_dot) return EventKind::Degenerate;
    (d > 0.0 ? pos : neg) = true;
  }
  return pos && neg ? EventKind::Tangent : EventKind::Piercing;
}

namespace {

bool invert(std::vector<double>& m, std::size_t n) {
  std::vector<double> inv(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) inv[i * n + i] = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(m[r * n + c]) > std::abs(m[piv * n + c])) piv = r;
    if (std::abs(m[piv * n + c]) < 1e-300) return false;
    for (std::size_t k = 0; k < n; ++k) {
      std::swap(m[c * n + k], m[piv * n + k]);
      std::swap(inv[c * n + k], inv[piv * n + k]);
    }
    const double d = m[c * n + c];
    for (std::size_t k = 0; k < n; ++k) {
      m[c * n + k] /= d;
      inv[c * n + k] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = m[r * n + c];
      if (f == 0.0) continue;
      for (std::size_t k = 0; k < n; ++k) {
        m[r * n + k] -= f * m[c * n + k];
        inv[r * n + k] -= f * inv[c * n + k];
      }
    }
  }
  m = std::move(inv);
  return true;
}

constexpr double kBaryTol = 1e-9;

}  // namespace

Classifier::Classifier(const NMesh& other, const BooleanTolerances& tol)
    : Classifier(facet_geometry(other), tol, other.dim()) {}

Classifier::Classifier(std::vector<FacetGeom> facets, const BooleanTolerances& tol, std::size_t dim)
    : dim_(dim), tol_(tol), facets_(std::move(facets)) {
  build();
}

void Classifier::build() {
  const std::size_t m = dim_ - 1;
  gram_inv_.resize(facets_.size());
  double extent_sum = 0.0;
  std::vector<NVector> corners;
  for (std::size_t g = 0; g < facets_.size(); ++g) {
    const FacetGeom& f = facets_[g];
    std::vector<double> gram(m * m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        gram[i * m + j] = (f.pts[i + 1] - f.pts[0]).dot(f.pts[j + 1] - f.pts[0]);
    if (invert(gram, m)) gram_inv_[g] = std::move(gram);
    const NVector e = f.box.extent();
    extent_sum += *std::max_element(e.coords().begin(), e.coords().end());
    corners.push_back(f.box.min);
    corners.push_back(f.box.max);
  }
  if (facets_.empty()) return;
  const double cell = extent_sum > 0.0 ? extent_sum / static_cast<double>(facets_.size()) : 1.0;
  std::vector<std::size_t> ray_axes;
  for (std::size_t k = 1; k < dim_; ++k) ray_axes.push_back(k);
  ray_grid_.emplace(cell, dim_, ray_axes);
  surface_grid_.emplace(cell, dim_);
  for (std::uint32_t g = 0; g < facets_.size(); ++g) {
    ray_grid_->insert(g, facets_[g].box, tol_.group_eps);
    surface_grid_->insert(g, facets_[g].box, tol_.group_eps);
  }
  ray_end_x_ = points_aabb(corners).max[0] + tol_.ray_margin;
}

bool Classifier::inside_facet(std::size_t g, const NVector& h, double bary_tol) const {
  const std::vector<double>& inv = gram_inv_[g];
  if (inv.empty()) return false;
  const FacetGeom& f = facets_[g];
  const std::size_t m = dim_ - 1;
  const NVector rel = h - f.pts[0];
  double proj[8];
  for (std::size_t i = 0; i < m; ++i) proj[i] = (f.pts[i + 1] - f.pts[0]).dot(rel);
  double sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double lam = 0.0;
    for (std::size_t j = 0; j < m; ++j) lam += inv[i * m + j] * proj[j];
    if (lam < -bary_tol) return false;
    sum += lam;
  }
  return 1.0 - sum >= -bary_tol;
}

std::optional<std::vector<IntersectionEvent>> Classifier::cast(const NVector& p) const {
  std::vector<IntersectionEvent> events;
  if (facets_.empty() || p[0] > ray_end_x_) return events;

  struct Hit {
    double t;
    std::uint32_t facet;
    double ndot;
  };
  std::vector<Hit> hits;
  for (std::uint32_t g : ray_grid_->at(p)) {
    const FacetGeom& f = facets_[g];
    bool in_box = f.box.max[0] >= p[0] - tol_.group_eps;
    for (std::size_t k = 1; k < dim_ && in_box; ++k)
      in_box = p[k] >= f.box.min[k] - tol_.group_eps && p[k] <= f.box.max[k] + tol_.group_eps;
    if (!in_box) continue;
    const double nx = f.normal[0];
    const double dist = f.normal.dot(p) - f.offset;
    if (std::abs(nx) < tol_.eps_dot) {
      if (std::abs(dist) <= tol_.group_eps) return std::nullopt;  // ray runs inside the facet plane
      continue;
    }
    const double t = -dist / nx;
    if (t < -tol_.group_eps || p[0] + t > ray_end_x_) continue;
    NVector h = p;
    h[0] += t;
    if (!inside_facet(g, h, kBaryTol)) continue;
    if (t <= tol_.group_eps) return std::nullopt;  // origin on the surface
    hits.push_back({t, g, nx});
  }
  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
    return a.t < b.t || (a.t == b.t && a.facet < b.facet);
  });

  std::size_t i = 0;
  while (i < hits.size()) {
    std::size_t j = i + 1;
    while (j < hits.size() && hits[j].t - hits[j - 1].t <= tol_.group_eps) ++j;
    IntersectionEvent ev;
    ev.position = p;
    ev.position[0] += hits[i].t;
    std::vector<double> dots;
    for (std::size_t k = i; k < j; ++k) {
      ev.member_facets.push_back(hits[k].facet);
      dots.push_back(hits[k].ndot);
    }
    ev.kind = classify_event(dots, tol_.eps_dot);
    if (ev.kind == EventKind::Degenerate) return std::nullopt;
    events.push_back(std::move(ev));
    i = j;
  }
  return events;
}

Side Classifier::classify(const NVector& p, std::uint64_t seed) const {
  if (p.dim() != dim_) throw ArgumentError("classify: dimension mismatch");
  for (int attempt = 0; attempt <= tol_.max_perturb; ++attempt) {
    NVector origin = p;
    if (attempt > 0) {
      Pcg32 rng(seed, static_cast<std::uint64_t>(attempt));
      NVector d(dim_);
      for (std::size_t k = 0; k < dim_; ++k) d[k] = rng.normal();
      origin += d * (tol_.perturb / std::max(d.norm(), 1e-300));
    }
    const auto events = cast(origin);
    if (!events) continue;
    if (attempt > 0) {
#pragma omp atomic
      ++perturbed_;
    }
    const auto crossings = std::count_if(events->begin(), events->end(), [](const IntersectionEvent& e) {
      return e.kind == EventKind::Piercing;
    });
    return crossings % 2 == 1 ? Side::Inside : Side::Outside;
  }
  throw ClassificationFailure("ray classification stayed degenerate after " +
                              std::to_string(tol_.max_perturb) + " perturbations");
}

Contact Classifier::contact(const NVector& p, const NVector& n) const {
  if (!surface_grid_) return Contact::None;
  for (std::uint32_t g : surface_grid_->at(p)) {
    const FacetGeom& f = facets_[g];
    const double dist = f.normal.dot(p) - f.offset;
    if (std::abs(dist) > tol_.group_eps) continue;
    const double align = n.dot(f.normal);
    if (std::abs(align) < 1.0 - 1e-6) continue;
    if (!inside_facet(g, p - f.normal * dist, 1e-6)) continue;
    return align > 0.0 ? Contact::SameOrientation : Contact::OppositeOrientation;
  }
  return Contact::None;
}

Side classify_facet(const NVector& facet_centroid, const NMesh& other) {
  if (facet_centroid.dim() != other.dim()) throw ArgumentError("classify_facet: dimension mismatch");
  const Classifier cls(other, BooleanTolerances::for_meshes(other, other));
  return cls.classify(facet_centroid);
}

// ---------------------------------------------------------------------------
// Assembly

NMesh mesh_from_pieces(std::size_t dim, std::span<const Piece> pieces, double merge_eps) {
  NMesh soup(dim);
  for (const Piece& p : pieces)
    for (const NVector& v : p.pts) soup.add_vertex(v);
  const VertexIndexMap map = dedup_vertices(soup, merge_eps);

  NMesh out(dim);
  for (const NVector& v : map.unique_vertices) out.add_vertex(v);
  std::size_t next = 0;
  std::vector<Index> idx(dim);
  for (const Piece& p : pieces) {
    for (std::size_t k = 0; k < dim; ++k) idx[k] = map.render_to_unique[next++];
    std::vector<Index> sorted = idx;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) continue;
    out.add_facet(idx, p.normal);
  }
  // drop vertices no facet references
  std::vector<Index> remap(out.vertex_count(), Index(-1));
  NMesh compact(dim);
  std::vector<Index> fidx(dim);
  for (std::size_t f = 0; f < out.facet_count(); ++f) {
    for (std::size_t k = 0; k < dim; ++k) {
      const Index v = out.facet(f)[k];
      if (remap[v] == Index(-1)) remap[v] = compact.add_vertex(out.vertex(v));
      fidx[k] = remap[v];
    }
    compact.add_facet(fidx, out.normal(f));
  }
  return compact;
}

NMesh boolean_op(const NMesh& a, const NMesh& b, BooleanKind kind, BooleanStats* stats) {
  if (a.dim() != b.dim()) throw ArgumentError("boolean_op: dimension mismatch");
  const std::size_t dim = a.dim();
  if (dim != 3 && dim != 4) throw ArgumentError("boolean_op supports N = 3 and N = 4 only");
  const BooleanTolerances tol = BooleanTolerances::for_meshes(a, b);

  std::vector<FacetGeom> ga = facet_geometry(a);
  std::vector<FacetGeom> gb = facet_geometry(b);
  const std::vector<FacetPair> candidates = broad_phase(ga, gb, tol.snap_eps);
  const IntersectionRegister reg = narrow_phase(ga, gb, candidates, tol.snap_eps);

  int dropped = 0;
  const std::vector<Piece> pa = split_facets(ga, gb, reg.a_to_b, tol, dropped);
  const std::vector<Piece> pb = split_facets(gb, ga, reg.b_to_a, tol, dropped);

  const Classifier against_b(std::move(gb), tol, dim);
  const Classifier against_a(std::move(ga), tol, dim);
  const std::vector<PieceClass> ca = classify_pieces(against_b, pa);
  const std::vector<PieceClass> cb = classify_pieces(against_a, pb);

  std::vector<Piece> kept;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    const PieceClass& c = ca[i];
    bool keep = false;
    switch (kind) {
      case BooleanKind::Union:
        keep = c.contact == Contact::SameOrientation || (c.contact == Contact::None && c.side == Side::Outside);
        break;
      case BooleanKind::Intersection:
        keep = c.contact == Contact::SameOrientation || (c.contact == Contact::None && c.side == Side::Inside);
        break;
      case BooleanKind::Difference:
        keep = c.contact == Contact::OppositeOrientation ||
               (c.contact == Contact::None && c.side == Side::Outside);
        break;
    }
    if (keep) kept.push_back(pa[i]);
  }
  for (std::size_t i = 0; i < pb.size(); ++i) {
    const PieceClass& c = cb[i];
    if (c.contact != Contact::None) continue;
    const bool keep = kind == BooleanKind::Union ? c.side == Side::Outside : c.side == Side::Inside;
    if (!keep) continue;
    Piece p = pb[i];
    if (kind == BooleanKind::Difference) p.normal = -p.normal;
    kept.push_back(std::move(p));
  }

  if (stats) {
    stats->candidate_pairs = candidates.size();
    stats->registered_pairs = reg.pair_count();
    stats->pieces_a = pa.size();
    stats->pieces_b = pb.size();
    stats->dropped_slivers = dropped;
  }
  return mesh_from_pieces(dim, kept, tol.merge_eps);
}

}  // namespace hullspace
