#include "hullspace/hull.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "hullspace/errors.hpp"

namespace hullspace {

double default_hull_eps(std::span<const NVector> points) {
  if (points.empty()) return 0.0;
  return 1e-9 * points_aabb(points).diagonal();
}

namespace {

// Orthonormal directions spanning the affine hull of the chosen points.
class AffineSpan {
 public:
  explicit AffineSpan(NVector origin) : origin_(std::move(origin)) {}

  NVector residual(const NVector& q) const {
    NVector r = q - origin_;
    for (const NVector& b : basis_) r -= b * r.dot(b);
    // second pass keeps the residual orthogonal when the basis is long
    for (const NVector& b : basis_) r -= b * r.dot(b);
    return r;
  }
  void add(const NVector& q) { basis_.push_back(residual(q).normalized()); }
  const std::vector<NVector>& basis() const { return basis_; }
  const NVector& origin() const { return origin_; }

 private:
  NVector origin_;
  std::vector<NVector> basis_;
};

// Greedy selection of `count` affinely independent points; returns the
// chosen ids and the span they generate.
std::pair<std::vector<Index>, AffineSpan> greedy_span(std::span<const NVector> points, std::size_t count,
                                                      double eps) {
  Index lo = 0, hi = 0;
  for (Index i = 1; i < points.size(); ++i) {
    if (points[i][0] < points[lo][0]) lo = i;
    if (points[i][0] > points[hi][0]) hi = i;
  }
  std::vector<Index> chosen{lo};
  AffineSpan span(points[lo]);
  if (count == 1) return {chosen, span};

  auto farthest = [&]() {
    Index best = 0;
    double best_d = -1.0;
    for (Index i = 0; i < points.size(); ++i) {
      const double d = span.residual(points[i]).norm();
      if (d > best_d) {
        best_d = d;
        best = i;
      }
    }
    return std::pair{best, best_d};
  };

  if ((points[hi] - points[lo]).norm() <= eps) hi = farthest().first;
  if ((points[hi] - points[lo]).norm() <= eps)
    throw DegenerateInput("degenerate input: all points coincide");
  chosen.push_back(hi);
  span.add(points[hi]);

  while (chosen.size() < count) {
    const auto [best, d] = farthest();
    if (d <= eps)
      throw DegenerateInput("degenerate input: points span only a " + std::to_string(chosen.size() - 1) +
                            "-flat");
    chosen.push_back(best);
    span.add(points[best]);
  }
  return {chosen, span};
}

}  // namespace

std::vector<Index> initial_simplex(std::span<const NVector> points, std::size_t dim,
                                   std::optional<double> eps) {
  if (dim < 2) throw ArgumentError("hull dimension must be at least 2");
  if (points.size() < dim + 1) throw DegenerateInput("degenerate input: fewer than N+1 points");
  for (const NVector& p : points)
    if (p.dim() != dim) throw ArgumentError("point dimension mismatch");
  const double tol = eps.value_or(default_hull_eps(points));
  auto [ids, span] = greedy_span(points, dim + 1, tol);
  std::vector<NVector> simplex;
  for (Index i : ids) simplex.push_back(points[i]);
  if (simplex_volume(simplex) <= tol) throw DegenerateInput("degenerate input: zero-volume simplex");
  return ids;
}

NVector orient_outward(const NVector& normal, const NVector& facet_centroid,
                       const NVector& interior_centroid, double eps) {
  const double s = normal.dot(interior_centroid - facet_centroid);
  if (std::abs(s) < eps) throw AmbiguousOrientation("interior centroid lies on the facet plane");
  return s < 0.0 ? normal : -normal;
}

HullBuilder::HullBuilder(std::span<const NVector> points, std::size_t dim, HullOptions opts)
    : dim_(dim), points_(points), opts_(opts) {
  eps_ = opts.eps.value_or(default_hull_eps(points));
  const std::vector<Index> init = initial_simplex(points, dim, eps_);

  interior_ = NVector(dim);
  for (Index i : init) interior_ += points[i];
  interior_ /= static_cast<double>(init.size());

  std::vector<char> taken(points.size(), 0);
  for (Index i : init) taken[i] = 1;
  used_ = init;
  for (Index i = 0; i < points.size(); ++i)
    if (!taken[i]) unprocessed_.push_back(i);

  for (std::size_t skip = 0; skip < init.size(); ++skip) {
    std::vector<Index> verts;
    for (std::size_t k = 0; k < init.size(); ++k)
      if (k != skip) verts.push_back(init[k]);
    const std::size_t id = add_facet(std::move(verts));
    alive_.push_back(id);
    queue_.push_back(id);
  }
  if (opts_.with_simplices) {
    std::vector<Index> s = init;
    simplices_.push_back(std::move(s));
  }
}

std::size_t HullBuilder::add_facet(std::vector<Index> verts) {
  std::sort(verts.begin(), verts.end());
  std::vector<double> rows((dim_ - 1) * dim_);
  const NVector& p0 = points_[verts[0]];
  NVector centroid = p0;
  for (std::size_t r = 1; r < dim_; ++r) {
    const NVector& pr = points_[verts[r]];
    centroid += pr;
    for (std::size_t k = 0; k < dim_; ++k) rows[(r - 1) * dim_ + k] = pr[k] - p0[k];
  }
  centroid /= static_cast<double>(dim_);
  NVector n(dim_);
  wedge_normal_rows(rows, dim_, n.coords());
  const double len = n.norm();
  if (!(len > 0.0) || !std::isfinite(len)) throw NumericalFailure("facet normal underflowed to zero");
  n /= len;
  n = orient_outward(n, centroid, interior_, eps_);

  Facet f;
  f.verts = std::move(verts);
  f.offset = n.dot(centroid);
  f.normal = std::move(n);
  f.centroid = std::move(centroid);
  facets_.push_back(std::move(f));
  return facets_.size() - 1;
}

double HullBuilder::distance(const Facet& f, Index p) const {
  return dot(f.normal.coords(), points_[p].coords()) - f.offset;
}

std::vector<std::size_t> HullBuilder::visible_facets(const NVector& p) const {
  std::vector<std::size_t> out;
  for (std::size_t id : alive_) {
    const Facet& f = facets_[id];
    if (f.normal.dot(f.centroid - p) < -eps_) out.push_back(id);
  }
  return out;
}

bool HullBuilder::step() {
  while (queue_head_ < queue_.size()) {
    const std::size_t fid = queue_[queue_head_++];
    if (!facets_[fid].alive) continue;
    const Facet& f = facets_[fid];
    Index best = 0;
    double best_d = eps_;
    bool found = false;
    for (Index p : unprocessed_) {
      const double d = distance(f, p);
      if (d > best_d) {
        best_d = d;
        best = p;
        found = true;
      }
    }
    if (!found) continue;  // facet is final
    insert(best, fid);
    return true;
  }
  return false;
}

void HullBuilder::run() {
  while (step()) {
  }
}

void HullBuilder::insert(Index p, std::size_t seed_facet) {
  const NVector& pt = points_[p];
  std::vector<std::size_t> visible = visible_facets(pt);
  if (std::find(visible.begin(), visible.end(), seed_facet) == visible.end()) visible.push_back(seed_facet);

  // Horizon: ridges of the visible set that occur exactly once.
  std::map<std::vector<Index>, int> ridge_count;
  std::vector<Index> ridge(dim_ - 1);
  for (std::size_t id : visible) {
    const auto& v = facets_[id].verts;
    for (std::size_t skip = 0; skip < dim_; ++skip) {
      std::size_t k = 0;
      for (std::size_t i = 0; i < dim_; ++i)
        if (i != skip) ridge[k++] = v[i];
      ++ridge_count[ridge];
    }
    if (opts_.with_simplices) {
      std::vector<Index> s = v;
      s.push_back(p);
      simplices_.push_back(std::move(s));
    }
  }
  for (std::size_t id : visible) facets_[id].alive = false;
  std::erase_if(alive_, [&](std::size_t id) { return !facets_[id].alive; });

  for (const auto& [r, count] : ridge_count) {
    if (count != 1) continue;
    std::vector<Index> verts = r;
    verts.push_back(p);
    const std::size_t id = add_facet(std::move(verts));
    alive_.push_back(id);
    queue_.push_back(id);
  }

  used_.push_back(p);
  std::erase(unprocessed_, p);
}

HullResult HullBuilder::result() const {
  HullResult out;
  out.eps = eps_;
  out.interior_centroid = interior_;
  out.mesh = NMesh(dim_);

  std::vector<Index> used = used_;
  std::sort(used.begin(), used.end());
  std::vector<Index> remap(points_.size(), 0);
  for (Index i : used) {
    remap[i] = out.mesh.add_vertex(points_[i]);
    out.input_ids.push_back(i);
  }
  std::vector<Index> idx(dim_);
  for (std::size_t id : alive_) {
    const Facet& f = facets_[id];
    for (std::size_t k = 0; k < dim_; ++k) idx[k] = remap[f.verts[k]];
    out.mesh.add_facet(idx, f.normal);
  }
  out.simplices.reserve(simplices_.size());
  for (const auto& s : simplices_) {
    std::vector<Index> m(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) m[k] = remap[s[k]];
    out.simplices.push_back(std::move(m));
  }
  return out;
}

HullResult build_hull(std::span<const NVector> points, std::size_t dim, HullOptions opts) {
  for (const NVector& p : points)
    if (p.dim() != dim || !p.all_finite()) throw ArgumentError("hull input must be finite N-vectors");
  HullBuilder builder(points, dim, opts);
  builder.run();
  return builder.result();
}

std::vector<std::vector<Index>> tessellate_flat(std::span<const NVector> points, std::size_t flat_dim) {
  if (flat_dim < 2) throw ArgumentError("tessellate_flat needs a flat of dimension >= 2");
  if (points.size() < flat_dim + 1) throw DegenerateInput("degenerate input: too few points for the flat");
  const double eps = default_hull_eps(points);
  auto [ids, span] = greedy_span(points, flat_dim + 1, eps);

  std::vector<NVector> local;
  local.reserve(points.size());
  for (const NVector& p : points) {
    const NVector rel = p - span.origin();
    NVector q(flat_dim);
    for (std::size_t k = 0; k < flat_dim; ++k) q[k] = rel.dot(span.basis()[k]);
    local.push_back(std::move(q));
  }
  HullResult h = build_hull(local, flat_dim, {.with_simplices = true, .eps = eps});
  for (auto& s : h.simplices)
    for (Index& i : s) i = h.input_ids[i];
  return std::move(h.simplices);
}

}  // namespace hullspace
