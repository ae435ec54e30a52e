#include "hullspace/ndmesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <cstring>
#include <random>
#include <string>
#include <unordered_map>

#include "hullspace/errors.hpp"

namespace hullspace {

Index NMesh::add_vertex(NVector v) {
  if (v.dim() != dim_) throw ArgumentError("vertex dimension mismatch");
  vertices_.push_back(std::move(v));
  centroids_.reset();
  return static_cast<Index>(vertices_.size() - 1);
}

void NMesh::add_facet(std::span<const Index> idx, NVector normal) {
  if (idx.size() != dim_) throw ArgumentError("facet must have N indices");
  if (normal.dim() != dim_) throw ArgumentError("normal dimension mismatch");
  for (Index i : idx)
    if (i >= vertices_.size()) throw ArgumentError("facet index out of range");
  facets_.insert(facets_.end(), idx.begin(), idx.end());
  normals_.push_back(std::move(normal));
  centroids_.reset();
}

void NMesh::set_vertices(std::vector<NVector> v) {
  if (v.size() != vertices_.size()) throw ArgumentError("vertex count mismatch");
  for (const NVector& p : v)
    if (p.dim() != dim_) throw ArgumentError("vertex dimension mismatch");
  vertices_ = std::move(v);
  centroids_.reset();
}

void NMesh::set_normals(std::vector<NVector> n) {
  if (n.size() != normals_.size()) throw ArgumentError("normal count mismatch");
  normals_ = std::move(n);
}

void NMesh::set_vertex(std::size_t i, NVector v) {
  if (i >= vertices_.size() || v.dim() != dim_) throw ArgumentError("bad vertex write");
  vertices_[i] = std::move(v);
  centroids_.reset();
}

NVector NMesh::facet_centroid(std::size_t f) const {
  NVector c(dim_);
  for (Index i : facet(f)) c += vertices_[i];
  return c / static_cast<double>(dim_);
}

const std::vector<NVector>& NMesh::centroids() const {
  if (!centroids_) {
    std::vector<NVector> c;
    c.reserve(facet_count());
    for (std::size_t f = 0; f < facet_count(); ++f) c.push_back(facet_centroid(f));
    centroids_ = std::move(c);
  }
  return *centroids_;
}

bool NMesh::adopt_centroids(std::vector<NVector> c) {
  if (c.size() != facet_count()) return false;
  if (!c.empty()) {
    std::mt19937 rng(static_cast<std::uint32_t>(c.size()));
    std::uniform_int_distribution<std::size_t> pick(0, c.size() - 1);
    for (int k = 0; k < 8; ++k) {
      const std::size_t f = pick(rng);
      if (c[f].dim() != dim_) return false;
      const NVector expect = facet_centroid(f);
      if ((c[f] - expect).norm() > 1e-6 * std::max(1.0, expect.norm())) return false;
    }
  }
  centroids_ = std::move(c);
  return true;
}

void NMesh::validate() const {
  if (facets_.size() != normals_.size() * dim_) throw ArgumentError("facet/normal count mismatch");
  for (const NVector& v : vertices_)
    if (v.dim() != dim_ || !v.all_finite()) throw ArgumentError("bad vertex");
  for (Index i : facets_)
    if (i >= vertices_.size()) throw ArgumentError("facet index out of range");
  for (std::size_t f = 0; f < normals_.size(); ++f) {
    if (normals_[f].dim() != dim_) throw ArgumentError("bad normal dimension");
    if (std::abs(normals_[f].norm() - 1.0) > 1e-6)
      throw ArgumentError("normal " + std::to_string(f) + " is not unit length");
  }
}

bool Aabb::overlaps(const Aabb& o, double tol) const {
  for (std::size_t k = 0; k < min.dim(); ++k)
    if (min[k] > o.max[k] + tol || o.min[k] > max[k] + tol) return false;
  return true;
}

bool Aabb::contains(const NVector& p) const {
  for (std::size_t k = 0; k < min.dim(); ++k)
    if (p[k] < min[k] || p[k] > max[k]) return false;
  return true;
}

Aabb points_aabb(std::span<const NVector> pts) {
  if (pts.empty()) throw ArgumentError("bounding box of no points");
  Aabb box{pts[0], pts[0]};
  for (const NVector& p : pts.subspan(1))
    for (std::size_t k = 0; k < p.dim(); ++k) {
      box.min[k] = std::min(box.min[k], p[k]);
      box.max[k] = std::max(box.max[k], p[k]);
    }
  return box;
}

Aabb facet_aabb(const NMesh& mesh, std::size_t facet_id) {
  if (facet_id >= mesh.facet_count()) throw ArgumentError("facet id out of range");
  const auto idx = mesh.facet(facet_id);
  Aabb box{mesh.vertex(idx[0]), mesh.vertex(idx[0])};
  for (Index i : idx.subspan(1)) {
    const NVector& p = mesh.vertex(i);
    for (std::size_t k = 0; k < p.dim(); ++k) {
      box.min[k] = std::min(box.min[k], p[k]);
      box.max[k] = std::max(box.max[k], p[k]);
    }
  }
  return box;
}

Aabb mesh_aabb(const NMesh& mesh) {
  if (mesh.vertex_count() == 0) return Aabb{NVector(mesh.dim()), NVector(mesh.dim())};
  return points_aabb(mesh.vertices());
}

namespace {

struct CellHash {
  std::size_t operator()(const std::vector<std::int64_t>& key) const {
    std::size_t h = 1469598103934665603ull;
    for (std::int64_t v : key) {
      h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

}  // namespace

VertexIndexMap dedup_vertices(const NMesh& mesh, double merge_eps) {
  if (merge_eps < 0.0) throw ArgumentError("merge_eps must be non-negative");
  const std::size_t n = mesh.dim();
  VertexIndexMap map;
  map.render_to_unique.reserve(mesh.vertex_count());
  std::unordered_map<std::vector<std::int64_t>, std::vector<Index>, CellHash> grid;

  auto cell_of = [&](const NVector& p) {
    std::vector<std::int64_t> key(n);
    for (std::size_t k = 0; k < n; ++k) {
      if (merge_eps == 0.0) {
        double x = p[k] == 0.0 ? 0.0 : p[k];  // fold -0.0
        std::int64_t bits;
        static_assert(sizeof(bits) == sizeof(x));
        std::memcpy(&bits, &x, sizeof(bits));
        key[k] = bits;
      } else {
        key[k] = static_cast<std::int64_t>(std::floor(p[k] / merge_eps));
      }
    }
    return key;
  };

  const std::size_t neighbours = merge_eps == 0.0 ? 1 : static_cast<std::size_t>(std::pow(3, n));
  for (const NVector& p : mesh.vertices()) {
    const std::vector<std::int64_t> home = cell_of(p);
    std::optional<Index> found;
    std::vector<std::int64_t> probe(n);
    for (std::size_t code = 0; code < neighbours; ++code) {
      std::size_t c = code;
      for (std::size_t k = 0; k < n; ++k) {
        const std::int64_t off = merge_eps == 0.0 ? 0 : static_cast<std::int64_t>(c % 3) - 1;
        c /= 3;
        probe[k] = home[k] + off;
      }
      const auto it = grid.find(probe);
      if (it == grid.end()) continue;
      for (Index u : it->second) {
        if ((found && u >= *found)) break;
        if ((map.unique_vertices[u] - p).norm() <= merge_eps) {
          found = u;
          break;
        }
      }
    }
    if (!found) {
      found = static_cast<Index>(map.unique_vertices.size());
      map.unique_vertices.push_back(p);
      grid[home].push_back(*found);
    }
    map.render_to_unique.push_back(*found);
  }
  return map;
}

NMesh scatter_positions(const VertexIndexMap& map, std::span<const NVector> new_unique_positions,
                        const NMesh& mesh) {
  if (new_unique_positions.size() != map.unique_vertices.size())
    throw ArgumentError("scatter_positions: expected one position per unique vertex");
  if (map.render_to_unique.size() != mesh.vertex_count())
    throw ArgumentError("scatter_positions: map does not cover the mesh");
  std::vector<NVector> out;
  out.reserve(mesh.vertex_count());
  for (Index u : map.render_to_unique) out.push_back(new_unique_positions[u]);
  NMesh result = mesh;
  result.set_vertices(std::move(out));
  return result;
}

double facet_measure(const NMesh& mesh, std::size_t f) {
  const std::size_t n = mesh.dim();
  const auto idx = mesh.facet(f);
  std::vector<double> rows((n - 1) * n);
  const NVector& p0 = mesh.vertex(idx[0]);
  for (std::size_t r = 1; r < n; ++r)
    for (std::size_t k = 0; k < n; ++k) rows[(r - 1) * n + k] = mesh.vertex(idx[r])[k] - p0[k];
  std::vector<double> w(n);
  wedge_normal_rows(rows, n, w);
  double fact = 1.0;
  for (std::size_t k = 2; k < n; ++k) fact *= static_cast<double>(k);
  return std::sqrt(dot(w, w)) / fact;
}

double mesh_volume(const NMesh& mesh) {
  const std::size_t n = mesh.dim();
  double total = 0.0;
  for (std::size_t f = 0; f < mesh.facet_count(); ++f) {
    const NVector& p0 = mesh.vertex(mesh.facet(f)[0]);
    total += facet_measure(mesh, f) * mesh.normal(f).dot(p0);
  }
  return total / static_cast<double>(n);
}

bool is_watertight(const NMesh& mesh) {
  const std::size_t n = mesh.dim();
  std::map<std::vector<Index>, int> ridges;
  std::vector<Index> key(n - 1);
  for (std::size_t f = 0; f < mesh.facet_count(); ++f) {
    std::vector<Index> idx(mesh.facet(f).begin(), mesh.facet(f).end());
    std::sort(idx.begin(), idx.end());
    for (std::size_t skip = 0; skip < n; ++skip) {
      std::size_t k = 0;
      for (std::size_t i = 0; i < n; ++i)
        if (i != skip) key[k++] = idx[i];
      ++ridges[key];
    }
  }
  return std::all_of(ridges.begin(), ridges.end(), [](const auto& r) { return r.second == 2; });
}

double simplex_volume(std::span<const NVector> pts) {
  if (pts.empty()) throw ArgumentError("simplex_volume: no points");
  const std::size_t n = pts[0].dim();
  if (pts.size() != n + 1) throw ArgumentError("simplex_volume: expected N+1 points");
  std::vector<double> m(n * n);
  double fact = 1.0;
  for (std::size_t r = 0; r < n; ++r) {
    fact *= static_cast<double>(r + 1);
    for (std::size_t k = 0; k < n; ++k) m[r * n + k] = pts[r + 1][k] - pts[0][k];
  }
  return std::abs(determinant(m, n)) / fact;
}

}  // namespace hullspace
