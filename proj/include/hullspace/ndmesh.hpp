#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hullspace/ga.hpp"

namespace hullspace {

using Index = std::uint32_t;

/// Default vertex merge distance in model units.
inline constexpr double kDefaultMergeEps = 1e-6;

/// Topology (facet index lists) kept apart from geometry (vertex coordinates).
/// Each facet is an (N-1)-simplex given by N vertex indices; its orientation
/// comes from the stored normal, not from index order.
class NMesh {
 public:
  explicit NMesh(std::size_t dim = 4) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t facet_count() const { return normals_.size(); }
  bool empty() const { return facet_count() == 0; }

  const std::vector<NVector>& vertices() const { return vertices_; }
  const NVector& vertex(std::size_t i) const { return vertices_[i]; }
  /// Flat facet index array, facet f at [f*N, f*N + N).
  const std::vector<Index>& facet_indices() const { return facets_; }
  std::span<const Index> facet(std::size_t f) const {
    return std::span<const Index>(facets_).subspan(f * dim_, dim_);
  }
  const std::vector<NVector>& normals() const { return normals_; }
  const NVector& normal(std::size_t f) const { return normals_[f]; }

  Index add_vertex(NVector v);
  /// Appends a facet with an explicit unit normal.
  void add_facet(std::span<const Index> idx, NVector normal);

  /// Replaces all vertex positions; topology and normals are untouched.
  void set_vertices(std::vector<NVector> v);
  void set_normals(std::vector<NVector> n);
  void set_vertex(std::size_t i, NVector v);

  /// Cached on first use; any geometry write invalidates it.
  const std::vector<NVector>& centroids() const;
  NVector facet_centroid(std::size_t f) const;
  bool has_cached_centroids() const { return centroids_.has_value(); }
  /// Installs externally supplied centroids (e.g. a CENT chunk). They are
  /// kept only if 8 sampled facets agree with recomputed means within 1e-6.
  bool adopt_centroids(std::vector<NVector> c);

  /// Throws ArgumentError describing the first broken invariant.
  void validate() const;

  // geometry only; the centroid cache is ignored
  friend bool operator==(const NMesh& a, const NMesh& b) {
    return a.dim_ == b.dim_ && a.vertices_ == b.vertices_ && a.facets_ == b.facets_ && a.normals_ == b.normals_;
  }

 private:
  std::size_t dim_;
  std::vector<NVector> vertices_;
  std::vector<Index> facets_;
  std::vector<NVector> normals_;
  mutable std::optional<std::vector<NVector>> centroids_;
};

struct Aabb {
  NVector min;
  NVector max;

  bool overlaps(const Aabb& o, double tol = 0.0) const;
  bool contains(const NVector& p) const;
  NVector extent() const { return max - min; }
  double diagonal() const { return extent().norm(); }
};

Aabb facet_aabb(const NMesh& mesh, std::size_t facet_id);
Aabb mesh_aabb(const NMesh& mesh);
Aabb points_aabb(std::span<const NVector> pts);

struct VertexIndexMap {
  std::vector<NVector> unique_vertices;
  std::vector<Index> render_to_unique;
};

/// Representatives are first-seen; a vertex joins the first representative
/// within merge_eps. Backed by a uniform hash grid of cell size merge_eps.
VertexIndexMap dedup_vertices(const NMesh& mesh, double merge_eps = kDefaultMergeEps);

/// New render geometry from updated unique positions. Topology is copied.
NMesh scatter_positions(const VertexIndexMap& map, std::span<const NVector> new_unique_positions,
                        const NMesh& mesh);

/// (N-1)-measure of facet f.
double facet_measure(const NMesh& mesh, std::size_t f);

/// Signed N-volume of the enclosed region by facet-cone decomposition,
/// sum(measure_f * n_f . p_f) / N. Exact for any closed oriented surface.
double mesh_volume(const NMesh& mesh);

/// Every ridge ((N-2)-face, by vertex index) belongs to exactly two facets.
bool is_watertight(const NMesh& mesh);

/// Volume of the simplex on N+1 points (absolute value).
double simplex_volume(std::span<const NVector> pts);

}  // namespace hullspace
