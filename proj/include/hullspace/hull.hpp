#pragma once

// Direct Quickhull: every iteration scans one global pool of unprocessed
// points (no per-facet outside sets). Only points that become hull vertices
// leave the pool. Optionally records the interior simplices swept by each
// insertion, which tile the hull.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hullspace/ndmesh.hpp"

namespace hullspace {

struct HullOptions {
  bool with_simplices = false;
  /// Absolute tolerance. Defaults to 1e-9 * bounding-box diagonal.
  std::optional<double> eps;
};

struct HullResult {
  /// Hull vertices only, in ascending input order; outward unit normals.
  NMesh mesh;
  /// For each mesh vertex, its index in the input point list.
  std::vector<Index> input_ids;
  /// (N+1)-tuples of mesh vertex indices tiling the hull interior.
  std::vector<std::vector<Index>> simplices;
  NVector interior_centroid;
  double eps = 0.0;
};

double default_hull_eps(std::span<const NVector> points);

/// Greedy: extremes along axis 0, then repeatedly the point farthest from
/// the affine span so far. Ties go to the lowest index.
std::vector<Index> initial_simplex(std::span<const NVector> points, std::size_t dim,
                                   std::optional<double> eps = std::nullopt);

/// Flips `normal` so that it points away from `interior_centroid`.
NVector orient_outward(const NVector& normal, const NVector& facet_centroid,
                       const NVector& interior_centroid, double eps);

/// Incremental hull state. Facet ids are stable for the builder's lifetime;
/// replaced facets are marked dead rather than erased.
class HullBuilder {
 public:
  struct Facet {
    std::vector<Index> verts;  // input ids, ascending
    NVector normal;            // outward unit
    NVector centroid;
    double offset = 0.0;       // normal . centroid
    bool alive = true;
  };

  HullBuilder(std::span<const NVector> points, std::size_t dim, HullOptions opts = {});

  /// Runs insertions until no unprocessed point lies above any facet.
  void run();
  /// One insertion; false once the hull is complete.
  bool step();

  /// Facets f with n_f . (centroid_f - p) < -eps.
  std::vector<std::size_t> visible_facets(const NVector& p) const;

  const std::vector<Facet>& facets() const { return facets_; }
  std::vector<std::size_t> alive_facets() const { return alive_; }
  std::span<const Index> unprocessed() const { return unprocessed_; }
  const NVector& interior_centroid() const { return interior_; }
  double eps() const { return eps_; }

  HullResult result() const;

 private:
  std::size_t add_facet(std::vector<Index> verts);
  double distance(const Facet& f, Index p) const;
  void insert(Index p, std::size_t seed_facet);

  std::size_t dim_;
  std::span<const NVector> points_;
  HullOptions opts_;
  double eps_ = 0.0;
  NVector interior_;
  std::vector<Facet> facets_;
  std::vector<std::size_t> alive_;
  std::vector<std::size_t> queue_;
  std::size_t queue_head_ = 0;
  std::vector<Index> unprocessed_;
  std::vector<Index> used_;
  std::vector<std::vector<Index>> simplices_;
};

HullResult build_hull(std::span<const NVector> points, std::size_t dim, HullOptions opts = {});

/// Tessellates a convex point cloud lying in a (d)-flat embedded in a
/// higher-dimensional space by projecting onto an orthonormal basis of the
/// flat and keeping the hull's interior simplices. Returns index tuples of
/// length d+1 into `points`. Throws DegenerateInput if the cloud does not
/// span a d-flat.
std::vector<std::vector<Index>> tessellate_flat(std::span<const NVector> points, std::size_t flat_dim);

}  // namespace hullspace
