#pragma once

// Boolean operations on closed simplicial meshes, N in {3, 4}.
//
// Pipeline: uniform-grid broad phase over facet AABBs, facet-facet narrow
// phase on the shared (N-2)-flat, sequential clip-and-retessellate of every
// registered facet by its partners' hyperplanes, then parity ray casting
// along +x for every resulting piece.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hullspace/ndmesh.hpp"

namespace hullspace {

enum class BooleanKind { Union, Intersection, Difference };

struct BooleanTolerances {
  double merge_eps = 1e-7;   // stage 1: unify intersection vertices
  double snap_eps = 1e-6;    // stage 2: snap onto facet vertices
  double group_eps = 1e-6;   // ray hits closer than this form one event
  double eps_dot = 1e-9;     // |ray . n| below this is degenerate
  double perturb = 1e-5;     // ray origin perturbation magnitude
  double ray_margin = 1e-3;  // ray end beyond the other mesh's AABB
  int max_perturb = 8;

  /// Scales every length tolerance by the diagonal of the combined AABB.
  static BooleanTolerances for_scale(double bbox_diagonal);
  static BooleanTolerances for_meshes(const NMesh& a, const NMesh& b);
};

/// Per-facet geometry cached for the pipeline.
struct FacetGeom {
  std::vector<NVector> pts;
  NVector normal;
  double offset = 0.0;  // normal . pts[0]
  Aabb box;

  static FacetGeom from_points(std::vector<NVector> pts, NVector normal);
  static FacetGeom from_mesh(const NMesh& m, std::size_t f);
};

std::vector<FacetGeom> facet_geometry(const NMesh& m);

class SpatialGrid {
 public:
  using Key = std::vector<std::int64_t>;
  struct KeyHash {
    std::size_t operator()(const Key& k) const;
  };

  /// Grid over the given axes (all axes when `axes` is empty).
  SpatialGrid(double cell_size, std::size_t dim, std::vector<std::size_t> axes = {});

  /// Registers an id with every cell its AABB (grown by `pad`) touches.
  void insert(std::uint32_t id, const Aabb& box, double pad = 0.0);
  /// Ids in any cell touched by `box`, ascending and unique.
  std::vector<std::uint32_t> query(const Aabb& box, double pad = 0.0) const;
  /// Ids registered in the cell containing `p`.
  std::span<const std::uint32_t> at(const NVector& p) const;

  double cell_size() const { return cell_; }
  const std::unordered_map<Key, std::vector<std::uint32_t>, KeyHash>& cells() const { return cells_; }

 private:
  Key key_of(const NVector& p) const;
  template <class F>
  void for_each_cell(const Aabb& box, double pad, F&& f) const;

  double cell_;
  std::size_t dim_;
  std::vector<std::size_t> axes_;
  std::unordered_map<Key, std::vector<std::uint32_t>, KeyHash> cells_;
};

/// Mean longest AABB extent over the facets of both meshes.
double grid_cell_size(std::span<const FacetGeom> a, std::span<const FacetGeom> b);

using FacetPair = std::pair<std::uint32_t, std::uint32_t>;

/// Candidate (A facet, B facet) pairs sharing at least one grid cell,
/// sorted ascending.
std::vector<FacetPair> broad_phase(const NMesh& a, const NMesh& b);
std::vector<FacetPair> broad_phase(std::span<const FacetGeom> a, std::span<const FacetGeom> b, double pad);

struct FacetIntersection {
  enum class Kind { None, Overlap, Coplanar };
  Kind kind = Kind::None;
  /// Vertices (unordered) of the overlap region when kind == Overlap.
  std::vector<NVector> region;
};

/// Intersects plane(A) with facet B and plane(B) with facet A, then tests
/// the two (N-2)-polytopes for overlap inside their common flat (interval
/// overlap for N = 3, separating axes for N = 4). `tol` is a distance.
FacetIntersection facet_facet_intersect(const FacetGeom& fa, const FacetGeom& fb, double tol);

struct Partner {
  std::uint32_t id;
  bool coplanar;
  friend auto operator<=>(const Partner&, const Partner&) = default;
};

/// Symmetric record of intersecting facet pairs.
struct IntersectionRegister {
  std::map<std::uint32_t, std::vector<Partner>> a_to_b;
  std::map<std::uint32_t, std::vector<Partner>> b_to_a;

  void add(std::uint32_t a, std::uint32_t b, bool coplanar);
  std::size_t pair_count() const;
};

/// Narrow phase over candidate pairs. OpenMP-parallel over pairs; results
/// are reduced in candidate order.
IntersectionRegister narrow_phase(std::span<const FacetGeom> a, std::span<const FacetGeom> b,
                                  std::span<const FacetPair> candidates, double tol);

struct Hyperplane {
  NVector normal;
  double offset = 0.0;  // points x with normal . x == offset
};

struct ClipResult {
  std::vector<std::vector<NVector>> pieces;
  bool split = false;
  int dropped = 0;  // zero-measure pieces discarded
};

/// Splits a simplex facet by a hyperplane into P-side and N-side pieces,
/// each re-tessellated into simplices. Intersection vertices closer than
/// merge_eps are unified, then snapped onto facet vertices within snap_eps.
ClipResult clip_and_tessellate(std::span<const NVector> facet, const Hyperplane& plane, double merge_eps,
                               double snap_eps);

enum class Side { Inside, Outside };
enum class Contact { None, SameOrientation, OppositeOrientation };
enum class EventKind { Piercing, Tangent, Degenerate };

struct IntersectionEvent {
  NVector position;
  std::vector<std::uint32_t> member_facets;
  EventKind kind = EventKind::Piercing;
};

/// Piercing iff every member's ray.normal has the same sign; Degenerate if
/// any magnitude is below eps_dot.
EventKind classify_event(std::span<const double> ray_dot_normals, double eps_dot);

/// Inside-outside queries against one closed mesh.
class Classifier {
 public:
  Classifier(const NMesh& other, const BooleanTolerances& tol);
  Classifier(std::vector<FacetGeom> facets, const BooleanTolerances& tol, std::size_t dim);

  /// Parity of grouped +x ray crossings. `seed` drives the deterministic
  /// origin perturbation used when a ray hits a degenerate configuration.
  Side classify(const NVector& p, std::uint64_t seed = 0) const;

  /// Grouped events along the +x ray from `p` (no perturbation). Returns
  /// nullopt if some candidate facet is parallel to and touching the ray.
  std::optional<std::vector<IntersectionEvent>> cast(const NVector& p) const;

  /// Whether `p` lies on the surface within group_eps, and how a facet with
  /// normal `n` there is oriented relative to the surface.
  Contact contact(const NVector& p, const NVector& n) const;

  /// Number of classifications that needed at least one perturbation.
  std::size_t perturbed_count() const { return perturbed_; }

 private:
  void build();
  bool inside_facet(std::size_t g, const NVector& h, double bary_tol) const;

  std::size_t dim_;
  BooleanTolerances tol_;
  std::vector<FacetGeom> facets_;
  std::vector<std::vector<double>> gram_inv_;
  std::optional<SpatialGrid> ray_grid_;
  std::optional<SpatialGrid> surface_grid_;
  double ray_end_x_ = 0.0;
  mutable std::size_t perturbed_ = 0;
};

/// Ray-cast classification of one point against `other`.
Side classify_facet(const NVector& facet_centroid, const NMesh& other);

struct Piece {
  std::vector<NVector> pts;
  NVector normal;
  std::uint32_t source = 0;
};

struct BooleanStats {
  std::size_t candidate_pairs = 0;
  std::size_t registered_pairs = 0;
  std::size_t pieces_a = 0;
  std::size_t pieces_b = 0;
  int dropped_slivers = 0;
};

/// Sequentially clips every facet of `mesh` by its registered partners.
std::vector<Piece> split_facets(std::span<const FacetGeom> mine, std::span<const FacetGeom> theirs,
                                const std::map<std::uint32_t, std::vector<Partner>>& partners,
                                const BooleanTolerances& tol, int& dropped);

struct PieceClass {
  Side side = Side::Outside;
  Contact contact = Contact::None;
};

/// OpenMP-parallel piece classification; output order matches input.
std::vector<PieceClass> classify_pieces(const Classifier& cls, std::span<const Piece> pieces);

namespace reference {
/// Serial implementations kept as test oracles for the parallel kernels.
IntersectionRegister narrow_phase(std::span<const FacetGeom> a, std::span<const FacetGeom> b,
                                  std::span<const FacetPair> candidates, double tol);
std::vector<PieceClass> classify_pieces(const Classifier& cls, std::span<const Piece> pieces);
}  // namespace reference

NMesh boolean_op(const NMesh& a, const NMesh& b, BooleanKind kind, BooleanStats* stats = nullptr);

/// Builds a mesh from a facet soup, merging vertices within merge_eps and
/// dropping facets that collapse.
NMesh mesh_from_pieces(std::size_t dim, std::span<const Piece> pieces, double merge_eps);

}  // namespace hullspace
