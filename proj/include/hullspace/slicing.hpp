#pragma once

// Cross-sections of 4D meshes by the hyperplane w = w_slice in camera space.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hullspace/ga.hpp"
#include "hullspace/ndmesh.hpp"

namespace hullspace {

using Vec3 = std::array<double, 3>;
using Tri = std::array<Index, 3>;

struct SlicePlane {
  std::size_t axis = 3;
  double w_slice = 0.0;

  static SlicePlane for_dim(std::size_t dim, double w) { return {dim - 1, w}; }
};

struct CrossSection {
  std::vector<Vec3> vertices;
  std::vector<Tri> triangles;
  std::vector<std::uint32_t> source_facet_ids;  // one per triangle

  bool empty() const { return triangles.empty(); }
  friend bool operator==(const CrossSection&, const CrossSection&) = default;
};

/// Points where the edges of a simplex facet cross the hyperplane
/// x[axis] == w_slice. Vertices with |w - w_slice| < eps_w count as the
/// positive side. The last coordinate of each returned point is exactly
/// w_slice.
std::vector<NVector> slice_facet(std::span<const NVector> facet, double w_slice, double eps_w = 0.0);

/// floor(N/2) * ceil(N/2): the most section vertices a facet can produce.
int max_section_vertices(int n);

/// Orders coplanar 3D points around their centroid without trigonometry and
/// fan-triangulates them so every triangle's normal has a positive dot with
/// `reference_normal`. Returns nothing for degenerate input.
std::vector<Tri> tessellate_section(std::span<const Vec3> points, const Vec3& reference_normal,
                                    double eps_area = 1e-14);

/// Tessellation of a convex section lying in a `flat_dim`-dimensional flat,
/// used for sections of 5D and higher meshes. Returns simplices of
/// flat_dim + 1 indices into `points`.
std::vector<std::vector<Index>> tessellate_section_flat(std::span<const NVector> points, std::size_t flat_dim);

/// Transforms a 4D mesh into the camera frame, slices it at w_slice and
/// tessellates every facet section. Facets are processed in parallel, and
/// output is concatenated in facet order.
CrossSection slice_mesh(const NMesh& mesh, const CameraState& cam, double w_slice);

namespace reference {
CrossSection slice_mesh(const NMesh& mesh, const CameraState& cam, double w_slice);
}

/// Signed volume enclosed by a closed, outward-wound triangle soup.
double section_volume(const CrossSection& s);
double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c);

/// OBJ text: one `v` line per vertex and one 1-based `f` line per triangle.
std::string to_obj(const CrossSection& s);

}  // namespace hullspace
