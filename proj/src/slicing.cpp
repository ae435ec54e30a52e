#include "hullspace/slicing.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>

#include "hullspace/errors.hpp"
#include "hullspace/hull.hpp"
#include "hullspace/parallel.hpp"

namespace hullspace {

namespace {

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
double dot3(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
Vec3 cross3(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

}  // namespace

std::vector<NVector> slice_facet(std::span<const NVector> facet, double w_slice, double eps_w) {
  if (facet.empty()) return {};
  const std::size_t n = facet[0].dim();
  if (n < 2) throw ArgumentError("slice_facet: dimension must be at least 2");
  const std::size_t w = n - 1;
  std::vector<NVector> out;
  for (std::size_t i = 0; i < facet.size(); ++i) {
    if (facet[i].dim() != n) throw ArgumentError("slice_facet: dimension mismatch");
    if (facet[i][w] - w_slice < -eps_w) continue;  // i on the positive side
    for (std::size_t j = 0; j < facet.size(); ++j) {
      if (facet[j][w] - w_slice >= -eps_w) continue;  // j on the negative side
      const NVector& p0 = facet[i];
      const NVector& p1 = facet[j];
      const double dw = p1[w] - p0[w];
      if (dw == 0.0) continue;
      const double t = (w_slice - p0[w]) / dw;
      NVector p = p0 + (p1 - p0) * t;
      p[w] = w_slice;
      out.push_back(std::move(p));
    }
  }
  return out;
}

int max_section_vertices(int n) {
  if (n < 3) throw ArgumentError("max_section_vertices: N must be at least 3");
  return (n / 2) * ((n + 1) / 2);
}

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 x = cross3(sub(b, a), sub(c, a));
  return 0.5 * std::sqrt(dot3(x, x));
}

std::vector<Tri> tessellate_section(std::span<const Vec3> points, const Vec3& reference_normal, double eps_area) {
  const std::size_t k = points.size();
  if (k < 3) return {};
  Vec3 c{0, 0, 0};
  for (const Vec3& p : points)
    for (int a = 0; a < 3; ++a) c[a] += p[a] / static_cast<double>(k);

  // In-plane frame: u toward the farthest point, v = m x u with m the
  // polygon normal oriented along the reference.
  std::size_t far = 0;
  double far_d = -1.0;
  for (std::size_t i = 0; i < k; ++i) {
    const Vec3 d = sub(points[i], c);
    if (dot3(d, d) > far_d) {
      far_d = dot3(d, d);
      far = i;
    }
  }
  const Vec3 u = sub(points[far], c);
  Vec3 m{0, 0, 0};
  for (std::size_t i = 0; i < k; ++i) {
    const Vec3 x = cross3(u, sub(points[i], c));
    if (dot3(x, x) > dot3(m, m)) m = x;
  }
  if (dot3(m, m) <= 0.0) return {};
  if (dot3(m, reference_normal) < 0.0) m = {-m[0], -m[1], -m[2]};
  const Vec3 v = cross3(m, u);

  std::vector<std::size_t> order(k);
  for (std::size_t i = 0; i < k; ++i) order[i] = i;
  auto upper = [&](std::size_t i) {
    const Vec3 d = sub(points[i], c);
    const double y = dot3(d, v);
    return y > 0.0 || (y == 0.0 && dot3(d, u) > 0.0);
  };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const bool ua = upper(a), ub = upper(b);
    if (ua != ub) return ua;
    return dot3(cross3(sub(points[a], c), sub(points[b], c)), m) > 0.0;
  });

  std::vector<Tri> out;
  for (std::size_t i = 1; i + 1 < k; ++i) {
    Tri t{static_cast<Index>(order[0]), static_cast<Index>(order[i]), static_cast<Index>(order[i + 1])};
    const Vec3& a = points[t[0]];
    const Vec3& b = points[t[1]];
    const Vec3& d = points[t[2]];
    if (triangle_area(a, b, d) <= eps_area) continue;
    if (dot3(cross3(sub(b, a), sub(d, a)), reference_normal) < 0.0) std::swap(t[1], t[2]);
    out.push_back(t);
  }
  return out;
}

std::vector<std::vector<Index>> tessellate_section_flat(std::span<const NVector> points, std::size_t flat_dim) {
  return tessellate_flat(points, flat_dim);
}

namespace {

struct FacetSection {
  std::vector<Vec3> pts;
  std::vector<Tri> tris;
};

struct Prepared {
  std::vector<NVector> verts;  // camera frame
  std::vector<Vec3> normals;   // xyz of camera-frame normals
  double eps_w = 0.0;
};

Prepared prepare(const NMesh& mesh, const CameraState& cam, bool parallel) {
  if (mesh.dim() != 4) throw ArgumentError("slice_mesh requires a 4D mesh");
  if (cam.dim() != 4) throw ArgumentError("slice_mesh: camera dimension mismatch");
  Prepared p;
  const auto nv = static_cast<std::ptrdiff_t>(mesh.vertex_count());
  const auto nf = static_cast<std::ptrdiff_t>(mesh.facet_count());
  p.verts.resize(mesh.vertex_count());
  p.normals.resize(mesh.facet_count());
  const std::vector<double> vm = view_matrix(cam);
#pragma omp parallel for if (parallel) num_threads(kernel_threads())
  for (std::ptrdiff_t i = 0; i < nv; ++i) p.verts[i] = view_transform(cam, mesh.vertex(i));
#pragma omp parallel for if (parallel) num_threads(kernel_threads())
  for (std::ptrdiff_t f = 0; f < nf; ++f) {
    const NVector& n = mesh.normal(f);
    for (std::size_t r = 0; r < 3; ++r) {
      double s = 0.0;
      for (std::size_t c = 0; c < 4; ++c) s += vm[r * 4 + c] * n[c];
      p.normals[f][r] = s;
    }
  }
  if (!p.verts.empty()) p.eps_w = 1e-9 * points_aabb(p.verts).diagonal();
  return p;
}

FacetSection section_of(const NMesh& mesh, const Prepared& prep, std::size_t f, double w_slice) {
  FacetSection out;
  std::array<NVector, 4> simplex;
  const auto idx = mesh.facet(f);
  for (std::size_t k = 0; k < 4; ++k) simplex[k] = prep.verts[idx[k]];
  const std::vector<NVector> hits = slice_facet(simplex, w_slice, prep.eps_w);
  if (hits.size() < 3) return out;
  for (const NVector& h : hits) out.pts.push_back({h[0], h[1], h[2]});
  out.tris = tessellate_section(out.pts, prep.normals[f]);
  return out;
}

CrossSection concatenate(std::vector<FacetSection>& parts) {
  CrossSection cs;
  for (std::uint32_t f = 0; f < parts.size(); ++f) {
    FacetSection& s = parts[f];
    if (s.tris.empty()) continue;
    const auto base = static_cast<Index>(cs.vertices.size());
    cs.vertices.insert(cs.vertices.end(), s.pts.begin(), s.pts.end());
    for (const Tri& t : s.tris) {
      cs.triangles.push_back({t[0] + base, t[1] + base, t[2] + base});
      cs.source_facet_ids.push_back(f);
    }
  }
  return cs;
}

}  // namespace

CrossSection slice_mesh(const NMesh& mesh, const CameraState& cam, double w_slice) {
  const Prepared prep = prepare(mesh, cam, true);
  std::vector<FacetSection> parts(mesh.facet_count());
  const auto nf = static_cast<std::ptrdiff_t>(mesh.facet_count());
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic, 64) num_threads(kernel_threads())
  for (std::ptrdiff_t f = 0; f < nf; ++f) {
    try {
      parts[f] = section_of(mesh, prep, static_cast<std::size_t>(f), w_slice);
    } catch (...) {
#pragma omp critical(hullspace_slice_err)
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return concatenate(parts);
}

namespace reference {

CrossSection slice_mesh(const NMesh& mesh, const CameraState& cam, double w_slice) {
  const Prepared prep = prepare(mesh, cam, false);
  std::vector<FacetSection> parts(mesh.facet_count());
  for (std::size_t f = 0; f < mesh.facet_count(); ++f) parts[f] = section_of(mesh, prep, f, w_slice);
  return concatenate(parts);
}

}  // namespace reference

double section_volume(const CrossSection& s) {
  double v = 0.0;
  for (const Tri& t : s.triangles)
    v += dot3(s.vertices[t[0]], cross3(s.vertices[t[1]], s.vertices[t[2]]));
  return v / 6.0;
}

std::string to_obj(const CrossSection& s) {
  std::string out;
  char buf[128];
  for (const Vec3& v : s.vertices) {
    std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", v[0], v[1], v[2]);
    out += buf;
  }
  for (const Tri& t : s.triangles) {
    std::snprintf(buf, sizeof buf, "f %u %u %u\n", t[0] + 1, t[1] + 1, t[2] + 1);
    out += buf;
  }
  return out;
}

}  // namespace hullspace
