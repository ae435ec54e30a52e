#include "hullspace/ga.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "hullspace/errors.hpp"

namespace hullspace {

NVector NVector::basis(std::size_t dim, std::size_t axis) {
  if (axis >= dim) throw ArgumentError("basis axis out of range");
  NVector v(dim);
  v[axis] = 1.0;
  return v;
}

NVector& NVector::operator+=(const NVector& o) {
  if (o.dim() != dim()) throw ArgumentError("dimension mismatch");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

NVector& NVector::operator-=(const NVector& o) {
  if (o.dim() != dim()) throw ArgumentError("dimension mismatch");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

NVector& NVector::operator*=(double s) {
  for (double& x : c_) x *= s;
  return *this;
}

NVector& NVector::operator/=(double s) {
  for (double& x : c_) x /= s;
  return *this;
}

double NVector::dot(const NVector& o) const {
  if (o.dim() != dim()) throw ArgumentError("dimension mismatch");
  return hullspace::dot(c_, o.c_);
}

double NVector::norm() const { return std::sqrt(squared_norm()); }

NVector NVector::normalized() const {
  const double n = norm();
  if (n == 0.0) throw NumericalFailure("cannot normalize a zero vector");
  return *this / n;
}

bool NVector::all_finite() const {
  return std::all_of(c_.begin(), c_.end(), [](double x) { return std::isfinite(x); });
}

NVector operator+(NVector a, const NVector& b) { return a += b; }
NVector operator-(NVector a, const NVector& b) { return a -= b; }
NVector operator-(NVector a) { return a *= -1.0; }
NVector operator*(NVector a, double s) { return a *= s; }
NVector operator*(double s, NVector a) { return a *= s; }
NVector operator/(NVector a, double s) { return a /= s; }

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

namespace {

double det_small(std::span<const double> m, std::size_t n) {
  switch (n) {
    case 0:
      return 1.0;
    case 1:
      return m[0];
    case 2:
      return m[0] * m[3] - m[1] * m[2];
    case 3:
      return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
             m[2] * (m[3] * m[7] - m[4] * m[6]);
    default:
      break;
  }
  // 4x4 by expansion along the first row.
  double total = 0.0;
  double minor[9];
  for (std::size_t col = 0; col < 4; ++col) {
    std::size_t k = 0;
    for (std::size_t r = 1; r < 4; ++r)
      for (std::size_t c = 0; c < 4; ++c)
        if (c != col) minor[k++] = m[r * 4 + c];
    const double sub = det_small(minor, 3);
    total += (col % 2 == 0 ? 1.0 : -1.0) * m[col] * sub;
  }
  return total;
}

double det_lu(std::vector<double> a, std::size_t n) {
  double det = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    double best = std::abs(a[col * n + col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double v = std::abs(a[r * n + col]);
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (best == 0.0) return 0.0;
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a[col * n + c], a[pivot * n + c]);
      det = -det;
    }
    const double d = a[col * n + col];
    det *= d;
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] / d;
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
    }
  }
  return det;
}

}  // namespace

double determinant(std::span<const double> m, std::size_t n) {
  if (m.size() != n * n) throw ArgumentError("determinant: matrix is not square");
  if (n <= 4) return det_small(m, n);
  return det_lu(std::vector<double>(m.begin(), m.end()), n);
}

void wedge_normal_rows(std::span<const double> rows, std::size_t dim, std::span<double> out) {
  if (dim < 2 || rows.size() != (dim - 1) * dim || out.size() != dim)
    throw ArgumentError("wedge_normal: expected N-1 rows of length N");
  const std::size_t m = dim - 1;
  if (dim == 3) {
    const double* a = rows.data();
    const double* b = rows.data() + 3;
    out[0] = a[1] * b[2] - a[2] * b[1];
    out[1] = a[2] * b[0] - a[0] * b[2];
    out[2] = a[0] * b[1] - a[1] * b[0];
    return;
  }
  std::vector<double> minor(m * m);
  for (std::size_t k = 0; k < dim; ++k) {
    std::size_t idx = 0;
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = 0; c < dim; ++c)
        if (c != k) minor[idx++] = rows[r * dim + c];
    out[k] = (k % 2 == 0 ? 1.0 : -1.0) * determinant(minor, m);
  }
}

NVector wedge_normal(std::span<const NVector> spanning, std::size_t dim) {
  if (dim < 2 || spanning.size() != dim - 1)
    throw ArgumentError("wedge_normal: expected exactly N-1 vectors");
  std::vector<double> rows;
  rows.reserve((dim - 1) * dim);
  for (const NVector& v : spanning) {
    if (v.dim() != dim) throw ArgumentError("wedge_normal: vector dimension mismatch");
    rows.insert(rows.end(), v.coords().begin(), v.coords().end());
  }
  NVector n(dim);
  wedge_normal_rows(rows, dim, n.coords());
  return n;
}

// ---------------------------------------------------------------------------
// Rotors

namespace {

constexpr std::size_t kMaxRotorDim = 16;

// Sign of e_a * e_b after canonical reordering, Euclidean metric.
double blade_sign(std::uint32_t a, std::uint32_t b) {
  int swaps = 0;
  a >>= 1;
  while (a != 0) {
    swaps += std::popcount(a & b);
    a >>= 1;
  }
  return (swaps & 1) ? -1.0 : 1.0;
}

std::vector<double> gp(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out(a.size(), 0.0);
  for (std::uint32_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    for (std::uint32_t j = 0; j < b.size(); ++j) {
      if (b[j] == 0.0) continue;
      out[i ^ j] += blade_sign(i, j) * a[i] * b[j];
    }
  }
  return out;
}

std::uint32_t plane_mask(int i, int j) { return (1u << i) | (1u << j); }

void check_plane(int i, int j, std::size_t dim) {
  if (i < 0 || i >= j || static_cast<std::size_t>(j) >= dim)
    throw ArgumentError("rotation plane (" + std::to_string(i) + "," + std::to_string(j) +
                        ") invalid for dimension " + std::to_string(dim));
}

}  // namespace

Rotor::Rotor(std::size_t dim) : dim_(dim) {
  if (dim < 2 || dim > kMaxRotorDim) throw ArgumentError("rotor dimension out of range");
  blades_.assign(std::size_t{1} << dim, 0.0);
  blades_[0] = 1.0;
}

double Rotor::plane_coeff(int i, int j) const {
  check_plane(i, j, dim_);
  return -blades_[plane_mask(i, j)];
}

double Rotor::norm() const {
  double s = 0.0;
  for (double c : blades_) s += c * c;
  return std::sqrt(s);
}

Rotor Rotor::normalized() const {
  Rotor r = *this;
  const double n = norm();
  if (n == 0.0) throw NumericalFailure("zero rotor");
  for (double& c : r.blades_) c /= n;
  return r;
}

Rotor Rotor::reverse() const {
  Rotor r = *this;
  for (std::uint32_t m = 0; m < r.blades_.size(); ++m) {
    const int k = std::popcount(m);
    // reverse flips sign for grades 2, 3 (mod 4)
    if ((k * (k - 1) / 2) % 2 == 1) r.blades_[m] = -r.blades_[m];
  }
  return r;
}

Rotor operator*(const Rotor& a, const Rotor& b) {
  if (a.dim_ != b.dim_) throw ArgumentError("rotor dimension mismatch");
  Rotor r(a.dim_);
  r.blades_ = gp(a.blades_, b.blades_);
  return r;
}

Rotor rotor_from_plane(int i, int j, double theta, std::size_t dim) {
  check_plane(i, j, dim);
  Rotor r(dim);
  r.blades_[0] = std::cos(theta / 2.0);
  r.blades_[plane_mask(i, j)] = -std::sin(theta / 2.0);
  return r;
}

NVector rotor_apply(const Rotor& r, const NVector& v) {
  const std::size_t n = r.dim();
  if (v.dim() != n) throw ArgumentError("rotor_apply: dimension mismatch");
  std::vector<double> mv(std::size_t{1} << n, 0.0);
  for (std::size_t k = 0; k < n; ++k) mv[std::size_t{1} << k] = v[k];
  const std::vector<double> rv = gp(r.blades(), mv);
  const std::vector<double> out = gp(rv, r.reverse().blades());

  NVector result(n);
  double residue = 0.0;
  for (std::uint32_t m = 0; m < out.size(); ++m) {
    if (std::popcount(m) == 1)
      result[std::countr_zero(m)] = out[m];
    else
      residue = std::max(residue, std::abs(out[m]));
  }
  if (residue > 1e-9 * std::max(1.0, v.norm()))
    throw NumericalFailure("rotor_apply: non-vector residue " + std::to_string(residue));
  return result;
}

std::vector<double> rotation_matrix(const Rotor& r) {
  const std::size_t n = r.dim();
  std::vector<double> m(n * n);
  for (std::size_t k = 0; k < n; ++k) {
    const NVector col = rotor_apply(r, NVector::basis(n, k));
    for (std::size_t i = 0; i < n; ++i) m[i * n + k] = col[i];
  }
  return m;
}

double PoseParams::angle(int i, int j) const {
  const auto it = plane_angles.find({i, j});
  return it == plane_angles.end() ? 0.0 : it->second;
}

Rotor pose_to_rotor(const PoseParams& p, std::size_t dim) {
  for (const auto& [plane, theta] : p.plane_angles) check_plane(plane.first, plane.second, dim);
  Rotor r(dim);
  // std::map iterates in lexicographic (i, j) order; later planes multiply on
  // the left so the first plane acts first.
  for (const auto& [plane, theta] : p.plane_angles) {
    if (theta == 0.0) continue;
    r = rotor_from_plane(plane.first, plane.second, theta, dim) * r;
  }
  return r;
}

CameraState::CameraState(std::size_t dim) : position_(dim), rotor_(dim) {}

CameraState::CameraState(NVector position, PoseParams pose)
    : position_(std::move(position)), pose_(std::move(pose)), rotor_(position_.dim()) {
  rotor_ = pose_to_rotor(pose_, position_.dim());
}

void CameraState::set_position(NVector p) {
  if (p.dim() != dim()) throw ArgumentError("camera position dimension mismatch");
  position_ = std::move(p);
}

void CameraState::set_pose(PoseParams p) {
  Rotor r = pose_to_rotor(p, dim());
  pose_ = std::move(p);
  rotor_ = std::move(r);
}

NVector CameraState::axis(std::size_t k) const { return rotor_apply(rotor_, NVector::basis(dim(), k)); }

NVector view_transform(const CameraState& cam, const NVector& p_world) {
  if (p_world.dim() != cam.dim()) throw ArgumentError("view_transform: dimension mismatch");
  const NVector rel = p_world - cam.position();
  NVector out(cam.dim());
  for (std::size_t k = 0; k < cam.dim(); ++k) out[k] = rel.dot(cam.axis(k));
  return out;
}

std::vector<double> view_matrix(const CameraState& cam) {
  const std::size_t n = cam.dim();
  const std::vector<double> m = rotation_matrix(cam.rotor());
  std::vector<double> v(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) v[k * n + i] = m[i * n + k];
  return v;
}

}  // namespace hullspace
