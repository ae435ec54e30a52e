#pragma once

// Dimension-generic vectors, wedge-product normals and rotors.
//
// Rotors are stored as full even-grade multivectors over the 2^N basis
// blades (indexed by bitmask). Products of rotors in disjoint planes
// (xy then zw in 4D) carry a grade-4 part, so a scalar+bivector layout is
// not closed under composition for N >= 4.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <span>
#include <utility>
#include <vector>

namespace hullspace {

class NVector {
 public:
  NVector() = default;
  explicit NVector(std::size_t dim, double fill = 0.0) : c_(dim, fill) {}
  NVector(std::initializer_list<double> init) : c_(init) {}
  explicit NVector(std::vector<double> coords) : c_(std::move(coords)) {}
  explicit NVector(std::span<const double> coords) : c_(coords.begin(), coords.end()) {}

  static NVector basis(std::size_t dim, std::size_t axis);

  std::size_t dim() const { return c_.size(); }
  double operator[](std::size_t i) const { return c_[i]; }
  double& operator[](std::size_t i) { return c_[i]; }
  std::span<const double> coords() const { return c_; }
  std::span<double> coords() { return c_; }
  const double* data() const { return c_.data(); }

  NVector& operator+=(const NVector& o);
  NVector& operator-=(const NVector& o);
  NVector& operator*=(double s);
  NVector& operator/=(double s);

  double dot(const NVector& o) const;
  double norm() const;
  double squared_norm() const { return dot(*this); }
  NVector normalized() const;
  bool all_finite() const;

  friend bool operator==(const NVector&, const NVector&) = default;

 private:
  std::vector<double> c_;
};

NVector operator+(NVector a, const NVector& b);
NVector operator-(NVector a, const NVector& b);
NVector operator-(NVector a);
NVector operator*(NVector a, double s);
NVector operator*(double s, NVector a);
NVector operator/(NVector a, double s);

double dot(std::span<const double> a, std::span<const double> b);

/// Determinant of a square row-major matrix. Cofactor formulas up to 4x4,
/// partial-pivot elimination above that.
double determinant(std::span<const double> m, std::size_t n);

/// Hodge dual of v_1 ^ ... ^ v_{N-1}: cofactor expansion of the determinant
/// whose first row is the symbolic basis. Sign fixed so wedge(e1, e2) = +e3
/// in 3D (agrees with the cross product). Magnitude equals the
/// (N-1)-volume of the parallelotope spanned by the inputs.
NVector wedge_normal(std::span<const NVector> spanning, std::size_t dim);

/// Same as above over N-1 rows of a row-major (N-1) x N matrix.
void wedge_normal_rows(std::span<const double> rows, std::size_t dim, std::span<double> out);

using Plane = std::pair<int, int>;

/// Even multivector acting by the sandwich v' = R v R~.
class Rotor {
 public:
  /// Identity in `dim` dimensions.
  explicit Rotor(std::size_t dim = 3);

  std::size_t dim() const { return dim_; }
  double scalar() const { return blades_[0]; }
  /// Coefficient on the unit bivector that turns e_i toward e_j (i < j).
  /// rotor_from_plane(i, j, t) has plane_coeff(i, j) = sin(t/2).
  double plane_coeff(int i, int j) const;
  /// Raw coefficient on basis blade `mask`.
  double blade(std::uint32_t mask) const { return blades_[mask]; }
  std::span<const double> blades() const { return blades_; }

  double norm() const;
  Rotor normalized() const;
  Rotor reverse() const;

  friend Rotor operator*(const Rotor& a, const Rotor& b);
  friend bool operator==(const Rotor&, const Rotor&) = default;

 private:
  friend Rotor rotor_from_plane(int, int, double, std::size_t);
  std::size_t dim_;
  std::vector<double> blades_;
};

Rotor rotor_from_plane(int i, int j, double theta, std::size_t dim);

/// Sandwich product restricted to grade 1. Throws NumericalFailure if the
/// discarded grade-3 residue exceeds 1e-9 * |v|.
NVector rotor_apply(const Rotor& r, const NVector& v);

/// Row-major N x N matrix M with M * v == rotor_apply(r, v).
std::vector<double> rotation_matrix(const Rotor& r);

/// Rotation angle per plane. Keys must satisfy 0 <= i < j < N.
struct PoseParams {
  std::map<Plane, double> plane_angles;

  double angle(int i, int j) const;
  void set(int i, int j, double theta) { plane_angles[{i, j}] = theta; }
  friend bool operator==(const PoseParams&, const PoseParams&) = default;
};

/// Composes per-plane rotors in lexicographic plane order. The (0,1)
/// rotation acts on the vector first and every later factor rotates about a
/// fixed world plane (extrinsic composition).
Rotor pose_to_rotor(const PoseParams& p, std::size_t dim);

class CameraState {
 public:
  explicit CameraState(std::size_t dim = 4);
  CameraState(NVector position, PoseParams pose);

  std::size_t dim() const { return position_.dim(); }
  const NVector& position() const { return position_; }
  const PoseParams& pose() const { return pose_; }
  const Rotor& rotor() const { return rotor_; }

  void set_position(NVector p);
  void set_pose(PoseParams p);
  /// World-space direction of camera axis k, i.e. R e_k R~.
  NVector axis(std::size_t k) const;

  friend bool operator==(const CameraState&, const CameraState&) = default;

 private:
  NVector position_;
  PoseParams pose_;
  Rotor rotor_;
};

/// Camera-frame coordinates: component k = (P - C) . (R e_k R~).
NVector view_transform(const CameraState& cam, const NVector& p_world);

/// Row-major matrix whose rows are the camera axes; view_transform(p) equals
/// V * (p - C).
std::vector<double> view_matrix(const CameraState& cam);

}  // namespace hullspace
