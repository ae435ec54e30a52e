// Narrow-phase and classification kernels, OpenMP and serial.

#include <exception>

#include "hullspace/boolean.hpp"
#include "hullspace/parallel.hpp"

namespace hullspace {

namespace {

FacetIntersection::Kind test_pair(std::span<const FacetGeom> a, std::span<const FacetGeom> b, const FacetPair& p,
                                  double tol) {
  return facet_facet_intersect(a[p.first], b[p.second], tol).kind;
}

IntersectionRegister reduce(std::span<const FacetPair> candidates, const std::vector<FacetIntersection::Kind>& kinds) {
  IntersectionRegister reg;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (kinds[i] != FacetIntersection::Kind::None)
      reg.add(candidates[i].first, candidates[i].second, kinds[i] == FacetIntersection::Kind::Coplanar);
  return reg;
}

PieceClass classify_one(const Classifier& cls, const Piece& piece, std::size_t index) {
  NVector c(piece.normal.dim());
  for (const NVector& p : piece.pts) c += p;
  c /= static_cast<double>(piece.pts.size());
  PieceClass out;
  out.contact = cls.contact(c, piece.normal);
  if (out.contact == Contact::None) out.side = cls.classify(c, 0x9e3779b97f4a7c15ull ^ index);
  return out;
}

}  // namespace

IntersectionRegister narrow_phase(std::span<const FacetGeom> a, std::span<const FacetGeom> b,
                                  std::span<const FacetPair> candidates, double tol) {
  std::vector<FacetIntersection::Kind> kinds(candidates.size());
  std::exception_ptr err;
  const auto n = static_cast<std::ptrdiff_t>(candidates.size());
#pragma omp parallel for schedule(dynamic, 64) num_threads(kernel_threads())
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      kinds[i] = test_pair(a, b, candidates[i], tol);
    } catch (...) {
#pragma omp critical(hullspace_narrow_err)
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return reduce(candidates, kinds);
}

std::vector<PieceClass> classify_pieces(const Classifier& cls, std::span<const Piece> pieces) {
  std::vector<PieceClass> out(pieces.size());
  std::exception_ptr err;
  const auto n = static_cast<std::ptrdiff_t>(pieces.size());
#pragma omp parallel for schedule(dynamic, 32) num_threads(kernel_threads())
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[i] = classify_one(cls, pieces[i], static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(hullspace_classify_err)
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return out;
}

namespace reference {

IntersectionRegister narrow_phase(std::span<const FacetGeom> a, std::span<const FacetGeom> b,
                                  std::span<const FacetPair> candidates, double tol) {
  std::vector<FacetIntersection::Kind> kinds(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) kinds[i] = test_pair(a, b, candidates[i], tol);
  return reduce(candidates, kinds);
}

std::vector<PieceClass> classify_pieces(const Classifier& cls, std::span<const Piece> pieces) {
  std::vector<PieceClass> out(pieces.size());
  for (std::size_t i = 0; i < pieces.size(); ++i) out[i] = classify_one(cls, pieces[i], i);
  return out;
}

}  // namespace reference

}  // namespace hullspace
