#pragma once

// Benchmark scenario matrices for hulls, Booleans and per-frame slicing.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hullspace/boolean.hpp"
#include "hullspace/ndmesh.hpp"
#include "hullspace/primitives.hpp"

namespace hullspace {

struct BenchRow {
  std::size_t dim = 0;
  std::string scenario;
  int trials = 1;
  double mean_ms = 0.0;
  double size = 0.0;  // mean output facet count
  double median_ms = 0.0;
};

/// CSV with header `dim,scenario,trials,mean_ms,size`.
std::string to_csv(const std::vector<BenchRow>& rows);

using BenchProgress = std::function<void(const BenchRow&)>;

inline constexpr std::size_t kHullBenchSizes[] = {10, 20, 50, 100, 200, 500, 1000};

/// Hull of n random points, seeds 1..trials. Distribution defaults to
/// benchmark_distribution(dim).
BenchRow bench_hull_case(std::size_t dim, std::size_t n, int trials,
                         std::optional<PointDistribution> dist = std::nullopt);
std::vector<BenchRow> bench_hull(int trials, std::optional<PointDistribution> dist = std::nullopt,
                                 const BenchProgress& progress = {});

enum class ExperimentObject { Cube, Pole, Random, HollowCube };
inline constexpr ExperimentObject kExperimentObjects[] = {ExperimentObject::Cube, ExperimentObject::Pole,
                                                          ExperimentObject::Random, ExperimentObject::HollowCube};

const char* experiment_name(ExperimentObject o);
/// Cube: side-1 box. Pole: axis 0 stretched 4x. Random: hull of 30 seeded
/// points. Hollow cube: side-1 box minus side-0.7 box.
NMesh make_experiment_object(ExperimentObject o, std::size_t dim, std::uint64_t seed = 1);
/// Translation applied to the second operand so that no faces coincide.
NVector experiment_offset(std::size_t dim);

/// One Boolean scenario: A at the origin, B (seed 2) shifted by
/// experiment_offset.
BenchRow bench_boolean_case(std::size_t dim, ExperimentObject a, ExperimentObject b, BooleanKind op, int trials);
std::vector<BenchRow> bench_boolean(int trials, const BenchProgress& progress = {});

inline constexpr std::size_t kSlicingSceneSizes[] = {1, 5, 10, 15, 20};

/// Mean per-frame slicing time for a scene of `objects` hypercubes while the
/// camera moves and rotates in xz and xw.
BenchRow bench_slicing_case(std::size_t objects, int trials, int frames = 60);
std::vector<BenchRow> bench_slicing(int trials, int frames = 60, const BenchProgress& progress = {});

/// Least-squares line fit; returns (slope, intercept, r_squared).
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace hullspace
