#include "hullspace/benchmarks.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <numeric>

#include "hullspace/errors.hpp"
#include "hullspace/explorer.hpp"
#include "hullspace/hull.hpp"

namespace hullspace {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

BenchRow summarize(std::size_t dim, std::string scenario, std::vector<double> times, double size_sum) {
  BenchRow row;
  row.dim = dim;
  row.scenario = std::move(scenario);
  row.trials = static_cast<int>(times.size());
  row.mean_ms = std::accumulate(times.begin(), times.end(), 0.0) / static_cast<double>(times.size());
  row.size = size_sum / static_cast<double>(times.size());
  std::sort(times.begin(), times.end());
  const std::size_t m = times.size() / 2;
  row.median_ms = times.size() % 2 ? times[m] : 0.5 * (times[m - 1] + times[m]);
  return row;
}

const char* op_name(BooleanKind op) {
  switch (op) {
    case BooleanKind::Union: return "union";
    case BooleanKind::Intersection: return "intersection";
    case BooleanKind::Difference: return "difference";
  }
  return "?";
}

}  // namespace

std::string to_csv(const std::vector<BenchRow>& rows) {
  std::string out = "dim,scenario,trials,mean_ms,size\n";
  char buf[256];
  for (const BenchRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%zu,%s,%d,%.4f,%.2f\n", r.dim, r.scenario.c_str(), r.trials, r.mean_ms, r.size);
    out += buf;
  }
  return out;
}

BenchRow bench_hull_case(std::size_t dim, std::size_t n, int trials, std::optional<PointDistribution> dist) {
  if (trials < 1) throw ArgumentError("trials must be at least 1");
  const PointDistribution d = dist.value_or(benchmark_distribution(dim));
  std::vector<double> times;
  double facets = 0.0;
  for (int t = 1; t <= trials; ++t) {
    const std::vector<NVector> pts = random_points(n, dim, static_cast<std::uint64_t>(t), d);
    const auto t0 = Clock::now();
    const HullResult h = build_hull(pts, dim);
    times.push_back(ms_since(t0));
    facets += static_cast<double>(h.mesh.facet_count());
  }
  return summarize(dim, "random_" + std::to_string(n), std::move(times), facets);
}

std::vector<BenchRow> bench_hull(int trials, std::optional<PointDistribution> dist, const BenchProgress& progress) {
  std::vector<BenchRow> rows;
  for (std::size_t dim : {3u, 4u})
    for (std::size_t n : kHullBenchSizes) {
      rows.push_back(bench_hull_case(dim, n, trials, dist));
      if (progress) progress(rows.back());
    }
  return rows;
}

const char* experiment_name(ExperimentObject o) {
  switch (o) {
    case ExperimentObject::Cube: return "cube";
    case ExperimentObject::Pole: return "pole";
    case ExperimentObject::Random: return "random";
    case ExperimentObject::HollowCube: return "hollow_cube";
  }
  return "?";
}

NMesh make_experiment_object(ExperimentObject o, std::size_t dim, std::uint64_t seed) {
  switch (o) {
    case ExperimentObject::Cube: return make_hypercube(dim, 1.0);
    case ExperimentObject::Pole: return make_pole(dim, 1.0);
    case ExperimentObject::Random: return make_random_convex(dim, 30, seed);
    case ExperimentObject::HollowCube: return make_hollow_cube(dim, 1.0, 0.7);
  }
  throw ArgumentError("unknown experiment object");
}

NVector experiment_offset(std::size_t dim) {
  static constexpr double kOffset[] = {0.37, 0.29, 0.23, 0.19, 0.17, 0.13};
  NVector o(dim);
  for (std::size_t k = 0; k < dim; ++k) o[k] = kOffset[k % 6];
  return o;
}

BenchRow bench_boolean_case(std::size_t dim, ExperimentObject a, ExperimentObject b, BooleanKind op, int trials) {
  if (trials < 1) throw ArgumentError("trials must be at least 1");
  const NMesh ma = make_experiment_object(a, dim, 1);
  const NMesh mb = translated(make_experiment_object(b, dim, 2), experiment_offset(dim));
  std::vector<double> times;
  double facets = 0.0;
  for (int t = 0; t < trials; ++t) {
    const auto t0 = Clock::now();
    const NMesh r = boolean_op(ma, mb, op);
    times.push_back(ms_since(t0));
    facets += static_cast<double>(r.facet_count());
  }
  const std::string name = std::string(experiment_name(a)) + "-" + experiment_name(b) + "-" + op_name(op);
  return summarize(dim, name, std::move(times), facets);
}

std::vector<BenchRow> bench_boolean(int trials, const BenchProgress& progress) {
  std::vector<BenchRow> rows;
  for (std::size_t dim : {3u, 4u})
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = i; j < 4; ++j)
        for (BooleanKind op : {BooleanKind::Union, BooleanKind::Intersection, BooleanKind::Difference}) {
          rows.push_back(bench_boolean_case(dim, kExperimentObjects[i], kExperimentObjects[j], op, trials));
          if (progress) progress(rows.back());
        }
  return rows;
}

BenchRow bench_slicing_case(std::size_t objects, int trials, int frames) {
  if (trials < 1 || frames < 1) throw ArgumentError("trials and frames must be at least 1");
  Scene base(4);
  const NMesh cube = make_hypercube(4, 1.0);
  for (std::size_t i = 0; i < objects; ++i) {
    NVector p(4);
    p[0] = 1.5 * static_cast<double>(i % 5) - 3.0;
    p[1] = 1.5 * static_cast<double>(i / 5 % 2);
    p[2] = -4.0 - 1.5 * static_cast<double>(i / 10);
    p[3] = 0.1 * static_cast<double>(i % 3);
    base.add(cube, &p);
  }
  const ControlConfig cfg = ControlConfig::defaults(4);
  std::vector<double> times;
  for (int t = 0; t < trials; ++t) {
    Scene scene = base;
    double total = 0.0;
    for (int f = 0; f < frames; ++f) {
      // alternate movement, xz yaw and xw rotation
      const int phase = f % 4;
      if (phase == 0) scene.control = apply_input(scene.control, {KeyHeld{Key::W}}, cfg);
      if (phase == 1) scene.control = apply_input(scene.control, {MouseMove{MouseAxis::Horizontal, 12.0}}, cfg);
      if (phase == 2) {
        scene.control = apply_input(scene.control, {ModifierChanged{kLeftControl, true}}, cfg);
        scene.control = apply_input(scene.control, {MouseMove{MouseAxis::Horizontal, 9.0}}, cfg);
        scene.control = apply_input(scene.control, {ModifierChanged{kLeftControl, false}}, cfg);
      }
      const auto t0 = Clock::now();
      const FrameMessage msg = frame_tick(scene);
      total += ms_since(t0);
      (void)msg;
    }
    times.push_back(total / frames);
  }
  return summarize(4, "hypercubes_" + std::to_string(objects), std::move(times),
                   static_cast<double>(base.facet_count()));
}

std::vector<BenchRow> bench_slicing(int trials, int frames, const BenchProgress& progress) {
  std::vector<BenchRow> rows;
  for (std::size_t n : kSlicingSceneSizes) {
    rows.push_back(bench_slicing_case(n, trials, frames));
    if (progress) progress(rows.back());
  }
  return rows;
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ArgumentError("fit_line needs at least two paired samples");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit f;
  f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

}  // namespace hullspace
