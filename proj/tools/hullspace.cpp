// hullspace command-line tool.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hullspace/benchmarks.hpp"
#include "hullspace/boolean.hpp"
#include "hullspace/errors.hpp"
#include "hullspace/hull.hpp"
#include "hullspace/plex.hpp"
#include "hullspace/primitives.hpp"
#include "hullspace/server.hpp"
#include "hullspace/slicing.hpp"

using namespace hullspace;

namespace {

enum Exit { kOk = 0, kUsage = 2, kData = 3, kNumerical = 4 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<NVector> read_points(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<NVector> pts;
  std::string line;
  std::size_t dim = 0;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    for (char& c : line)
      if (c == ',' || c == ';') c = ' ';
    std::istringstream ss(line);
    std::vector<double> row;
    for (double x; ss >> x;) row.push_back(x);
    if (!ss.eof()) throw ArgumentError(path + ":" + std::to_string(lineno) + ": not a number");
    if (row.empty()) continue;
    if (dim == 0) dim = row.size();
    if (row.size() != dim) throw ArgumentError(path + ":" + std::to_string(lineno) + ": expected " + std::to_string(dim) + " coordinates");
    NVector p(dim);
    for (std::size_t k = 0; k < dim; ++k) p[k] = row[k];
    pts.push_back(std::move(p));
  }
  if (pts.empty()) throw ArgumentError(path + ": no points");
  return pts;
}

Precision parse_precision(const std::string& s) { return s == "single" ? Precision::Single : Precision::Double; }

PlexChunk simplex_chunk(const HullResult& h) {
  Bytes payload;
  auto put = [&](auto v) {
    for (std::size_t i = 0; i < sizeof v; ++i) payload.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  };
  put(static_cast<std::uint64_t>(h.simplices.size()));
  for (const auto& s : h.simplices)
    for (Index i : s) put(static_cast<std::uint32_t>(i));
  return PlexChunk::make("simx", std::move(payload));
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"N-dimensional hulls, Booleans, slicing and .plex files"};
  app.require_subcommand(1);

  // hull
  auto* hull = app.add_subcommand("hull", "Convex hull of a point file or random points");
  std::string hull_input, hull_out, hull_prec = "double", hull_dist = "auto";
  std::size_t hull_n = 0, hull_dim = 3;
  std::uint64_t hull_seed = 1;
  hull->add_option("input", hull_input, "Text file, one point per line");
  hull->add_option("--random", hull_n, "Use n random points instead of a file");
  hull->add_option("--dim", hull_dim, "Dimension for --random")->check(CLI::Range(2, 16));
  hull->add_option("--seed", hull_seed, "Seed for --random");
  hull->add_option("--dist", hull_dist, "Random distribution")->check(CLI::IsMember({"auto", "ball", "radial"}));
  hull->add_option("-o,--out", hull_out, "Output .plex path");
  hull->add_option("--precision", hull_prec)->check(CLI::IsMember({"single", "double"}));

  // boolean
  auto* boolean = app.add_subcommand("boolean", "Union, intersection or difference of two meshes");
  std::string bool_a, bool_b, bool_op = "union", bool_out, bool_prec = "double";
  boolean->add_option("a", bool_a)->required()->check(CLI::ExistingFile);
  boolean->add_option("b", bool_b)->required()->check(CLI::ExistingFile);
  boolean->add_option("--op", bool_op)->check(CLI::IsMember({"union", "intersection", "difference"}));
  boolean->add_option("-o,--out", bool_out, "Output .plex path");
  boolean->add_option("--precision", bool_prec)->check(CLI::IsMember({"single", "double"}));

  // slice
  auto* slice = app.add_subcommand("slice", "Cross-section of a 4D mesh at w, as OBJ");
  std::string slice_in, slice_out;
  double slice_w = 0.0;
  slice->add_option("mesh", slice_in)->required()->check(CLI::ExistingFile);
  slice->add_option("-w,--w", slice_w, "Slice position along w");
  slice->add_option("-o,--out", slice_out, "Output OBJ path (stdout if omitted)");

  // convert
  auto* convert = app.add_subcommand("convert", "Export a .plex file as JSON");
  std::string conv_in, conv_json;
  convert->add_option("input", conv_in)->required()->check(CLI::ExistingFile);
  convert->add_option("--json", conv_json, "JSON output path")->required();

  // validate
  auto* validate = app.add_subcommand("validate", "Check a .plex file");
  std::string val_in;
  validate->add_option("input", val_in)->required()->check(CLI::ExistingFile);

  // bench
  auto* bench = app.add_subcommand("bench", "Run a benchmark suite and write CSV");
  std::string bench_suite, bench_out, bench_dist = "auto";
  int bench_trials = 0, bench_frames = 60;
  bench->add_option("suite", bench_suite)->required()->check(CLI::IsMember({"hull", "boolean", "slicing"}));
  bench->add_option("--trials", bench_trials, "Trials per scenario (default 100 hull, 3 otherwise)")->check(CLI::PositiveNumber);
  bench->add_option("--frames", bench_frames, "Frames per slicing trial")->check(CLI::PositiveNumber);
  bench->add_option("--dist", bench_dist, "Hull point distribution")->check(CLI::IsMember({"auto", "ball", "radial"}));
  bench->add_option("-o,--out", bench_out, "CSV path (stdout if omitted)");

  // serve
  auto* serve = app.add_subcommand("serve", "Run the exploration WebSocket service");
  ServerOptions server_opts;
  std::vector<std::string> scene_files;
  std::string static_dir;
  serve->add_option("--port", server_opts.port, "Listen port");
  serve->add_option("--address", server_opts.address, "Listen address");
  serve->add_option("--scene", scene_files, "Preload .plex files")->check(CLI::ExistingFile);
  serve->add_option("--static", static_dir, "Directory of viewer assets")->check(CLI::ExistingDirectory);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*hull) {
      std::vector<NVector> pts;
      std::size_t dim = hull_dim;
      if (hull_n > 0) {
        PointDistribution d = benchmark_distribution(dim);
        if (hull_dist == "ball") d = PointDistribution::UniformBall;
        if (hull_dist == "radial") d = PointDistribution::UniformRadius;
        pts = random_points(hull_n, dim, hull_seed, d);
      } else if (!hull_input.empty()) {
        pts = read_points(hull_input);
        dim = pts[0].dim();
      } else {
        throw UsageError("hull needs an input file or --random n");
      }
      const auto t0 = std::chrono::steady_clock::now();
      const HullResult h = build_hull(pts, dim, {.with_simplices = true, .eps = std::nullopt});
      const double ms = ms_since(t0);
      std::printf("facets %zu\nvertices %zu\nsimplices %zu\nelapsed_ms %.3f\n", h.mesh.facet_count(),
                  h.mesh.vertex_count(), h.simplices.size(), ms);
      if (!hull_out.empty()) {
        PlexWriteOptions opts;
        opts.precision = parse_precision(hull_prec);
        opts.extra_chunks.push_back(simplex_chunk(h));
        write_file(hull_out, write_plex(h.mesh, opts));
      }
    } else if (*boolean) {
      const NMesh a = read_plex(read_file(bool_a)).mesh;
      const NMesh b = read_plex(read_file(bool_b)).mesh;
      const BooleanKind kind = bool_op == "union"          ? BooleanKind::Union
                               : bool_op == "intersection" ? BooleanKind::Intersection
                                                           : BooleanKind::Difference;
      BooleanStats stats;
      const auto t0 = std::chrono::steady_clock::now();
      const NMesh r = boolean_op(a, b, kind, &stats);
      const double ms = ms_since(t0);
      std::printf("facets %zu\nvolume %.12g\ndropped %d\nelapsed_ms %.3f\n", r.facet_count(), mesh_volume(r),
                  stats.dropped_slivers, ms);
      if (!bool_out.empty()) {
        PlexWriteOptions opts;
        opts.precision = parse_precision(bool_prec);
        write_file(bool_out, write_plex(r, opts));
      }
    } else if (*slice) {
      const NMesh m = read_plex(read_file(slice_in)).mesh;
      if (m.dim() != 4) throw ArgumentError("slice needs a 4D mesh, got dimension " + std::to_string(m.dim()));
      const CrossSection cs = slice_mesh(m, CameraState(4), slice_w);
      const std::string obj = to_obj(cs);
      if (slice_out.empty())
        std::fwrite(obj.data(), 1, obj.size(), stdout);
      else
        write_text(slice_out, obj);
      std::fprintf(stderr, "triangles %zu\n", cs.triangles.size());
    } else if (*convert) {
      const PlexFile f = read_plex(read_file(conv_in));
      write_text(conv_json, to_json(f.mesh, f.meta));
    } else if (*validate) {
      const PlexFile f = read_plex(read_file(val_in));
      f.mesh.validate();
      std::printf("ok\ndimension %d\nvertices %zu\nfacets %zu\nprecision %s\nsoftware %s\n", f.meta.dimension,
                  f.mesh.vertex_count(), f.mesh.facet_count(), f.meta.precision_flag ? "double" : "single",
                  f.meta.software_name.c_str());
      for (const std::string& code : f.skipped) std::printf("skipped %s\n", code.c_str());
    } else if (*bench) {
      const int trials = bench_trials > 0 ? bench_trials : (bench_suite == "hull" ? 100 : 3);
      auto progress = [](const BenchRow& r) {
        std::fprintf(stderr, "%zuD %-40s mean %10.3f ms  median %10.3f ms  size %10.2f\n", r.dim, r.scenario.c_str(),
                     r.mean_ms, r.median_ms, r.size);
      };
      std::vector<BenchRow> rows;
      if (bench_suite == "hull") {
        std::optional<PointDistribution> d;
        if (bench_dist == "ball") d = PointDistribution::UniformBall;
        if (bench_dist == "radial") d = PointDistribution::UniformRadius;
        rows = bench_hull(trials, d, progress);
      } else if (bench_suite == "boolean") {
        rows = bench_boolean(trials, progress);
      } else {
        rows = bench_slicing(trials, bench_frames, progress);
      }
      const std::string csv = to_csv(rows);
      if (bench_out.empty())
        std::fwrite(csv.data(), 1, csv.size(), stdout);
      else
        write_text(bench_out, csv);
    } else if (*serve) {
      std::vector<std::filesystem::path> files(scene_files.begin(), scene_files.end());
      server_opts.static_dir = static_dir;
      Server server(server_opts, load_scene(files));
      const auto port = server.start();
      std::fprintf(stderr, "listening on ws://%s:%u\n", server_opts.address.c_str(), static_cast<unsigned>(port));
      server.wait();
    }
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kUsage;
  } catch (const DegenerateInput& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kData;
  } catch (const NumericalFailure& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kNumerical;
  } catch (const AmbiguousOrientation& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kNumerical;
  } catch (const ClassificationFailure& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kData;
  }
  return kOk;
}
