#include "hullspace/explorer.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

#include "hullspace/boolean.hpp"
#include "hullspace/errors.hpp"
#include "hullspace/plex.hpp"
#include "hullspace/primitives.hpp"

namespace hullspace {

using nlohmann::json;

NMesh SceneObject::world_mesh() const {
  const std::size_t n = mesh.dim();
  const std::vector<double> m = rotation_matrix(pose);
  auto apply = [&](const NVector& v) {
    NVector out(n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) out[r] += m[r * n + c] * v[c];
    return out;
  };
  std::vector<NVector> verts = mesh.vertices();
  for (NVector& v : verts) v = apply(v) + position;
  std::vector<NVector> normals = mesh.normals();
  for (NVector& v : normals) v = apply(v);
  NMesh out = mesh;
  out.set_vertices(std::move(verts));
  out.set_normals(std::move(normals));
  return out;
}

Scene::Scene(std::size_t d) : dim(d), control(d) {}

std::uint32_t Scene::add(NMesh mesh, const NVector* pos) {
  if (mesh.dim() != dim) throw ArgumentError("object dimension does not match the scene");
  SceneObject obj;
  obj.id = next_object_id++;
  obj.pose = Rotor(dim);
  obj.position = pos ? *pos : NVector(dim);
  if (obj.position.dim() != dim) throw ArgumentError("position dimension does not match the scene");
  obj.mesh = std::move(mesh);
  objects.push_back(std::move(obj));
  return objects.back().id;
}

const SceneObject* Scene::find(std::uint32_t id) const {
  const auto it = std::find_if(objects.begin(), objects.end(), [&](const SceneObject& o) { return o.id == id; });
  return it == objects.end() ? nullptr : &*it;
}

std::size_t Scene::facet_count() const {
  std::size_t n = 0;
  for (const SceneObject& o : objects) n += o.mesh.facet_count();
  return n;
}

json FrameMessage::to_json() const {
  json sec = json::array();
  for (const FrameSection& s : sections) {
    std::vector<double> pos;
    pos.reserve(s.section.vertices.size() * 3);
    for (const Vec3& v : s.section.vertices) pos.insert(pos.end(), v.begin(), v.end());
    std::vector<Index> tri;
    tri.reserve(s.section.triangles.size() * 3);
    for (const Tri& t : s.section.triangles) tri.insert(tri.end(), t.begin(), t.end());
    sec.push_back({{"object_id", s.object_id}, {"positions", std::move(pos)}, {"triangles", std::move(tri)}});
  }
  return {{"type", "frame"}, {"frame_id", frame_id}, {"sections", std::move(sec)}, {"timing_ms", timing_ms}};
}

NMesh make_primitive(const std::string& kind, const json& params, std::size_t dim) {
  const double size = params.value("size", 1.0);
  if (kind == "tesseract" || kind == "cube") return make_hypercube(dim, size);
  if (kind == "pole") return make_pole(dim, size);
  if (kind == "random")
    return make_random_convex(dim, params.value("n", std::size_t{30}), params.value("seed", std::uint64_t{1}),
                              params.value("radius", 0.6));
  if (kind == "hollow_cube") return make_hollow_cube(dim, size, params.value("inner", 0.7 * size));
  throw ArgumentError("unknown primitive '" + kind + "'");
}

namespace {

NVector vector_arg(const json& j, std::size_t dim) {
  const auto v = j.get<std::vector<double>>();
  if (v.size() != dim) throw ArgumentError("vector argument must have " + std::to_string(dim) + " components");
  NVector out(dim);
  for (std::size_t k = 0; k < dim; ++k) out[k] = v[k];
  return out;
}

std::uint32_t modifier_bit(const std::string& name) {
  if (name == "LeftControl" || name == "ControlLeft" || name == "ctrl") return kLeftControl;
  if (name == "LeftShift" || name == "ShiftLeft" || name == "shift") return kLeftShift;
  if (name == "LeftAlt" || name == "AltLeft" || name == "alt") return kLeftAlt;
  throw ArgumentError("unknown modifier '" + name + "'");
}

json camera_json(const ControlState& s) {
  json pose = json::object();
  for (const auto& [plane, angle] : s.camera.pose().plane_angles)
    pose[std::to_string(plane.first) + std::to_string(plane.second)] = angle;
  return {{"position", std::vector<double>(s.camera.position().coords().begin(), s.camera.position().coords().end())},
          {"pose", std::move(pose)},
          {"modifiers", s.modifiers}};
}

void apply_input_command(Scene& scene, const json& args, const ControlConfig& cfg) {
  const std::string kind = args.at("kind").get<std::string>();
  const double dt = args.value("dt", 1.0 / 60.0);
  ControlState& st = scene.control;
  if (kind == "mouse") {
    if (args.contains("modifier")) {
      const bool held = args.at("modifier").get<bool>();
      const bool current = (st.modifiers & kLeftControl) != 0;
      if (held != current) st = apply_input(st, {ModifierChanged{kLeftControl, held}, dt}, cfg);
    }
    for (const InputEvent& ev : from_mouse_delta(args.value("dx", 0.0), args.value("dy", 0.0), dt))
      st = apply_input(st, ev, cfg);
  } else if (kind == "key") {
    const auto key = parse_key(args.at("key").get<std::string>());
    if (key) st = apply_input(st, {KeyHeld{*key}, dt}, cfg);
  } else if (kind == "modifier") {
    const std::uint32_t bit = modifier_bit(args.value("modifier", std::string("LeftControl")));
    st = apply_input(st, {ModifierChanged{bit, args.at("held").get<bool>()}, dt}, cfg);
  } else {
    throw ArgumentError("unknown input kind '" + kind + "'");
  }
}

BooleanKind parse_op(const std::string& op) {
  if (op == "union") return BooleanKind::Union;
  if (op == "intersection") return BooleanKind::Intersection;
  if (op == "difference") return BooleanKind::Difference;
  throw ArgumentError("unknown boolean op '" + op + "'");
}

json run(Scene& s, const std::string& cmd, const json& args, const ControlConfig& cfg) {
  json reply = json::object();
  if (cmd == "set_w_slice") {
    const double v = args.at("value").get<double>();
    if (!std::isfinite(v)) throw ArgumentError("w_slice must be finite");
    s.w_slice = v;
    reply["w_slice"] = v;
  } else if (cmd == "input") {
    apply_input_command(s, args, cfg);
    reply["camera"] = camera_json(s.control);
  } else if (cmd == "spawn_primitive") {
    NMesh mesh = make_primitive(args.at("kind").get<std::string>(), args.value("params", json::object()), s.dim);
    if (args.contains("position")) {
      const NVector p = vector_arg(args.at("position"), s.dim);
      reply["object_id"] = s.add(std::move(mesh), &p);
    } else {
      reply["object_id"] = s.add(std::move(mesh));
    }
  } else if (cmd == "load_plex") {
    const PlexFile f = read_plex(read_file(args.at("path").get<std::string>()));
    reply["object_id"] = s.add(f.mesh);
    reply["skipped"] = f.skipped;
  } else if (cmd == "save_plex") {
    const auto id = args.at("id").get<std::uint32_t>();
    const SceneObject* obj = s.find(id);
    if (!obj) throw ArgumentError("unknown object id " + std::to_string(id));
    PlexWriteOptions opts;
    if (args.value("precision", std::string("double")) == "single") opts.precision = Precision::Single;
    write_file(args.at("path").get<std::string>(), write_plex(obj->world_mesh(), opts));
  } else if (cmd == "boolean") {
    const auto a = args.at("a").get<std::uint32_t>();
    const auto b = args.at("b").get<std::uint32_t>();
    const SceneObject* oa = s.find(a);
    const SceneObject* ob = s.find(b);
    if (!oa) throw ArgumentError("unknown object id " + std::to_string(a));
    if (!ob) throw ArgumentError("unknown object id " + std::to_string(b));
    if (a == b) throw ArgumentError("boolean needs two distinct objects");
    NMesh result = boolean_op(oa->world_mesh(), ob->world_mesh(), parse_op(args.at("op").get<std::string>()));
    const auto ia = std::find_if(s.objects.begin(), s.objects.end(), [&](const SceneObject& o) { return o.id == a; });
    ia->mesh = std::move(result);
    ia->pose = Rotor(s.dim);
    ia->position = NVector(s.dim);
    reply["facets"] = ia->mesh.facet_count();
    std::erase_if(s.objects, [&](const SceneObject& o) { return o.id == b; });
  } else if (cmd == "remove") {
    const auto id = args.at("id").get<std::uint32_t>();
    if (!s.find(id)) throw ArgumentError("unknown object id " + std::to_string(id));
    std::erase_if(s.objects, [&](const SceneObject& o) { return o.id == id; });
  } else if (cmd == "get_state") {
    json objs = json::array();
    for (const SceneObject& o : s.objects) objs.push_back({{"id", o.id}, {"facets", o.mesh.facet_count()}});
    reply["objects"] = std::move(objs);
    reply["camera"] = camera_json(s.control);
    reply["w_slice"] = s.w_slice;
  } else {
    throw ArgumentError("unknown command '" + cmd + "'");
  }
  return reply;
}

}  // namespace

json handle_command(Scene& scene, const json& msg, const ControlConfig& cfg) {
  const std::string cmd = msg.value("cmd", std::string());
  json reply = {{"type", "reply"}, {"cmd", cmd}};
  if (msg.contains("request_id")) reply["request_id"] = msg["request_id"];
  Scene work = scene;
  try {
    json body = run(work, cmd, msg.value("args", json::object()), cfg);
    scene = std::move(work);
    reply["ok"] = true;
    reply.update(body);
  } catch (const std::exception& e) {
    reply["ok"] = false;
    reply["error"] = e.what();
  }
  return reply;
}

FrameMessage frame_tick(Scene& scene) {
  const auto t0 = std::chrono::steady_clock::now();
  FrameMessage msg;
  for (const SceneObject& o : scene.objects) {
    if (o.mesh.dim() != 4) continue;
    msg.sections.push_back({o.id, slice_mesh(o.world_mesh(), scene.control.camera, scene.w_slice)});
  }
  msg.timing_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  msg.frame_id = ++scene.frame_id;
  return msg;
}

Session::Session(Scene scene, ControlConfig cfg) : scene_(std::move(scene)), cfg_(std::move(cfg)) {}

json Session::handle(const json& msg) {
  const std::string type = msg.value("type", std::string());
  if (type == "command") return handle_command(scene_, msg, cfg_);
  if (type == "frame_request") return frame_tick(scene_).to_json();
  return {{"type", "reply"}, {"ok", false}, {"error", "unknown message type '" + type + "'"}};
}

std::vector<std::string> Session::handle_text(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json msg;
    try {
      msg = json::parse(line);
    } catch (const json::parse_error& e) {
      out.push_back(json{{"type", "reply"}, {"ok", false}, {"error", std::string("malformed JSON: ") + e.what()}}.dump());
      continue;
    }
    out.push_back(handle(msg).dump());
  }
  return out;
}

Scene load_scene(const std::vector<std::filesystem::path>& files) {
  std::size_t dim = 4;
  std::vector<NMesh> meshes;
  for (const auto& f : files) {
    meshes.push_back(read_plex(read_file(f)).mesh);
    dim = meshes.front().dim();
  }
  Scene scene(dim);
  for (NMesh& m : meshes) scene.add(std::move(m));
  return scene;
}

}  // namespace hullspace
