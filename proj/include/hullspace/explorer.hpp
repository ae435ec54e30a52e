#pragma once

// Session state for interactive exploration: a scene of 4D objects, a
// camera driven by the control state machine, and a slice depth. Commands
// and frames are JSON messages.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "hullspace/control.hpp"
#include "hullspace/ga.hpp"
#include "hullspace/ndmesh.hpp"
#include "hullspace/slicing.hpp"

namespace hullspace {

struct SceneObject {
  std::uint32_t id = 0;
  NMesh mesh;
  Rotor pose;
  NVector position;

  /// Mesh with pose and position applied.
  NMesh world_mesh() const;
  friend bool operator==(const SceneObject&, const SceneObject&) = default;
};

struct Scene {
  std::size_t dim = 4;
  std::vector<SceneObject> objects;
  ControlState control{4};
  double w_slice = 0.0;
  std::uint32_t next_object_id = 1;
  std::uint64_t frame_id = 0;

  explicit Scene(std::size_t dim = 4);
  std::uint32_t add(NMesh mesh, const NVector* position = nullptr);
  const SceneObject* find(std::uint32_t id) const;
  std::size_t facet_count() const;
  friend bool operator==(const Scene&, const Scene&) = default;
};

struct FrameSection {
  std::uint32_t object_id = 0;
  CrossSection section;
};

struct FrameMessage {
  std::uint64_t frame_id = 0;
  std::vector<FrameSection> sections;
  double timing_ms = 0.0;

  nlohmann::json to_json() const;
};

/// Applies one command message, `{"type":"command","cmd":...,"args":{...}}`,
/// and returns the reply. The scene changes only if the command succeeds.
nlohmann::json handle_command(Scene& scene, const nlohmann::json& msg, const ControlConfig& cfg);

/// Slices every object at the current camera and w_slice. Only frame_id
/// changes in the scene.
FrameMessage frame_tick(Scene& scene);

/// Builds one of the experiment primitives: "tesseract", "pole", "random",
/// "hollow_cube".
NMesh make_primitive(const std::string& kind, const nlohmann::json& params, std::size_t dim);

/// One client connection: parses newline-delimited JSON requests and
/// returns the response lines.
class Session {
 public:
  explicit Session(Scene scene, ControlConfig cfg = ControlConfig::defaults());

  std::vector<std::string> handle_text(const std::string& text);
  nlohmann::json handle(const nlohmann::json& msg);

  const Scene& scene() const { return scene_; }

 private:
  Scene scene_;
  ControlConfig cfg_;
};

/// Scene preloaded with the given .plex files.
Scene load_scene(const std::vector<std::filesystem::path>& files);

}  // namespace hullspace
