#pragma once

// Mouse/keyboard to camera-pose state machine. Horizontal mouse motion
// rotates in a plane chosen by the held modifier keys (xz by default, xw
// with Left Control), vertical motion pitches in yz, and WASD translates in
// the camera frame.

#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "hullspace/ga.hpp"

namespace hullspace {

enum class MouseAxis { Horizontal, Vertical };
enum class Key { W, A, S, D };

/// Modifier key bits; combinations select the horizontal rotation plane.
enum Modifier : std::uint32_t {
  kNoModifier = 0,
  kLeftControl = 1u << 0,
  kLeftShift = 1u << 1,
  kLeftAlt = 1u << 2,
};

struct MouseMove {
  MouseAxis axis = MouseAxis::Horizontal;
  double delta = 0.0;  // pixels
};

struct KeyHeld {
  Key key = Key::W;
};

struct ModifierChanged {
  std::uint32_t modifier = kLeftControl;
  bool held = false;
};

struct InputEvent {
  std::variant<MouseMove, KeyHeld, ModifierChanged> kind;
  double frame_dt = 1.0 / 60.0;  // seconds
};

/// Splits a raw pointer delta into one event per nonzero axis, so that each
/// event drives a single pose parameter.
std::vector<InputEvent> from_mouse_delta(double dx, double dy, double frame_dt = 1.0 / 60.0);

std::optional<Key> parse_key(std::string_view name);

struct ControlConfig {
  double mouse_sensitivity = 0.001;  // radians per pixel
  double move_speed = 1.0;           // units per second
  std::map<std::uint32_t, Plane> modifier_plane_map;
  Plane pitch_plane{1, 2};

  /// none -> xz, then modifier combination k -> (x, 2 + k) for k = 1..N-3.
  static ControlConfig defaults(std::size_t dim = 4);
};

struct ControlState {
  CameraState camera;
  std::uint32_t modifiers = kNoModifier;

  explicit ControlState(std::size_t dim = 4) : camera(dim) {}
  explicit ControlState(CameraState cam) : camera(std::move(cam)) {}
  friend bool operator==(const ControlState&, const ControlState&) = default;
};

/// Pure transition: at most one pose angle or the position differs between
/// input and output. Unmapped keys or modifier combinations leave the state
/// unchanged.
ControlState apply_input(const ControlState& state, const InputEvent& ev, const ControlConfig& cfg);

}  // namespace hullspace
