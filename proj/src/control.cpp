#include "hullspace/control.hpp"

#include <cmath>

#include "hullspace/errors.hpp"

namespace hullspace {

std::vector<InputEvent> from_mouse_delta(double dx, double dy, double frame_dt) {
  std::vector<InputEvent> out;
  if (dx != 0.0) out.push_back({MouseMove{MouseAxis::Horizontal, dx}, frame_dt});
  if (dy != 0.0) out.push_back({MouseMove{MouseAxis::Vertical, dy}, frame_dt});
  return out;
}

std::optional<Key> parse_key(std::string_view name) {
  if (name == "W" || name == "w" || name == "KeyW") return Key::W;
  if (name == "A" || name == "a" || name == "KeyA") return Key::A;
  if (name == "S" || name == "s" || name == "KeyS") return Key::S;
  if (name == "D" || name == "d" || name == "KeyD") return Key::D;
  return std::nullopt;
}

ControlConfig ControlConfig::defaults(std::size_t dim) {
  if (dim < 3) throw ArgumentError("control needs at least 3 dimensions");
  ControlConfig cfg;
  cfg.modifier_plane_map[kNoModifier] = {0, 2};
  for (std::size_t k = 1; k + 2 < dim; ++k)
    cfg.modifier_plane_map[static_cast<std::uint32_t>(k)] = {0, static_cast<int>(2 + k)};
  return cfg;
}

namespace {

void rotate(ControlState& s, Plane plane, double angle) {
  if (angle == 0.0) return;
  PoseParams pose = s.camera.pose();
  pose.set(plane.first, plane.second, pose.angle(plane.first, plane.second) + angle);
  s.camera.set_pose(std::move(pose));
}

}  // namespace

ControlState apply_input(const ControlState& state, const InputEvent& ev, const ControlConfig& cfg) {
  if (!(ev.frame_dt > 0.0) || !std::isfinite(ev.frame_dt)) throw ArgumentError("input event needs frame_dt > 0");
  ControlState out = state;
  const std::size_t dim = state.camera.dim();

  if (const auto* m = std::get_if<MouseMove>(&ev.kind)) {
    if (!std::isfinite(m->delta)) throw ArgumentError("mouse delta must be finite");
    const double angle = m->delta * cfg.mouse_sensitivity;
    if (m->axis == MouseAxis::Vertical) {
      rotate(out, cfg.pitch_plane, angle);
      return out;
    }
    const auto it = cfg.modifier_plane_map.find(state.modifiers);
    if (it == cfg.modifier_plane_map.end() || static_cast<std::size_t>(it->second.second) >= dim) return out;
    rotate(out, it->second, angle);
    return out;
  }

  if (const auto* k = std::get_if<KeyHeld>(&ev.kind)) {
    const double step = cfg.move_speed * ev.frame_dt;
    NVector dir(dim);
    switch (k->key) {
      case Key::W: dir = -state.camera.axis(2); break;
      case Key::S: dir = state.camera.axis(2); break;
      case Key::A: dir = -state.camera.axis(0); break;
      case Key::D: dir = state.camera.axis(0); break;
    }
    if (step != 0.0) out.camera.set_position(state.camera.position() + dir * step);
    return out;
  }

  const auto& mod = std::get<ModifierChanged>(ev.kind);
  if (mod.held)
    out.modifiers |= mod.modifier;
  else
    out.modifiers &= ~mod.modifier;
  return out;
}

}  // namespace hullspace
