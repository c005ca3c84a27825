#pragma once

#include <cstdint>

#include "vdsa/config.hpp"
#include "vdsa/world.hpp"

namespace vdsa {

/// Periodic lead-vehicle speed: triangle wave, first half decelerating
/// high -> low, second half back up.  t in seconds.
double lead_velocity_profile(double t_s, const LeadProfileParams& p);

/// Signed acceleration of the profile at time t (piecewise constant).
double lead_profile_accel(double t_s, const LeadProfileParams& p);

/// Constant-spacing CACC law with predecessor and leader feed-forward.
/// Consumes only the snapshots stored on the vehicle; stale snapshots are
/// extrapolated at their recorded speed.  Missing snapshots degrade to
/// holding the current speed (returns 0).  Output clamped to the configured
/// acceleration range.
double cacc_accel(const VehicleState& self, const CaccParams& k,
                  double desired_spacing_m, std::int64_t now_ms);

/// Advance every vehicle by one tick (semi-implicit Euler).  Virtual leads
/// follow the velocity profile exactly; leaders track their virtual lead
/// with perfect per-tick snapshots; followers use radio snapshots only;
/// background vehicles roll at constant speed and wrap around the road.
void step_world(World& w, const SimConfig& cfg, std::int64_t t_ms);

}  // namespace vdsa
