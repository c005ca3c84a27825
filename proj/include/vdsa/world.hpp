#pragma once

#include <cstdint>
#include <vector>

#include "vdsa/config.hpp"

namespace vdsa {

struct CamSnapshot {
    std::uint32_t source_id = 0;
    double position_m = 0.0;
    double speed_mps = 0.0;
    double accel_mps2 = 0.0;
    std::int64_t timestamp_ms = 0;
    bool valid = false;
};

enum class Role { VirtualLead, Leader, Follower, Background };

struct VehicleState {
    std::uint32_t id = 0;
    Role role = Role::Background;
    int follower_index = 0;  // >= 1 for followers, 0 otherwise
    int platoon_id = -1;
    int lane = 0;
    int direction = +1;
    double position_m = 0.0;
    double speed_mps = 0.0;
    double accel_mps2 = 0.0;
    CamSnapshot last_known_predecessor{};
    CamSnapshot last_known_leader{};
};

struct ReceiverState {
    DttReceiverSpec spec{};
    // Fixed 3-D position: x along road, y lateral (receivers sit off the
    // y=0 road edge), z height.
    double x = 0.0, y = 0.0, z = 0.0;
};

struct World {
    std::vector<VehicleState> vehicles;  // index == vehicle id
    // Physical members per platoon, leader first, followers in order.
    std::vector<std::vector<std::uint32_t>> platoon_members;
    std::vector<std::uint32_t> virtual_lead_ids;  // one per platoon
    std::vector<ReceiverState> receivers;
    double road_length_m = 0.0;
    GeometryParams geometry{};

    double lane_center_y(int lane) const {
        return (lane + 0.5) * geometry.lane_width_m;
    }
};

/// Deterministic world from (cfg, cfg.seed): platoon chains head-to-tail,
/// virtual lead vehicles ahead of each leader, background traffic uniform
/// i.i.d. on the inner lanes.  Throws PlacementError when the configured
/// platoon spacing is below the vehicle length.
World build_world(const SimConfig& cfg);

/// Straight-line distance between two vehicles (same antenna height).
double vehicle_distance(const World& w, std::uint32_t a, std::uint32_t b);

/// 3-D distance from a vehicle's antenna to a fixed DTT receiver.
double receiver_distance(const World& w, std::uint32_t vehicle,
                         std::size_t receiver_index);

}  // namespace vdsa
