#include "vdsa/world.hpp"

#include <cmath>
#include <random>
#include <string>

#include "vdsa/errors.hpp"
#include "vdsa/rng.hpp"

namespace vdsa {

World build_world(const SimConfig& cfg) {
    World w;
    w.road_length_m = cfg.road_length_m;
    w.geometry = cfg.geometry;

    for (std::size_t pi = 0; pi < cfg.platoons.size(); ++pi) {
        const PlatoonSpec& p = cfg.platoons[pi];
        if (p.inter_vehicle_gap_m < cfg.geometry.vehicle_length_m)
            throw PlacementError("platoon " + std::to_string(pi) + ": spacing " +
                                 std::to_string(p.inter_vehicle_gap_m) +
                                 " m is below the vehicle length");
        std::vector<std::uint32_t> members;
        for (int i = 0; i < p.size; ++i) {
            VehicleState v;
            v.id = static_cast<std::uint32_t>(w.vehicles.size());
            v.role = i == 0 ? Role::Leader : Role::Follower;
            v.follower_index = i;
            v.platoon_id = static_cast<int>(pi);
            v.lane = p.lane;
            v.direction = p.direction;
            v.position_m = p.initial_head_position_m - p.direction * i * p.inter_vehicle_gap_m;
            v.speed_mps = p.initial_speed_mps;
            members.push_back(v.id);
            w.vehicles.push_back(v);
        }
        w.platoon_members.push_back(std::move(members));
    }

    // Virtual lead vehicles: the disturbance source each leader tracks.  They
    // carry no radio and are skipped by messaging and metrics.
    for (std::size_t pi = 0; pi < cfg.platoons.size(); ++pi) {
        const PlatoonSpec& p = cfg.platoons[pi];
        VehicleState v;
        v.id = static_cast<std::uint32_t>(w.vehicles.size());
        v.role = Role::VirtualLead;
        v.platoon_id = static_cast<int>(pi);
        v.lane = p.lane;
        v.direction = p.direction;
        v.position_m = p.initial_head_position_m + p.direction * p.inter_vehicle_gap_m;
        v.speed_mps = p.initial_speed_mps;
        w.virtual_lead_ids.push_back(v.id);
        w.vehicles.push_back(v);
    }

    // Background traffic on the inner lanes; the lower half of the lane deck
    // travels +1, the upper half -1 (matching the outer-lane platoons).
    const int inner_lanes = cfg.lane_count - 2;
    if (inner_lanes > 0 && cfg.background_density_per_km_lane > 0) {
        const long count = std::lround(cfg.background_density_per_km_lane *
                                       (cfg.road_length_m / 1000.0) * inner_lanes);
        auto eng = make_engine(cfg.seed, RngStream::WorldPlacement, 0);
        std::uniform_real_distribution<double> pos(0.0, cfg.road_length_m);
        std::uniform_int_distribution<int> lane(1, cfg.lane_count - 2);
        std::uniform_real_distribution<double> speed(kmh_to_mps(100.0), kmh_to_mps(130.0));
        for (long i = 0; i < count; ++i) {
            VehicleState v;
            v.id = static_cast<std::uint32_t>(w.vehicles.size());
            v.role = Role::Background;
            v.position_m = pos(eng);
            v.lane = lane(eng);
            v.speed_mps = speed(eng);
            v.direction = v.lane < cfg.lane_count / 2 ? +1 : -1;
            w.vehicles.push_back(v);
        }
    }

    for (const auto& spec : cfg.dtt_receivers) {
        ReceiverState r;
        r.spec = spec;
        r.x = spec.longitudinal_position_m;
        r.y = -spec.distance_to_motorway_m;
        r.z = cfg.geometry.dtt_rx_height_m;
        w.receivers.push_back(r);
    }
    return w;
}

double vehicle_distance(const World& w, std::uint32_t a, std::uint32_t b) {
    const VehicleState& va = w.vehicles[a];
    const VehicleState& vb = w.vehicles[b];
    const double dx = va.position_m - vb.position_m;
    const double dy = w.lane_center_y(va.lane) - w.lane_center_y(vb.lane);
    return std::sqrt(dx * dx + dy * dy);
}

double receiver_distance(const World& w, std::uint32_t vehicle,
                         std::size_t receiver_index) {
    const VehicleState& v = w.vehicles[vehicle];
    const ReceiverState& r = w.receivers[receiver_index];
    const double dx = v.position_m - r.x;
    const double dy = w.lane_center_y(v.lane) - r.y;
    const double dz = w.geometry.vehicle_antenna_height_m - r.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

}  // namespace vdsa
