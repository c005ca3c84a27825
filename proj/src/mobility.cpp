#include "vdsa/mobility.hpp"

#include <algorithm>
#include <cmath>

#include "vdsa/units.hpp"

namespace vdsa {

double lead_velocity_profile(double t_s, const LeadProfileParams& p) {
    const double high = kmh_to_mps(p.high_kmh);
    const double low = kmh_to_mps(p.low_kmh);
    const double half = p.period_s / 2.0;
    double u = std::fmod(t_s, p.period_s);
    if (u < 0) u += p.period_s;
    if (u < half) return high - (high - low) * (u / half);
    return low + (high - low) * ((u - half) / half);
}

double lead_profile_accel(double t_s, const LeadProfileParams& p) {
    const double rate =
        (kmh_to_mps(p.high_kmh) - kmh_to_mps(p.low_kmh)) / (p.period_s / 2.0);
    double u = std::fmod(t_s, p.period_s);
    if (u < 0) u += p.period_s;
    return u < p.period_s / 2.0 ? -rate : rate;
}

namespace {

// Gains from (c1, xi, omega_n) of the constant-spacing law; computed in one
// place so tests and controller agree.
struct Gains {
    double a1, a2, a3, a4, a5;
};

Gains gains_of(const CaccParams& k) {
    const double root = k.xi + std::sqrt(std::max(0.0, k.xi * k.xi - 1.0));
    Gains g;
    g.a1 = 1.0 - k.c1;
    g.a2 = k.c1;
    g.a3 = -(2.0 * k.xi - k.c1 * root) * k.omega_n;
    g.a4 = -root * k.omega_n * k.c1;
    g.a5 = -k.omega_n * k.omega_n;
    return g;
}

double extrapolate_position(const CamSnapshot& s, int direction, std::int64_t now_ms) {
    const double dt = (now_ms - s.timestamp_ms) / 1000.0;
    return s.position_m + direction * s.speed_mps * dt;
}

}  // namespace

double cacc_accel(const VehicleState& self, const CaccParams& k,
                  double desired_spacing_m, std::int64_t now_ms) {
    const CamSnapshot& pred = self.last_known_predecessor;
    const CamSnapshot& lead = self.last_known_leader;
    if (!pred.valid || !lead.valid) return 0.0;  // hold speed

    const Gains g = gains_of(k);
    const double pred_pos = extrapolate_position(pred, self.direction, now_ms);
    const double headway = self.direction * (pred_pos - self.position_m);
    const double spacing_error = desired_spacing_m - headway;  // >0 when too close

    double a = g.a1 * pred.accel_mps2 + g.a2 * lead.accel_mps2 +
               g.a3 * (self.speed_mps - pred.speed_mps) +
               g.a4 * (self.speed_mps - lead.speed_mps) + g.a5 * spacing_error;
    return std::clamp(a, k.accel_min_mps2, k.accel_max_mps2);
}

void step_world(World& w, const SimConfig& cfg, std::int64_t t_ms) {
    const double dt = cfg.tick_ms / 1000.0;
    const double t_s = t_ms / 1000.0;

    // Pass 1: command accelerations from the state at t.
    for (VehicleState& v : w.vehicles) {
        switch (v.role) {
            case Role::VirtualLead:
                v.accel_mps2 = lead_profile_accel(t_s, cfg.lead_profile);
                break;
            case Role::Leader: {
                const VehicleState& vl =
                    w.vehicles[w.virtual_lead_ids[static_cast<std::size_t>(v.platoon_id)]];
                CamSnapshot s;
                s.source_id = vl.id;
                s.position_m = vl.position_m;
                s.speed_mps = vl.speed_mps;
                s.accel_mps2 = vl.accel_mps2;
                s.timestamp_ms = t_ms;
                s.valid = true;
                v.last_known_predecessor = s;
                v.last_known_leader = s;
                v.accel_mps2 = cacc_accel(
                    v, cfg.cacc,
                    cfg.platoons[static_cast<std::size_t>(v.platoon_id)].inter_vehicle_gap_m,
                    t_ms);
                break;
            }
            case Role::Follower:
                v.accel_mps2 = cacc_accel(
                    v, cfg.cacc,
                    cfg.platoons[static_cast<std::size_t>(v.platoon_id)].inter_vehicle_gap_m,
                    t_ms);
                break;
            case Role::Background:
                v.accel_mps2 = 0.0;
                break;
        }
    }

    // Pass 2: integrate. Virtual leads take the profile speed directly so the
    // disturbance is exact regardless of tick size.
    for (VehicleState& v : w.vehicles) {
        if (v.role == Role::VirtualLead) {
            v.speed_mps = lead_velocity_profile(t_s + dt, cfg.lead_profile);
        } else {
            v.speed_mps = std::max(0.0, v.speed_mps + v.accel_mps2 * dt);
        }
        v.position_m += v.direction * v.speed_mps * dt;
        if (v.position_m >= w.road_length_m) v.position_m -= w.road_length_m;
        if (v.position_m < 0) v.position_m += w.road_length_m;
    }
}

}  // namespace vdsa
