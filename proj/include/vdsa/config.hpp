#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vdsa/propagation.hpp"

namespace vdsa {

enum class StrategyKind { CchOnly, FixedTvws, Bumblebee };

struct Strategy {
    StrategyKind kind = StrategyKind::Bumblebee;
    double cost_db = 0.0;  // only meaningful for Bumblebee

    bool operator==(const Strategy&) const = default;
};

/// "cch-only" | "fixed-tvws" | "bumblebee:<cost_db>"
Strategy parse_strategy(const std::string& text);
std::string format_strategy(const Strategy& s);

struct PlatoonSpec {
    int size = 10;
    int lane = 0;
    int direction = +1;
    double initial_head_position_m = 150.0;
    double initial_speed_mps = 36.111;  // 130 km/h
    double inter_vehicle_gap_m = 10.0;  // centre-to-centre spacing

    bool operator==(const PlatoonSpec&) const = default;
};

struct DttReceiverSpec {
    int id = 0;
    double longitudinal_position_m = 0.0;
    double distance_to_motorway_m = 0.0;
    int group = 0;

    bool operator==(const DttReceiverSpec&) const = default;
};

struct ChannelPlan {
    std::vector<int> tvws_center_freqs_mhz{490, 498, 506, 514, 522};
    int cch_freq_mhz = 5900;
    double channel_bandwidth_mhz = 10.0;
    int initial_tvws_channel = 2;  // index into tvws_center_freqs_mhz

    bool operator==(const ChannelPlan&) const = default;
};

struct RadioParams {
    double cch_tx_power_dbm = 23.0;
    double tvws_tx_power_dbm = 12.0;
    double noise_floor_dbm = -95.0;  // per 10 MHz channel
    PathlossParams v2v_pathloss{};
    double reception_sinr_threshold_db = 10.0;
    double cch_csma_sense_dbm = -80.0;
    double tvws_csma_sense_dbm = -70.0;  // CCH threshold raised by 10 dB
    // CSMA timing (slotted broadcast model, no retransmissions)
    int slot_us = 13;
    int aifs_us = 58;
    int contention_window_slots = 15;
    int airtime_us = 440;  // 300-byte message at 6 Mb/s incl. preamble

    bool operator==(const RadioParams&) const = default;
};

struct CaccParams {
    double c1 = 0.5;       // leader-vs-predecessor weighting
    double xi = 1.0;       // damping
    double omega_n = 1.0;  // controller bandwidth, rad/s
    double accel_min_mps2 = -8.0;
    double accel_max_mps2 = 3.0;

    bool operator==(const CaccParams&) const = default;
};

struct LeadProfileParams {
    double high_kmh = 130.0;
    double low_kmh = 100.0;
    double period_s = 30.0;  // symmetric triangle: half down, half up

    bool operator==(const LeadProfileParams&) const = default;
};

struct DutyCycleParams {
    int cycle_ms = 200;
    int sensing_ms = 150;  // transmission = cycle - sensing
    int cycles_per_decision = 5;
    double threshold_dbm = -65.0;  // T: max energy of an admissible channel
    int retune_blackout_ms = 2;
    bool average_in_db = false;  // sensitivity study only; default linear-domain
    // Append transmission-window samples of the current channel taken while the
    // own platoon is silent (leader-side).  The sensing-phase reports are always
    // included.
    bool include_window_self_samples = true;

    bool operator==(const DutyCycleParams&) const = default;
};

struct DttProtection {
    double reception_threshold_dbm = -78.75;
    double required_sir_db = 39.5;

    bool operator==(const DttProtection&) const = default;
};

struct GeometryParams {
    double lane_width_m = 3.5;
    double vehicle_length_m = 4.0;
    double vehicle_antenna_height_m = 1.5;
    double dtt_rx_height_m = 10.0;

    bool operator==(const GeometryParams&) const = default;
};

struct MessagingParams {
    int cam_period_background_ms = 100;  // 10 Hz
    int cam_period_platoon_ms = 200;     // 5 Hz, CCH
    int cacc_period_ms = 200;            // 5 Hz, TVWS (CCH under CchOnly)

    bool operator==(const MessagingParams&) const = default;
};

struct SimConfig {
    double road_length_m = 5000.0;
    int lane_count = 4;
    double sim_duration_s = 140.0;
    int tick_ms = 1;
    std::vector<PlatoonSpec> platoons;
    double background_density_per_km_lane = 20.0;
    ChannelPlan channel_plan{};
    RadioParams radio{};
    CaccParams cacc{};
    LeadProfileParams lead_profile{};
    DutyCycleParams duty{};
    DttProtection dtt_protection{};
    GeometryParams geometry{};
    MessagingParams messaging{};
    std::vector<DttReceiverSpec> dtt_receivers;
    DttField dtt_field{};
    AcirTable acir{};
    std::uint64_t seed = 1;
    Strategy strategy{};

    bool operator==(const SimConfig&) const = default;
};

/// Canonical scenario: 5 km / 140 s motorway, two opposing 10-vehicle
/// platoons, ten fixed DTT receivers, synthetic two-channel DTT field.
SimConfig default_config();

/// Throws ValidationError naming the offending field.
void validate_config(const SimConfig& cfg);

/// JSON in, validated SimConfig out (defaults filled for absent fields).
SimConfig load_config(const std::string& path);
SimConfig parse_config(const std::string& json_text);
std::string serialize_config(const SimConfig& cfg);
void save_config(const SimConfig& cfg, const std::string& path);

}  // namespace vdsa
