#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "vdsa/config.hpp"
#include "vdsa/world.hpp"

namespace vdsa {

enum class Band { Cch, Tvws };
enum class MessageKind { Cam, Cacc };

/// Sensed-energy report riding inside a CACC message to the leader.
struct SensingReport {
    int cycle = 0;
    int channel_index = 0;
    double energy_dbm = 0.0;
    bool valid = false;
};

struct Message {
    std::uint64_t id = 0;
    MessageKind kind = MessageKind::Cam;
    std::uint32_t source_id = 0;
    std::int64_t created_us = 0;
    std::int64_t period_us = 0;  // generation period; also the expiry horizon
    Band band = Band::Cch;
    int channel_index = -1;  // TVWS channel index; -1 on CCH
    CamSnapshot payload{};
    SensingReport report{};
    int duration_us = 0;
};

/// One in-flight transmission on the shared medium.
struct ActiveTx {
    std::uint64_t tx_id = 0;
    std::uint32_t vehicle = 0;
    int platoon_id = -1;
    Band band = Band::Cch;
    int channel_index = -1;
    double tx_power_dbm = 0.0;
    std::int64_t start_us = 0;
    std::int64_t end_us = 0;
    std::uint64_t msg_index = 0;
};

enum class CsmaAction { TransmitNow, Backoff, Drop };

struct CsmaResult {
    CsmaAction action = CsmaAction::TransmitNow;
    int backoff_slots = 0;  // uniform in [1, contention_window] on Backoff
};

/// Carrier-sense decision: drop messages older than their period, back off
/// when the sensed power exceeds the band threshold, else transmit.
CsmaResult csma_attempt(double sensed_power_dbm, double sense_threshold_dbm,
                        std::int64_t age_us, std::int64_t period_us,
                        int contention_window_slots, std::mt19937_64& rng);

/// Capture model gate: success iff the minimum SINR over the airtime meets
/// the reception threshold (inclusive).
bool receive_success(double min_sinr_db, double threshold_db);

/// Total received power (dBm) on (band, channel) at a position given the
/// concurrently active transmissions: noise + DTT leakage (TVWS only) +
/// ACIR-coupled V2V power.  `distance_to` maps a transmitter to its distance
/// from the probe point.
double sense_energy(Band band, int channel_index,
                    const std::vector<ActiveTx>& active,
                    const std::vector<double>& distances_m,
                    const PathlossParams& pl, const AcirTable& acir,
                    double dtt_eff_dbm, double noise_floor_dbm);

}  // namespace vdsa
