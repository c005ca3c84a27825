#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "vdsa/units.hpp"

namespace vdsa {

/// One piecewise-linear stretch of the measured DTT power profile along the
/// route.  value(x) = slope_db_per_m * x + intercept_dbm, x in road metres;
/// the intercept is referenced to x = 0, not to the segment start.
struct DttSegment {
    double start_m = 0.0;
    double end_m = 0.0;  // half-open [start_m, end_m)
    double slope_db_per_m = 0.0;
    double intercept_dbm = 0.0;
    double shadow_sigma_db = 0.0;

    bool operator==(const DttSegment&) const = default;
};

/// Per-channel route profiles of DTT received power.  Channels absent from
/// the map carry no DTT signal.
struct DttField {
    std::map<int, std::vector<DttSegment>> segments_by_channel_mhz;

    bool operator==(const DttField&) const = default;

    bool occupied(int channel_mhz) const {
        return segments_by_channel_mhz.count(channel_mhz) > 0;
    }
    /// Index of the segment containing x, or -1.
    int segment_index(int channel_mhz, double x_m) const;
};

/// Adjacent-channel interference rejection, indexed by |channel offset|.
/// Offsets beyond the table saturate at the last entry.
struct AcirTable {
    std::vector<double> rejection_db{0.0, 30.0, 43.0, 50.0};

    bool operator==(const AcirTable&) const = default;

    double rejection_at(int channel_offset) const;
};

struct PathlossParams {
    double exponent = 2.75;
    double reference_loss_db = 47.86;  // free-space at 1 m, 5.9 GHz
    double tvws_offset_db = -21.33;    // carrier-frequency advantage of ~0.5 GHz

    bool operator==(const PathlossParams&) const = default;
};

/// Deterministic lognormal shadowing.  Draws are pure functions of
/// (seed, entity, channel, segment, epoch) so the field is identical no
/// matter in which order the simulation asks for values.  Vehicles re-draw
/// when they enter a segment (epoch = entry count); fixed receivers use
/// epoch 0 forever.
class ShadowingSampler {
  public:
    explicit ShadowingSampler(std::uint64_t seed) : seed_(seed) {}

    double draw_db(std::uint32_t entity_id, int channel_mhz, int segment_index,
                   std::uint32_t epoch, double sigma_db) const;

  private:
    std::uint64_t seed_;
};

/// Deterministic DTT power sample at road position x: piecewise-linear mean
/// plus the entity's current shadowing draw.  Returns -inf for unoccupied
/// channels.
double dtt_power_at(const DttField& field, const ShadowingSampler& shadow,
                    std::uint32_t entity_id, std::uint32_t epoch,
                    int channel_mhz, double x_m);

/// Aggregate DTT power leaking into `rx_channel_mhz`, summing every occupied
/// channel attenuated by the ACIR for its offset.  Linear-domain sum.
double effective_dtt_power(const DttField& field, const ShadowingSampler& shadow,
                           std::uint32_t entity_id, std::uint32_t epoch,
                           const std::vector<int>& channels_mhz, int rx_channel_mhz,
                           const AcirTable& acir, double x_m);

/// Log-distance pathloss; distance clamped to 1 m.
double v2v_rx_power(double tx_power_dbm, double distance_m,
                    const PathlossParams& pl, bool tvws_band);

/// SINR of a wanted signal against interferer powers (dBm, linear-summed),
/// noise, and - on TVWS - the DTT leakage floor.
double link_sinr(double wanted_dbm, const std::vector<double>& interferers_dbm,
                 double noise_floor_dbm, double dtt_eff_dbm);

/// Wanted-DTT to platoon-interference ratio at a fixed receiver, no noise
/// term.  interference_dbm is the ACIR-weighted sum already in dBm.
double dtt_sir(double wanted_dtt_dbm, double interference_dbm);

}  // namespace vdsa
