#include "vdsa/propagation.hpp"

#include <cmath>

#include "vdsa/errors.hpp"
#include "vdsa/rng.hpp"

namespace vdsa {

int DttField::segment_index(int channel_mhz, double x_m) const {
    auto it = segments_by_channel_mhz.find(channel_mhz);
    if (it == segments_by_channel_mhz.end()) return -1;
    const auto& segs = it->second;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        if (x_m >= segs[i].start_m && x_m < segs[i].end_m) return static_cast<int>(i);
    }
    // Road end belongs to the last segment.
    if (!segs.empty() && x_m == segs.back().end_m) return static_cast<int>(segs.size()) - 1;
    return -1;
}

double AcirTable::rejection_at(int channel_offset) const {
    const std::size_t off = static_cast<std::size_t>(std::abs(channel_offset));
    if (rejection_db.empty()) return 0.0;
    if (off >= rejection_db.size()) return rejection_db.back();
    return rejection_db[off];
}

double ShadowingSampler::draw_db(std::uint32_t entity_id, int channel_mhz,
                                 int segment_index, std::uint32_t epoch,
                                 double sigma_db) const {
    if (sigma_db <= 0.0) return 0.0;
    std::uint64_t key = seed_;
    key = hash_u64(key, 0x5ce9u);  // domain tag: shadowing
    key = hash_u64(key, entity_id);
    key = hash_u64(key, static_cast<std::uint64_t>(channel_mhz));
    key = hash_u64(key, static_cast<std::uint64_t>(segment_index));
    key = hash_u64(key, epoch);
    return sigma_db * counter_gaussian(key);
}

double dtt_power_at(const DttField& field, const ShadowingSampler& shadow,
                    std::uint32_t entity_id, std::uint32_t epoch,
                    int channel_mhz, double x_m) {
    auto it = field.segments_by_channel_mhz.find(channel_mhz);
    if (it == field.segments_by_channel_mhz.end()) return kNegInfDbm;
    const int idx = field.segment_index(channel_mhz, x_m);
    if (idx < 0)
        throw ValidationError("dtt_power_at: position " + std::to_string(x_m) +
                              " outside field tiling of channel " +
                              std::to_string(channel_mhz));
    const DttSegment& s = it->second[static_cast<std::size_t>(idx)];
    const double mean = s.slope_db_per_m * x_m + s.intercept_dbm;
    return mean + shadow.draw_db(entity_id, channel_mhz, idx, epoch, s.shadow_sigma_db);
}

double effective_dtt_power(const DttField& field, const ShadowingSampler& shadow,
                           std::uint32_t entity_id, std::uint32_t epoch,
                           const std::vector<int>& channels_mhz, int rx_channel_mhz,
                           const AcirTable& acir, double x_m) {
    int rx_index = -1;
    for (std::size_t i = 0; i < channels_mhz.size(); ++i)
        if (channels_mhz[i] == rx_channel_mhz) rx_index = static_cast<int>(i);
    double sum_mw = 0.0;
    for (std::size_t i = 0; i < channels_mhz.size(); ++i) {
        const int ch = channels_mhz[i];
        if (!field.occupied(ch)) continue;
        const double p = dtt_power_at(field, shadow, entity_id, epoch, ch, x_m);
        const int offset = rx_index >= 0 ? static_cast<int>(i) - rx_index
                                         : (ch - rx_channel_mhz) / 8;
        sum_mw += dbm_to_mw(p - acir.rejection_at(offset));
    }
    return mw_to_dbm(sum_mw);
}

double v2v_rx_power(double tx_power_dbm, double distance_m,
                    const PathlossParams& pl, bool tvws_band) {
    const double d = distance_m < 1.0 ? 1.0 : distance_m;
    double loss = pl.reference_loss_db + 10.0 * pl.exponent * std::log10(d);
    if (tvws_band) loss += pl.tvws_offset_db;
    return tx_power_dbm - loss;
}

double link_sinr(double wanted_dbm, const std::vector<double>& interferers_dbm,
                 double noise_floor_dbm, double dtt_eff_dbm) {
    double denom_mw = dbm_to_mw(noise_floor_dbm) + dbm_to_mw(dtt_eff_dbm);
    for (double p : interferers_dbm) denom_mw += dbm_to_mw(p);
    return wanted_dbm - mw_to_dbm(denom_mw);
}

double dtt_sir(double wanted_dtt_dbm, double interference_dbm) {
    return wanted_dtt_dbm - interference_dbm;
}

}  // namespace vdsa
