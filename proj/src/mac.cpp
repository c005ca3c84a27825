#include "vdsa/mac.hpp"

#include <cmath>

#include "vdsa/propagation.hpp"
#include "vdsa/units.hpp"

namespace vdsa {

CsmaResult csma_attempt(double sensed_power_dbm, double sense_threshold_dbm,
                        std::int64_t age_us, std::int64_t period_us,
                        int contention_window_slots, std::mt19937_64& rng) {
    CsmaResult r;
    if (age_us > period_us) {
        r.action = CsmaAction::Drop;
        return r;
    }
    if (sensed_power_dbm > sense_threshold_dbm) {
        r.action = CsmaAction::Backoff;
        std::uniform_int_distribution<int> u(1, contention_window_slots);
        r.backoff_slots = u(rng);
        return r;
    }
    r.action = CsmaAction::TransmitNow;
    return r;
}

bool receive_success(double min_sinr_db, double threshold_db) {
    return min_sinr_db >= threshold_db;
}

double sense_energy(Band band, int channel_index,
                    const std::vector<ActiveTx>& active,
                    const std::vector<double>& distances_m,
                    const PathlossParams& pl, const AcirTable& acir,
                    double dtt_eff_dbm, double noise_floor_dbm) {
    double sum_mw = dbm_to_mw(noise_floor_dbm);
    if (band == Band::Tvws) sum_mw += dbm_to_mw(dtt_eff_dbm);
    for (std::size_t i = 0; i < active.size(); ++i) {
        const ActiveTx& tx = active[i];
        if (tx.band != band) continue;
        double p = v2v_rx_power(tx.tx_power_dbm, distances_m[i], pl, band == Band::Tvws);
        if (band == Band::Tvws)
            p -= acir.rejection_at(tx.channel_index - channel_index);
        sum_mw += dbm_to_mw(p);
    }
    return mw_to_dbm(sum_mw);
}

}  // namespace vdsa
