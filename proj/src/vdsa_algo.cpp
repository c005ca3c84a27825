#include "vdsa/vdsa_algo.hpp"

#include <string>

#include "vdsa/errors.hpp"
#include "vdsa/units.hpp"

namespace vdsa {

Phase phase_of(std::int64_t t_ms, const DutyCycleParams& d) {
    const std::int64_t u = t_ms % d.cycle_ms;
    return u < d.sensing_ms ? Phase::Sensing : Phase::Transmission;
}

int cycle_in_decision(std::int64_t t_ms, const DutyCycleParams& d) {
    return static_cast<int>((t_ms / d.cycle_ms) % d.cycles_per_decision);
}

bool at_decision_boundary(std::int64_t t_ms, const DutyCycleParams& d) {
    return t_ms % (static_cast<std::int64_t>(d.cycles_per_decision) * d.cycle_ms) == 0;
}

int assigned_channel(int vehicle_index, int cycle, int decision_round, int n_channels) {
    return (vehicle_index + cycle + decision_round) % n_channels;
}

EnergyLedger::EnergyLedger(int cycles, int n_channels, int current_channel_index,
                           double threshold_dbm, double cost_db)
    : reports_dbm_(static_cast<std::size_t>(cycles),
                   std::vector<std::vector<double>>(static_cast<std::size_t>(n_channels))),
      n_channels_(n_channels),
      current_channel_(current_channel_index),
      threshold_dbm_(threshold_dbm),
      cost_db_(cost_db) {}

void EnergyLedger::append(int cycle, int channel_index, double energy_dbm, Phase phase) {
    if (phase == Phase::Transmission && channel_index != current_channel_)
        throw PhaseViolation("transmission phase permits sensing only channel " +
                             std::to_string(current_channel_) + ", got " +
                             std::to_string(channel_index));
    reports_dbm_.at(static_cast<std::size_t>(cycle))
        .at(static_cast<std::size_t>(channel_index))
        .push_back(energy_dbm);
}

void EnergyLedger::clear() {
    for (auto& cycle : reports_dbm_)
        for (auto& cell : cycle) cell.clear();
}

const std::vector<double>& EnergyLedger::cell(int cycle, int channel_index) const {
    return reports_dbm_.at(static_cast<std::size_t>(cycle))
        .at(static_cast<std::size_t>(channel_index));
}

std::vector<std::optional<double>> fuse_and_average(const EnergyLedger& ledger,
                                                    bool average_in_db) {
    std::vector<std::optional<double>> out(static_cast<std::size_t>(ledger.n_channels()));
    for (int ch = 0; ch < ledger.n_channels(); ++ch) {
        double sum = 0.0;
        long n = 0;
        for (int cy = 0; cy < ledger.cycles(); ++cy) {
            for (double dbm : ledger.cell(cy, ch)) {
                sum += average_in_db ? dbm : dbm_to_mw(dbm);
                ++n;
            }
        }
        if (n == 0) continue;
        const double avg = sum / static_cast<double>(n);
        out[static_cast<std::size_t>(ch)] = average_in_db ? avg : mw_to_dbm(avg);
    }
    return out;
}

Decision switching_decision(double e_ch_dbm, double e_i_dbm, int i_index,
                            double cost_db, double threshold_dbm) {
    Decision d;
    if (e_ch_dbm > e_i_dbm + cost_db && e_i_dbm <= threshold_dbm) {
        d.switch_channel = true;
        d.target_index = i_index;
    }
    return d;
}

int select_channel(const std::vector<std::optional<double>>& averages_dbm,
                   int current_index, double cost_db, double threshold_dbm) {
    int best = -1;
    for (std::size_t i = 0; i < averages_dbm.size(); ++i) {
        if (!averages_dbm[i]) continue;
        if (best < 0 || *averages_dbm[i] < *averages_dbm[static_cast<std::size_t>(best)])
            best = static_cast<int>(i);
    }
    if (best < 0) return current_index;
    const auto& current = averages_dbm.at(static_cast<std::size_t>(current_index));
    if (!current) return current_index;
    const Decision d = switching_decision(*current, *averages_dbm[static_cast<std::size_t>(best)],
                                          best, cost_db, threshold_dbm);
    return d.switch_channel ? d.target_index : current_index;
}

}  // namespace vdsa
