#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "vdsa/config.hpp"

namespace vdsa {

enum class Phase { Sensing, Transmission };

/// Phase of the duty cycle at time t (ms).  Cycle starts with sensing.
Phase phase_of(std::int64_t t_ms, const DutyCycleParams& d = DutyCycleParams{});

/// Cycle number within the current decision interval, 0-based.
int cycle_in_decision(std::int64_t t_ms, const DutyCycleParams& d);

/// True at t = k * cycles_per_decision * cycle_ms.
bool at_decision_boundary(std::int64_t t_ms, const DutyCycleParams& d);

/// Round-robin sensing tasks: vehicle i senses channel (i + cycle + round)
/// mod n_channels during the given cycle's sensing phase.
int assigned_channel(int vehicle_index, int cycle, int decision_round, int n_channels);

/// Sensed-energy reports for one decision interval of one platoon.
/// reports_dbm[cycle][channel] holds every report (dBm) for that cell.
class EnergyLedger {
  public:
    EnergyLedger(int cycles, int n_channels, int current_channel_index,
                 double threshold_dbm, double cost_db);

    /// Appends one report.  During a transmission phase only the current
    /// channel may be measured; anything else throws PhaseViolation.
    void append(int cycle, int channel_index, double energy_dbm, Phase phase);

    void clear();

    int cycles() const { return static_cast<int>(reports_dbm_.size()); }
    int n_channels() const { return n_channels_; }
    int current_channel() const { return current_channel_; }
    void set_current_channel(int idx) { current_channel_ = idx; }
    double threshold_dbm() const { return threshold_dbm_; }
    double cost_db() const { return cost_db_; }
    const std::vector<double>& cell(int cycle, int channel_index) const;

  private:
    std::vector<std::vector<std::vector<double>>> reports_dbm_;
    int n_channels_;
    int current_channel_;
    double threshold_dbm_;
    double cost_db_;
};

/// Per-channel average over every report from every vehicle and cycle.
/// Linear power domain by default (dB domain behind the config flag);
/// channels with no reports are absent.
std::vector<std::optional<double>> fuse_and_average(const EnergyLedger& ledger,
                                                    bool average_in_db = false);

struct Decision {
    bool switch_channel = false;
    int target_index = -1;  // valid when switch_channel
};

/// Cost-biased switch rule: leave the current channel for candidate i only
/// when the current reading exceeds the candidate by more than the cost C
/// and the candidate is admissible (E_i <= T).  Larger C = stickier.
Decision switching_decision(double e_ch_dbm, double e_i_dbm, int i_index,
                            double cost_db, double threshold_dbm);

/// Candidate = argmin of the known averages (tie -> lowest index), then one
/// switching_decision against the current channel.  Returns the channel
/// index to use next interval.  Unknown current reading -> stay.
int select_channel(const std::vector<std::optional<double>>& averages_dbm,
                   int current_index, double cost_db, double threshold_dbm);

}  // namespace vdsa
