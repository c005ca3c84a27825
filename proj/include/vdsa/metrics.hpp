#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vdsa/config.hpp"
#include "vdsa/mac.hpp"

namespace vdsa {

struct TxEvent {
    std::int64_t t_us = 0;
    std::uint32_t vehicle = 0;
    int platoon_id = -1;
    MessageKind kind = MessageKind::Cam;
    Band band = Band::Cch;
    int channel_mhz = 0;
};

struct RxEvent {
    std::int64_t t_us = 0;
    std::uint32_t tx_vehicle = 0;
    std::uint32_t rx_vehicle = 0;
    int platoon_id = -1;
    int follower_index = 0;
    MessageKind kind = MessageKind::Cam;
    bool success = false;
};

struct SwitchEvent {
    std::int64_t t_ms = 0;
    int platoon_id = -1;
    int old_channel_mhz = 0;
    int new_channel_mhz = 0;
    double head_distance_m = 0.0;  // inter-platoon head spacing at the event
};

/// Fixed-width histogram over dB values; out-of-range samples clamp to the
/// edge bins so totals are conserved.
struct Histogram {
    double lo_db = -20.0;
    double bin_db = 0.05;
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;

    Histogram() = default;
    Histogram(double lo, double bin, int nbins)
        : lo_db(lo), bin_db(bin), counts(static_cast<std::size_t>(nbins), 0) {}
    void add(double v);
    void merge(const Histogram& other);
    /// Empirical CDF at each bin upper edge.
    std::vector<double> cdf() const;
};

struct SirChannelStats {
    Histogram hist{0.0, 0.05, 2800};  // 0..140 dB
    std::uint64_t below_required = 0;
    std::uint64_t total = 0;
};

/// Append-only record of one run.  Leader-origin traffic is logged as
/// events; the high-volume SIR samples fold into per-channel histograms
/// (per receiver and pooled).
struct MetricsLog {
    std::vector<TxEvent> tx_events;  // leader-origin only
    std::vector<RxEvent> rx_events;  // leader-origin only
    std::vector<SwitchEvent> switch_events;
    std::map<int, SirChannelStats> sir_by_channel;                      // pooled
    std::map<std::pair<int, int>, Histogram> sir_by_receiver_channel;   // 0.25 dB bins
    // Counters
    std::map<int, std::map<int, std::int64_t>> residence_ms;  // platoon -> channel_mhz -> ms
    std::int64_t tvws_tx_us_total = 0;
    std::int64_t tvws_tx_us_in_sensing = 0;  // duty-cycle audit; must stay 0
    std::uint64_t generated = 0, aired = 0, dropped = 0;
    std::vector<double> min_gap_m;        // per platoon, bumper-to-bumper
    std::vector<double> min_speed_mps;    // per platoon over followers
    std::vector<double> max_speed_mps;
};

/// Per-follower leader packet reception ratio.  kind: "cam", "cacc", "both".
/// Throws EmptyLog when the platoon has no leader transmissions.
std::map<int, double> leader_prr(const MetricsLog& log, int platoon_id,
                                 const std::string& kind = "both");

int switch_count(const MetricsLog& log, int platoon_id);

struct SirCdf {
    std::vector<double> edges_db;
    std::vector<double> cdf;
    double fraction_below_required = 0.0;
    std::uint64_t total = 0;
};

/// Empirical SIR CDF per occupied DTT channel plus the fraction of samples
/// at or below the protection target.
std::map<int, SirCdf> sir_cdf(const MetricsLog& log);

/// Flat per-run digest used by the experiment runner and CSV writers.
struct RunSummary {
    std::string strategy;
    std::uint64_t seed = 0;
    std::map<int, std::map<int, double>> prr;  // platoon -> follower_index -> ratio (kind both)
    std::map<int, std::map<int, double>> prr_cam;
    std::map<int, std::map<int, double>> prr_cacc;
    std::map<int, std::uint64_t> leader_airs;  // platoon -> leader transmissions
    std::vector<SwitchEvent> switch_trace;
    std::map<int, int> switch_counts;               // platoon -> count
    std::map<int, SirChannelStats> sir_by_channel;  // pooled per DTT channel
    std::map<std::pair<int, int>, Histogram> sir_by_receiver_channel;
    std::map<int, std::map<int, double>> residence_fraction;  // platoon -> mhz -> [0,1]
    std::vector<double> min_gap_m;
    std::vector<double> min_speed_mps;
    std::vector<double> max_speed_mps;
    double drop_rate = 0.0;
    std::uint64_t generated = 0, aired = 0, dropped = 0;
    std::int64_t tvws_tx_us_in_sensing = 0;
};

RunSummary summarize(const MetricsLog& log, const SimConfig& cfg);

// ---- CSV writers (stable, locale-free formatting; golden-file tested) ----
std::string prr_by_position_csv(const RunSummary& s);
std::string switch_trace_csv(const RunSummary& s);
std::string switch_counts_csv(const RunSummary& s);
std::string sir_samples_csv(const RunSummary& s);
std::string run_summary_csv(const RunSummary& s);

// ---- Small statistics toolkit ----
struct MeanCi {
    double mean = 0.0;
    double half_width_95 = 0.0;  // normal approximation
    std::size_t n = 0;
};
MeanCi mean_ci(const std::vector<double>& xs);

/// Spearman rank correlation (average ranks on ties) and the one-sided
/// p-value for rho > 0 from the t approximation.
struct SpearmanResult {
    double rho = 0.0;
    double p_one_sided = 1.0;
    std::size_t n = 0;
};
SpearmanResult spearman(const std::vector<double>& x, const std::vector<double>& y);

/// Sup-norm distance between two histograms' CDFs (must share binning).
double cdf_sup_norm(const Histogram& a, const Histogram& b);

}  // namespace vdsa
