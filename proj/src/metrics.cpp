#include "vdsa/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "vdsa/errors.hpp"

namespace vdsa {

void Histogram::add(double v) {
    if (counts.empty()) return;
    long idx = static_cast<long>(std::floor((v - lo_db) / bin_db));
    idx = std::clamp<long>(idx, 0, static_cast<long>(counts.size()) - 1);
    ++counts[static_cast<std::size_t>(idx)];
    ++total;
}

void Histogram::merge(const Histogram& other) {
    if (counts.empty()) {
        *this = other;
        return;
    }
    if (&other == this) return;
    for (std::size_t i = 0; i < counts.size() && i < other.counts.size(); ++i)
        counts[i] += other.counts[i];
    total += other.total;
}

std::vector<double> Histogram::cdf() const {
    std::vector<double> out(counts.size(), 0.0);
    std::uint64_t run = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        run += counts[i];
        out[i] = total == 0 ? 0.0 : static_cast<double>(run) / static_cast<double>(total);
    }
    return out;
}

namespace {

bool kind_matches(MessageKind k, const std::string& kind) {
    if (kind == "both") return true;
    if (kind == "cam") return k == MessageKind::Cam;
    if (kind == "cacc") return k == MessageKind::Cacc;
    throw ValidationError("prr kind: expected cam, cacc, or both, got '" + kind + "'");
}

std::string fmt(double v, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
    return buf;
}

}  // namespace

std::map<int, double> leader_prr(const MetricsLog& log, int platoon_id,
                                 const std::string& kind) {
    std::uint64_t airs = 0;
    for (const TxEvent& tx : log.tx_events)
        if (tx.platoon_id == platoon_id && kind_matches(tx.kind, kind)) ++airs;
    if (airs == 0)
        throw EmptyLog("leader_prr: no leader transmissions for platoon " +
                       std::to_string(platoon_id));
    std::map<int, std::uint64_t> succ;
    for (const RxEvent& rx : log.rx_events) {
        if (rx.platoon_id != platoon_id || !kind_matches(rx.kind, kind)) continue;
        if (rx.success) ++succ[rx.follower_index];
    }
    std::map<int, double> out;
    for (const RxEvent& rx : log.rx_events)
        if (rx.platoon_id == platoon_id && kind_matches(rx.kind, kind))
            out.emplace(rx.follower_index, 0.0);
    for (auto& [idx, ratio] : out)
        ratio = static_cast<double>(succ.count(idx) ? succ[idx] : 0) /
                static_cast<double>(airs);
    return out;
}

int switch_count(const MetricsLog& log, int platoon_id) {
    int n = 0;
    for (const SwitchEvent& s : log.switch_events)
        if (s.platoon_id == platoon_id) ++n;
    return n;
}

std::map<int, SirCdf> sir_cdf(const MetricsLog& log) {
    std::map<int, SirCdf> out;
    for (const auto& [ch, stats] : log.sir_by_channel) {
        if (stats.total == 0) continue;
        SirCdf c;
        c.total = stats.total;
        c.cdf = stats.hist.cdf();
        c.edges_db.reserve(stats.hist.counts.size());
        for (std::size_t i = 0; i < stats.hist.counts.size(); ++i)
            c.edges_db.push_back(stats.hist.lo_db + (static_cast<double>(i) + 1.0) * stats.hist.bin_db);
        c.fraction_below_required =
            static_cast<double>(stats.below_required) / static_cast<double>(stats.total);
        out[ch] = std::move(c);
    }
    return out;
}

RunSummary summarize(const MetricsLog& log, const SimConfig& cfg) {
    RunSummary s;
    s.strategy = format_strategy(cfg.strategy);
    s.seed = cfg.seed;
    for (std::size_t p = 0; p < cfg.platoons.size(); ++p) {
        const int pid = static_cast<int>(p);
        try {
            s.prr[pid] = leader_prr(log, pid, "both");
            s.prr_cam[pid] = leader_prr(log, pid, "cam");
            s.prr_cacc[pid] = leader_prr(log, pid, "cacc");
        } catch (const EmptyLog&) {
            // leave empty maps for degenerate configs
        }
        s.switch_counts[pid] = switch_count(log, pid);
        std::uint64_t airs_both = 0;
        for (const TxEvent& tx : log.tx_events)
            if (tx.platoon_id == pid) ++airs_both;
        s.leader_airs[pid] = airs_both;
    }
    s.switch_trace = log.switch_events;
    s.sir_by_channel = log.sir_by_channel;
    s.sir_by_receiver_channel = log.sir_by_receiver_channel;
    const double duration_ms = cfg.sim_duration_s * 1000.0;
    for (const auto& [pid, by_ch] : log.residence_ms)
        for (const auto& [mhz, ms] : by_ch)
            s.residence_fraction[pid][mhz] = static_cast<double>(ms) / duration_ms;
    s.min_gap_m = log.min_gap_m;
    s.min_speed_mps = log.min_speed_mps;
    s.max_speed_mps = log.max_speed_mps;
    s.generated = log.generated;
    s.aired = log.aired;
    s.dropped = log.dropped;
    s.drop_rate = log.generated == 0
                      ? 0.0
                      : static_cast<double>(log.dropped) / static_cast<double>(log.generated);
    s.tvws_tx_us_in_sensing = log.tvws_tx_us_in_sensing;
    return s;
}

std::string prr_by_position_csv(const RunSummary& s) {
    std::ostringstream os;
    os << "platoon_id,follower_index,kind,prr\n";
    auto emit = [&](const std::map<int, std::map<int, double>>& m, const char* kind) {
        for (const auto& [pid, by_idx] : m)
            for (const auto& [idx, ratio] : by_idx)
                os << pid << ',' << idx << ',' << kind << ',' << fmt(ratio, 6) << '\n';
    };
    emit(s.prr_cam, "cam");
    emit(s.prr_cacc, "cacc");
    emit(s.prr, "both");
    return os.str();
}

std::string switch_trace_csv(const RunSummary& s) {
    std::ostringstream os;
    os << "time_s,platoon_id,old_channel_mhz,new_channel_mhz,head_distance_m\n";
    for (const SwitchEvent& e : s.switch_trace)
        os << fmt(e.t_ms / 1000.0, 3) << ',' << e.platoon_id << ',' << e.old_channel_mhz
           << ',' << e.new_channel_mhz << ',' << fmt(e.head_distance_m, 2) << '\n';
    return os.str();
}

std::string switch_counts_csv(const RunSummary& s) {
    std::ostringstream os;
    os << "platoon_id,count\n";
    for (const auto& [pid, n] : s.switch_counts) os << pid << ',' << n << '\n';
    return os.str();
}

std::string sir_samples_csv(const RunSummary& s) {
    std::ostringstream os;
    os << "receiver_id,channel_mhz,bin_low_db,count\n";
    for (const auto& [key, hist] : s.sir_by_receiver_channel) {
        for (std::size_t i = 0; i < hist.counts.size(); ++i) {
            if (hist.counts[i] == 0) continue;
            os << key.first << ',' << key.second << ','
               << fmt(hist.lo_db + static_cast<double>(i) * hist.bin_db, 2) << ','
               << hist.counts[i] << '\n';
        }
    }
    return os.str();
}

std::string run_summary_csv(const RunSummary& s) {
    std::ostringstream os;
    os << "key,value\n";
    os << "strategy," << s.strategy << '\n';
    os << "seed," << s.seed << '\n';
    os << "generated," << s.generated << '\n';
    os << "aired," << s.aired << '\n';
    os << "dropped," << s.dropped << '\n';
    os << "drop_rate," << fmt(s.drop_rate, 6) << '\n';
    os << "tvws_tx_us_in_sensing," << s.tvws_tx_us_in_sensing << '\n';
    for (std::size_t p = 0; p < s.min_gap_m.size(); ++p)
        os << "min_gap_m_p" << p << ',' << fmt(s.min_gap_m[p], 3) << '\n';
    for (std::size_t p = 0; p < s.min_speed_mps.size(); ++p)
        os << "min_speed_mps_p" << p << ',' << fmt(s.min_speed_mps[p], 3) << '\n';
    for (std::size_t p = 0; p < s.max_speed_mps.size(); ++p)
        os << "max_speed_mps_p" << p << ',' << fmt(s.max_speed_mps[p], 3) << '\n';
    for (const auto& [pid, n] : s.switch_counts)
        os << "switch_count_p" << pid << ',' << n << '\n';
    for (const auto& [pid, by_mhz] : s.residence_fraction)
        for (const auto& [mhz, frac] : by_mhz)
            os << "residence_p" << pid << '_' << mhz << ',' << fmt(frac, 6) << '\n';
    for (const auto& [ch, stats] : s.sir_by_channel) {
        const double frac = stats.total == 0 ? 0.0
                                             : static_cast<double>(stats.below_required) /
                                                   static_cast<double>(stats.total);
        os << "sir_below_required_" << ch << ',' << fmt(frac, 6) << '\n';
        os << "sir_samples_" << ch << ',' << stats.total << '\n';
    }
    return os.str();
}

MeanCi mean_ci(const std::vector<double>& xs) {
    MeanCi m;
    m.n = xs.size();
    if (xs.empty()) return m;
    m.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    if (xs.size() < 2) return m;
    double ss = 0.0;
    for (double x : xs) ss += (x - m.mean) * (x - m.mean);
    const double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    m.half_width_95 = 1.959964 * sd / std::sqrt(static_cast<double>(xs.size()));
    return m;
}

namespace {

std::vector<double> ranks_of(const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

}  // namespace

SpearmanResult spearman(const std::vector<double>& x, const std::vector<double>& y) {
    SpearmanResult r;
    r.n = std::min(x.size(), y.size());
    if (r.n < 3) return r;
    const auto rx = ranks_of(std::vector<double>(x.begin(), x.begin() + static_cast<long>(r.n)));
    const auto ry = ranks_of(std::vector<double>(y.begin(), y.begin() + static_cast<long>(r.n)));
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < r.n; ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= static_cast<double>(r.n);
    my /= static_cast<double>(r.n);
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < r.n; ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx <= 0 || syy <= 0) return r;
    r.rho = sxy / std::sqrt(sxx * syy);
    const double denom = 1.0 - r.rho * r.rho;
    if (denom <= 0) {
        r.p_one_sided = r.rho > 0 ? 0.0 : 1.0;
        return r;
    }
    // t statistic with a normal tail approximation; effects under test are
    // far from the boundary so the approximation error is immaterial.
    const double t = r.rho * std::sqrt(static_cast<double>(r.n - 2) / denom);
    r.p_one_sided = 0.5 * std::erfc(t / std::sqrt(2.0));
    return r;
}

double cdf_sup_norm(const Histogram& a, const Histogram& b) {
    const auto ca = a.cdf();
    const auto cb = b.cdf();
    double sup = 0.0;
    for (std::size_t i = 0; i < std::min(ca.size(), cb.size()); ++i)
        sup = std::max(sup, std::abs(ca[i] - cb[i]));
    return sup;
}

}  // namespace vdsa
