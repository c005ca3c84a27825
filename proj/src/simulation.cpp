#include "vdsa/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <queue>
#include <vector>

#include "vdsa/errors.hpp"
#include "vdsa/mac.hpp"
#include "vdsa/mobility.hpp"
#include "vdsa/propagation.hpp"
#include "vdsa/rng.hpp"
#include "vdsa/units.hpp"
#include "vdsa/vdsa_algo.hpp"

namespace vdsa {

namespace {

enum class EvType : std::uint8_t { Gen, TryTx, TxEnd };

struct Event {
    std::int64_t t_us;
    std::uint64_t seq;
    EvType type;
    std::uint32_t vehicle;
    std::uint64_t aux;  // Gen: kind, TryTx: msg slot, TxEnd: tx_id
};

struct EventAfter {
    bool operator()(const Event& a, const Event& b) const {
        return a.t_us != b.t_us ? a.t_us > b.t_us : a.seq > b.seq;
    }
};

struct ShadowEpoch {
    int seg = -1;
    std::uint32_t entry = 0;
};

struct SensingAcc {
    int channel_index = -1;
    double sum_mw = 0.0;
    int n = 0;
};

// Exact time-weighted energy integration of the leader's current channel
// during transmission windows, restricted to spans with no own-platoon
// transmission on air.
struct WindowProbe {
    bool active = false;
    std::int64_t last_us = 0;
    double base_mw = 0.0;  // noise + DTT leakage at the leader, cached per tick
    double silent_mw_us = 0.0;
    std::int64_t silent_us = 0;
};

struct PlatoonCtl {
    int ch_idx = 0;
    int round = 0;
    std::int64_t blackout_from_us = -1;
    std::int64_t blackout_until_us = -1;
    std::vector<SensingAcc> acc;
    std::vector<SensingReport> pending;  // per member slot; [0] unused
    WindowProbe probe;
    std::vector<std::uint64_t> queue;  // msg slots awaiting a window
    int own_active = 0;
    std::vector<EnergyLedger> ledger;  // size 1 under Bumblebee
};

class Engine {
  public:
    Engine(const SimConfig& cfg, const RunOptions& opt)
        : cfg_(cfg),
          opt_(opt),
          world_(build_world(cfg)),
          shadow_(derive_seed(cfg.seed, RngStream::Shadowing, 0)),
          mac_rng_(make_engine(cfg.seed, RngStream::Mac, 0)) {
        plan_ = cfg.channel_plan.tvws_center_freqs_mhz;
        for (std::size_t i = 0; i < plan_.size(); ++i)
            if (cfg.dtt_field.occupied(plan_[i]))
                occupied_.push_back(static_cast<int>(i));
        tick_us_ = static_cast<std::int64_t>(cfg.tick_ms) * 1000;
        cycle_us_ = static_cast<std::int64_t>(cfg.duty.cycle_ms) * 1000;
        sensing_us_ = static_cast<std::int64_t>(cfg.duty.sensing_ms) * 1000;
        end_us_ = static_cast<std::int64_t>(std::llround(cfg.sim_duration_s * 1e6));
        duty_cycled_ = cfg.strategy.kind == StrategyKind::Bumblebee;
        use_tvws_ = cfg.strategy.kind != StrategyKind::CchOnly;
        init_platoons();
        init_receiver_field();
        init_schedules();
        log_.min_gap_m.assign(cfg.platoons.size(), 1e18);
        log_.min_speed_mps.assign(cfg.platoons.size(), 1e18);
        log_.max_speed_mps.assign(cfg.platoons.size(), -1e18);
    }

    RunResult run() {
        const std::int64_t n_ticks = end_us_ / tick_us_;
        for (std::int64_t k = 0; k < n_ticks; ++k) {
            const std::int64_t t_ms = k * cfg_.tick_ms;
            duty_boundaries(t_ms);
            maybe_dump_trajectory(t_ms);
            step_world(world_, cfg_, t_ms);
            post_step_updates(t_ms);
            drain_events((k + 1) * tick_us_);
        }
        finish_active();
        RunResult out;
        out.summary = summarize(log_, cfg_);
        out.log = std::move(log_);
        return out;
    }

  private:
    // ---------- init ----------
    void init_platoons() {
        ctl_.resize(cfg_.platoons.size());
        for (std::size_t p = 0; p < ctl_.size(); ++p) {
            PlatoonCtl& c = ctl_[p];
            c.ch_idx = cfg_.channel_plan.initial_tvws_channel;
            c.acc.assign(world_.platoon_members[p].size(), SensingAcc{});
            c.pending.assign(world_.platoon_members[p].size(), SensingReport{});
            if (duty_cycled_)
                c.ledger.emplace_back(cfg_.duty.cycles_per_decision,
                                      static_cast<int>(plan_.size()), c.ch_idx,
                                      cfg_.duty.threshold_dbm, cfg_.strategy.cost_db);
        }
        epochs_.assign(world_.vehicles.size(), {});
        for (const auto& members : world_.platoon_members)
            for (std::uint32_t id : members) {
                epochs_[id].assign(occupied_.size(), ShadowEpoch{});
                for (std::size_t oi = 0; oi < occupied_.size(); ++oi)
                    epochs_[id][oi].seg = cfg_.dtt_field.segment_index(
                        plan_[static_cast<std::size_t>(occupied_[oi])],
                        world_.vehicles[id].position_m);
            }
    }

    void init_receiver_field() {
        rx_wanted_dbm_.assign(world_.receivers.size(),
                              std::vector<double>(occupied_.size(), kNegInfDbm));
        for (std::size_t r = 0; r < world_.receivers.size(); ++r)
            for (std::size_t oi = 0; oi < occupied_.size(); ++oi) {
                const int mhz = plan_[static_cast<std::size_t>(occupied_[oi])];
                rx_wanted_dbm_[r][oi] = dtt_power_at(
                    cfg_.dtt_field, shadow_,
                    10000u + static_cast<std::uint32_t>(world_.receivers[r].spec.id), 0,
                    mhz, world_.receivers[r].x);
            }
    }

    void init_schedules() {
        const std::int64_t cam_bg_us =
            static_cast<std::int64_t>(cfg_.messaging.cam_period_background_ms) * 1000;
        const std::int64_t cam_pl_us =
            static_cast<std::int64_t>(cfg_.messaging.cam_period_platoon_ms) * 1000;
        const std::int64_t cacc_us =
            static_cast<std::int64_t>(cfg_.messaging.cacc_period_ms) * 1000;
        const std::uint64_t base = derive_seed(cfg_.seed, RngStream::Mac, 1);
        for (const VehicleState& v : world_.vehicles) {
            if (v.role == Role::VirtualLead) continue;
            if (v.role == Role::Background) {
                const std::int64_t off = static_cast<std::int64_t>(
                    counter_uniform(hash_u64(base, v.id)) * static_cast<double>(cam_bg_us));
                push_event(off, EvType::Gen, v.id,
                           static_cast<std::uint64_t>(MessageKind::Cam));
            } else {
                const std::int64_t off = static_cast<std::int64_t>(
                    counter_uniform(hash_u64(base, v.id)) * static_cast<double>(cam_pl_us));
                push_event(off, EvType::Gen, v.id,
                           static_cast<std::uint64_t>(MessageKind::Cam));
                // CACC interleaved half a period after the CAM so the combined
                // per-vehicle rate forms an even comb.
                const std::int64_t cacc_off = (off + cacc_us / 2) % cacc_us;
                push_event(cacc_off, EvType::Gen, v.id,
                           static_cast<std::uint64_t>(MessageKind::Cacc));
            }
        }
    }

    // ---------- shared helpers ----------
    void push_event(std::int64_t t_us, EvType type, std::uint32_t vehicle,
                    std::uint64_t aux) {
        events_.push(Event{t_us, seq_++, type, vehicle, aux});
    }

    std::int64_t window_start(std::int64_t t_us) const {
        return (t_us / cycle_us_) * cycle_us_ + sensing_us_;
    }
    std::int64_t window_end(std::int64_t t_us) const {
        return (t_us / cycle_us_) * cycle_us_ + cycle_us_;
    }
    std::int64_t next_window_open(std::int64_t t_us) const {
        const std::int64_t cur = window_start(t_us);
        return t_us < cur ? cur : cur + cycle_us_;
    }

    bool tvws_eligible(const PlatoonCtl& c, std::int64_t t_us) const {
        if (!duty_cycled_) return true;
        if (phase_of(t_us / 1000, cfg_.duty) != Phase::Transmission) return false;
        if (t_us < c.blackout_until_us) return false;
        return t_us + cfg_.radio.airtime_us <= window_end(t_us);
    }

    double dtt_eff_mw(std::uint32_t vehicle, int target_idx) const {
        double sum = 0.0;
        const auto& eps = epochs_[vehicle];
        for (std::size_t oi = 0; oi < occupied_.size(); ++oi) {
            const int idx = occupied_[oi];
            const int mhz = plan_[static_cast<std::size_t>(idx)];
            const std::uint32_t entry = oi < eps.size() ? eps[oi].entry : 0;
            const double p = dtt_power_at(cfg_.dtt_field, shadow_, vehicle,
                                          entry, mhz,
                                          world_.vehicles[vehicle].position_m);
            sum += dbm_to_mw(p - cfg_.acir.rejection_at(idx - target_idx));
        }
        return sum;
    }

    double coupled_power_mw(const ActiveTx& tx, std::uint32_t at_vehicle, Band band,
                            int channel_idx) const {
        if (tx.band != band) return 0.0;
        const double d = vehicle_distance(world_, tx.vehicle, at_vehicle);
        double p = v2v_rx_power(tx.tx_power_dbm, d, cfg_.radio.v2v_pathloss,
                                band == Band::Tvws);
        if (band == Band::Tvws)
            p -= cfg_.acir.rejection_at(tx.channel_index - channel_idx);
        return dbm_to_mw(p);
    }

    double sensed_power_dbm(std::uint32_t vehicle, Band band, int channel_idx) const {
        double sum = dbm_to_mw(cfg_.radio.noise_floor_dbm);
        if (band == Band::Tvws) sum += dtt_eff_mw(vehicle, channel_idx);
        for (const ActiveTx& tx : active_) {
            if (tx.vehicle == vehicle) continue;
            sum += coupled_power_mw(tx, vehicle, band, channel_idx);
        }
        return mw_to_dbm(sum);
    }

    // ---------- duty-cycle boundary machinery ----------
    void duty_boundaries(std::int64_t t_ms) {
        if (!duty_cycled_) return;
        const std::int64_t t_us = t_ms * 1000;
        const bool cycle_start = t_ms % cfg_.duty.cycle_ms == 0;
        const bool window_open = t_ms % cfg_.duty.cycle_ms == cfg_.duty.sensing_ms;

        if (cycle_start && t_ms > 0) {
            for (std::size_t p = 0; p < ctl_.size(); ++p) close_window(ctl_[p], t_us);
            if (at_decision_boundary(t_ms, cfg_.duty)) apply_decisions(t_ms);
        }
        if (cycle_start) {
            const int cyc = cycle_in_decision(t_ms, cfg_.duty);
            for (std::size_t p = 0; p < ctl_.size(); ++p) {
                PlatoonCtl& c = ctl_[p];
                for (std::size_t i = 0; i < c.acc.size(); ++i)
                    c.acc[i] = SensingAcc{
                        assigned_channel(static_cast<int>(i), cyc, c.round,
                                         static_cast<int>(plan_.size())),
                        0.0, 0};
            }
        }
        if (window_open) {
            for (std::size_t p = 0; p < ctl_.size(); ++p) {
                PlatoonCtl& c = ctl_[p];
                finalize_sensing(c, t_ms);
                open_window(c, t_us);
                release_queue(c, t_us);
            }
        }
    }

    void finalize_sensing(PlatoonCtl& c, std::int64_t t_ms) {
        const int cyc = cycle_in_decision(t_ms, cfg_.duty);
        for (std::size_t i = 0; i < c.acc.size(); ++i) {
            SensingAcc& a = c.acc[i];
            if (a.n == 0) continue;
            SensingReport r;
            r.cycle = cyc;
            r.channel_index = a.channel_index;
            r.energy_dbm = mw_to_dbm(a.sum_mw / a.n);
            r.valid = true;
            if (i == 0)
                c.ledger[0].append(r.cycle, r.channel_index, r.energy_dbm, Phase::Sensing);
            else
                c.pending[i] = r;  // rides the follower's next CACC message
            a.n = 0;
            a.sum_mw = 0.0;
        }
    }

    void open_window(PlatoonCtl& c, std::int64_t t_us) {
        if (!cfg_.duty.include_window_self_samples) return;
        c.probe.active = true;
        c.probe.last_us = t_us;
        c.probe.silent_mw_us = 0.0;
        c.probe.silent_us = 0;
        const std::uint32_t leader = leader_of(c);
        c.probe.base_mw = dbm_to_mw(cfg_.radio.noise_floor_dbm) + dtt_eff_mw(leader, c.ch_idx);
    }

    void close_window(PlatoonCtl& c, std::int64_t t_us) {
        if (!c.probe.active) return;
        probe_flush(c, t_us);
        c.probe.active = false;
        if (c.probe.silent_us > 0) {
            const int cyc = cycle_in_decision(t_us / 1000 - 1, cfg_.duty);
            c.ledger[0].append(cyc, c.ch_idx,
                               mw_to_dbm(c.probe.silent_mw_us /
                                         static_cast<double>(c.probe.silent_us)),
                               Phase::Transmission);
        }
    }

    void probe_flush(PlatoonCtl& c, std::int64_t now_us) {
        if (!c.probe.active || now_us <= c.probe.last_us) return;
        if (c.own_active == 0) {
            double p = c.probe.base_mw;
            const std::uint32_t leader = leader_of(c);
            for (const ActiveTx& tx : active_)
                p += coupled_power_mw(tx, leader, Band::Tvws, c.ch_idx);
            const double span = static_cast<double>(now_us - c.probe.last_us);
            c.probe.silent_mw_us += p * span;
            c.probe.silent_us += now_us - c.probe.last_us;
        }
        c.probe.last_us = now_us;
    }

    void flush_all_probes(std::int64_t now_us) {
        for (PlatoonCtl& c : ctl_) probe_flush(c, now_us);
    }

    std::uint32_t leader_of(const PlatoonCtl& c) const {
        const std::size_t p = static_cast<std::size_t>(&c - ctl_.data());
        return world_.platoon_members[p][0];
    }

    void apply_decisions(std::int64_t t_ms) {
        for (std::size_t p = 0; p < ctl_.size(); ++p) {
            PlatoonCtl& c = ctl_[p];
            const auto averages = fuse_and_average(c.ledger[0], cfg_.duty.average_in_db);
            const int next =
                select_channel(averages, c.ch_idx, cfg_.strategy.cost_db,
                               cfg_.duty.threshold_dbm);
            if (next != c.ch_idx) {
                SwitchEvent e;
                e.t_ms = t_ms;
                e.platoon_id = static_cast<int>(p);
                e.old_channel_mhz = plan_[static_cast<std::size_t>(c.ch_idx)];
                e.new_channel_mhz = plan_[static_cast<std::size_t>(next)];
                e.head_distance_m = head_distance();
                log_.switch_events.push_back(e);
                c.ch_idx = next;
                c.ledger[0].set_current_channel(next);
                c.blackout_from_us = t_ms * 1000;
                c.blackout_until_us =
                    c.blackout_from_us + static_cast<std::int64_t>(cfg_.duty.retune_blackout_ms) * 1000;
            }
            c.ledger[0].clear();
            c.round++;
        }
    }

    double head_distance() const {
        if (world_.platoon_members.size() < 2) return -1.0;
        const auto& a = world_.vehicles[world_.platoon_members[0][0]];
        const auto& b = world_.vehicles[world_.platoon_members[1][0]];
        // shortest separation on the circular road
        const double d = std::abs(a.position_m - b.position_m);
        return std::min(d, world_.road_length_m - d);
    }

    // ---------- per-tick updates after mobility ----------
    void post_step_updates(std::int64_t t_ms) {
        const std::int64_t t_us = t_ms * 1000;
        update_epochs();
        if (duty_cycled_) {
            const Phase ph = phase_of(t_ms, cfg_.duty);
            for (PlatoonCtl& c : ctl_) {
                if (ph == Phase::Sensing) {
                    accumulate_sensing(c, t_us);
                } else if (c.probe.active) {
                    // refresh the cached DTT+noise base for the new positions
                    probe_flush(c, t_us);
                    c.probe.base_mw = dbm_to_mw(cfg_.radio.noise_floor_dbm) +
                                      dtt_eff_mw(leader_of(c), c.ch_idx);
                }
            }
        }
        if (use_tvws_)
            for (std::size_t p = 0; p < ctl_.size(); ++p)
                log_.residence_ms[static_cast<int>(p)]
                                 [plan_[static_cast<std::size_t>(ctl_[p].ch_idx)]] +=
                    cfg_.tick_ms;
        track_gaps_and_speeds();
    }

    void update_epochs() {
        for (const auto& members : world_.platoon_members)
            for (std::uint32_t id : members) {
                auto& eps = epochs_[id];
                for (std::size_t oi = 0; oi < occupied_.size(); ++oi) {
                    const int mhz = plan_[static_cast<std::size_t>(occupied_[oi])];
                    const int seg = cfg_.dtt_field.segment_index(
                        mhz, world_.vehicles[id].position_m);
                    if (seg != eps[oi].seg) {
                        eps[oi].seg = seg;
                        eps[oi].entry++;
                    }
                }
            }
    }

    void accumulate_sensing(PlatoonCtl& c, std::int64_t t_us) {
        if (t_us >= c.blackout_from_us && t_us < c.blackout_until_us)
            return;  // retune blackout: radio dark
        const std::size_t p = static_cast<std::size_t>(&c - ctl_.data());
        const auto& members = world_.platoon_members[p];
        for (std::size_t i = 0; i < members.size(); ++i) {
            SensingAcc& a = c.acc[i];
            if (a.channel_index < 0) continue;
            // Sensing phases carry no TVWS traffic (transmissions are window-
            // guarded), so the sample is DTT leakage plus noise.
            a.sum_mw += dbm_to_mw(cfg_.radio.noise_floor_dbm) +
                        dtt_eff_mw(members[i], a.channel_index);
            a.n++;
        }
    }

    void track_gaps_and_speeds() {
        for (std::size_t p = 0; p < world_.platoon_members.size(); ++p) {
            const auto& m = world_.platoon_members[p];
            const int dir = cfg_.platoons[p].direction;
            for (std::size_t k = 1; k < m.size(); ++k) {
                const double spacing = dir * (world_.vehicles[m[k - 1]].position_m -
                                              world_.vehicles[m[k]].position_m);
                const double gap = spacing - cfg_.geometry.vehicle_length_m;
                log_.min_gap_m[p] = std::min(log_.min_gap_m[p], gap);
            }
            for (std::size_t k = 1; k < m.size(); ++k) {
                const double v = world_.vehicles[m[k]].speed_mps;
                log_.min_speed_mps[p] = std::min(log_.min_speed_mps[p], v);
                log_.max_speed_mps[p] = std::max(log_.max_speed_mps[p], v);
            }
        }
    }

    void maybe_dump_trajectory(std::int64_t t_ms) {
        if (!opt_.trajectory_csv) return;
        if (t_ms % opt_.trajectory_every_ms != 0) return;
        char buf[96];
        for (const auto& members : world_.platoon_members)
            for (std::uint32_t id : members) {
                const VehicleState& v = world_.vehicles[id];
                std::snprintf(buf, sizeof(buf), "%lld,%u,%.3f,%.3f\n",
                              static_cast<long long>(t_ms), v.id, v.position_m,
                              v.speed_mps);
                *opt_.trajectory_csv += buf;
            }
    }

    // ---------- events ----------
    void drain_events(std::int64_t until_us) {
        while (!events_.empty() && events_.top().t_us < until_us) {
            const Event ev = events_.top();
            events_.pop();
            switch (ev.type) {
                case EvType::Gen: handle_gen(ev); break;
                case EvType::TryTx: handle_try_tx(ev); break;
                case EvType::TxEnd: handle_tx_end(ev); break;
            }
        }
        prune_recent(until_us);
    }

    void handle_gen(const Event& ev) {
        if (ev.t_us >= end_us_) return;
        const MessageKind kind = static_cast<MessageKind>(ev.aux);
        const VehicleState& v = world_.vehicles[ev.vehicle];
        const std::int64_t period_us =
            kind == MessageKind::Cacc
                ? static_cast<std::int64_t>(cfg_.messaging.cacc_period_ms) * 1000
                : (v.role == Role::Background
                       ? static_cast<std::int64_t>(cfg_.messaging.cam_period_background_ms) * 1000
                       : static_cast<std::int64_t>(cfg_.messaging.cam_period_platoon_ms) * 1000);
        push_event(ev.t_us + period_us, EvType::Gen, ev.vehicle, ev.aux);

        const std::uint64_t slot = alloc_msg();
        Message& m = msgs_[slot];
        m.id = next_msg_id_++;
        m.kind = kind;
        m.source_id = ev.vehicle;
        m.created_us = ev.t_us;
        m.period_us = period_us;
        m.duration_us = cfg_.radio.airtime_us;
        m.payload.source_id = ev.vehicle;
        m.payload.position_m = v.position_m;
        m.payload.speed_mps = v.speed_mps;
        m.payload.accel_mps2 = v.accel_mps2;
        m.payload.timestamp_ms = ev.t_us / 1000;
        m.payload.valid = true;
        m.report = SensingReport{};
        log_.generated++;

        const bool tvws = kind == MessageKind::Cacc && use_tvws_;
        m.band = tvws ? Band::Tvws : Band::Cch;
        if (!tvws) {
            m.channel_index = -1;
            push_event(ev.t_us, EvType::TryTx, ev.vehicle, slot);
            return;
        }
        PlatoonCtl& c = ctl_[static_cast<std::size_t>(v.platoon_id)];
        m.channel_index = c.ch_idx;  // re-resolved at transmit start
        if (duty_cycled_) {
            const int member = v.follower_index;
            if (c.pending[static_cast<std::size_t>(member)].valid) {
                m.report = c.pending[static_cast<std::size_t>(member)];
                c.pending[static_cast<std::size_t>(member)] = SensingReport{};
            }
        }
        if (tvws_eligible(c, ev.t_us))
            push_event(ev.t_us, EvType::TryTx, ev.vehicle, slot);
        else
            c.queue.push_back(slot);
    }

    void release_queue(PlatoonCtl& c, std::int64_t t_us) {
        // Stagger each platoon's drain inside the window: releasing every
        // queue at the shared window-open instant would synchronise the
        // platoons' bursts and overstate interference at the DTT receivers.
        const std::int64_t window_us =
            static_cast<std::int64_t>(cfg_.duty.cycle_ms - cfg_.duty.sensing_ms) * 1000;
        std::uniform_int_distribution<std::int64_t> off(0, window_us * 3 / 5);
        const std::int64_t base = std::max(t_us, c.blackout_until_us) + off(mac_rng_);
        for (std::uint64_t slot : c.queue) {
            std::uniform_int_distribution<int> u(0, cfg_.radio.contention_window_slots - 1);
            const std::int64_t jitter =
                static_cast<std::int64_t>(u(mac_rng_)) * cfg_.radio.slot_us;
            push_event(base + jitter, EvType::TryTx, msgs_[slot].source_id, slot);
        }
        c.queue.clear();
    }

    void handle_try_tx(const Event& ev) {
        const std::uint64_t slot = ev.aux;
        Message& m = msgs_[slot];
        if (ev.t_us >= end_us_) {
            free_msg(slot);
            return;
        }
        if (m.band == Band::Tvws && duty_cycled_) {
            PlatoonCtl& c = ctl_[static_cast<std::size_t>(
                world_.vehicles[m.source_id].platoon_id)];
            if (!tvws_eligible(c, ev.t_us)) {
                if (ev.t_us - m.created_us > m.period_us) {
                    log_.dropped++;
                    free_msg(slot);
                } else {
                    c.queue.push_back(slot);
                }
                return;
            }
            m.channel_index = c.ch_idx;
        }
        const int ch_idx = m.band == Band::Tvws ? m.channel_index : -1;
        const double sensed = sensed_power_dbm(m.source_id, m.band, ch_idx);
        const double thr = m.band == Band::Tvws ? cfg_.radio.tvws_csma_sense_dbm
                                                : cfg_.radio.cch_csma_sense_dbm;
        const CsmaResult r =
            csma_attempt(sensed, thr, ev.t_us - m.created_us, m.period_us,
                         cfg_.radio.contention_window_slots, mac_rng_);
        switch (r.action) {
            case CsmaAction::Drop:
                log_.dropped++;
                free_msg(slot);
                break;
            case CsmaAction::Backoff:
                push_event(ev.t_us + cfg_.radio.aifs_us +
                               static_cast<std::int64_t>(r.backoff_slots) * cfg_.radio.slot_us,
                           EvType::TryTx, ev.vehicle, slot);
                break;
            case CsmaAction::TransmitNow:
                start_tx(slot, ev.t_us);
                break;
        }
    }

    void start_tx(std::uint64_t slot, std::int64_t t_us) {
        Message& m = msgs_[slot];
        flush_all_probes(t_us);
        ActiveTx tx;
        tx.tx_id = next_tx_id_++;
        tx.vehicle = m.source_id;
        tx.platoon_id = world_.vehicles[m.source_id].platoon_id;
        tx.band = m.band;
        tx.channel_index = m.channel_index;
        tx.tx_power_dbm = m.band == Band::Tvws ? cfg_.radio.tvws_tx_power_dbm
                                               : cfg_.radio.cch_tx_power_dbm;
        tx.start_us = t_us;
        tx.end_us = t_us + m.duration_us;
        tx.msg_index = slot;
        active_.push_back(tx);
        log_.aired++;
        if (tx.band == Band::Tvws && tx.platoon_id >= 0)
            ctl_[static_cast<std::size_t>(tx.platoon_id)].own_active++;

        const VehicleState& v = world_.vehicles[m.source_id];
        if (v.role == Role::Leader) {
            TxEvent e;
            e.t_us = t_us;
            e.vehicle = v.id;
            e.platoon_id = v.platoon_id;
            e.kind = m.kind;
            e.band = m.band;
            e.channel_mhz = m.band == Band::Tvws
                                ? plan_[static_cast<std::size_t>(m.channel_index)]
                                : cfg_.channel_plan.cch_freq_mhz;
            log_.tx_events.push_back(e);
        }
        if (tx.band == Band::Tvws) sample_dtt_sir(t_us);
        push_event(tx.end_us, EvType::TxEnd, tx.vehicle, tx.tx_id);
    }

    void sample_dtt_sir(std::int64_t t_us) {
        for (std::size_t r = 0; r < world_.receivers.size(); ++r) {
            for (std::size_t oi = 0; oi < occupied_.size(); ++oi) {
                const int dtt_idx = occupied_[oi];
                const int mhz = plan_[static_cast<std::size_t>(dtt_idx)];
                double interf_mw = 0.0;
                for (const ActiveTx& tx : active_) {
                    if (tx.band != Band::Tvws) continue;
                    const double d = receiver_distance(world_, tx.vehicle, r);
                    const double p =
                        v2v_rx_power(tx.tx_power_dbm, d, cfg_.radio.v2v_pathloss, true) -
                        cfg_.acir.rejection_at(tx.channel_index - dtt_idx);
                    interf_mw += dbm_to_mw(p);
                }
                if (interf_mw <= 0.0) continue;
                const double sir = dtt_sir(rx_wanted_dbm_[r][oi], mw_to_dbm(interf_mw));
                SirChannelStats& st = log_.sir_by_channel[mhz];
                st.hist.add(sir);
                st.total++;
                if (sir <= cfg_.dtt_protection.required_sir_db) st.below_required++;
                auto key = std::make_pair(world_.receivers[r].spec.id, mhz);
                auto it = log_.sir_by_receiver_channel.find(key);
                if (it == log_.sir_by_receiver_channel.end())
                    it = log_.sir_by_receiver_channel
                             .emplace(key, Histogram(0.0, 0.25, 560))
                             .first;
                it->second.add(sir);
            }
        }
        (void)t_us;
    }

    void handle_tx_end(const Event& ev) {
        const std::uint64_t tx_id = ev.aux;
        auto it = std::find_if(active_.begin(), active_.end(),
                               [&](const ActiveTx& t) { return t.tx_id == tx_id; });
        if (it == active_.end()) return;
        flush_all_probes(ev.t_us);
        ActiveTx tx = *it;
        active_.erase(it);
        if (tx.band == Band::Tvws && tx.platoon_id >= 0)
            ctl_[static_cast<std::size_t>(tx.platoon_id)].own_active--;
        if (tx.band == Band::Tvws) {
            log_.tvws_tx_us_total += tx.end_us - tx.start_us;
            log_.tvws_tx_us_in_sensing += sensing_overlap_us(tx.start_us, tx.end_us);
        }
        if (tx.platoon_id >= 0 &&
            world_.vehicles[tx.vehicle].role != Role::Background)
            resolve_receptions(tx);
        recent_.push_back(tx);
        free_msg(tx.msg_index);
    }

    std::int64_t sensing_overlap_us(std::int64_t s, std::int64_t e) const {
        std::int64_t total = 0;
        for (std::int64_t c = (s / cycle_us_) * cycle_us_; c < e; c += cycle_us_) {
            const std::int64_t lo = std::max(s, c);
            const std::int64_t hi = std::min(e, c + sensing_us_);
            if (hi > lo) total += hi - lo;
        }
        return total;
    }

    void resolve_receptions(const ActiveTx& tx) {
        const Message& m = msgs_[tx.msg_index];
        const std::size_t p = static_cast<std::size_t>(tx.platoon_id);
        const auto& members = world_.platoon_members[p];
        const std::uint32_t leader = members[0];
        const PlatoonCtl& c = ctl_[p];
        for (std::size_t k = 0; k < members.size(); ++k) {
            const std::uint32_t rx = members[k];
            if (rx == tx.vehicle) continue;
            bool ok;
            if (half_duplex_blocked(rx, tx) || blackout_blocked(c, tx)) {
                ok = false;
            } else {
                const double wanted =
                    v2v_rx_power(tx.tx_power_dbm, vehicle_distance(world_, tx.vehicle, rx),
                                 cfg_.radio.v2v_pathloss, tx.band == Band::Tvws);
                const double min_sinr = min_sinr_over_airtime(tx, rx, wanted);
                ok = receive_success(min_sinr, cfg_.radio.reception_sinr_threshold_db);
            }
            if (ok) {
                VehicleState& rv = world_.vehicles[rx];
                if (k > 0 && members[k - 1] == tx.vehicle)
                    rv.last_known_predecessor = m.payload;
                if (tx.vehicle == leader) rv.last_known_leader = m.payload;
                if (rx == leader && m.report.valid)
                    ctl_[p].ledger[0].append(m.report.cycle, m.report.channel_index,
                                             m.report.energy_dbm, Phase::Sensing);
            }
            if (tx.vehicle == leader) {
                RxEvent e;
                e.t_us = tx.end_us;
                e.tx_vehicle = tx.vehicle;
                e.rx_vehicle = rx;
                e.platoon_id = tx.platoon_id;
                e.follower_index = world_.vehicles[rx].follower_index;
                e.kind = m.kind;
                e.success = ok;
                log_.rx_events.push_back(e);
            }
        }
    }

    bool half_duplex_blocked(std::uint32_t rx, const ActiveTx& tx) const {
        auto overlaps = [&](const ActiveTx& o) {
            return o.vehicle == rx && o.band == tx.band && o.tx_id != tx.tx_id &&
                   o.start_us < tx.end_us && o.end_us > tx.start_us;
        };
        for (const ActiveTx& o : active_)
            if (overlaps(o)) return true;
        for (const ActiveTx& o : recent_)
            if (overlaps(o)) return true;
        return false;
    }

    bool blackout_blocked(const PlatoonCtl& c, const ActiveTx& tx) const {
        if (tx.band != Band::Tvws) return false;
        return c.blackout_from_us < tx.end_us && c.blackout_until_us > tx.start_us;
    }

    double min_sinr_over_airtime(const ActiveTx& tx, std::uint32_t rx,
                                 double wanted_dbm) const {
        double base_mw = dbm_to_mw(cfg_.radio.noise_floor_dbm);
        if (tx.band == Band::Tvws) base_mw += dtt_eff_mw(rx, tx.channel_index);
        // Piecewise-constant interference: breakpoints at interferer edges.
        struct Edge {
            std::int64_t t;
            double delta_mw;
        };
        std::vector<Edge> edges;
        auto consider = [&](const ActiveTx& o) {
            if (o.tx_id == tx.tx_id || o.vehicle == rx) return;
            if (o.band != tx.band) return;
            if (o.start_us >= tx.end_us || o.end_us <= tx.start_us) return;
            const double p = coupled_power_mw(o, rx, tx.band, tx.channel_index);
            if (p <= 0.0) return;
            edges.push_back({std::max(o.start_us, tx.start_us), p});
            if (o.end_us < tx.end_us) edges.push_back({o.end_us, -p});
        };
        for (const ActiveTx& o : active_) consider(o);
        for (const ActiveTx& o : recent_) consider(o);
        double level = base_mw, peak = base_mw;
        if (!edges.empty()) {
            // Departures sort before arrivals at equal times so zero-length
            // overlaps do not register.
            std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
                return a.t != b.t ? a.t < b.t : a.delta_mw < b.delta_mw;
            });
            for (const Edge& e : edges) {
                level += e.delta_mw;
                peak = std::max(peak, level);
            }
        }
        return wanted_dbm - mw_to_dbm(peak);
    }

    void prune_recent(std::int64_t now_us) {
        const std::int64_t horizon = now_us - 10'000;
        std::erase_if(recent_, [&](const ActiveTx& t) { return t.end_us < horizon; });
    }

    void finish_active() {
        // Transmissions still on air at the end of the run resolve nothing.
        active_.clear();
    }

    std::uint64_t alloc_msg() {
        if (!free_slots_.empty()) {
            const std::uint64_t s = free_slots_.back();
            free_slots_.pop_back();
            return s;
        }
        msgs_.emplace_back();
        return msgs_.size() - 1;
    }
    void free_msg(std::uint64_t slot) { free_slots_.push_back(slot); }

    // ---------- members ----------
    const SimConfig& cfg_;
    RunOptions opt_;
    World world_;
    ShadowingSampler shadow_;
    std::mt19937_64 mac_rng_;
    MetricsLog log_;

    std::vector<int> plan_;
    std::vector<int> occupied_;  // plan indexes carrying DTT
    std::int64_t tick_us_ = 0, cycle_us_ = 0, sensing_us_ = 0, end_us_ = 0;
    bool duty_cycled_ = false, use_tvws_ = false;

    std::vector<PlatoonCtl> ctl_;
    std::vector<std::vector<ShadowEpoch>> epochs_;
    std::vector<std::vector<double>> rx_wanted_dbm_;

    std::priority_queue<Event, std::vector<Event>, EventAfter> events_;
    std::uint64_t seq_ = 0;
    std::vector<Message> msgs_;
    std::vector<std::uint64_t> free_slots_;
    std::uint64_t next_msg_id_ = 0, next_tx_id_ = 0;
    std::vector<ActiveTx> active_, recent_;
};

}  // namespace

RunResult run_simulation(const SimConfig& cfg, const RunOptions& opt) {
    validate_config(cfg);
    Engine engine(cfg, opt);
    return engine.run();
}

}  // namespace vdsa
