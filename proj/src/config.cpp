#include "vdsa/config.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "vdsa/errors.hpp"

namespace vdsa {

using nlohmann::json;

Strategy parse_strategy(const std::string& text) {
    if (text == "cch-only") return {StrategyKind::CchOnly, 0.0};
    if (text == "fixed-tvws") return {StrategyKind::FixedTvws, 0.0};
    if (text == "bumblebee") return {StrategyKind::Bumblebee, 0.0};
    if (text.rfind("bumblebee:", 0) == 0) {
        const std::string num = text.substr(10);
        try {
            std::size_t used = 0;
            const double cost = std::stod(num, &used);
            if (used != num.size()) throw std::invalid_argument(num);
            return {StrategyKind::Bumblebee, cost};
        } catch (const std::exception&) {
            throw ParseError("strategy: bad cost in '" + text + "'");
        }
    }
    throw ParseError("strategy: unknown value '" + text +
                     "' (expected cch-only, fixed-tvws, or bumblebee:<cost_db>)");
}

std::string format_strategy(const Strategy& s) {
    switch (s.kind) {
        case StrategyKind::CchOnly: return "cch-only";
        case StrategyKind::FixedTvws: return "fixed-tvws";
        case StrategyKind::Bumblebee: {
            std::ostringstream os;
            os << "bumblebee:" << s.cost_db;
            return os.str();
        }
    }
    return "?";
}

namespace {

// ---- JSON helpers: each reader starts from a default-constructed (or
// caller-provided) value so partial configs inherit defaults field-wise.

void read_into(const json& j, const char* key, double& out) {
    if (j.contains(key)) out = j.at(key).get<double>();
}
void read_into(const json& j, const char* key, int& out) {
    if (j.contains(key)) out = j.at(key).get<int>();
}
void read_into(const json& j, const char* key, bool& out) {
    if (j.contains(key)) out = j.at(key).get<bool>();
}
void read_into(const json& j, const char* key, std::uint64_t& out) {
    if (j.contains(key)) out = j.at(key).get<std::uint64_t>();
}
void read_into(const json& j, const char* key, std::vector<int>& out) {
    if (j.contains(key)) out = j.at(key).get<std::vector<int>>();
}
void read_into(const json& j, const char* key, std::vector<double>& out) {
    if (j.contains(key)) out = j.at(key).get<std::vector<double>>();
}

PlatoonSpec platoon_from_json(const json& j) {
    PlatoonSpec p;
    read_into(j, "size", p.size);
    read_into(j, "lane", p.lane);
    read_into(j, "direction", p.direction);
    read_into(j, "initial_head_position_m", p.initial_head_position_m);
    read_into(j, "initial_speed_mps", p.initial_speed_mps);
    read_into(j, "inter_vehicle_gap_m", p.inter_vehicle_gap_m);
    return p;
}

json platoon_to_json(const PlatoonSpec& p) {
    return json{{"size", p.size},
                {"lane", p.lane},
                {"direction", p.direction},
                {"initial_head_position_m", p.initial_head_position_m},
                {"initial_speed_mps", p.initial_speed_mps},
                {"inter_vehicle_gap_m", p.inter_vehicle_gap_m}};
}

DttReceiverSpec receiver_from_json(const json& j) {
    DttReceiverSpec r;
    read_into(j, "id", r.id);
    read_into(j, "longitudinal_position_m", r.longitudinal_position_m);
    read_into(j, "distance_to_motorway_m", r.distance_to_motorway_m);
    read_into(j, "group", r.group);
    return r;
}

json receiver_to_json(const DttReceiverSpec& r) {
    return json{{"id", r.id},
                {"longitudinal_position_m", r.longitudinal_position_m},
                {"distance_to_motorway_m", r.distance_to_motorway_m},
                {"group", r.group}};
}

DttField field_from_json(const json& j) {
    DttField f;
    for (const auto& entry : j.at("channels")) {
        const int ch = entry.at("channel_mhz").get<int>();
        std::vector<DttSegment> segs;
        for (const auto& js : entry.at("segments")) {
            DttSegment s;
            s.start_m = js.at("start_m").get<double>();
            s.end_m = js.at("end_m").get<double>();
            s.slope_db_per_m = js.at("slope_db_per_m").get<double>();
            s.intercept_dbm = js.at("intercept_dbm").get<double>();
            s.shadow_sigma_db = js.at("shadow_sigma_db").get<double>();
            segs.push_back(s);
        }
        f.segments_by_channel_mhz[ch] = std::move(segs);
    }
    return f;
}

json field_to_json(const DttField& f) {
    json channels = json::array();
    for (const auto& [ch, segs] : f.segments_by_channel_mhz) {
        json jsegs = json::array();
        for (const auto& s : segs) {
            jsegs.push_back(json{{"start_m", s.start_m},
                                 {"end_m", s.end_m},
                                 {"slope_db_per_m", s.slope_db_per_m},
                                 {"intercept_dbm", s.intercept_dbm},
                                 {"shadow_sigma_db", s.shadow_sigma_db}});
        }
        channels.push_back(json{{"channel_mhz", ch}, {"segments", std::move(jsegs)}});
    }
    return json{{"channels", std::move(channels)}};
}

SimConfig config_from_json(const json& j, const std::filesystem::path& base_dir) {
    SimConfig cfg = default_config();
    read_into(j, "road_length_m", cfg.road_length_m);
    read_into(j, "lane_count", cfg.lane_count);
    read_into(j, "sim_duration_s", cfg.sim_duration_s);
    read_into(j, "tick_ms", cfg.tick_ms);
    read_into(j, "background_density_per_km_lane", cfg.background_density_per_km_lane);
    read_into(j, "seed", cfg.seed);

    if (j.contains("platoons")) {
        cfg.platoons.clear();
        for (const auto& jp : j.at("platoons")) cfg.platoons.push_back(platoon_from_json(jp));
    }
    if (j.contains("dtt_receivers")) {
        cfg.dtt_receivers.clear();
        for (const auto& jr : j.at("dtt_receivers"))
            cfg.dtt_receivers.push_back(receiver_from_json(jr));
    }
    if (j.contains("channel_plan")) {
        const json& jc = j.at("channel_plan");
        read_into(jc, "tvws_center_freqs_mhz", cfg.channel_plan.tvws_center_freqs_mhz);
        read_into(jc, "cch_freq_mhz", cfg.channel_plan.cch_freq_mhz);
        read_into(jc, "channel_bandwidth_mhz", cfg.channel_plan.channel_bandwidth_mhz);
        read_into(jc, "initial_tvws_channel", cfg.channel_plan.initial_tvws_channel);
    }
    if (j.contains("radio")) {
        const json& jr = j.at("radio");
        RadioParams& r = cfg.radio;
        read_into(jr, "cch_tx_power_dbm", r.cch_tx_power_dbm);
        read_into(jr, "tvws_tx_power_dbm", r.tvws_tx_power_dbm);
        read_into(jr, "noise_floor_dbm", r.noise_floor_dbm);
        read_into(jr, "reception_sinr_threshold_db", r.reception_sinr_threshold_db);
        read_into(jr, "cch_csma_sense_dbm", r.cch_csma_sense_dbm);
        read_into(jr, "tvws_csma_sense_dbm", r.tvws_csma_sense_dbm);
        read_into(jr, "slot_us", r.slot_us);
        read_into(jr, "aifs_us", r.aifs_us);
        read_into(jr, "contention_window_slots", r.contention_window_slots);
        read_into(jr, "airtime_us", r.airtime_us);
        if (jr.contains("v2v_pathloss")) {
            const json& jp = jr.at("v2v_pathloss");
            read_into(jp, "exponent", r.v2v_pathloss.exponent);
            read_into(jp, "reference_loss_db", r.v2v_pathloss.reference_loss_db);
            read_into(jp, "tvws_offset_db", r.v2v_pathloss.tvws_offset_db);
        }
    }
    if (j.contains("cacc")) {
        const json& jc = j.at("cacc");
        read_into(jc, "c1", cfg.cacc.c1);
        read_into(jc, "xi", cfg.cacc.xi);
        read_into(jc, "omega_n", cfg.cacc.omega_n);
        read_into(jc, "accel_min_mps2", cfg.cacc.accel_min_mps2);
        read_into(jc, "accel_max_mps2", cfg.cacc.accel_max_mps2);
    }
    if (j.contains("lead_profile")) {
        const json& jl = j.at("lead_profile");
        read_into(jl, "high_kmh", cfg.lead_profile.high_kmh);
        read_into(jl, "low_kmh", cfg.lead_profile.low_kmh);
        read_into(jl, "period_s", cfg.lead_profile.period_s);
    }
    if (j.contains("duty")) {
        const json& jd = j.at("duty");
        read_into(jd, "cycle_ms", cfg.duty.cycle_ms);
        read_into(jd, "sensing_ms", cfg.duty.sensing_ms);
        read_into(jd, "cycles_per_decision", cfg.duty.cycles_per_decision);
        read_into(jd, "threshold_dbm", cfg.duty.threshold_dbm);
        read_into(jd, "retune_blackout_ms", cfg.duty.retune_blackout_ms);
        read_into(jd, "average_in_db", cfg.duty.average_in_db);
        read_into(jd, "include_window_self_samples", cfg.duty.include_window_self_samples);
    }
    if (j.contains("dtt_protection")) {
        const json& jp = j.at("dtt_protection");
        read_into(jp, "reception_threshold_dbm", cfg.dtt_protection.reception_threshold_dbm);
        read_into(jp, "required_sir_db", cfg.dtt_protection.required_sir_db);
    }
    if (j.contains("geometry")) {
        const json& jg = j.at("geometry");
        read_into(jg, "lane_width_m", cfg.geometry.lane_width_m);
        read_into(jg, "vehicle_length_m", cfg.geometry.vehicle_length_m);
        read_into(jg, "vehicle_antenna_height_m", cfg.geometry.vehicle_antenna_height_m);
        read_into(jg, "dtt_rx_height_m", cfg.geometry.dtt_rx_height_m);
    }
    if (j.contains("messaging")) {
        const json& jm = j.at("messaging");
        read_into(jm, "cam_period_background_ms", cfg.messaging.cam_period_background_ms);
        read_into(jm, "cam_period_platoon_ms", cfg.messaging.cam_period_platoon_ms);
        read_into(jm, "cacc_period_ms", cfg.messaging.cacc_period_ms);
    }
    if (j.contains("acir")) {
        read_into(j.at("acir"), "rejection_db", cfg.acir.rejection_db);
    }
    if (j.contains("dtt_field_path")) {
        const std::filesystem::path p =
            base_dir / j.at("dtt_field_path").get<std::string>();
        std::ifstream in(p);
        if (!in) throw ParseError("dtt_field_path: cannot open " + p.string());
        json jf;
        try {
            in >> jf;
        } catch (const json::exception& e) {
            throw ParseError(std::string("dtt_field_path: ") + e.what());
        }
        cfg.dtt_field = field_from_json(jf);
    } else if (j.contains("dtt_field")) {
        cfg.dtt_field = field_from_json(j.at("dtt_field"));
    }
    if (j.contains("strategy")) {
        cfg.strategy = parse_strategy(j.at("strategy").get<std::string>());
    }
    return cfg;
}

json config_to_json(const SimConfig& cfg) {
    json j;
    j["road_length_m"] = cfg.road_length_m;
    j["lane_count"] = cfg.lane_count;
    j["sim_duration_s"] = cfg.sim_duration_s;
    j["tick_ms"] = cfg.tick_ms;
    j["background_density_per_km_lane"] = cfg.background_density_per_km_lane;
    j["seed"] = cfg.seed;
    j["strategy"] = format_strategy(cfg.strategy);
    json jp = json::array();
    for (const auto& p : cfg.platoons) jp.push_back(platoon_to_json(p));
    j["platoons"] = std::move(jp);
    json jr = json::array();
    for (const auto& r : cfg.dtt_receivers) jr.push_back(receiver_to_json(r));
    j["dtt_receivers"] = std::move(jr);
    j["channel_plan"] = json{{"tvws_center_freqs_mhz", cfg.channel_plan.tvws_center_freqs_mhz},
                             {"cch_freq_mhz", cfg.channel_plan.cch_freq_mhz},
                             {"channel_bandwidth_mhz", cfg.channel_plan.channel_bandwidth_mhz},
                             {"initial_tvws_channel", cfg.channel_plan.initial_tvws_channel}};
    j["radio"] = json{
        {"cch_tx_power_dbm", cfg.radio.cch_tx_power_dbm},
        {"tvws_tx_power_dbm", cfg.radio.tvws_tx_power_dbm},
        {"noise_floor_dbm", cfg.radio.noise_floor_dbm},
        {"v2v_pathloss", json{{"exponent", cfg.radio.v2v_pathloss.exponent},
                              {"reference_loss_db", cfg.radio.v2v_pathloss.reference_loss_db},
                              {"tvws_offset_db", cfg.radio.v2v_pathloss.tvws_offset_db}}},
        {"reception_sinr_threshold_db", cfg.radio.reception_sinr_threshold_db},
        {"cch_csma_sense_dbm", cfg.radio.cch_csma_sense_dbm},
        {"tvws_csma_sense_dbm", cfg.radio.tvws_csma_sense_dbm},
        {"slot_us", cfg.radio.slot_us},
        {"aifs_us", cfg.radio.aifs_us},
        {"contention_window_slots", cfg.radio.contention_window_slots},
        {"airtime_us", cfg.radio.airtime_us}};
    j["cacc"] = json{{"c1", cfg.cacc.c1},
                     {"xi", cfg.cacc.xi},
                     {"omega_n", cfg.cacc.omega_n},
                     {"accel_min_mps2", cfg.cacc.accel_min_mps2},
                     {"accel_max_mps2", cfg.cacc.accel_max_mps2}};
    j["lead_profile"] = json{{"high_kmh", cfg.lead_profile.high_kmh},
                             {"low_kmh", cfg.lead_profile.low_kmh},
                             {"period_s", cfg.lead_profile.period_s}};
    j["duty"] = json{{"cycle_ms", cfg.duty.cycle_ms},
                     {"sensing_ms", cfg.duty.sensing_ms},
                     {"cycles_per_decision", cfg.duty.cycles_per_decision},
                     {"threshold_dbm", cfg.duty.threshold_dbm},
                     {"retune_blackout_ms", cfg.duty.retune_blackout_ms},
                     {"average_in_db", cfg.duty.average_in_db},
                     {"include_window_self_samples", cfg.duty.include_window_self_samples}};
    j["dtt_protection"] = json{{"reception_threshold_dbm", cfg.dtt_protection.reception_threshold_dbm},
                               {"required_sir_db", cfg.dtt_protection.required_sir_db}};
    j["geometry"] = json{{"lane_width_m", cfg.geometry.lane_width_m},
                         {"vehicle_length_m", cfg.geometry.vehicle_length_m},
                         {"vehicle_antenna_height_m", cfg.geometry.vehicle_antenna_height_m},
                         {"dtt_rx_height_m", cfg.geometry.dtt_rx_height_m}};
    j["messaging"] = json{{"cam_period_background_ms", cfg.messaging.cam_period_background_ms},
                          {"cam_period_platoon_ms", cfg.messaging.cam_period_platoon_ms},
                          {"cacc_period_ms", cfg.messaging.cacc_period_ms}};
    j["acir"] = json{{"rejection_db", cfg.acir.rejection_db}};
    j["dtt_field"] = field_to_json(cfg.dtt_field);
    return j;
}

std::vector<DttSegment> make_segments(
    const std::vector<std::array<double, 4>>& rows) {
    // rows: {start, end, value_at_start, value_at_end} -> slope/intercept form
    std::vector<DttSegment> segs;
    for (const auto& r : rows) {
        DttSegment s;
        s.start_m = r[0];
        s.end_m = r[1];
        s.slope_db_per_m = (r[3] - r[2]) / (r[1] - r[0]);
        s.intercept_dbm = r[2] - s.slope_db_per_m * r[0];
        segs.push_back(s);
    }
    return segs;
}

}  // namespace

SimConfig default_config() {
    SimConfig cfg;
    cfg.platoons = {
        PlatoonSpec{10, 0, +1, 150.0, 36.111, 10.0},
        PlatoonSpec{10, 3, -1, 4850.0, 36.111, 10.0},
    };
    cfg.dtt_receivers = {
        {1, 240, 120, 1}, {2, 4520, 164, 3}, {3, 4320, 244, 3}, {4, 320, 45, 1},
        {5, 1687, 80, 2}, {6, 4112, 304, 3}, {7, 632, 140, 1},  {8, 485, 270, 1},
        {9, 1463, 154, 2}, {10, 2087, 127, 2},
    };

    // Synthetic DTT profiles for the two occupied edge channels: six linear
    // segments per channel, per-segment shadowing sigma between 1.5 and 4.5 dB.
    // 490 MHz is weak over the first 800 m (stressed protected receivers live
    // there) and both channels peak around the mid-road and road-end stretches.
    auto segs490 = make_segments({
        {0, 800, -68.0, -66.0},
        {800, 1900, -66.0, -46.0},
        {1900, 3100, -46.0, -45.0},
        {3100, 4300, -45.0, -54.0},
        {4300, 4650, -54.0, -46.0},
        {4650, 5000, -46.0, -47.0},
    });
    const double sig490[] = {1.5, 2.5, 2.0, 3.5, 3.0, 1.5};
    for (std::size_t i = 0; i < segs490.size(); ++i) segs490[i].shadow_sigma_db = sig490[i];

    auto segs522 = make_segments({
        {0, 800, -58.0, -57.0},
        {800, 1900, -57.0, -47.0},
        {1900, 3100, -47.0, -46.0},
        {3100, 4300, -46.0, -52.0},
        {4300, 4650, -52.0, -45.0},
        {4650, 5000, -45.0, -49.0},
    });
    const double sig522[] = {1.5, 2.5, 1.5, 3.0, 2.5, 1.5};
    for (std::size_t i = 0; i < segs522.size(); ++i) segs522[i].shadow_sigma_db = sig522[i];

    cfg.dtt_field.segments_by_channel_mhz[490] = std::move(segs490);
    cfg.dtt_field.segments_by_channel_mhz[522] = std::move(segs522);
    return cfg;
}

namespace {

void check(bool ok, const std::string& field, const std::string& why) {
    if (!ok) throw ValidationError(field + ": " + why);
}

void validate_field(const SimConfig& cfg) {
    for (const auto& [ch, segs] : cfg.dtt_field.segments_by_channel_mhz) {
        const std::string name = "dtt_field[" + std::to_string(ch) + "]";
        const auto& plan = cfg.channel_plan.tvws_center_freqs_mhz;
        check(std::find(plan.begin(), plan.end(), ch) != plan.end(), name,
              "channel not in channel_plan");
        check(!segs.empty(), name, "no segments");
        check(segs.front().start_m == 0.0, name, "first segment must start at 0");
        check(segs.back().end_m == cfg.road_length_m, name,
              "last segment must end at road_length_m");
        for (std::size_t i = 0; i < segs.size(); ++i) {
            check(segs[i].end_m > segs[i].start_m, name, "empty or inverted segment");
            check(segs[i].shadow_sigma_db >= 0.0, name, "negative shadow sigma");
            if (i > 0)
                check(segs[i].start_m == segs[i - 1].end_m, name,
                      "segments must tile without gaps or overlap");
        }
    }
}

}  // namespace

void validate_config(const SimConfig& cfg) {
    check(cfg.road_length_m > 0, "road_length_m", "must be > 0");
    check(cfg.lane_count >= 2, "lane_count", "need at least 2 lanes");
    check(cfg.sim_duration_s > 0, "sim_duration_s", "must be > 0");
    check(cfg.tick_ms >= 1, "tick_ms", "must be >= 1");
    check(50 % cfg.tick_ms == 0, "tick_ms",
          "must divide 50 ms so duty-cycle boundaries fall on ticks");
    check(cfg.background_density_per_km_lane >= 0, "background_density_per_km_lane",
          "must be >= 0");

    check(!cfg.platoons.empty(), "platoons", "at least one platoon required");
    for (std::size_t i = 0; i < cfg.platoons.size(); ++i) {
        const auto& p = cfg.platoons[i];
        const std::string name = "platoons[" + std::to_string(i) + "]";
        check(p.size >= 2, name + ".size", "leader plus at least one follower");
        check(p.inter_vehicle_gap_m > 0, name + ".inter_vehicle_gap_m", "must be > 0");
        check(p.direction == 1 || p.direction == -1, name + ".direction", "must be +1 or -1");
        check(p.lane == 0 || p.lane == cfg.lane_count - 1, name + ".lane",
              "platoons run on outer lanes");
        check(p.initial_head_position_m >= 0 && p.initial_head_position_m <= cfg.road_length_m,
              name + ".initial_head_position_m", "outside road extent");
        check(p.initial_speed_mps >= 0, name + ".initial_speed_mps", "must be >= 0");
    }
    if (cfg.platoons.size() == 2) {
        check(cfg.platoons[0].direction != cfg.platoons[1].direction, "platoons",
              "the two platoons must travel in opposite directions");
    }

    const auto& ch = cfg.channel_plan.tvws_center_freqs_mhz;
    check(!ch.empty(), "channel_plan.tvws_center_freqs_mhz", "empty");
    for (std::size_t i = 1; i < ch.size(); ++i) {
        check(ch[i] > ch[i - 1], "channel_plan.tvws_center_freqs_mhz",
              "must be strictly increasing");
        check(ch[i] - ch[i - 1] == 8, "channel_plan.tvws_center_freqs_mhz",
              "adjacent centres must be 8 MHz apart");
    }
    check(cfg.channel_plan.channel_bandwidth_mhz > 0, "channel_plan.channel_bandwidth_mhz",
          "must be > 0");
    check(cfg.channel_plan.initial_tvws_channel >= 0 &&
              cfg.channel_plan.initial_tvws_channel < static_cast<int>(ch.size()),
          "channel_plan.initial_tvws_channel", "index out of range");

    const auto& r = cfg.radio;
    check(r.v2v_pathloss.exponent > 0, "radio.v2v_pathloss.exponent", "must be > 0");
    check(r.slot_us > 0, "radio.slot_us", "must be > 0");
    check(r.aifs_us >= 0, "radio.aifs_us", "must be >= 0");
    check(r.contention_window_slots >= 1, "radio.contention_window_slots", "must be >= 1");
    check(r.airtime_us > 0, "radio.airtime_us", "must be > 0");

    check(cfg.cacc.accel_min_mps2 < cfg.cacc.accel_max_mps2, "cacc.accel_min_mps2",
          "must be below accel_max_mps2");
    check(cfg.cacc.omega_n > 0, "cacc.omega_n", "must be > 0");
    check(cfg.lead_profile.period_s > 0, "lead_profile.period_s", "must be > 0");
    check(cfg.lead_profile.high_kmh >= cfg.lead_profile.low_kmh, "lead_profile.high_kmh",
          "must be >= low_kmh");

    const auto& d = cfg.duty;
    check(d.cycle_ms > 0, "duty.cycle_ms", "must be > 0");
    check(d.sensing_ms > 0 && d.sensing_ms < d.cycle_ms, "duty.sensing_ms",
          "must leave a nonempty transmission window");
    check(d.cycles_per_decision >= 1, "duty.cycles_per_decision", "must be >= 1");
    check(d.cycle_ms % cfg.tick_ms == 0 && d.sensing_ms % cfg.tick_ms == 0, "duty.cycle_ms",
          "phase boundaries must fall on ticks");
    check(d.retune_blackout_ms >= 0 && d.retune_blackout_ms < d.cycle_ms - d.sensing_ms,
          "duty.retune_blackout_ms", "must fit inside the transmission window");

    check(cfg.geometry.lane_width_m > 0, "geometry.lane_width_m", "must be > 0");
    check(cfg.geometry.vehicle_length_m > 0, "geometry.vehicle_length_m", "must be > 0");
    check(cfg.messaging.cam_period_background_ms > 0, "messaging.cam_period_background_ms",
          "must be > 0");
    check(cfg.messaging.cam_period_platoon_ms > 0, "messaging.cam_period_platoon_ms",
          "must be > 0");
    check(cfg.messaging.cacc_period_ms > 0, "messaging.cacc_period_ms", "must be > 0");

    const auto& a = cfg.acir.rejection_db;
    check(!a.empty(), "acir.rejection_db", "empty");
    check(a[0] == 0.0, "acir.rejection_db", "offset 0 must map to 0 dB");
    for (std::size_t i = 1; i < a.size(); ++i)
        check(a[i] >= a[i - 1], "acir.rejection_db", "must be non-decreasing in offset");

    for (std::size_t i = 0; i < cfg.dtt_receivers.size(); ++i) {
        const auto& rx = cfg.dtt_receivers[i];
        const std::string name = "dtt_receivers[" + std::to_string(i) + "]";
        check(rx.longitudinal_position_m >= 0 && rx.longitudinal_position_m <= cfg.road_length_m,
              name + ".longitudinal_position_m", "outside road extent");
        check(rx.distance_to_motorway_m > 0, name + ".distance_to_motorway_m", "must be > 0");
        for (std::size_t k = 0; k < i; ++k)
            check(cfg.dtt_receivers[k].id != rx.id, name + ".id", "duplicate receiver id");
    }

    validate_field(cfg);

    if (cfg.strategy.kind == StrategyKind::Bumblebee)
        check(cfg.strategy.cost_db >= 0, "strategy", "bumblebee cost must be >= 0");
}

SimConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    SimConfig cfg = config_from_json(j, std::filesystem::current_path());
    validate_config(cfg);
    return cfg;
}

SimConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("config: cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    SimConfig cfg = config_from_json(j, std::filesystem::path(path).parent_path());
    validate_config(cfg);
    return cfg;
}

std::string serialize_config(const SimConfig& cfg) {
    return config_to_json(cfg).dump(2);
}

void save_config(const SimConfig& cfg, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("config: cannot write " + path);
    out << serialize_config(cfg) << "\n";
}

}  // namespace vdsa
