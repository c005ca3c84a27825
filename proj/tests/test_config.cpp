#include <algorithm>

#include "doctest.h"
#include "vdsa/config.hpp"
#include "vdsa/errors.hpp"

using namespace vdsa;

TEST_CASE("default config passes validation") {
    const SimConfig cfg = default_config();
    CHECK_NOTHROW(validate_config(cfg));
}

TEST_CASE("default scenario geometry and timing") {
    const SimConfig cfg = default_config();
    CHECK(cfg.road_length_m == 5000.0);
    CHECK(cfg.lane_count == 4);
    CHECK(cfg.sim_duration_s == 140.0);
    CHECK(cfg.tick_ms == 1);
    CHECK(cfg.background_density_per_km_lane == 20.0);
    CHECK(cfg.seed == 1);

    REQUIRE(cfg.platoons.size() == 2);
    CHECK(cfg.platoons[0].size == 10);
    CHECK(cfg.platoons[1].size == 10);
    CHECK(cfg.platoons[0].lane == 0);
    CHECK(cfg.platoons[1].lane == 3);
    CHECK(cfg.platoons[0].direction == +1);
    CHECK(cfg.platoons[1].direction == -1);
    CHECK(cfg.platoons[0].initial_head_position_m == 150.0);
    CHECK(cfg.platoons[1].initial_head_position_m == 4850.0);
    CHECK(cfg.platoons[0].inter_vehicle_gap_m == 10.0);

    CHECK(cfg.geometry.lane_width_m == 3.5);
    CHECK(cfg.geometry.vehicle_length_m == 4.0);
    CHECK(cfg.geometry.vehicle_antenna_height_m == 1.5);
    CHECK(cfg.geometry.dtt_rx_height_m == 10.0);
}

TEST_CASE("default channel plan") {
    const SimConfig cfg = default_config();
    CHECK(cfg.channel_plan.tvws_center_freqs_mhz == std::vector<int>{490, 498, 506, 514, 522});
    CHECK(cfg.channel_plan.cch_freq_mhz == 5900);
    CHECK(cfg.channel_plan.channel_bandwidth_mhz == 10.0);
    CHECK(cfg.channel_plan.initial_tvws_channel == 2);  // 506 MHz
}

TEST_CASE("default radio parameters") {
    const RadioParams r = default_config().radio;
    CHECK(r.cch_tx_power_dbm == 23.0);
    CHECK(r.tvws_tx_power_dbm == 12.0);
    CHECK(r.noise_floor_dbm == -95.0);
    CHECK(r.reception_sinr_threshold_db == 10.0);
    CHECK(r.cch_csma_sense_dbm == -80.0);
    // TVWS front-end senses 10 dB above the CCH threshold.
    CHECK(r.tvws_csma_sense_dbm == r.cch_csma_sense_dbm + 10.0);
    CHECK(r.slot_us == 13);
    CHECK(r.aifs_us == 58);
    CHECK(r.contention_window_slots == 15);
    CHECK(r.airtime_us == 440);
    CHECK(r.v2v_pathloss.exponent == 2.75);
    CHECK(r.v2v_pathloss.reference_loss_db == 47.86);
    CHECK(r.v2v_pathloss.tvws_offset_db == -21.33);
}

TEST_CASE("default duty cycle and protection") {
    const SimConfig cfg = default_config();
    CHECK(cfg.duty.cycle_ms == 200);
    CHECK(cfg.duty.sensing_ms == 150);
    CHECK(cfg.duty.cycles_per_decision == 5);
    CHECK(cfg.duty.threshold_dbm == -65.0);
    CHECK(cfg.duty.retune_blackout_ms == 2);
    CHECK_FALSE(cfg.duty.average_in_db);
    CHECK(cfg.duty.include_window_self_samples);
    CHECK(cfg.dtt_protection.reception_threshold_dbm == -78.75);
    CHECK(cfg.dtt_protection.required_sir_db == 39.5);
    CHECK(cfg.acir.rejection_db == std::vector<double>{0.0, 30.0, 43.0, 50.0});
    CHECK(cfg.messaging.cam_period_background_ms == 100);
    CHECK(cfg.messaging.cam_period_platoon_ms == 200);
    CHECK(cfg.messaging.cacc_period_ms == 200);
    CHECK(cfg.lead_profile.high_kmh == 130.0);
    CHECK(cfg.lead_profile.low_kmh == 100.0);
    CHECK(cfg.lead_profile.period_s == 30.0);
}

TEST_CASE("default receiver roster") {
    const auto& rx = default_config().dtt_receivers;
    REQUIRE(rx.size() == 10);
    // Full roster, id order.
    const DttReceiverSpec want[] = {
        {1, 240, 120, 1}, {2, 4520, 164, 3}, {3, 4320, 244, 3}, {4, 320, 45, 1},
        {5, 1687, 80, 2}, {6, 4112, 304, 3}, {7, 632, 140, 1},  {8, 485, 270, 1},
        {9, 1463, 154, 2}, {10, 2087, 127, 2},
    };
    for (std::size_t i = 0; i < rx.size(); ++i) {
        CAPTURE(i);
        CHECK(rx[i] == want[i]);
    }
    int g1 = 0, g2 = 0, g3 = 0;
    for (const auto& r : rx) {
        if (r.group == 1) ++g1;
        if (r.group == 2) ++g2;
        if (r.group == 3) ++g3;
    }
    CHECK(g1 == 4);
    CHECK(g2 == 3);
    CHECK(g3 == 3);
}

TEST_CASE("default field occupies the edge channels only") {
    const SimConfig cfg = default_config();
    CHECK(cfg.dtt_field.occupied(490));
    CHECK(cfg.dtt_field.occupied(522));
    CHECK_FALSE(cfg.dtt_field.occupied(498));
    CHECK_FALSE(cfg.dtt_field.occupied(506));
    CHECK_FALSE(cfg.dtt_field.occupied(514));
    for (const auto& [ch, segs] : cfg.dtt_field.segments_by_channel_mhz) {
        CAPTURE(ch);
        REQUIRE(!segs.empty());
        CHECK(segs.front().start_m == 0.0);
        CHECK(segs.back().end_m == cfg.road_length_m);
        for (const auto& s : segs) {
            CHECK(s.shadow_sigma_db >= 1.5);
            CHECK(s.shadow_sigma_db <= 4.5);
        }
    }
    // Mean level at the start of the road (x = 0 -> intercept directly).
    CHECK(cfg.dtt_field.segments_by_channel_mhz.at(490)[0].intercept_dbm
          == doctest::Approx(-68.0));
    CHECK(cfg.dtt_field.segments_by_channel_mhz.at(522)[0].intercept_dbm
          == doctest::Approx(-58.0));
}

TEST_CASE("strategy parsing round trips") {
    CHECK(parse_strategy("cch-only").kind == StrategyKind::CchOnly);
    CHECK(parse_strategy("fixed-tvws").kind == StrategyKind::FixedTvws);
    const Strategy b = parse_strategy("bumblebee:6");
    CHECK(b.kind == StrategyKind::Bumblebee);
    CHECK(b.cost_db == 6.0);
    CHECK(parse_strategy("bumblebee").cost_db == 0.0);
    CHECK(format_strategy(b) == "bumblebee:6");
    CHECK(format_strategy(parse_strategy("bumblebee:2.5")) == "bumblebee:2.5");
    CHECK(format_strategy(parse_strategy("cch-only")) == "cch-only");
    CHECK_THROWS_AS((void)parse_strategy("bumblebee:x"), ParseError);
    CHECK_THROWS_AS((void)parse_strategy("bumblebee:6dB"), ParseError);
    CHECK_THROWS_AS((void)parse_strategy("tvws"), ParseError);
}

TEST_CASE("serialize and parse round trip exactly") {
    SimConfig cfg = default_config();
    cfg.seed = 99;
    cfg.strategy = parse_strategy("bumblebee:3");
    cfg.sim_duration_s = 42.5;
    const std::string text = serialize_config(cfg);
    const SimConfig back = parse_config(text);
    CHECK(back == cfg);
}

TEST_CASE("partial configs inherit defaults field-wise") {
    const SimConfig cfg = parse_config(R"({"seed": 7, "radio": {"tvws_tx_power_dbm": 9.0}})");
    CHECK(cfg.seed == 7);
    CHECK(cfg.radio.tvws_tx_power_dbm == 9.0);
    CHECK(cfg.radio.cch_tx_power_dbm == 23.0);  // untouched default
    CHECK(cfg.road_length_m == 5000.0);
    CHECK(cfg.platoons.size() == 2);
}

TEST_CASE("malformed json raises ParseError") {
    CHECK_THROWS_AS((void)parse_config("{"), ParseError);
    CHECK_THROWS_AS((void)parse_config(R"({"strategy": "warp-drive"})"), ParseError);
}

TEST_CASE("validation rejects broken configs with the field named") {
    auto expect_reject = [](auto mutate, const char* needle) {
        SimConfig cfg = default_config();
        mutate(cfg);
        try {
            validate_config(cfg);
            FAIL_CHECK("expected ValidationError mentioning ", needle);
        } catch (const ValidationError& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    expect_reject([](SimConfig& c) { c.tick_ms = 3; }, "tick_ms");
    expect_reject([](SimConfig& c) { c.platoons[0].lane = 1; }, "lane");
    expect_reject([](SimConfig& c) { c.platoons[1].direction = +1; }, "platoons");
    expect_reject([](SimConfig& c) { c.channel_plan.tvws_center_freqs_mhz = {490, 499}; },
                  "tvws_center_freqs_mhz");
    expect_reject([](SimConfig& c) { c.channel_plan.initial_tvws_channel = 9; },
                  "initial_tvws_channel");
    expect_reject([](SimConfig& c) { c.acir.rejection_db = {5.0, 30.0}; }, "acir");
    expect_reject([](SimConfig& c) { c.acir.rejection_db = {0.0, 43.0, 30.0}; }, "acir");
    expect_reject([](SimConfig& c) { c.duty.sensing_ms = 200; }, "sensing_ms");
    expect_reject([](SimConfig& c) { c.duty.retune_blackout_ms = 50; }, "retune_blackout");
    expect_reject(
        [](SimConfig& c) { c.dtt_field.segments_by_channel_mhz[490].back().end_m = 4000; },
        "dtt_field[490]");
    expect_reject([](SimConfig& c) { c.dtt_field.segments_by_channel_mhz[508] = {}; },
                  "dtt_field[508]");
    expect_reject([](SimConfig& c) { c.strategy = Strategy{StrategyKind::Bumblebee, -1.0}; },
                  "strategy");
    expect_reject([](SimConfig& c) { c.dtt_receivers[1].id = 1; }, "id");
}
