#include <optional>
#include <set>
#include <vector>

#include "doctest.h"
#include "vdsa/errors.hpp"
#include "vdsa/units.hpp"
#include "vdsa/vdsa_algo.hpp"

using namespace vdsa;

TEST_CASE("duty phase boundaries: 150 ms sensing then 50 ms transmission") {
    const DutyCycleParams d{};
    CHECK(phase_of(0, d) == Phase::Sensing);
    CHECK(phase_of(149, d) == Phase::Sensing);
    CHECK(phase_of(150, d) == Phase::Transmission);
    CHECK(phase_of(199, d) == Phase::Transmission);
    CHECK(phase_of(200, d) == Phase::Sensing);
    CHECK(phase_of(349, d) == Phase::Sensing);
    CHECK(phase_of(350, d) == Phase::Transmission);
    CHECK(phase_of(999, d) == Phase::Transmission);
}

TEST_CASE("per-decision window: 750 ms sensing, 250 ms transmission") {
    const DutyCycleParams d{};
    int sensing = 0, transmission = 0;
    for (std::int64_t t = 0; t < 1000; ++t)
        (phase_of(t, d) == Phase::Sensing ? sensing : transmission)++;
    CHECK(sensing == 750);
    CHECK(transmission == 250);
}

TEST_CASE("cycle counter and decision boundaries") {
    const DutyCycleParams d{};
    CHECK(cycle_in_decision(0, d) == 0);
    CHECK(cycle_in_decision(199, d) == 0);
    CHECK(cycle_in_decision(200, d) == 1);
    CHECK(cycle_in_decision(999, d) == 4);
    CHECK(cycle_in_decision(1000, d) == 0);
    CHECK(cycle_in_decision(1399, d) == 1);
    CHECK(at_decision_boundary(0, d));
    CHECK(at_decision_boundary(1000, d));
    CHECK(at_decision_boundary(7000, d));
    CHECK_FALSE(at_decision_boundary(200, d));
    CHECK_FALSE(at_decision_boundary(999, d));
    CHECK_FALSE(at_decision_boundary(1500, d));
}

TEST_CASE("round-robin sensing covers all channels evenly") {
    // Any one vehicle visits every channel across the 5 cycles of a decision
    // interval; within one cycle the 10 members split 2-per-channel.
    for (int round = 0; round < 3; ++round) {
        for (int i = 0; i < 10; ++i) {
            std::set<int> seen;
            for (int cyc = 0; cyc < 5; ++cyc) {
                const int ch = assigned_channel(i, cyc, round, 5);
                CHECK(ch >= 0);
                CHECK(ch < 5);
                seen.insert(ch);
            }
            CHECK(seen.size() == 5);
        }
        for (int cyc = 0; cyc < 5; ++cyc) {
            int hist[5] = {0, 0, 0, 0, 0};
            for (int i = 0; i < 10; ++i) hist[assigned_channel(i, cyc, round, 5)]++;
            for (int ch = 0; ch < 5; ++ch) CHECK(hist[ch] == 2);
        }
    }
    // Advancing the round shifts the pattern exactly like advancing the cycle.
    CHECK(assigned_channel(3, 1, 2, 5) == assigned_channel(3, 2, 1, 5));
}

TEST_CASE("ledger: transmission-phase reports only on the current channel") {
    EnergyLedger led(5, 5, 2, -65.0, 3.0);
    CHECK(led.cycles() == 5);
    CHECK(led.n_channels() == 5);
    CHECK(led.current_channel() == 2);
    CHECK_NOTHROW(led.append(0, 4, -70.0, Phase::Sensing));
    CHECK_NOTHROW(led.append(0, 2, -80.0, Phase::Transmission));
    CHECK_THROWS_AS(led.append(0, 3, -80.0, Phase::Transmission), PhaseViolation);
    led.set_current_channel(3);
    CHECK_NOTHROW(led.append(1, 3, -80.0, Phase::Transmission));
    CHECK_THROWS_AS(led.append(1, 2, -80.0, Phase::Transmission), PhaseViolation);

    REQUIRE(led.cell(0, 4).size() == 1);
    CHECK(led.cell(0, 4)[0] == -70.0);
    CHECK(led.cell(0, 0).empty());
    led.clear();
    CHECK(led.cell(0, 4).empty());
    CHECK(led.cell(0, 2).empty());
}

TEST_CASE("fusion averages in the linear power domain by default") {
    EnergyLedger led(5, 5, 2, -65.0, 0.0);
    led.append(0, 0, -60.0, Phase::Sensing);
    led.append(3, 0, -70.0, Phase::Sensing);
    const auto avg = fuse_and_average(led);
    REQUIRE(avg.size() == 5);
    REQUIRE(avg[0].has_value());
    // mean(1e-6, 1e-7) mW = 5.5e-7 mW = -62.596 dBm, not the dB mean -65.
    CHECK(*avg[0] == doctest::Approx(-62.5964).epsilon(1e-4));
    CHECK_FALSE(avg[1].has_value());
    CHECK_FALSE(avg[4].has_value());

    const auto avg_db = fuse_and_average(led, true);
    CHECK(*avg_db[0] == doctest::Approx(-65.0));
}

TEST_CASE("switching rule: worked example at both costs") {
    // Plan order 490, 498, 506, 514, 522; readings
    // {490: -60, 498: -93, 506: -95, 514: -92, 522: -58}, currently on 498.
    const std::vector<std::optional<double>> avg{-60.0, -93.0, -95.0, -92.0, -58.0};
    // Cost 3 dB: quietest alternative (506, -95) is not 3 dB better -> stay.
    CHECK(select_channel(avg, 1, 3.0, -65.0) == 1);
    // Cost 0: any strict improvement wins -> move to 506.
    CHECK(select_channel(avg, 1, 0.0, -65.0) == 2);
}

TEST_CASE("switching rule: primitive decision cases") {
    // Better candidate, admissible: switch.
    CHECK(switching_decision(-93.0, -95.0, 2, 0.0, -65.0).switch_channel);
    CHECK(switching_decision(-93.0, -95.0, 2, 0.0, -65.0).target_index == 2);
    // Needs strictly more than the cost margin.
    CHECK_FALSE(switching_decision(-93.0, -95.0, 2, 2.0, -65.0).switch_channel);
    CHECK(switching_decision(-93.0, -95.1, 2, 2.0, -65.0).switch_channel);
    // Equal readings never switch, even at zero cost.
    CHECK_FALSE(switching_decision(-70.0, -70.0, 0, 0.0, -65.0).switch_channel);
    // Candidate above the occupancy threshold is inadmissible.
    CHECK_FALSE(switching_decision(-50.0, -60.0, 0, 0.0, -65.0).switch_channel);
    // Boundary: candidate exactly at the threshold is admissible.
    CHECK(switching_decision(-60.0, -65.0, 0, 0.0, -65.0).switch_channel);
}

TEST_CASE("switching rule: hysteresis is monotone in the cost") {
    // e_ch - e_i = 10 dB: switches for any cost below 10, never at or above.
    for (double c : {0.0, 5.0, 9.0, 9.99}) {
        CAPTURE(c);
        CHECK(switching_decision(-80.0, -90.0, 1, c, -65.0).switch_channel);
    }
    for (double c : {10.0, 10.01, 15.0}) {
        CAPTURE(c);
        CHECK_FALSE(switching_decision(-80.0, -90.0, 1, c, -65.0).switch_channel);
    }
}

TEST_CASE("channel selection: candidate is the argmin, ties to the lowest index") {
    const std::vector<std::optional<double>> tie{-90.0, std::nullopt, -80.0, -90.0,
                                                 std::nullopt};
    CHECK(select_channel(tie, 2, 0.0, -65.0) == 0);
    // Argmin equal to the current channel -> stay.
    const std::vector<std::optional<double>> self_best{-70.0, -90.0, -80.0};
    CHECK(select_channel(self_best, 1, 0.0, -65.0) == 1);
}

TEST_CASE("channel selection: unknown readings keep the current channel") {
    const std::vector<std::optional<double>> none(5, std::nullopt);
    CHECK(select_channel(none, 2, 0.0, -65.0) == 2);
    // Current unknown -> no comparison possible -> stay.
    std::vector<std::optional<double>> no_current(5, std::nullopt);
    no_current[0] = -90.0;
    CHECK(select_channel(no_current, 2, 0.0, -65.0) == 2);
}

TEST_CASE("channel selection: threshold vetoes an otherwise better candidate") {
    // Everything is loud; the quietest alternative sits above -65 dBm.
    const std::vector<std::optional<double>> loud{-60.0, -50.0, -45.0};
    CHECK(select_channel(loud, 1, 0.0, -65.0) == 1);
}
