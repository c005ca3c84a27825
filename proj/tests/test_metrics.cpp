#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "vdsa/errors.hpp"
#include "vdsa/metrics.hpp"

using namespace vdsa;

TEST_CASE("histogram: clamped binning, totals, cdf") {
    Histogram h(0.0, 1.0, 4);
    h.add(-5.0);   // clamps to bin 0
    h.add(0.5);    // bin 0
    h.add(1.5);    // bin 1
    h.add(10.0);   // clamps to bin 3
    CHECK(h.total == 4);
    CHECK(h.counts == std::vector<std::uint64_t>{2, 1, 0, 1});
    const auto cdf = h.cdf();
    REQUIRE(cdf.size() == 4);
    CHECK(cdf[0] == doctest::Approx(0.5));
    CHECK(cdf[1] == doctest::Approx(0.75));
    CHECK(cdf[2] == doctest::Approx(0.75));
    CHECK(cdf[3] == doctest::Approx(1.0));

    Histogram g(0.0, 1.0, 4);
    g.add(2.5);
    g.merge(h);
    CHECK(g.total == 5);
    CHECK(g.counts == std::vector<std::uint64_t>{2, 1, 1, 1});

    Histogram fresh;
    fresh.merge(h);  // merging into an empty histogram adopts it
    CHECK(fresh.total == 4);
    CHECK(fresh.counts == h.counts);
}

TEST_CASE("cdf sup norm") {
    Histogram a(0.0, 1.0, 4), b(0.0, 1.0, 4);
    a.add(0.5);
    a.add(3.5);
    b.add(1.5);
    b.add(3.5);
    CHECK(cdf_sup_norm(a, b) == doctest::Approx(0.5));
    CHECK(cdf_sup_norm(a, a) == doctest::Approx(0.0));
}

namespace {

TxEvent tx(int pid, MessageKind k) {
    TxEvent e;
    e.platoon_id = pid;
    e.kind = k;
    return e;
}

RxEvent rx(int pid, int follower, MessageKind k, bool ok) {
    RxEvent e;
    e.platoon_id = pid;
    e.follower_index = follower;
    e.kind = k;
    e.success = ok;
    return e;
}

MetricsLog small_log() {
    MetricsLog log;
    log.tx_events = {tx(0, MessageKind::Cam), tx(0, MessageKind::Cam),
                     tx(0, MessageKind::Cacc), tx(0, MessageKind::Cacc),
                     tx(1, MessageKind::Cam)};
    log.rx_events = {
        rx(0, 1, MessageKind::Cam, true),  rx(0, 1, MessageKind::Cam, true),
        rx(0, 1, MessageKind::Cacc, true), rx(0, 1, MessageKind::Cacc, false),
        rx(0, 2, MessageKind::Cam, true),  rx(0, 2, MessageKind::Cam, false),
        rx(0, 2, MessageKind::Cacc, false), rx(0, 2, MessageKind::Cacc, false),
        rx(1, 1, MessageKind::Cam, true),
    };
    return log;
}

}  // namespace

TEST_CASE("leader prr by kind and follower") {
    const MetricsLog log = small_log();
    const auto cam = leader_prr(log, 0, "cam");
    CHECK(cam.at(1) == doctest::Approx(1.0));
    CHECK(cam.at(2) == doctest::Approx(0.5));
    const auto cacc = leader_prr(log, 0, "cacc");
    CHECK(cacc.at(1) == doctest::Approx(0.5));
    CHECK(cacc.at(2) == doctest::Approx(0.0));
    const auto both = leader_prr(log, 0, "both");
    CHECK(both.at(1) == doctest::Approx(0.75));
    CHECK(both.at(2) == doctest::Approx(0.25));
    // Platoon filter: platoon 1 has its own single air.
    CHECK(leader_prr(log, 1, "both").at(1) == doctest::Approx(1.0));
    CHECK_THROWS_AS((void)leader_prr(log, 7, "both"), EmptyLog);
    CHECK_THROWS_AS((void)leader_prr(log, 0, "weird"), ValidationError);
}

TEST_CASE("switch count filters by platoon") {
    MetricsLog log;
    SwitchEvent e;
    e.platoon_id = 0;
    log.switch_events.push_back(e);
    log.switch_events.push_back(e);
    e.platoon_id = 1;
    log.switch_events.push_back(e);
    CHECK(switch_count(log, 0) == 2);
    CHECK(switch_count(log, 1) == 1);
    CHECK(switch_count(log, 2) == 0);
}

TEST_CASE("csv writers produce the documented stable shapes") {
    RunSummary s;
    s.strategy = "bumblebee:6";
    s.seed = 42;
    s.generated = 10;
    s.aired = 8;
    s.dropped = 1;
    s.drop_rate = 0.1;
    s.tvws_tx_us_in_sensing = 0;
    s.prr_cam[0][1] = 1.0;
    s.prr_cacc[0][1] = 0.0;
    s.prr[0][1] = 0.5;
    SwitchEvent e;
    e.t_ms = 2000;
    e.platoon_id = 0;
    e.old_channel_mhz = 498;
    e.new_channel_mhz = 506;
    e.head_distance_m = 123.456;
    s.switch_trace.push_back(e);
    s.switch_counts[0] = 1;
    s.residence_fraction[0][506] = 0.25;
    s.min_gap_m = {9.1234};
    s.min_speed_mps = {27.0};
    s.max_speed_mps = {36.5};
    SirChannelStats st;
    st.total = 2;
    st.below_required = 1;
    s.sir_by_channel[490] = st;

    CHECK(prr_by_position_csv(s) ==
          "platoon_id,follower_index,kind,prr\n"
          "0,1,cam,1.000000\n"
          "0,1,cacc,0.000000\n"
          "0,1,both,0.500000\n");
    CHECK(switch_trace_csv(s) ==
          "time_s,platoon_id,old_channel_mhz,new_channel_mhz,head_distance_m\n"
          "2.000,0,498,506,123.46\n");
    CHECK(switch_counts_csv(s) == "platoon_id,count\n0,1\n");
    CHECK(run_summary_csv(s) ==
          "key,value\n"
          "strategy,bumblebee:6\n"
          "seed,42\n"
          "generated,10\n"
          "aired,8\n"
          "dropped,1\n"
          "drop_rate,0.100000\n"
          "tvws_tx_us_in_sensing,0\n"
          "min_gap_m_p0,9.123\n"
          "min_speed_mps_p0,27.000\n"
          "max_speed_mps_p0,36.500\n"
          "switch_count_p0,1\n"
          "residence_p0_506,0.250000\n"
          "sir_below_required_490,0.500000\n"
          "sir_samples_490,2\n");

    Histogram h(0.0, 0.25, 560);
    h.add(30.1);
    h.add(30.2);  // same 0.25 dB bin
    h.add(100.0);
    s.sir_by_receiver_channel[{4, 490}] = h;
    CHECK(sir_samples_csv(s) ==
          "receiver_id,channel_mhz,bin_low_db,count\n"
          "4,490,30.00,2\n"
          "4,490,100.00,1\n");
}

TEST_CASE("mean with normal confidence half-width") {
    const MeanCi m = mean_ci({1.0, 2.0, 3.0});
    CHECK(m.n == 3);
    CHECK(m.mean == doctest::Approx(2.0));
    CHECK(m.half_width_95 == doctest::Approx(1.131585).epsilon(1e-5));
    CHECK(mean_ci({}).n == 0);
    CHECK(mean_ci({5.0}).half_width_95 == 0.0);
}

TEST_CASE("spearman: exact hand values") {
    const SpearmanResult up = spearman({1, 2, 3, 4}, {1, 3, 2, 4});
    CHECK(up.rho == doctest::Approx(0.8));
    const SpearmanResult perfect = spearman({1, 2, 3, 4, 5}, {10, 20, 30, 40, 50});
    CHECK(perfect.rho == doctest::Approx(1.0));
    CHECK(perfect.p_one_sided == doctest::Approx(0.0));
    const SpearmanResult anti = spearman({1, 2, 3, 4, 5}, {50, 40, 30, 20, 10});
    CHECK(anti.rho == doctest::Approx(-1.0));
    CHECK(anti.p_one_sided == doctest::Approx(1.0));
    // Average ranks on ties: y ranks {1.5, 1.5, 3, 4} -> rho = sqrt(0.9).
    const SpearmanResult tied = spearman({1, 2, 3, 4}, {1, 1, 2, 3});
    CHECK(tied.rho == doctest::Approx(0.948683).epsilon(1e-5));
    // Monotone association over many points is significant.
    std::vector<double> x, y;
    for (int i = 0; i < 30; ++i) {
        x.push_back(i);
        y.push_back(i + ((i * 7) % 3));
    }
    const SpearmanResult many = spearman(x, y);
    CHECK(many.rho > 0.9);
    CHECK(many.p_one_sided < 1e-6);
}
