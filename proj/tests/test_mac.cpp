#include <cmath>
#include <random>

#include "doctest.h"
#include "vdsa/mac.hpp"
#include "vdsa/units.hpp"

using namespace vdsa;

TEST_CASE("csma: expired messages drop, fresh ones do not") {
    std::mt19937_64 rng(1);
    CHECK(csma_attempt(-120.0, -80.0, 200001, 200000, 15, rng).action == CsmaAction::Drop);
    // Age exactly equal to the period is still transmittable.
    CHECK(csma_attempt(-120.0, -80.0, 200000, 200000, 15, rng).action
          == CsmaAction::TransmitNow);
}

TEST_CASE("csma: busy strictly above the threshold, idle at or below") {
    std::mt19937_64 rng(1);
    CHECK(csma_attempt(-79.9, -80.0, 0, 200000, 15, rng).action == CsmaAction::Backoff);
    CHECK(csma_attempt(-80.0, -80.0, 0, 200000, 15, rng).action == CsmaAction::TransmitNow);
    CHECK(csma_attempt(-80.1, -80.0, 0, 200000, 15, rng).action == CsmaAction::TransmitNow);
    // The same sensed level flips outcome across a 10 dB threshold offset:
    // -70 dBm is busy against -75 dBm but idle against -65 dBm.
    CHECK(csma_attempt(-70.0, -75.0, 0, 200000, 15, rng).action == CsmaAction::Backoff);
    CHECK(csma_attempt(-70.0, -65.0, 0, 200000, 15, rng).action == CsmaAction::TransmitNow);
}

TEST_CASE("csma: backoff draws cover [1, contention window]") {
    std::mt19937_64 rng(7);
    int lo = 1000, hi = 0;
    for (int i = 0; i < 2000; ++i) {
        const CsmaResult r = csma_attempt(-60.0, -80.0, 0, 200000, 15, rng);
        REQUIRE(r.action == CsmaAction::Backoff);
        REQUIRE(r.backoff_slots >= 1);
        REQUIRE(r.backoff_slots <= 15);
        lo = std::min(lo, r.backoff_slots);
        hi = std::max(hi, r.backoff_slots);
    }
    CHECK(lo == 1);
    CHECK(hi == 15);
}

TEST_CASE("reception threshold is inclusive") {
    CHECK(receive_success(10.0, 10.0));
    CHECK(receive_success(10.0001, 10.0));
    CHECK_FALSE(receive_success(9.9999, 10.0));
}

namespace {

ActiveTx make_tx(Band band, int ch_idx, double power_dbm) {
    ActiveTx tx;
    tx.band = band;
    tx.channel_index = ch_idx;
    tx.tx_power_dbm = power_dbm;
    return tx;
}

}  // namespace

TEST_CASE("sense energy: noise floor only when the medium is quiet") {
    const PathlossParams pl{};
    const AcirTable acir{};
    CHECK(sense_energy(Band::Cch, -1, {}, {}, pl, acir, kNegInfDbm, -95.0)
          == doctest::Approx(-95.0).epsilon(1e-12));
    // On TVWS the DTT leakage joins the noise: -95 + (-100) dBm.
    CHECK(sense_energy(Band::Tvws, 2, {}, {}, pl, acir, -100.0, -95.0)
          == doctest::Approx(-93.8067).epsilon(1e-4));
}

TEST_CASE("sense energy: co-channel transmitter raises the floor") {
    const PathlossParams pl{};
    const AcirTable acir{};
    // One CCH transmitter at 100 m: rx -79.86 dBm on top of -95 noise.
    const double e = sense_energy(Band::Cch, -1, {make_tx(Band::Cch, -1, 23.0)}, {100.0},
                                  pl, acir, kNegInfDbm, -95.0);
    CHECK(e == doctest::Approx(-79.729).epsilon(1e-4));
}

TEST_CASE("sense energy: adjacent TVWS transmitter is ACIR-attenuated") {
    const PathlossParams pl{};
    const AcirTable acir{};
    // Neighbour-channel transmitter at 50 m, 12 dBm: v2v gives
    // 12 - (47.86 - 21.33 + 27.5*log10(50)) = -61.25 dBm, minus 30 dB ACIR.
    const double e = sense_energy(Band::Tvws, 2, {make_tx(Band::Tvws, 3, 12.0)}, {50.0},
                                  pl, acir, kNegInfDbm, -95.0);
    CHECK(e == doctest::Approx(-89.724).epsilon(1e-3));
    // Same transmitter sensed co-channel: no rejection.
    const double co = sense_energy(Band::Tvws, 3, {make_tx(Band::Tvws, 3, 12.0)}, {50.0},
                                   pl, acir, kNegInfDbm, -95.0);
    CHECK(co == doctest::Approx(-61.25).epsilon(1e-3));
}

TEST_CASE("sense energy: bands are isolated radios") {
    const PathlossParams pl{};
    const AcirTable acir{};
    // A loud CCH transmission is invisible to the TVWS front-end and vice versa.
    CHECK(sense_energy(Band::Tvws, 2, {make_tx(Band::Cch, -1, 23.0)}, {5.0}, pl, acir,
                       kNegInfDbm, -95.0)
          == doctest::Approx(-95.0).epsilon(1e-12));
    CHECK(sense_energy(Band::Cch, -1, {make_tx(Band::Tvws, 2, 12.0)}, {5.0}, pl, acir,
                       kNegInfDbm, -95.0)
          == doctest::Approx(-95.0).epsilon(1e-12));
}
