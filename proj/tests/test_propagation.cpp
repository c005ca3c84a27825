#include <cmath>
#include <vector>

#include "doctest.h"
#include "vdsa/errors.hpp"
#include "vdsa/propagation.hpp"
#include "vdsa/units.hpp"

using namespace vdsa;

namespace {

DttField flat_field(int ch, double dbm, double sigma = 0.0, double len = 5000.0) {
    DttField f;
    f.segments_by_channel_mhz[ch] = {DttSegment{0.0, len, 0.0, dbm, sigma}};
    return f;
}

const std::vector<int> kPlan{490, 498, 506, 514, 522};

}  // namespace

TEST_CASE("segment lookup is half-open with the road end in the last segment") {
    DttField f;
    f.segments_by_channel_mhz[490] = {
        DttSegment{0, 1000, 0, -60, 0}, DttSegment{1000, 2000, 0, -50, 0}};
    CHECK(f.segment_index(490, 0.0) == 0);
    CHECK(f.segment_index(490, 999.999) == 0);
    CHECK(f.segment_index(490, 1000.0) == 1);
    CHECK(f.segment_index(490, 2000.0) == 1);  // road end
    CHECK(f.segment_index(490, 2000.1) == -1);
    CHECK(f.segment_index(522, 500.0) == -1);  // unoccupied channel
    CHECK(f.occupied(490));
    CHECK_FALSE(f.occupied(522));
}

TEST_CASE("dtt power follows the piecewise-linear mean when sigma is zero") {
    const ShadowingSampler sh(1);
    const DttField flat = flat_field(490, -60.0);
    CHECK(dtt_power_at(flat, sh, 0, 0, 490, 0.0) == doctest::Approx(-60.0));
    CHECK(dtt_power_at(flat, sh, 5, 3, 490, 4999.0) == doctest::Approx(-60.0));

    DttField ramp;
    // -70 dBm at x=0 rising to -50 dBm at x=1000.
    ramp.segments_by_channel_mhz[522] = {DttSegment{0, 1000, 0.02, -70.0, 0.0}};
    CHECK(dtt_power_at(ramp, sh, 0, 0, 522, 250.0) == doctest::Approx(-65.0));
    CHECK(dtt_power_at(ramp, sh, 0, 0, 522, 1000.0) == doctest::Approx(-50.0));
    CHECK(dtt_power_at(ramp, sh, 0, 0, 490, 10.0) == kNegInfDbm);
    CHECK_THROWS_AS((void)dtt_power_at(ramp, sh, 0, 0, 522, 1500.0), ValidationError);
}

TEST_CASE("shadowing draws are reproducible pure functions of the key") {
    const ShadowingSampler a(42), b(42), c(43);
    const double d1 = a.draw_db(7, 490, 2, 5, 3.0);
    CHECK(d1 == a.draw_db(7, 490, 2, 5, 3.0));
    CHECK(d1 == b.draw_db(7, 490, 2, 5, 3.0));
    CHECK(d1 != c.draw_db(7, 490, 2, 5, 3.0));
    CHECK(d1 != a.draw_db(8, 490, 2, 5, 3.0));
    CHECK(d1 != a.draw_db(7, 522, 2, 5, 3.0));
    CHECK(d1 != a.draw_db(7, 490, 3, 5, 3.0));
    CHECK(d1 != a.draw_db(7, 490, 2, 6, 3.0));
    CHECK(a.draw_db(7, 490, 2, 5, 0.0) == 0.0);
    // Sigma scales the same unit draw.
    CHECK(a.draw_db(7, 490, 2, 5, 6.0) == doctest::Approx(2.0 * d1));
}

TEST_CASE("shadowing draws are N(0, sigma^2) in aggregate") {
    const ShadowingSampler sh(123);
    const double sigma = 3.0;
    const int n = 20000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double d = sh.draw_db(static_cast<std::uint32_t>(i), 490, 0, 0, sigma);
        sum += d;
        sumsq += d * d;
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    // Monte Carlo tolerance: 3 standard errors.
    CHECK(std::abs(mean) < 3.0 * sigma / std::sqrt(static_cast<double>(n)));
    CHECK(std::sqrt(var) == doctest::Approx(sigma).epsilon(0.03));
}

TEST_CASE("v2v pathloss hand values") {
    const PathlossParams pl{};
    // CCH, 100 m: 23 - (47.86 + 27.5 * 2) = -79.86 dBm.
    CHECK(v2v_rx_power(23.0, 100.0, pl, false) == doctest::Approx(-79.86));
    // TVWS, 100 m: 12 - (47.86 - 21.33 + 55) = -69.53 dBm.
    CHECK(v2v_rx_power(12.0, 100.0, pl, true) == doctest::Approx(-69.53));
    // 1 m reference and the sub-metre clamp.
    CHECK(v2v_rx_power(23.0, 1.0, pl, false) == doctest::Approx(-24.86));
    CHECK(v2v_rx_power(23.0, 0.25, pl, false) == v2v_rx_power(23.0, 1.0, pl, false));
    // 10 m: one decade = 27.5 dB more loss than at 1 m.
    CHECK(v2v_rx_power(23.0, 10.0, pl, false) == doctest::Approx(-52.36));
}

TEST_CASE("acir saturates past the table edge") {
    const AcirTable acir{};
    CHECK(acir.rejection_at(0) == 0.0);
    CHECK(acir.rejection_at(1) == 30.0);
    CHECK(acir.rejection_at(-1) == 30.0);
    CHECK(acir.rejection_at(2) == 43.0);
    CHECK(acir.rejection_at(-2) == 43.0);
    CHECK(acir.rejection_at(3) == 50.0);
    CHECK(acir.rejection_at(7) == 50.0);
}

TEST_CASE("effective dtt power: two-source leakage hand cases") {
    const ShadowingSampler sh(9);
    DttField f;
    f.segments_by_channel_mhz[490] = {DttSegment{0, 5000, 0, -60.0, 0.0}};
    f.segments_by_channel_mhz[522] = {DttSegment{0, 5000, 0, -55.0, 0.0}};
    const AcirTable acir{};

    // Receiving on 506: both sources two channels away -> 43 dB each.
    const double at506 = effective_dtt_power(f, sh, 0, 0, kPlan, 506, acir, 100.0);
    CHECK(at506 == doctest::Approx(mw_to_dbm(dbm_to_mw(-60.0 - 43.0) + dbm_to_mw(-55.0 - 43.0)))
                       .epsilon(1e-12));
    CHECK(at506 == doctest::Approx(-96.8064).epsilon(1e-4));

    // Receiving on 498: 490 is adjacent (30 dB), 522 is three away (50 dB).
    const double at498 = effective_dtt_power(f, sh, 0, 0, kPlan, 498, acir, 100.0);
    CHECK(at498 == doctest::Approx(mw_to_dbm(dbm_to_mw(-90.0) + dbm_to_mw(-105.0)))
                       .epsilon(1e-12));
    CHECK(at498 == doctest::Approx(-89.8648).epsilon(1e-4));

    // Co-channel: no rejection on 490 itself, 522 at 50 dB (offset 4 saturates).
    const double at490 = effective_dtt_power(f, sh, 0, 0, kPlan, 490, acir, 100.0);
    CHECK(at490 == doctest::Approx(mw_to_dbm(dbm_to_mw(-60.0) + dbm_to_mw(-105.0)))
                       .epsilon(1e-12));

    // No occupied channels at all -> no signal.
    const DttField empty;
    CHECK(std::isinf(effective_dtt_power(empty, sh, 0, 0, kPlan, 506, acir, 100.0)));
}

TEST_CASE("link sinr: hand cases and linear-domain summation") {
    // No interference, no DTT: SINR = wanted - noise.
    CHECK(link_sinr(-70.0, {}, -95.0, kNegInfDbm) == doctest::Approx(25.0).epsilon(1e-12));
    // Equal-power interferer dominates the denominator.
    CHECK(link_sinr(-70.0, {-70.0}, -95.0, kNegInfDbm)
          == doctest::Approx(-0.0137117).epsilon(1e-4));
    // DTT leakage enters the denominator like an interferer.
    CHECK(link_sinr(-70.0, {}, -95.0, -95.0)
          == doctest::Approx(-70.0 - mw_to_dbm(2.0 * dbm_to_mw(-95.0))).epsilon(1e-12));

    // Randomized cross-check against an explicit power-domain sum.
    std::uint64_t s = 12345;
    auto next = [&s]() {
        s = s * 6364136223846793005ULL + 1442695040888963407ULL;
        return -100.0 + 70.0 * static_cast<double>(s >> 40) / 16777216.0;
    };
    for (int rep = 0; rep < 300; ++rep) {
        const double wanted = next();
        const double noise = next();
        const double dtt = next();
        std::vector<double> interf;
        for (int i = 0; i < rep % 5; ++i) interf.push_back(next());
        double denom = std::pow(10.0, noise / 10.0) + std::pow(10.0, dtt / 10.0);
        for (double p : interf) denom += std::pow(10.0, p / 10.0);
        const double expect = wanted - 10.0 * std::log10(denom);
        CHECK(link_sinr(wanted, interf, noise, dtt) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("dtt sir is a plain ratio in dB") {
    CHECK(dtt_sir(-60.0, -103.0) == doctest::Approx(43.0));
    CHECK(dtt_sir(-66.0, -103.9) == doctest::Approx(37.9));
}
