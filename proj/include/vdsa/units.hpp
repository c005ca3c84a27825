#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace vdsa {

using MicroSec = std::int64_t;

constexpr double kNegInfDbm = -std::numeric_limits<double>::infinity();

/// dBm -> mW. -inf maps to 0 (no signal).
inline double dbm_to_mw(double dbm) {
    return std::isinf(dbm) && dbm < 0 ? 0.0 : std::pow(10.0, dbm / 10.0);
}

/// mW -> dBm. Non-positive power maps to -inf.
inline double mw_to_dbm(double mw) {
    return mw <= 0.0 ? kNegInfDbm : 10.0 * std::log10(mw);
}

inline double db_to_lin(double db) { return std::pow(10.0, db / 10.0); }

inline double lin_to_db(double lin) {
    return lin <= 0.0 ? kNegInfDbm : 10.0 * std::log10(lin);
}

inline double kmh_to_mps(double kmh) { return kmh / 3.6; }
inline double mps_to_kmh(double mps) { return mps * 3.6; }

inline MicroSec ms_to_us(std::int64_t ms) { return ms * 1000; }
inline double us_to_s(MicroSec us) { return static_cast<double>(us) * 1e-6; }

}  // namespace vdsa
