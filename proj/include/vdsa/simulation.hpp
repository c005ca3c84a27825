#pragma once

#include <string>

#include "vdsa/config.hpp"
#include "vdsa/metrics.hpp"
#include "vdsa/world.hpp"

namespace vdsa {

struct RunOptions {
    // When set, platoon trajectories (tick_ms,id,position_m,speed_mps) are
    // appended to this stream-backed string every trajectory_every_ms.
    std::string* trajectory_csv = nullptr;
    int trajectory_every_ms = 100;
};

struct RunResult {
    MetricsLog log;
    RunSummary summary;
};

/// One complete seeded simulation: mobility ticks, microsecond-resolution
/// CSMA/transmission events, duty-cycled sensing and channel selection, and
/// metrics capture.  Pure function of cfg (validated) and cfg.seed.
RunResult run_simulation(const SimConfig& cfg, const RunOptions& opt = {});

}  // namespace vdsa
