#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vdsa/config.hpp"
#include "vdsa/metrics.hpp"
#include "vdsa/mobility.hpp"
#include "vdsa/simulation.hpp"
#include "vdsa/vdsa_algo.hpp"

namespace py = pybind11;

namespace {

py::dict summary_to_dict(const vdsa::RunSummary& s) {
    py::dict d;
    d["strategy"] = s.strategy;
    d["seed"] = s.seed;
    d["prr"] = s.prr;
    d["prr_cam"] = s.prr_cam;
    d["prr_cacc"] = s.prr_cacc;
    d["switch_counts"] = s.switch_counts;
    py::list trace;
    for (const auto& e : s.switch_trace) {
        py::dict ev;
        ev["t_ms"] = e.t_ms;
        ev["platoon_id"] = e.platoon_id;
        ev["old_channel_mhz"] = e.old_channel_mhz;
        ev["new_channel_mhz"] = e.new_channel_mhz;
        ev["head_distance_m"] = e.head_distance_m;
        trace.append(ev);
    }
    d["switch_trace"] = trace;
    d["residence_fraction"] = s.residence_fraction;
    py::dict sir;
    for (const auto& [ch, stats] : s.sir_by_channel) {
        py::dict cs;
        cs["total"] = stats.total;
        cs["below_required"] = stats.below_required;
        sir[py::int_(ch)] = cs;
    }
    d["sir_by_channel"] = sir;
    d["min_gap_m"] = s.min_gap_m;
    d["min_speed_mps"] = s.min_speed_mps;
    d["max_speed_mps"] = s.max_speed_mps;
    d["generated"] = s.generated;
    d["aired"] = s.aired;
    d["dropped"] = s.dropped;
    d["drop_rate"] = s.drop_rate;
    d["tvws_tx_us_in_sensing"] = s.tvws_tx_us_in_sensing;
    return d;
}

}  // namespace

PYBIND11_MODULE(pyvdsa, m) {
    m.doc() = "Motorway platoon TVWS channel-selection simulator";

    m.def("default_config_json",
          [] { return vdsa::serialize_config(vdsa::default_config()); },
          "Canonical scenario as a JSON string");

    m.def("validate_config_json",
          [](const std::string& text) {
              vdsa::validate_config(vdsa::parse_config(text));
              return true;
          },
          py::arg("json_text"), "Parse + validate; raises RuntimeError naming the bad field");

    m.def("phase_of",
          [](std::int64_t t_ms) {
              return vdsa::phase_of(t_ms, vdsa::DutyCycleParams{}) == vdsa::Phase::Sensing
                         ? "sensing"
                         : "transmission";
          },
          py::arg("t_ms"), "Duty-cycle phase at t (default cycle timing)");

    m.def("switching_decision",
          [](double e_ch_dbm, double e_i_dbm, double cost_db, double threshold_dbm) {
              const auto d = vdsa::switching_decision(e_ch_dbm, e_i_dbm, 1, cost_db, threshold_dbm);
              return d.switch_channel;
          },
          py::arg("e_ch_dbm"), py::arg("e_i_dbm"), py::arg("cost_db"), py::arg("threshold_dbm"),
          "Cost-biased switch rule for one candidate");

    m.def("select_channel",
          [](const std::vector<std::optional<double>>& averages, int current, double cost_db,
             double threshold_dbm) {
              return vdsa::select_channel(averages, current, cost_db, threshold_dbm);
          },
          py::arg("averages_dbm"), py::arg("current_index"), py::arg("cost_db"),
          py::arg("threshold_dbm"), "Next channel index from fused per-channel averages");

    m.def("lead_velocity_profile",
          [](double t_s) { return vdsa::lead_velocity_profile(t_s, vdsa::LeadProfileParams{}); },
          py::arg("t_s"), "Leading-vehicle speed (m/s) of the default 130<->100 km/h profile");

    m.def("run",
          [](const std::string& config_json) {
              vdsa::RunResult result = [&] {
                  const auto cfg = vdsa::parse_config(config_json);
                  py::gil_scoped_release release;
                  return vdsa::run_simulation(cfg);
              }();
              return summary_to_dict(result.summary);
          },
          py::arg("config_json"),
          "Run one simulation from a JSON config and return the metrics digest");
}
