#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "vdsa/config.hpp"
#include "vdsa/errors.hpp"
#include "vdsa/experiment.hpp"
#include "vdsa/simulation.hpp"

namespace {

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        if (part.empty()) continue;
        const auto dots = part.find("..");
        if (dots == std::string::npos) {
            seeds.push_back(std::stoull(part));
        } else {
            const std::uint64_t lo = std::stoull(part.substr(0, dots));
            const std::uint64_t hi = std::stoull(part.substr(dots + 2));
            if (hi < lo) throw vdsa::ParseError("seed range is inverted: " + part);
            for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
        }
    }
    if (seeds.empty()) throw vdsa::ParseError("no seeds in: " + text);
    return seeds;
}

std::vector<vdsa::Strategy> parse_strategies(const std::string& text) {
    std::vector<vdsa::Strategy> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ','))
        if (!part.empty()) out.push_back(vdsa::parse_strategy(part));
    if (out.empty()) throw vdsa::ParseError("no strategies in: " + text);
    return out;
}

double tail3(const vdsa::RunSummary& s, const std::string& kind) {
    const auto& maps = kind == "cam"    ? s.prr_cam
                       : kind == "cacc" ? s.prr_cacc
                                        : s.prr;
    if (maps.empty()) return 0.0;
    double acc = 0.0;
    for (const auto& [pid, prr] : maps) {
        std::vector<int> idx;
        for (const auto& [i, v] : prr) idx.push_back(i);
        std::sort(idx.begin(), idx.end());
        double sum = 0.0;
        int n = 0;
        for (std::size_t k = idx.size() >= 3 ? idx.size() - 3 : 0; k < idx.size(); ++k) {
            sum += prr.at(idx[k]);
            n++;
        }
        acc += n ? sum / n : 0.0;
    }
    return acc / static_cast<double>(maps.size());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Deterministic motorway platoon simulator: duty-cycled TVWS channel "
        "selection, CCH/TVWS messaging, CACC mobility and DTT protection metrics"};

    std::string config_path;
    std::string seeds_text;
    std::string strategies_text;
    std::string out_dir;
    std::string prr_kind = "both";
    std::string trajectory_path;
    std::string reproduce_path;
    int jobs = static_cast<int>(std::thread::hardware_concurrency());
    if (jobs <= 0) jobs = 1;
    bool quick = false;
    bool print_default = false;
    bool skip_criteria = false;

    app.add_option("--config", config_path, "Scenario config file (JSON); default = built-in scenario")
        ->envname("VDSA_CONFIG");
    app.add_option("--seeds", seeds_text, "Seed list, e.g. 1..20 or 1,5,9")->envname("VDSA_SEEDS");
    app.add_option("--strategy", strategies_text,
                   "Comma list of cch-only | fixed-tvws | bumblebee:<cost_db>")
        ->envname("VDSA_STRATEGY");
    app.add_option("--jobs", jobs, "Parallel simulation workers")->envname("VDSA_JOBS");
    app.add_option("--out", out_dir, "Output directory for per-run CSVs and manifest.json")
        ->envname("VDSA_OUT");
    app.add_flag("--quick", quick, "Smoke-test matrix (4 seeds)")->envname("VDSA_QUICK");
    app.add_flag("--print-default-config", print_default,
                 "Print the canonical scenario config as JSON and exit");
    app.add_option("--prr-kind", prr_kind, "Leader PRR flavour in the report: cam | cacc | both")
        ->check(CLI::IsMember({"cam", "cacc", "both"}))
        ->envname("VDSA_PRR_KIND");
    app.add_flag("--skip-criteria", skip_criteria, "Run the matrix but skip the acceptance checks");
    app.add_option("--trajectory-dump", trajectory_path,
                   "Write platoon trajectories of a single run (requires one strategy and one seed)");
    app.add_option("--reproduce", reproduce_path,
                   "Re-run the matrix recorded in an existing manifest.json");

    CLI11_PARSE(app, argc, argv);

    try {
        if (print_default) {
            std::cout << vdsa::serialize_config(vdsa::default_config()) << "\n";
            return 0;
        }

        vdsa::SimConfig base;
        vdsa::MatrixOptions opt;
        opt.jobs = jobs;

        if (!reproduce_path.empty()) {
            std::ifstream is(reproduce_path);
            if (!is) throw std::runtime_error("cannot read " + reproduce_path);
            const auto manifest = nlohmann::json::parse(is);
            base = vdsa::parse_config(manifest.at("config").dump());
            for (const auto& run : manifest.at("runs")) {
                const auto strat = vdsa::parse_strategy(run.at("strategy").get<std::string>());
                if (std::find(opt.strategies.begin(), opt.strategies.end(), strat) ==
                    opt.strategies.end())
                    opt.strategies.push_back(strat);
                const auto seed = run.at("seed").get<std::uint64_t>();
                if (std::find(opt.seeds.begin(), opt.seeds.end(), seed) == opt.seeds.end())
                    opt.seeds.push_back(seed);
            }
        } else {
            base = config_path.empty() ? vdsa::default_config() : vdsa::load_config(config_path);
            opt.strategies = strategies_text.empty() ? vdsa::acceptance_strategies()
                                                     : parse_strategies(strategies_text);
            opt.seeds = seeds_text.empty() ? vdsa::acceptance_seeds(quick) : parse_seeds(seeds_text);
        }
        if (!out_dir.empty()) opt.out_dir = std::filesystem::path(out_dir);

        if (!trajectory_path.empty()) {
            if (opt.strategies.size() != 1 || opt.seeds.size() != 1)
                throw std::runtime_error("--trajectory-dump needs exactly one strategy and one seed");
            vdsa::SimConfig cfg = base;
            cfg.strategy = opt.strategies[0];
            cfg.seed = opt.seeds[0];
            std::string csv;
            vdsa::RunOptions ro;
            ro.trajectory_csv = &csv;
            vdsa::run_simulation(cfg, ro);
            std::ofstream os(trajectory_path, std::ios::binary);
            os << csv;
            std::cout << "wrote " << trajectory_path << "\n";
        }

        const auto results = vdsa::run_matrix(base, opt);

        std::cout << std::fixed << std::setprecision(4);
        for (const auto& r : results) {
            int switches = 0;
            for (const auto& [pid, n] : r.summary.switch_counts) switches += n;
            std::cout << std::left << std::setw(14) << r.summary.strategy << " seed "
                      << std::setw(3) << r.summary.seed << " tail3-prr(" << prr_kind << ") "
                      << tail3(r.summary, prr_kind) << "  switches " << switches << "  drop-rate "
                      << r.summary.drop_rate << "\n";
        }

        if (skip_criteria) return 0;

        bool have_baseline = false, have_bumblebee = false, have_fixed = false;
        for (const auto& s : opt.strategies) {
            have_baseline |= s.kind == vdsa::StrategyKind::CchOnly;
            have_fixed |= s.kind == vdsa::StrategyKind::FixedTvws;
            have_bumblebee |= s.kind == vdsa::StrategyKind::Bumblebee;
        }
        if (!(have_baseline && have_bumblebee && have_fixed)) {
            std::cout << "acceptance checks skipped: matrix lacks baseline, fixed or bumblebee runs\n";
            return 0;
        }

        const auto criteria = vdsa::evaluate_criteria(base, results, quick, jobs);
        std::cout << "\n" << vdsa::criteria_report(criteria);
        bool all = true;
        for (const auto& cr : criteria) all &= cr.pass;
        std::cout << (all ? "ALL CRITERIA PASSED\n" : "CRITERIA FAILED\n");
        return all ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
