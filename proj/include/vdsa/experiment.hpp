#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vdsa/config.hpp"
#include "vdsa/metrics.hpp"

namespace vdsa {

struct RunOutput {
    SimConfig cfg;
    RunSummary summary;
};

struct MatrixOptions {
    std::vector<Strategy> strategies;
    std::vector<std::uint64_t> seeds;
    std::optional<std::filesystem::path> out_dir;  // write per-run CSVs + manifest
    int jobs = 1;
};

/// Runs every (strategy, seed) combination of the base config.  Output order
/// is strategies-major, seeds-minor regardless of scheduling; individual runs
/// are deterministic, so the whole matrix is too.
std::vector<RunOutput> run_matrix(const SimConfig& base, const MatrixOptions& opt);

/// Canonical evaluation set: baseline, fixed TVWS and the three costs.
std::vector<Strategy> acceptance_strategies();
std::vector<std::uint64_t> acceptance_seeds(bool quick);

/// The isolation scenario for the proximity criterion: quadruple-length road,
/// no background traffic, platoons pinned at opposite ends, field stretched to
/// keep the per-position levels identical.
SimConfig pinned_apart_config(const SimConfig& base);

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string details;
};

/// Checks every acceptance criterion against a completed default-scenario
/// matrix.  Criteria that need extra runs (isolation scenario, repeat-run
/// determinism) launch them internally with `jobs` workers.
std::vector<CriterionResult> evaluate_criteria(const SimConfig& base,
                                               const std::vector<RunOutput>& results,
                                               bool quick, int jobs = 1);

std::string criteria_report(const std::vector<CriterionResult>& rs);

/// FNV-1a 64-bit over a string; used to fingerprint configs in manifests.
std::uint64_t fnv1a64(const std::string& s);

}  // namespace vdsa
