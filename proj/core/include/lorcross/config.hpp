#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "lorcross/besov.hpp"
#include "lorcross/norms.hpp"
#include "lorcross/report.hpp"

namespace lorcross {

// Flat `key = value` experiment description.  Lists are comma-separated and,
// when a per-axis key is given explicitly, must have exactly m entries;
// absent keys fall back to per-axis defaults.  `source` may repeat, each line
// adding one input (sample file or gen: spec); without sources the corpus is
// generated from the seed, which is then mandatory.
struct ExperimentConfig {
    std::vector<std::string> checks;

    int m = 1;
    std::array<int, 3> dims{64, 1, 1};

    std::vector<std::string> psi_specs{"pow:0.55"};  // target weights
    std::vector<std::string> phi_specs{"pow:0.7"};   // host weights
    std::vector<double> tau{2.0};                    // target exponents
    std::vector<double> eta{2.0};                    // host exponents
    std::vector<double> theta{3.0};                  // smoothness sum exponents
    std::vector<double> r{0.5};                      // smoothness orders
    std::vector<double> gamma{1.0};                  // cross anisotropy
    std::vector<double> lambda{1.6};                 // power scale for lower bounds

    int n_min = 1;   // first scale (cross level, box scale, ...)
    int n_max = 4;   // last scale; sequence checks truncate at index n_max
    int corpus = 6;  // generated cases per check
    int band = 3;    // random generator band exponent
    int depth = 16;  // probe depth for weight-level checks
    double q = 2.0;  // integral exponent for the head/tail weight check
    char variant = 'a';

    std::vector<std::string> sources;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out_dir = ".";
    int threads = 1;

    LorentzParams target_params() const;
    LorentzParams space_params() const;
    BesovParams besov_params() const;
};

const std::vector<std::string>& known_checks();

// Throws std::invalid_argument carrying every "<origin>:<line>: ..." error.
ExperimentConfig parse_config(std::string_view text, const std::string& origin = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

// Build the check's corpus from the config and run it; deterministic given
// the seed, independent of scheduling.
VerificationReport run_check(const ExperimentConfig& cfg, const std::string& check_id);

// Run every configured check and write <check>.csv into out_dir.  Returns 0
// when every report is clean, 1 when any precondition flag was raised.
int run(const ExperimentConfig& cfg);

}  // namespace lorcross
