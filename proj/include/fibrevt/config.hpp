#pragma once

// Pipeline configuration, read from a TOML-style key/value file:
//
//   vf_values = [0.20, 0.22, 0.24]
//   samples_per_vf = 60
//   [matrix]
//   hardening = [[0.0, 60.0], [0.05, 80.0]]
//
// Top-level keys: vf_values, samples_per_vf, h_c, r_f, image_resolution,
// master_seed, workers. Sections: [matrix] (E_GPa, nu, hardening),
// [fibre] (E_GPa, nu), [test] (max_strain, n_increments, element_size_factor,
// max_cutbacks), [microgen] (min_gap_factor, max_attempts).
// Unknown or repeated keys are errors; omitted keys keep their defaults.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fibrevt/material.hpp"
#include "fibrevt/microgen.hpp"
#include "fibrevt/virtest.hpp"

namespace fibrevt {

struct PipelineConfig {
    std::vector<double> vf_values = default_vf_values();
    int samples_per_vf = 60;
    double h_c = 25.8;
    double r_f = 0.516;
    int image_resolution = 256;
    std::uint64_t master_seed = 2024;
    PhaseMaterials materials = PhaseMaterials::defaults();
    TensileTestConfig test{};
    PlacementOptions placement{};
    int workers = 1;

    /// 0.20 to 0.44 in steps of 0.02.
    static std::vector<double> default_vf_values();

    /// Throws ConfigError on any invariant violation.
    void validate() const;
    int total_samples() const { return static_cast<int>(vf_values.size()) * samples_per_vf; }
};

PipelineConfig parse_config(const std::string& text);

/// Throws ConfigError naming the path if the file cannot be read.
PipelineConfig load_config(const std::filesystem::path& path);

/// Canonical serialization of every result-affecting field (workers excluded);
/// parse_config(canonical_text(c)) reproduces c.
std::string canonical_text(const PipelineConfig& cfg);

std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t v);

std::uint64_t config_hash(const PipelineConfig& cfg);
std::uint64_t hardening_hash(const MaterialModel& matrix);

}  // namespace fibrevt
