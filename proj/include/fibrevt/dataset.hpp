#pragma once

// Batch dataset generation: microstructure -> image -> mesh -> virtual test
// -> labelled record, for every (Vf level, sample) pair.
//
// Output directory layout:
//   images/<id>.png       phase image (0 matrix, 255 fibre)
//   fibres/<id>.csv       fibre centres and radii
//   curves/<id>.csv       homogenized stress-strain curve
//   logs/<id>.csv         per-increment solver log
//   records/<id>.json     per-sample record, used by --resume
//   labels.csv            one row per sample, ordered by id
//   results.jsonl         one JSON record per sample, ordered by id
//   manifest.json         config/hardening hashes, version, status counts
//   timing.json           wall-clock figures (not reproducible by nature)

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "fibrevt/config.hpp"

namespace fibrevt {

enum class RecordStatus { Ok, Jammed, SolverFail, NotYielded };

const char* to_string(RecordStatus s);
RecordStatus parse_record_status(const std::string& s);

struct DatasetRecord {
    int id = 0;
    std::string image_path;  // relative to the output directory; empty if no image
    double vf_target = 0.0;
    double vf_actual = 0.0;
    double e_c_gpa = 0.0;      // NaN when unavailable
    double sigma_y_mpa = 0.0;  // NaN when unavailable
    std::uint64_t seed = 0;
    RecordStatus status = RecordStatus::Ok;
    int newton_total_iters = 0;
    double wall_ms = 0.0;
    double cpu_ms = 0.0;  // CPU time of this sample alone (unaffected by oversubscription)
    int fibre_count = 0;
    std::string reason;
};

struct GenerateOptions {
    int workers = 1;
    bool resume = false;
};

struct GenerationSummary {
    std::vector<DatasetRecord> records;  // ordered by id
    std::map<RecordStatus, int> counts;
    double wall_seconds = 0.0;
    int computed = 0;  // samples run in this invocation (excludes resumed ones)
};

/// 6-digit zero-padded sample id used in file names.
std::string sample_stem(int id);

/// Runs one sample end to end and writes its per-sample files.
DatasetRecord run_sample(const PipelineConfig& cfg, int id, const std::filesystem::path& out_dir);

/// Generates the whole dataset. Outputs other than timing.json and the
/// wall_ms fields are independent of the worker count.
GenerationSummary generate_dataset(const PipelineConfig& cfg, const std::filesystem::path& out_dir,
                                   const GenerateOptions& options = {});

std::string labels_csv(const std::vector<DatasetRecord>& records);
std::vector<DatasetRecord> parse_labels_csv(const std::string& text);
std::vector<DatasetRecord> read_labels_csv(const std::filesystem::path& path);

std::string record_json_line(const DatasetRecord& r);
std::string manifest_json(const PipelineConfig& cfg, const std::vector<DatasetRecord>& records);

}  // namespace fibrevt
