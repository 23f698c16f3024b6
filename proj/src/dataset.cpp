#include "fibrevt/dataset.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <ctime>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>

#include "fibrevt/errors.hpp"
#include "fibrevt/io.hpp"
#include "fibrevt/seed.hpp"
#include "json.hpp"

namespace fibrevt {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

// CPU time charged to this sample: the calling thread's clock when samples
// run concurrently (assembly is then single-threaded), else the process clock.
double cpu_ms_now() {
    timespec ts{};
    clock_gettime(omp_in_parallel() ? CLOCK_THREAD_CPUTIME_ID : CLOCK_PROCESS_CPUTIME_ID, &ts);
    return 1e3 * static_cast<double>(ts.tv_sec) + 1e-6 * static_cast<double>(ts.tv_nsec);
}

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double double_or_nan(const json& j) { return j.is_null() ? kNaN : j.get<double>(); }

json full_record(const DatasetRecord& r, const std::string& cfg_hash) {
    return json{{"config_hash", cfg_hash},
                {"id", r.id},
                {"image_path", r.image_path},
                {"vf_target", r.vf_target},
                {"vf_actual", r.vf_actual},
                {"E_c_GPa", number_or_null(r.e_c_gpa)},
                {"sigma_y_MPa", number_or_null(r.sigma_y_mpa)},
                {"seed", r.seed},
                {"status", to_string(r.status)},
                {"newton_total_iters", r.newton_total_iters},
                {"wall_ms", r.wall_ms},
                {"cpu_ms", r.cpu_ms},
                {"fibre_count", r.fibre_count},
                {"reason", r.reason}};
}

DatasetRecord record_from_json(const json& j) {
    DatasetRecord r;
    r.id = j.at("id").get<int>();
    r.image_path = j.at("image_path").get<std::string>();
    r.vf_target = j.at("vf_target").get<double>();
    r.vf_actual = j.at("vf_actual").get<double>();
    r.e_c_gpa = double_or_nan(j.at("E_c_GPa"));
    r.sigma_y_mpa = double_or_nan(j.at("sigma_y_MPa"));
    r.seed = j.at("seed").get<std::uint64_t>();
    r.status = parse_record_status(j.at("status").get<std::string>());
    r.newton_total_iters = j.at("newton_total_iters").get<int>();
    r.wall_ms = j.at("wall_ms").get<double>();
    r.cpu_ms = j.value("cpu_ms", 0.0);
    r.fibre_count = j.at("fibre_count").get<int>();
    r.reason = j.at("reason").get<std::string>();
    return r;
}

void ensure_layout(const fs::path& out) {
    for (const char* sub : {"images", "fibres", "curves", "logs", "records"}) fs::create_directories(out / sub);
}

}  // namespace

const char* to_string(RecordStatus s) {
    switch (s) {
        case RecordStatus::Ok: return "OK";
        case RecordStatus::Jammed: return "JAMMED";
        case RecordStatus::SolverFail: return "SOLVER_FAIL";
        case RecordStatus::NotYielded: return "NOT_YIELDED";
    }
    return "?";
}

RecordStatus parse_record_status(const std::string& s) {
    if (s == "OK") return RecordStatus::Ok;
    if (s == "JAMMED") return RecordStatus::Jammed;
    if (s == "SOLVER_FAIL") return RecordStatus::SolverFail;
    if (s == "NOT_YIELDED") return RecordStatus::NotYielded;
    throw std::runtime_error("unknown record status '" + s + "'");
}

std::string sample_stem(int id) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%06d", id);
    return buf;
}

DatasetRecord run_sample(const PipelineConfig& cfg, int id, const fs::path& out_dir) {
    const auto t0 = std::chrono::steady_clock::now();
    const double cpu0 = cpu_ms_now();
    DatasetRecord rec;
    rec.id = id;
    rec.vf_target = cfg.vf_values.at(static_cast<std::size_t>(id / cfg.samples_per_vf));
    rec.seed = derive_seed(cfg.master_seed, static_cast<std::uint64_t>(id));
    rec.e_c_gpa = kNaN;
    rec.sigma_y_mpa = kNaN;
    const std::string stem = sample_stem(id);

    try {
        const Microstructure ms = generate_microstructure(cfg.h_c, cfg.r_f, rec.vf_target, rec.seed, cfg.placement);
        rec.vf_actual = volume_fraction(ms);
        rec.fibre_count = static_cast<int>(ms.fibres.size());
        rec.image_path = "images/" + stem + ".png";
        write_phase_png(out_dir / rec.image_path, rasterize(ms, cfg.image_resolution));
        write_fibres_csv(out_dir / "fibres" / (stem + ".csv"), ms);

        const TestResult res = run_tensile_test(ms, cfg.materials, cfg.test);
        write_curve_csv(out_dir / "curves" / (stem + ".csv"), res.curve);
        write_solver_log_csv(out_dir / "logs" / (stem + ".csv"), res.solver_log);
        rec.newton_total_iters = res.newton_total_iters;
        rec.reason = res.failure_reason;
        switch (res.status) {
            case TestStatus::Ok:
                rec.status = RecordStatus::Ok;
                rec.e_c_gpa = res.youngs_modulus_gpa;
                rec.sigma_y_mpa = res.yield_strength_mpa;
                break;
            case TestStatus::NotYielded:
                rec.status = RecordStatus::NotYielded;
                rec.e_c_gpa = res.youngs_modulus_gpa;
                break;
            case TestStatus::SolverFail: rec.status = RecordStatus::SolverFail; break;
        }
        if (res.extrapolation_warnings > 0 && rec.reason.empty())
            rec.reason = "hardening table extrapolated at " + std::to_string(res.extrapolation_warnings) +
                         " Gauss-point updates";
    } catch (const JammingError& e) {
        rec.status = RecordStatus::Jammed;
        rec.vf_actual = e.achieved_vf();
        rec.image_path.clear();
        rec.reason = e.what();
    }
    rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    rec.cpu_ms = cpu_ms_now() - cpu0;
    write_text_atomic(out_dir / "records" / (stem + ".json"), full_record(rec, hex64(config_hash(cfg))).dump() + "\n");
    return rec;
}

GenerationSummary generate_dataset(const PipelineConfig& cfg, const fs::path& out_dir, const GenerateOptions& options) {
    cfg.validate();
    if (options.workers < 1) throw ConfigError("workers must be >= 1");
    ensure_layout(out_dir);
    const auto t0 = std::chrono::steady_clock::now();

    const int total = cfg.total_samples();
    const std::string hash = hex64(config_hash(cfg));
    std::vector<DatasetRecord> records(static_cast<std::size_t>(total));
    std::vector<int> pending;
    for (int id = 0; id < total; ++id) {
        const fs::path rec_path = out_dir / "records" / (sample_stem(id) + ".json");
        if (options.resume && fs::exists(rec_path)) {
            const json j = json::parse(read_text(rec_path));
            if (j.value("config_hash", std::string()) != hash)
                throw ConfigError("resume: " + rec_path.string() + " was produced by a different configuration");
            records[static_cast<std::size_t>(id)] = record_from_json(j);
            continue;
        }
        pending.push_back(id);
    }

    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&](int id) {
        try {
            records[static_cast<std::size_t>(id)] = run_sample(cfg, id, out_dir);
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    };

    const int n_pending = static_cast<int>(pending.size());
    if (options.workers == 1) {
        for (int id : pending) work(id);
    } else {
        omp_set_max_active_levels(1);
#pragma omp parallel for schedule(dynamic, 1) num_threads(options.workers)
        for (int k = 0; k < n_pending; ++k) work(pending[static_cast<std::size_t>(k)]);
    }
    if (failure) std::rethrow_exception(failure);

    GenerationSummary summary;
    summary.records = std::move(records);
    summary.computed = n_pending;
    for (const auto& r : summary.records) ++summary.counts[r.status];

    write_text_atomic(out_dir / "labels.csv", labels_csv(summary.records));
    std::string jsonl;
    for (const auto& r : summary.records) jsonl += record_json_line(r);
    write_text_atomic(out_dir / "results.jsonl", jsonl);
    write_text_atomic(out_dir / "manifest.json", manifest_json(cfg, summary.records));

    summary.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::vector<double> walls, cpus;
    for (int id : pending) {
        walls.push_back(summary.records[static_cast<std::size_t>(id)].wall_ms);
        cpus.push_back(summary.records[static_cast<std::size_t>(id)].cpu_ms);
    }
    const json timing{{"generation_wall_s", summary.wall_seconds},
                      {"workers", options.workers},
                      {"hardware_threads", omp_get_num_procs()},
                      {"samples_computed", summary.computed},
                      {"median_sample_wall_ms", median_of(walls)},
                      {"median_sample_cpu_ms", median_of(cpus)}};
    write_text_atomic(out_dir / "timing.json", timing.dump(2) + "\n");
    return summary;
}

std::string labels_csv(const std::vector<DatasetRecord>& records) {
    std::string out = "id,image_path,vf_target,vf_actual,E_c_GPa,sigma_y_MPa,seed,status\n";
    for (const auto& r : records) {
        out += std::to_string(r.id) + "," + r.image_path + "," + format_sig6(r.vf_target) + "," +
               format_sig6(r.vf_actual) + "," + format_sig6(r.e_c_gpa) + "," + format_sig6(r.sigma_y_mpa) + "," +
               std::to_string(r.seed) + "," + to_string(r.status) + "\n";
    }
    return out;
}

std::vector<DatasetRecord> parse_labels_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "id,image_path,vf_target,vf_actual,E_c_GPa,sigma_y_MPa,seed,status")
        throw std::runtime_error("labels.csv: unexpected header");
    std::vector<DatasetRecord> out;
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ss(line);
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (line.back() == ',') cells.emplace_back();
        if (cells.size() != 8) throw std::runtime_error("labels.csv: row " + std::to_string(row) + " has wrong arity");
        DatasetRecord r;
        r.id = std::stoi(cells[0]);
        r.image_path = cells[1];
        r.vf_target = std::stod(cells[2]);
        r.vf_actual = std::stod(cells[3]);
        r.e_c_gpa = std::stod(cells[4]);
        r.sigma_y_mpa = std::stod(cells[5]);
        r.seed = std::stoull(cells[6]);
        r.status = parse_record_status(cells[7]);
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<DatasetRecord> read_labels_csv(const fs::path& path) { return parse_labels_csv(read_text(path)); }

std::string record_json_line(const DatasetRecord& r) {
    const json j{{"id", r.id},
                 {"seed", r.seed},
                 {"vf_target", r.vf_target},
                 {"vf_actual", r.vf_actual},
                 {"E_c_GPa", number_or_null(r.e_c_gpa)},
                 {"sigma_y_MPa", number_or_null(r.sigma_y_mpa)},
                 {"status", to_string(r.status)},
                 {"newton_total_iters", r.newton_total_iters},
                 {"wall_ms", r.wall_ms}};
    return j.dump() + "\n";
}

std::string manifest_json(const PipelineConfig& cfg, const std::vector<DatasetRecord>& records) {
    json counts = json::object();
    for (RecordStatus s : {RecordStatus::Ok, RecordStatus::Jammed, RecordStatus::SolverFail, RecordStatus::NotYielded})
        counts[to_string(s)] = std::count_if(records.begin(), records.end(), [s](const auto& r) { return r.status == s; });
    const json m{{"code_version", FIBREVT_VERSION},
                 {"config_hash", hex64(config_hash(cfg))},
                 {"hardening_table_hash", hex64(hardening_hash(cfg.materials.matrix))},
                 {"labels_hash", hex64(fnv1a64(labels_csv(records)))},
                 {"total_samples", records.size()},
                 {"status_counts", counts},
                 {"config", canonical_text(cfg)}};
    return m.dump(2) + "\n";
}

}  // namespace fibrevt
