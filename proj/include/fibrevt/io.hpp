#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fibrevt/microgen.hpp"
#include "fibrevt/virtest.hpp"

namespace fibrevt {

struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // row-major
};

/// 8-bit single-channel PNG, MATRIX = 0, FIBRE = 255. Output bytes depend only on the image.
void write_phase_png(const std::filesystem::path& path, const PhaseImage& image);
GrayImage read_gray_png(const std::filesystem::path& path);

/// Header `center_y_um,center_z_um,radius_um`.
void write_fibres_csv(const std::filesystem::path& path, const Microstructure& ms);
std::vector<FibreSpec> read_fibres_csv(const std::filesystem::path& path);

/// Header `strain,stress_MPa`.
void write_curve_csv(const std::filesystem::path& path, const StressStrainCurve& curve);
/// Header `increment,applied_strain,reaction_force_uN,newton_iters`.
void write_solver_log_csv(const std::filesystem::path& path, const std::vector<IncrementRecord>& log);

/// printf("%.6g"), or "nan" for non-finite values.
std::string format_sig6(double x);

/// Writes through a temporary file and renames, so readers never see partial files.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_text(const std::filesystem::path& path);

}  // namespace fibrevt
