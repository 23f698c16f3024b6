#include "fibrevt/io.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace fibrevt {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
    FilePtr f(std::fopen(path.c_str(), mode));
    if (!f) throw std::runtime_error("cannot open '" + path.string() + "'");
    return f;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
}

}  // namespace

std::string format_sig6(double x) {
    if (!std::isfinite(x)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

void write_phase_png(const std::filesystem::path& path, const PhaseImage& image) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        FilePtr f = open_file(tmp, "wb");
        png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
        if (!png) throw std::runtime_error("png: cannot create write struct");
        png_infop info = png_create_info_struct(png);
        if (!info || setjmp(png_jmpbuf(png))) {
            png_destroy_write_struct(&png, &info);
            throw std::runtime_error("png: write failed for '" + path.string() + "'");
        }
        png_init_io(png, f.get());
        png_set_IHDR(png, info, static_cast<png_uint_32>(image.width), static_cast<png_uint_32>(image.height), 8,
                     PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
        png_set_compression_level(png, 9);
        png_write_info(png, info);
        std::vector<png_byte> row(static_cast<std::size_t>(image.width));
        for (int r = 0; r < image.height; ++r) {
            for (int c = 0; c < image.width; ++c) row[static_cast<std::size_t>(c)] = image.at(r, c) == Phase::Fibre ? 255 : 0;
            png_write_row(png, row.data());
        }
        png_write_end(png, nullptr);
        png_destroy_write_struct(&png, &info);
    }
    std::filesystem::rename(tmp, path);
}

GrayImage read_gray_png(const std::filesystem::path& path) {
    FilePtr f = open_file(path, "rb");
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw std::runtime_error("png: cannot create read struct");
    png_infop info = png_create_info_struct(png);
    if (!info || setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error("png: read failed for '" + path.string() + "'");
    }
    png_init_io(png, f.get());
    png_read_info(png, info);
    if (png_get_color_type(png, info) != PNG_COLOR_TYPE_GRAY || png_get_bit_depth(png, info) != 8) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error("png: '" + path.string() + "' is not 8-bit grayscale");
    }
    GrayImage img;
    img.width = static_cast<int>(png_get_image_width(png, info));
    img.height = static_cast<int>(png_get_image_height(png, info));
    img.pixels.resize(static_cast<std::size_t>(img.width) * img.height);
    for (int r = 0; r < img.height; ++r) png_read_row(png, img.pixels.data() + static_cast<std::size_t>(r) * img.width, nullptr);
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

void write_fibres_csv(const std::filesystem::path& path, const Microstructure& ms) {
    std::string out = "center_y_um,center_z_um,radius_um\n";
    char buf[96];
    for (const auto& f : ms.fibres) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", f.center_y, f.center_z, f.radius);
        out += buf;
    }
    write_text_atomic(path, out);
}

std::vector<FibreSpec> read_fibres_csv(const std::filesystem::path& path) {
    std::istringstream in(read_text(path));
    std::string line;
    if (!std::getline(in, line) || line != "center_y_um,center_z_um,radius_um")
        throw std::runtime_error("fibre CSV '" + path.string() + "' has an unexpected header");
    std::vector<FibreSpec> fibres;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != 3) throw std::runtime_error("fibre CSV '" + path.string() + "': bad row");
        fibres.push_back({std::stod(cells[0]), std::stod(cells[1]), std::stod(cells[2])});
    }
    return fibres;
}

void write_curve_csv(const std::filesystem::path& path, const StressStrainCurve& curve) {
    std::string out = "strain,stress_MPa\n";
    char buf[64];
    for (const auto& p : curve.points) {
        std::snprintf(buf, sizeof buf, "%.10g,%.10g\n", p.strain, p.stress);
        out += buf;
    }
    write_text_atomic(path, out);
}

void write_solver_log_csv(const std::filesystem::path& path, const std::vector<IncrementRecord>& log) {
    std::string out = "increment,applied_strain,reaction_force_uN,newton_iters\n";
    char buf[96];
    for (const auto& r : log) {
        std::snprintf(buf, sizeof buf, "%d,%.10g,%.10g,%d\n", r.increment, r.applied_strain, r.reaction_force_un,
                      r.newton_iters);
        out += buf;
    }
    write_text_atomic(path, out);
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot write '" + tmp.string() + "'");
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!f) throw std::runtime_error("write failed for '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read '" + path.string() + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace fibrevt
