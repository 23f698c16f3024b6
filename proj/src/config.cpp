#include "fibrevt/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "fibrevt/errors.hpp"

namespace fibrevt {

namespace {

// A parsed value: either a scalar token or an array of values.
struct Value {
    std::string scalar;
    std::vector<Value> items;
    bool is_array = false;
};

class ValueParser {
public:
    ValueParser(std::string_view text, int line) : text_(text), line_(line) {}

    Value parse() {
        Value v = parse_value();
        skip_ws();
        if (pos_ != text_.size()) fail("trailing characters");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ConfigError("config line " + std::to_string(line_) + ": " + msg);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    Value parse_value() {
        skip_ws();
        if (pos_ >= text_.size()) fail("missing value");
        Value v;
        if (text_[pos_] == '[') {
            v.is_array = true;
            ++pos_;
            skip_ws();
            if (pos_ < text_.size() && text_[pos_] == ']') {
                ++pos_;
                return v;
            }
            for (;;) {
                v.items.push_back(parse_value());
                skip_ws();
                if (pos_ >= text_.size()) fail("unterminated array");
                if (text_[pos_] == ',') {
                    ++pos_;
                    skip_ws();
                    if (pos_ < text_.size() && text_[pos_] == ']') {
                        ++pos_;
                        return v;
                    }
                    continue;
                }
                if (text_[pos_] == ']') {
                    ++pos_;
                    return v;
                }
                fail("expected ',' or ']'");
            }
        }
        const std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != ']' &&
               !std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        v.scalar = std::string(text_.substr(start, pos_ - start));
        if (v.scalar.empty()) fail("empty value");
        return v;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_;
};

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

double to_double(const Value& v, const std::string& key) {
    if (v.is_array) throw ConfigError("config: '" + key + "' must be a number");
    double out = 0.0;
    const char* first = v.scalar.data();
    const char* last = first + v.scalar.size();
    if (*first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last || !std::isfinite(out))
        throw ConfigError("config: '" + key + "' is not a valid number: " + v.scalar);
    return out;
}

std::uint64_t to_u64(const Value& v, const std::string& key) {
    if (v.is_array) throw ConfigError("config: '" + key + "' must be an integer");
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.scalar.data(), v.scalar.data() + v.scalar.size(), out);
    if (ec != std::errc{} || ptr != v.scalar.data() + v.scalar.size())
        throw ConfigError("config: '" + key + "' is not a valid unsigned integer: " + v.scalar);
    return out;
}

int to_int(const Value& v, const std::string& key) {
    const std::uint64_t x = to_u64(v, key);
    if (x > 1'000'000'000ull) throw ConfigError("config: '" + key + "' is out of range");
    return static_cast<int>(x);
}

std::vector<double> to_doubles(const Value& v, const std::string& key) {
    if (!v.is_array) throw ConfigError("config: '" + key + "' must be an array");
    std::vector<double> out;
    for (const auto& item : v.items) out.push_back(to_double(item, key));
    return out;
}

std::vector<HardeningPoint> to_table(const Value& v, const std::string& key) {
    if (!v.is_array) throw ConfigError("config: '" + key + "' must be an array of [strain, stress] pairs");
    std::vector<HardeningPoint> out;
    for (const auto& item : v.items) {
        if (!item.is_array || item.items.size() != 2)
            throw ConfigError("config: '" + key + "' entries must be [plastic_strain, flow_stress_MPa]");
        out.push_back({to_double(item.items[0], key), to_double(item.items[1], key)});
    }
    return out;
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

std::vector<double> PipelineConfig::default_vf_values() {
    std::vector<double> v;
    for (int k = 0; k <= 12; ++k) v.push_back((20.0 + 2.0 * k) / 100.0);
    return v;
}

void PipelineConfig::validate() const {
    if (vf_values.empty()) throw ConfigError("config: vf_values is empty");
    for (double vf : vf_values)
        if (!(vf > 0.0) || vf > kMaxTargetVf + 1e-12)
            throw ConfigError("config: vf value " + fmt(vf) + " outside (0, 0.44]");
    if (samples_per_vf < 1) throw ConfigError("config: samples_per_vf must be >= 1");
    if (!(h_c > 0.0) || !(r_f > 0.0) || 2.0 * r_f >= h_c) throw ConfigError("config: invalid h_c / r_f");
    if (image_resolution < 32) throw ConfigError("config: image_resolution must be >= 32");
    if (workers < 1) throw ConfigError("config: workers must be >= 1");
    if (placement.max_attempts < 1 || placement.min_gap_factor < 0.0)
        throw ConfigError("config: invalid microgen settings");
    try {
        materials.matrix.validate();
        materials.fibre.validate();
        test.validate();
    } catch (const ParameterError& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

PipelineConfig parse_config(const std::string& text) {
    PipelineConfig cfg;
    std::set<std::string> seen;
    std::string section;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(std::string_view(raw).substr(0, hash));
        if (line.empty()) continue;
        if (line.front() == '[' && line.find('=') == std::string::npos) {
            if (line.back() != ']') throw ConfigError("config line " + std::to_string(line_no) + ": bad section header");
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            if (section != "matrix" && section != "fibre" && section != "test" && section != "microgen")
                throw ConfigError("config line " + std::to_string(line_no) + ": unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        const std::string name = trim(std::string_view(line).substr(0, eq));
        const std::string key = section.empty() ? name : section + "." + name;
        if (!seen.insert(key).second) throw ConfigError("config: duplicate key '" + key + "'");
        const Value v = ValueParser(std::string_view(line).substr(eq + 1), line_no).parse();

        if (key == "vf_values") cfg.vf_values = to_doubles(v, key);
        else if (key == "samples_per_vf") cfg.samples_per_vf = to_int(v, key);
        else if (key == "h_c") cfg.h_c = to_double(v, key);
        else if (key == "r_f") cfg.r_f = to_double(v, key);
        else if (key == "image_resolution") cfg.image_resolution = to_int(v, key);
        else if (key == "master_seed") cfg.master_seed = to_u64(v, key);
        else if (key == "workers") cfg.workers = to_int(v, key);
        else if (key == "matrix.E_GPa") cfg.materials.matrix.youngs_modulus_gpa = to_double(v, key);
        else if (key == "matrix.nu") cfg.materials.matrix.poisson_ratio = to_double(v, key);
        else if (key == "matrix.hardening") cfg.materials.matrix.hardening = to_table(v, key);
        else if (key == "fibre.E_GPa") cfg.materials.fibre.youngs_modulus_gpa = to_double(v, key);
        else if (key == "fibre.nu") cfg.materials.fibre.poisson_ratio = to_double(v, key);
        else if (key == "test.max_strain") cfg.test.max_strain = to_double(v, key);
        else if (key == "test.n_increments") cfg.test.n_increments = to_int(v, key);
        else if (key == "test.element_size_factor") cfg.test.element_size_factor = to_double(v, key);
        else if (key == "test.max_cutbacks") cfg.test.max_cutbacks = to_int(v, key);
        else if (key == "microgen.min_gap_factor") cfg.placement.min_gap_factor = to_double(v, key);
        else if (key == "microgen.max_attempts") cfg.placement.max_attempts = to_int(v, key);
        else throw ConfigError("config: unknown key '" + key + "'");
    }
    cfg.validate();
    return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot read config file '" + path.string() + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    try {
        return parse_config(ss.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

std::string canonical_text(const PipelineConfig& cfg) {
    std::ostringstream o;
    o << "vf_values = [";
    for (std::size_t i = 0; i < cfg.vf_values.size(); ++i) o << (i ? ", " : "") << fmt(cfg.vf_values[i]);
    o << "]\n";
    o << "samples_per_vf = " << cfg.samples_per_vf << "\n";
    o << "h_c = " << fmt(cfg.h_c) << "\n";
    o << "r_f = " << fmt(cfg.r_f) << "\n";
    o << "image_resolution = " << cfg.image_resolution << "\n";
    o << "master_seed = " << cfg.master_seed << "\n";
    o << "[matrix]\nE_GPa = " << fmt(cfg.materials.matrix.youngs_modulus_gpa) << "\n";
    o << "nu = " << fmt(cfg.materials.matrix.poisson_ratio) << "\n";
    o << "hardening = [";
    const auto& t = cfg.materials.matrix.hardening;
    for (std::size_t i = 0; i < t.size(); ++i)
        o << (i ? ", " : "") << "[" << fmt(t[i].plastic_strain) << ", " << fmt(t[i].flow_stress) << "]";
    o << "]\n";
    o << "[fibre]\nE_GPa = " << fmt(cfg.materials.fibre.youngs_modulus_gpa) << "\n";
    o << "nu = " << fmt(cfg.materials.fibre.poisson_ratio) << "\n";
    o << "[test]\nmax_strain = " << fmt(cfg.test.max_strain) << "\n";
    o << "n_increments = " << cfg.test.n_increments << "\n";
    o << "element_size_factor = " << fmt(cfg.test.element_size_factor) << "\n";
    o << "max_cutbacks = " << cfg.test.max_cutbacks << "\n";
    o << "[microgen]\nmin_gap_factor = " << fmt(cfg.placement.min_gap_factor) << "\n";
    o << "max_attempts = " << cfg.placement.max_attempts << "\n";
    return o.str();
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::uint64_t config_hash(const PipelineConfig& cfg) { return fnv1a64(canonical_text(cfg)); }

std::uint64_t hardening_hash(const MaterialModel& matrix) {
    std::string s;
    for (const auto& p : matrix.hardening) s += fmt(p.plastic_strain) + "," + fmt(p.flow_stress) + "\n";
    return fnv1a64(s);
}

}  // namespace fibrevt
