#include "fibrevt/microgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "fibrevt/errors.hpp"

namespace fibrevt {

namespace {

constexpr std::uint64_t kPlacementStream = 0x9E3779B97F4A7C15ull;

// Uniform cell grid over the domain for neighbour queries during placement.
class CellGrid {
public:
    CellGrid(double h, double cell_size)
        : n_(std::max(1, static_cast<int>(std::floor(h / cell_size)))), h_(h), cells_(static_cast<std::size_t>(n_) * n_) {}

    int cell_of(double x) const { return std::clamp(static_cast<int>(x / h_ * n_), 0, n_ - 1); }

    void insert(int fibre, double y, double z) {
        cells_[static_cast<std::size_t>(cell_of(y)) * n_ + cell_of(z)].push_back(fibre);
    }

    template <typename Fn>
    bool any_neighbour(double y, double z, Fn&& pred) const {
        const int cy = cell_of(y), cz = cell_of(z);
        for (int iy = std::max(0, cy - 1); iy <= std::min(n_ - 1, cy + 1); ++iy)
            for (int iz = std::max(0, cz - 1); iz <= std::min(n_ - 1, cz + 1); ++iz)
                for (int f : cells_[static_cast<std::size_t>(iy) * n_ + iz])
                    if (pred(f)) return true;
        return false;
    }

private:
    int n_;
    double h_;
    std::vector<std::vector<int>> cells_;
};

}  // namespace

RadiiDistribution RadiiDistribution::for_mean_radius(double r_f) {
    return RadiiDistribution{r_f / 10.0, r_f / 20.0, r_f};
}

bool Microstructure::contains_fibre_point(double y, double z) const {
    return std::any_of(fibres.begin(), fibres.end(), [&](const FibreSpec& f) {
        const double dy = y - f.center_y, dz = z - f.center_z;
        return dy * dy + dz * dz <= f.radius * f.radius;
    });
}

double PhaseImage::fibre_fraction() const {
    if (phases.empty()) return 0.0;
    const auto n = std::count(phases.begin(), phases.end(), Phase::Fibre);
    return static_cast<double>(n) / static_cast<double>(phases.size());
}

std::vector<double> sample_radii(std::size_t n, const RadiiDistribution& dist, std::uint64_t rng_seed) {
    if (!std::isfinite(dist.log_mean) || !std::isfinite(dist.log_std) || !std::isfinite(dist.target_mean))
        throw ParameterError("sample_radii: non-finite distribution parameters");
    if (dist.log_std <= 0.0 || dist.target_mean <= 0.0)
        throw ParameterError("sample_radii: log_std and target_mean must be positive");

    std::vector<double> radii(n);
    if (n == 0) return radii;

    std::mt19937_64 rng(rng_seed);
    std::lognormal_distribution<double> draw(dist.log_mean, dist.log_std);
    for (auto& r : radii) r = draw(rng);

    const double mean = std::accumulate(radii.begin(), radii.end(), 0.0) / static_cast<double>(n);
    const double scale = dist.target_mean / mean;
    for (auto& r : radii) r *= scale;
    return radii;
}

Microstructure place_fibres(double h_c, std::span<const double> radii, double target_vf,
                            std::uint64_t rng_seed, const PlacementOptions& options) {
    if (!(h_c > 0.0) || !std::isfinite(h_c)) throw ParameterError("place_fibres: domain size must be positive");
    if (!(target_vf > 0.0)) throw ParameterError("place_fibres: target_vf must be positive");
    if (target_vf > kMaxTargetVf)
        throw ParameterError("place_fibres: target_vf " + std::to_string(target_vf) + " exceeds the RSA limit 0.44");
    if (radii.empty()) throw ParameterError("place_fibres: empty radii list");
    if (options.max_attempts < 1) throw ParameterError("place_fibres: max_attempts must be >= 1");

    const double mean_r = std::accumulate(radii.begin(), radii.end(), 0.0) / static_cast<double>(radii.size());
    const double r_max = *std::max_element(radii.begin(), radii.end());
    if (!(mean_r > 0.0) || 2.0 * r_max >= h_c) throw ParameterError("place_fibres: radii incompatible with domain");
    const double gap = options.min_gap_factor * mean_r;

    Microstructure ms;
    ms.domain_size = h_c;
    ms.target_vf = target_vf;
    ms.mean_radius = mean_r;
    ms.seed = rng_seed;

    std::mt19937_64 rng(rng_seed ^ kPlacementStream);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    CellGrid grid(h_c, 2.0 * r_max + gap);

    const double area = h_c * h_c;
    const double stop_at = target_vf - 0.5 * options.vf_tolerance;
    double vf = 0.0;

    for (double r : radii) {
        if (vf >= stop_at) break;
        const double a = std::numbers::pi * r * r / area;
        if (vf + a > target_vf + options.vf_tolerance) continue;

        const double span = h_c - 2.0 * r;
        bool placed = false;
        for (int attempt = 0; attempt < options.max_attempts && !placed; ++attempt) {
            const double y = r + span * unit(rng);
            const double z = r + span * unit(rng);
            const bool clash = grid.any_neighbour(y, z, [&](int j) {
                const FibreSpec& o = ms.fibres[static_cast<std::size_t>(j)];
                const double dy = y - o.center_y, dz = z - o.center_z;
                const double s = r + o.radius + gap;
                return dy * dy + dz * dz < s * s;
            });
            if (!clash) {
                grid.insert(static_cast<int>(ms.fibres.size()), y, z);
                ms.fibres.push_back({y, z, r});
                placed = true;
            }
        }
        if (!placed)
            throw JammingError("place_fibres: no admissible position after " + std::to_string(options.max_attempts) +
                                   " attempts at Vf=" + std::to_string(vf),
                               vf);
        vf += a;
    }

    if (std::abs(vf - target_vf) > options.vf_tolerance)
        throw ParameterError("place_fibres: radii list exhausted at Vf=" + std::to_string(vf));
    return ms;
}

Microstructure generate_microstructure(double h_c, double r_f, double target_vf, std::uint64_t seed,
                                       const PlacementOptions& options) {
    if (!(r_f > 0.0)) throw ParameterError("generate_microstructure: r_f must be positive");
    const double expected = target_vf * h_c * h_c / (std::numbers::pi * r_f * r_f);
    const auto n = static_cast<std::size_t>(std::ceil(1.3 * std::max(expected, 0.0))) + 20;
    const auto radii = sample_radii(n, RadiiDistribution::for_mean_radius(r_f), seed);
    Microstructure ms = place_fibres(h_c, radii, target_vf, seed, options);
    ms.mean_radius = r_f;
    return ms;
}

double volume_fraction(const Microstructure& ms) {
    if (ms.domain_size <= 0.0) return 0.0;
    double sum = 0.0;
    for (const auto& f : ms.fibres) sum += std::numbers::pi * f.radius * f.radius;
    return sum / (ms.domain_size * ms.domain_size);
}

PhaseImage rasterize(const Microstructure& ms, int resolution) {
    if (resolution < 32) throw ParameterError("rasterize: resolution must be >= 32");
    PhaseImage img;
    img.width = img.height = resolution;
    img.pixel_size = ms.domain_size / resolution;
    img.phases.assign(static_cast<std::size_t>(resolution) * resolution, Phase::Matrix);

    const double px = img.pixel_size;
    for (const auto& f : ms.fibres) {
        const int c0 = std::max(0, static_cast<int>(std::floor((f.center_z - f.radius) / px)));
        const int c1 = std::min(resolution - 1, static_cast<int>(std::ceil((f.center_z + f.radius) / px)));
        // row index counts down from the top edge y = h_c
        const int r0 = std::max(0, static_cast<int>(std::floor((ms.domain_size - f.center_y - f.radius) / px)));
        const int r1 = std::min(resolution - 1, static_cast<int>(std::ceil((ms.domain_size - f.center_y + f.radius) / px)));
        const double r2 = f.radius * f.radius;
        for (int row = r0; row <= r1; ++row) {
            const double y = ms.domain_size - (row + 0.5) * px;
            for (int col = c0; col <= c1; ++col) {
                const double z = (col + 0.5) * px;
                const double dy = y - f.center_y, dz = z - f.center_z;
                if (dy * dy + dz * dz <= r2)
                    img.phases[static_cast<std::size_t>(row) * resolution + col] = Phase::Fibre;
            }
        }
    }
    return img;
}

}  // namespace fibrevt
