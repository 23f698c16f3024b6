#pragma once

// Random sequential adsorption (RSA) of circular fibres in a square domain
// and rasterization to phase images.
//
// Coordinates: y is vertical, z is horizontal (the loading axis). Lengths in um.

#include <cstdint>
#include <span>
#include <vector>

namespace fibrevt {

enum class Phase : std::uint8_t { Matrix = 0, Fibre = 1 };

struct FibreSpec {
    double center_y = 0.0;
    double center_z = 0.0;
    double radius = 0.0;
};

/// Lognormal radius distribution, rescaled so the sample mean hits target_mean.
struct RadiiDistribution {
    double log_mean = 0.0;  // mu in log space
    double log_std = 0.0;   // S in log space
    double target_mean = 0.0;

    /// mu = r_f/10, S = r_f/20 (log space), rescaled to mean r_f.
    static RadiiDistribution for_mean_radius(double r_f);
};

struct PlacementOptions {
    double min_gap_factor = 0.035;  // surface-to-surface gap, multiple of the mean radius
    int max_attempts = 100000;      // per fibre
    double vf_tolerance = 0.002;    // absolute
};

inline constexpr double kMaxTargetVf = 0.44;

struct Microstructure {
    double domain_size = 0.0;  // h_c
    std::vector<FibreSpec> fibres;
    double target_vf = 0.0;
    double mean_radius = 0.0;  // r_f
    std::uint64_t seed = 0;

    /// True if the point lies inside (or on) some fibre disc.
    bool contains_fibre_point(double y, double z) const;
};

struct PhaseImage {
    int width = 0;
    int height = 0;
    double pixel_size = 0.0;   // um per pixel
    std::vector<Phase> phases; // row-major, row 0 at the top (y = h_c)

    Phase at(int row, int col) const { return phases[static_cast<std::size_t>(row) * width + col]; }
    double fibre_fraction() const;
};

std::vector<double> sample_radii(std::size_t n, const RadiiDistribution& dist, std::uint64_t rng_seed);

/// Places fibres (in list order) at uniform random admissible positions until the
/// analytic volume fraction reaches target_vf. Fibres lie wholly inside the domain.
/// Throws JammingError if a fibre cannot be placed within max_attempts.
Microstructure place_fibres(double h_c, std::span<const double> radii, double target_vf,
                            std::uint64_t rng_seed, const PlacementOptions& options = {});

/// Draws enough radii for the target and runs place_fibres. Used by the pipeline.
Microstructure generate_microstructure(double h_c, double r_f, double target_vf, std::uint64_t seed,
                                       const PlacementOptions& options = {});

double volume_fraction(const Microstructure& ms);

PhaseImage rasterize(const Microstructure& ms, int resolution);

}  // namespace fibrevt
