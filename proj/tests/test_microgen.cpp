#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "check.hpp"
#include "fibrevt/errors.hpp"
#include "fibrevt/microgen.hpp"

using namespace fibrevt;

namespace {

constexpr double kHc = 25.8;
constexpr double kRf = 0.516;

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

double stddev(const std::vector<double>& v) {
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / (v.size() - 1));
}

// Exact pairwise check, no tolerance.
bool non_overlapping(const Microstructure& ms, double min_gap) {
    const auto& f = ms.fibres;
    for (std::size_t i = 0; i < f.size(); ++i)
        for (std::size_t j = i + 1; j < f.size(); ++j) {
            const double dy = f[i].center_y - f[j].center_y, dz = f[i].center_z - f[j].center_z;
            if (std::sqrt(dy * dy + dz * dz) < f[i].radius + f[j].radius + min_gap) return false;
        }
    return true;
}

bool wholly_inside(const Microstructure& ms) {
    for (const auto& f : ms.fibres)
        if (f.center_y - f.radius < 0.0 || f.center_y + f.radius > ms.domain_size || f.center_z - f.radius < 0.0 ||
            f.center_z + f.radius > ms.domain_size)
            return false;
    return true;
}

void test_sample_radii() {
    std::cout << "\n=== sample_radii ===\n";
    const auto dist = RadiiDistribution::for_mean_radius(kRf);
    CHECK(sample_radii(0, dist, 1).empty(), "n=0 gives an empty list");

    const auto r = sample_radii(100000, dist, 1);
    CHECK(r.size() == 100000, "n=1e5 draws");
    CHECK(check::near_rel(mean(r), kRf, 1e-12), "post-rescale mean equals 0.516 exactly");
    CHECK(std::all_of(r.begin(), r.end(), [](double x) { return x > 0.0 && std::isfinite(x); }), "radii positive and finite");

    // Coefficient of variation of a lognormal: sqrt(exp(S^2) - 1), invariant under rescaling.
    const double s = dist.log_std;
    const double cv_expected = std::sqrt(std::exp(s * s) - 1.0);
    CHECK(check::near_rel(stddev(r) / mean(r), cv_expected, 0.02), "coefficient of variation matches the lognormal");

    CHECK(sample_radii(1000, dist, 7) == sample_radii(1000, dist, 7), "deterministic for a fixed seed");
    CHECK(sample_radii(1000, dist, 7) != sample_radii(1000, dist, 8), "seed changes the draws");

    RadiiDistribution narrow{0.1, 1e-9, kRf};
    const auto d = sample_radii(3, narrow, 3);
    CHECK(std::all_of(d.begin(), d.end(), [](double x) { return check::near_rel(x, kRf, 1e-6); }),
          "S -> 0 gives radii equal to the target mean");

    RadiiDistribution bad{std::nan(""), 0.1, kRf};
    CHECK_THROWS(sample_radii(3, bad, 1), ParameterError, "non-finite parameters raise ParameterError");
}

void test_ks_radii() {
    std::cout << "\n=== radii distribution (KS) ===\n";
    // Accepted fibres from several placements, tested against the lognormal
    // with log-std S whose mean is r_f: ln r ~ N(ln r_f - S^2/2, S).
    const auto dist = RadiiDistribution::for_mean_radius(kRf);
    std::vector<double> radii;
    for (std::uint64_t seed = 100; radii.size() < 1500; ++seed) {
        const auto ms = generate_microstructure(kHc, kRf, 0.40, seed);
        for (const auto& f : ms.fibres) radii.push_back(f.radius);
    }
    std::sort(radii.begin(), radii.end());
    const double mu = std::log(kRf) - 0.5 * dist.log_std * dist.log_std;
    const double n = static_cast<double>(radii.size());
    double d = 0.0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double cdf = 0.5 * std::erfc(-(std::log(radii[i]) - mu) / (dist.log_std * std::sqrt(2.0)));
        d = std::max({d, std::fabs(cdf - i / n), std::fabs((i + 1) / n - cdf)});
    }
    const double critical = 1.6276 / std::sqrt(n);  // alpha = 0.01
    std::cout << "  n=" << radii.size() << " D=" << d << " critical=" << critical << "\n";
    CHECK(d < critical, "KS statistic below the 1% critical value");
}

void test_place_fibres() {
    std::cout << "\n=== place_fibres ===\n";
    const double expected = 0.20 * kHc * kHc / (std::numbers::pi * kRf * kRf);
    bool counts_ok = true, vf_ok = true, gap_ok = true, inside_ok = true;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto ms = generate_microstructure(kHc, kRf, 0.20, seed);
        const double n = static_cast<double>(ms.fibres.size());
        counts_ok = counts_ok && std::fabs(n - expected) <= 0.15 * expected && n >= 100;
        vf_ok = vf_ok && std::fabs(volume_fraction(ms) - 0.20) <= 0.002;
        gap_ok = gap_ok && non_overlapping(ms, 0.035 * kRf);
        inside_ok = inside_ok && wholly_inside(ms);
    }
    CHECK(std::fabs(expected - 159.0) < 1.0, "expected count at Vf=0.20 is about 159");
    CHECK(counts_ok, "fibre count within 15% of expectation and >= 100 over 20 seeds");
    CHECK(vf_ok, "achieved Vf within 0.002 over 20 seeds");
    CHECK(gap_ok, "no overlaps including the minimum gap");
    CHECK(inside_ok, "fibres lie wholly inside the domain");

    bool high_ok = true;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const auto ms = generate_microstructure(kHc, kRf, 0.44, seed);
        high_ok = high_ok && std::fabs(volume_fraction(ms) - 0.44) <= 0.002 && non_overlapping(ms, 0.035 * kRf) &&
                  wholly_inside(ms);
    }
    CHECK(high_ok, "Vf=0.44 reachable with all invariants");

    const auto a = generate_microstructure(kHc, kRf, 0.30, 99);
    const auto b = generate_microstructure(kHc, kRf, 0.30, 99);
    bool same = a.fibres.size() == b.fibres.size();
    for (std::size_t i = 0; same && i < a.fibres.size(); ++i)
        same = a.fibres[i].center_y == b.fibres[i].center_y && a.fibres[i].center_z == b.fibres[i].center_z &&
               a.fibres[i].radius == b.fibres[i].radius;
    CHECK(same, "same seed gives bit-identical fibre lists");
    CHECK(rasterize(a, 256).phases == rasterize(b, 256).phases, "same seed gives identical images");

    const auto radii = sample_radii(2000, RadiiDistribution::for_mean_radius(kRf), 5);
    PlacementOptions tight;
    tight.max_attempts = 10;
    bool jammed = false;
    try {
        place_fibres(kHc, radii, 0.44, 5, tight);
    } catch (const JammingError& e) {
        jammed = e.achieved_vf() > 0.0 && e.achieved_vf() < 0.44;
    }
    CHECK(jammed, "max_attempts=10 near the jamming limit raises JammingError with the achieved Vf");

    CHECK_THROWS(place_fibres(kHc, radii, 0.45, 1), ParameterError, "target above 0.44 rejected");
    CHECK_THROWS(place_fibres(kHc, std::vector<double>{}, 0.2, 1), ParameterError, "empty radii rejected");
}

void test_volume_fraction() {
    std::cout << "\n=== volume_fraction ===\n";
    Microstructure empty;
    empty.domain_size = 10.0;
    CHECK(volume_fraction(empty) == 0.0, "zero fibres -> 0");

    Microstructure one;
    one.domain_size = 10.0;
    one.fibres = {{5.0, 5.0, 1.0}};
    CHECK(check::near_rel(volume_fraction(one), 0.031415926535897934, 1e-14), "r=1 in h=10 -> pi/100");

    const auto ms = generate_microstructure(kHc, kRf, 0.40, 3);
    CHECK(std::fabs(volume_fraction(ms) - 0.40) <= 0.002, "generated Vf=0.40 within 0.002");
}

void test_rasterize() {
    std::cout << "\n=== rasterize ===\n";
    Microstructure empty;
    empty.domain_size = kHc;
    const auto img0 = rasterize(empty, 64);
    CHECK(std::all_of(img0.phases.begin(), img0.phases.end(), [](Phase p) { return p == Phase::Matrix; }),
          "zero fibres -> all matrix");
    CHECK(img0.width == 64 && img0.height == 64 && check::near_rel(img0.width * img0.pixel_size, kHc, 1e-12),
          "image covers the domain");

    Microstructure disc;
    disc.domain_size = 10.0;
    disc.fibres = {{5.0, 5.0, 5.0}};
    CHECK(std::fabs(rasterize(disc, 256).fibre_fraction() - std::numbers::pi / 4.0) < 0.01,
          "inscribed disc -> pi/4 within 0.01");

    Microstructure corner;  // fibre near the top-left corner (large y, small z)
    corner.domain_size = 10.0;
    corner.fibres = {{8.0, 2.0, 1.0}};
    const auto ic = rasterize(corner, 40);
    CHECK(ic.at(8, 8) == Phase::Fibre && ic.at(31, 8) == Phase::Matrix, "row 0 is the top edge y = h");

    bool within = true;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto ms = generate_microstructure(kHc, kRf, 0.2 + 0.04 * seed, seed);
        within = within && std::fabs(rasterize(ms, 256).fibre_fraction() - volume_fraction(ms)) <= 0.008;
    }
    CHECK(within, "pixel Vf within 0.008 of analytic Vf at 256 px");
    CHECK_THROWS(rasterize(empty, 16), ParameterError, "resolution below 32 rejected");
}

}  // namespace

int main() {
    test_sample_radii();
    test_ks_radii();
    test_place_fibres();
    test_volume_fraction();
    test_rasterize();
    return check::summary("test_microgen");
}
