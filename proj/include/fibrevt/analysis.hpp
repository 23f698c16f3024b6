#pragma once

#include <span>
#include <string>
#include <vector>

#include "fibrevt/dataset.hpp"

namespace fibrevt {

/// Sample Pearson correlation. Throws ParameterError for mismatched or short
/// inputs (< 3) and for zero variance.
double pearson_r(std::span<const double> x, std::span<const double> y);

struct StiffnessBounds {
    double reuss = 0.0;  // GPa
    double voigt = 0.0;  // GPa
};

StiffnessBounds voigt_reuss_bounds(double vf, double e_matrix_gpa, double e_fibre_gpa);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double resid_std = 0.0;  // sqrt(SSR / (n - 2))
};

/// Ordinary least squares y = slope * x + intercept.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

struct PropertyTrend {
    std::string property;
    double pearson_r = 0.0;
    LinearFit fit;
    int n = 0;
};

struct VfLevelSummary {
    double vf_target = 0.0;
    int n_ok = 0;
    double e_mean = 0.0, e_std = 0.0;
    double sigma_y_mean = 0.0, sigma_y_std = 0.0;
};

struct TrendReport {
    PropertyTrend youngs;  // E_c vs Vf
    PropertyTrend yield;   // sigma_y vs Vf
    int sample_count = 0;  // OK records used
    int bound_violations = 0;
    std::vector<int> violating_ids;
    std::vector<VfLevelSummary> levels;
    int yield_level_inversions = 0;  // decreases of mean sigma_y between consecutive levels
};

/// Sanity envelope [0.9 Reuss, 1.1 Voigt] on E_c at the sample's actual Vf.
bool within_bound_envelope(double vf, double e_c_gpa, const PhaseMaterials& materials);

/// Correlations, fits and bound checks over the OK records (Vf = vf_actual).
/// Throws ParameterError with the count if fewer than min_records are OK.
TrendReport trend_report(std::span<const DatasetRecord> records, const PhaseMaterials& materials,
                         int min_records = 50);

/// `property,pearson_r,slope,intercept,resid_std,n`
std::string trend_summary_csv(const TrendReport& report);
/// `vf_target,n_ok,E_c_mean_GPa,E_c_std_GPa,sigma_y_mean_MPa,sigma_y_std_MPa`
std::string trend_by_vf_csv(const TrendReport& report);

struct TrendThresholds {
    double min_r_youngs = 0.95;
    double min_r_yield = 0.85;
};

/// Human-readable failures; empty when the report meets every threshold.
std::vector<std::string> trend_failures(const TrendReport& report, const TrendThresholds& thresholds = {});

}  // namespace fibrevt
