#include "fibrevt/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "fibrevt/errors.hpp"
#include "fibrevt/io.hpp"

namespace fibrevt {

namespace {

double mean(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double stddev(std::span<const double> v) {
    if (v.size() < 2) return 0.0;
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

PropertyTrend make_trend(std::string name, std::span<const double> x, std::span<const double> y) {
    return {std::move(name), pearson_r(x, y), linear_fit(x, y), static_cast<int>(x.size())};
}

}  // namespace

double pearson_r(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ParameterError("pearson_r: length mismatch");
    if (x.size() < 3) throw ParameterError("pearson_r: need at least 3 points");
    const double mx = mean(x), my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw ParameterError("pearson_r: zero variance");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

StiffnessBounds voigt_reuss_bounds(double vf, double e_matrix_gpa, double e_fibre_gpa) {
    return {1.0 / (vf / e_fibre_gpa + (1.0 - vf) / e_matrix_gpa), vf * e_fibre_gpa + (1.0 - vf) * e_matrix_gpa};
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 3) throw ParameterError("linear_fit: need >= 3 paired points");
    const double mx = mean(x), my = mean(y);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0.0) throw ParameterError("linear_fit: zero variance in x");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (fit.slope * x[i] + fit.intercept);
        ssr += r * r;
    }
    fit.resid_std = std::sqrt(ssr / static_cast<double>(x.size() - 2));
    return fit;
}

bool within_bound_envelope(double vf, double e_c_gpa, const PhaseMaterials& materials) {
    const auto b = voigt_reuss_bounds(vf, materials.matrix.youngs_modulus_gpa, materials.fibre.youngs_modulus_gpa);
    return e_c_gpa >= 0.9 * b.reuss && e_c_gpa <= 1.1 * b.voigt;
}

TrendReport trend_report(std::span<const DatasetRecord> records, const PhaseMaterials& materials, int min_records) {
    std::vector<double> vf, e, sy;
    std::map<double, std::vector<const DatasetRecord*>> by_level;
    TrendReport rep;
    for (const auto& r : records) {
        if (r.status != RecordStatus::Ok) continue;
        vf.push_back(r.vf_actual);
        e.push_back(r.e_c_gpa);
        sy.push_back(r.sigma_y_mpa);
        by_level[r.vf_target].push_back(&r);
        if (!within_bound_envelope(r.vf_actual, r.e_c_gpa, materials)) {
            ++rep.bound_violations;
            rep.violating_ids.push_back(r.id);
        }
    }
    rep.sample_count = static_cast<int>(vf.size());
    if (rep.sample_count < min_records)
        throw ParameterError("trend_report: " + std::to_string(rep.sample_count) + " OK records, need at least " +
                             std::to_string(min_records));

    rep.youngs = make_trend("E_c_GPa", vf, e);
    rep.yield = make_trend("sigma_y_MPa", vf, sy);

    for (const auto& [level, rows] : by_level) {
        std::vector<double> le, ls;
        for (const auto* r : rows) {
            le.push_back(r->e_c_gpa);
            ls.push_back(r->sigma_y_mpa);
        }
        rep.levels.push_back({level, static_cast<int>(rows.size()), mean(le), stddev(le), mean(ls), stddev(ls)});
    }
    for (std::size_t k = 1; k < rep.levels.size(); ++k)
        if (rep.levels[k].sigma_y_mean < rep.levels[k - 1].sigma_y_mean) ++rep.yield_level_inversions;
    return rep;
}

std::string trend_summary_csv(const TrendReport& report) {
    std::string out = "property,pearson_r,slope,intercept,resid_std,n\n";
    for (const auto* t : {&report.youngs, &report.yield})
        out += t->property + "," + format_sig6(t->pearson_r) + "," + format_sig6(t->fit.slope) + "," +
               format_sig6(t->fit.intercept) + "," + format_sig6(t->fit.resid_std) + "," + std::to_string(t->n) + "\n";
    return out;
}

std::string trend_by_vf_csv(const TrendReport& report) {
    std::string out = "vf_target,n_ok,E_c_mean_GPa,E_c_std_GPa,sigma_y_mean_MPa,sigma_y_std_MPa\n";
    for (const auto& l : report.levels)
        out += format_sig6(l.vf_target) + "," + std::to_string(l.n_ok) + "," + format_sig6(l.e_mean) + "," +
               format_sig6(l.e_std) + "," + format_sig6(l.sigma_y_mean) + "," + format_sig6(l.sigma_y_std) + "\n";
    return out;
}

std::vector<std::string> trend_failures(const TrendReport& report, const TrendThresholds& thresholds) {
    std::vector<std::string> out;
    if (report.youngs.pearson_r < thresholds.min_r_youngs)
        out.push_back("pearson_r(Vf, E_c) = " + format_sig6(report.youngs.pearson_r) + " < " +
                      format_sig6(thresholds.min_r_youngs));
    if (report.yield.pearson_r < thresholds.min_r_yield)
        out.push_back("pearson_r(Vf, sigma_y) = " + format_sig6(report.yield.pearson_r) + " < " +
                      format_sig6(thresholds.min_r_yield));
    if (report.yield.pearson_r > report.youngs.pearson_r)
        out.push_back("pearson_r(Vf, sigma_y) exceeds pearson_r(Vf, E_c)");
    if (report.bound_violations > 0)
        out.push_back(std::to_string(report.bound_violations) + " samples outside the [0.9 Reuss, 1.1 Voigt] envelope");
    return out;
}

}  // namespace fibrevt
