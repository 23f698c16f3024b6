#include "fibrevt/material.hpp"

#include <cmath>
#include <string>

#include "fibrevt/errors.hpp"

namespace fibrevt {

void MaterialModel::validate() const {
    if (!std::isfinite(youngs_modulus_gpa) || youngs_modulus_gpa <= 0.0)
        throw ParameterError("material: Young's modulus must be positive");
    if (!std::isfinite(poisson_ratio) || poisson_ratio < 0.0 || poisson_ratio >= 0.5)
        throw ParameterError("material: Poisson ratio must lie in [0, 0.5)");
    if (hardening.empty()) return;
    if (hardening.front().plastic_strain != 0.0)
        throw ParameterError("material: hardening table must start at zero plastic strain");
    for (std::size_t i = 0; i < hardening.size(); ++i) {
        const auto& p = hardening[i];
        if (!std::isfinite(p.plastic_strain) || !std::isfinite(p.flow_stress) || p.flow_stress <= 0.0)
            throw ParameterError("material: invalid hardening entry " + std::to_string(i));
        if (i > 0) {
            if (p.plastic_strain <= hardening[i - 1].plastic_strain)
                throw ParameterError("material: hardening plastic strain must be strictly increasing");
            if (p.flow_stress < hardening[i - 1].flow_stress)
                throw ParameterError("material: hardening flow stress must be non-decreasing");
        }
    }
}

double MaterialModel::shear_modulus_mpa() const { return youngs_modulus_mpa() / (2.0 * (1.0 + poisson_ratio)); }

double MaterialModel::bulk_modulus_mpa() const { return youngs_modulus_mpa() / (3.0 * (1.0 - 2.0 * poisson_ratio)); }

double MaterialModel::flow_stress(double eq_plastic_strain) const {
    if (hardening.empty()) return 0.0;
    if (hardening.size() == 1) return hardening.front().flow_stress;
    std::size_t k = 0;
    while (k + 2 < hardening.size() && eq_plastic_strain > hardening[k + 1].plastic_strain) ++k;
    const auto& a = hardening[k];
    const auto& b = hardening[k + 1];
    const double slope = (b.flow_stress - a.flow_stress) / (b.plastic_strain - a.plastic_strain);
    return a.flow_stress + slope * (eq_plastic_strain - a.plastic_strain);
}

std::vector<HardeningPoint> MaterialModel::default_matrix_hardening() {
    // Sampled from 60 + 20 (1 - exp(-eps/0.0125)) / (1 - exp(-4)).
    return {{0.0, 60.0},    {0.0025, 63.69}, {0.005, 66.72}, {0.01, 71.22}, {0.015, 74.24},
            {0.02, 76.26},  {0.03, 78.52},   {0.04, 79.54},  {0.05, 80.0}};
}

MaterialModel MaterialModel::f3900_matrix() { return {2.82, 0.387, default_matrix_hardening()}; }

MaterialModel MaterialModel::t800s_fibre() { return {15.51, 0.250, {}}; }

Matrix4 elastic_tangent(const MaterialModel& mat) {
    const double e = mat.youngs_modulus_mpa();
    const double nu = mat.poisson_ratio;
    const double lambda = e * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
    const double g = e / (2.0 * (1.0 + nu));
    Matrix4 c = Matrix4::Zero();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) c(i, j) = lambda + (i == j ? 2.0 * g : 0.0);
    c(3, 3) = g;
    return c;
}

}  // namespace fibrevt
