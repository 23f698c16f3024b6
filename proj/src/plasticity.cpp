#include "fibrevt/plasticity.hpp"

#include <cmath>

namespace fibrevt {

namespace {

const Vector4 kIdentity = (Vector4() << 1.0, 1.0, 1.0, 0.0).finished();

Vector4 deviator(const Vector4& s) {
    const double p = (s(0) + s(1) + s(2)) / 3.0;
    return s - p * kIdentity;
}

double tensor_norm(const Vector4& dev) {
    return std::sqrt(dev(0) * dev(0) + dev(1) * dev(1) + dev(2) * dev(2) + 2.0 * dev(3) * dev(3));
}

// Deviatoric projector acting on engineering-shear strain, returning stress-like components.
Matrix4 deviatoric_projector() {
    Matrix4 p = Matrix4::Zero();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) p(i, j) = (i == j ? 1.0 : 0.0) - 1.0 / 3.0;
    p(3, 3) = 0.5;
    return p;
}

struct PlasticSolve {
    double delta_gamma;
    double slope;
    bool extrapolated;
};

// Solves q_trial - 3 G dg - sigma_y(alpha + dg) = 0 on the piecewise-linear table.
PlasticSolve solve_multiplier(const MaterialModel& mat, double q_trial, double alpha, double g) {
    const auto& t = mat.hardening;
    if (t.size() == 1) return {(q_trial - t.front().flow_stress) / (3.0 * g), 0.0, false};

    std::size_t k = 0;
    while (k + 2 < t.size() && alpha >= t[k + 1].plastic_strain) ++k;
    for (;; ++k) {
        const auto& a = t[k];
        const auto& b = t[k + 1];
        const double h = (b.flow_stress - a.flow_stress) / (b.plastic_strain - a.plastic_strain);
        const double sigma_alpha = a.flow_stress + h * (alpha - a.plastic_strain);
        const double dg = (q_trial - sigma_alpha) / (3.0 * g + h);
        const bool last = k + 2 == t.size();
        if (last || alpha + dg <= b.plastic_strain)
            return {dg, h, last && alpha + dg > b.plastic_strain};
    }
}

}  // namespace

double von_mises(const Vector4& stress) { return std::sqrt(1.5) * tensor_norm(deviator(stress)); }

ReturnMapResult return_map(const GaussPointState& state, const Vector4& strain_increment, const MaterialModel& mat) {
    const Matrix4 c = elastic_tangent(mat);
    ReturnMapResult out;
    out.state = state;
    out.state.strain += strain_increment;
    const Vector4 trial = state.stress + c * strain_increment;
    out.state.stress = trial;
    out.tangent = c;

    if (!mat.is_plastic()) return out;

    const Vector4 s = deviator(trial);
    const double norm = tensor_norm(s);
    const double q_trial = std::sqrt(1.5) * norm;
    if (q_trial <= mat.flow_stress(state.eq_plastic_strain)) return out;

    const double g = mat.shear_modulus_mpa();
    const double k = mat.bulk_modulus_mpa();
    const PlasticSolve ps = solve_multiplier(mat, q_trial, state.eq_plastic_strain, g);
    const double dg = ps.delta_gamma;
    const Vector4 n = s / norm;

    out.yielded = true;
    out.extrapolated = ps.extrapolated;
    out.state.stress = trial - 2.0 * g * std::sqrt(1.5) * dg * n;
    out.state.plastic_strain += std::sqrt(1.5) * dg * n;
    out.state.eq_plastic_strain += dg;

    const double ratio = dg / q_trial;
    out.tangent = k * kIdentity * kIdentity.transpose() + 2.0 * g * (1.0 - 3.0 * g * ratio) * deviatoric_projector() +
                  6.0 * g * g * (ratio - 1.0 / (3.0 * g + ps.slope)) * n * n.transpose();
    return out;
}

}  // namespace fibrevt
