#pragma once

#include "fibrevt/material.hpp"

namespace fibrevt {

/// History at one Gauss point.
struct GaussPointState {
    Vector4 strain = Vector4::Zero();          // total strain (yy, zz, xx, gamma_yz)
    Vector4 plastic_strain = Vector4::Zero();  // tensor components (yy, zz, xx, gamma_yz / 2)
    double eq_plastic_strain = 0.0;
    Vector4 stress = Vector4::Zero();          // (yy, zz, xx, yz), MPa
};

struct ReturnMapResult {
    GaussPointState state;
    Matrix4 tangent;          // consistent algorithmic tangent, MPa
    bool yielded = false;
    bool extrapolated = false;  // eq. plastic strain ran past the hardening table
};

/// Von Mises stress of a (yy, zz, xx, yz) stress vector.
double von_mises(const Vector4& stress);

/// Radial-return update for J2 plasticity with piecewise-linear isotropic hardening.
/// The plastic multiplier is solved exactly segment by segment, so the updated
/// state sits on the yield surface to rounding.
ReturnMapResult return_map(const GaussPointState& state, const Vector4& strain_increment, const MaterialModel& mat);

}  // namespace fibrevt
