#pragma once

// Isotropic materials in the plane-strain Voigt basis (yy, zz, xx, yz) with
// engineering shear strain. Stresses in MPa, moduli given in GPa.

#include <Eigen/Core>
#include <vector>

#include "fibrevt/microgen.hpp"

namespace fibrevt {

using Vector4 = Eigen::Matrix<double, 4, 1>;
using Matrix4 = Eigen::Matrix<double, 4, 4>;

struct HardeningPoint {
    double plastic_strain = 0.0;  // equivalent plastic strain
    double flow_stress = 0.0;     // MPa
};

struct MaterialModel {
    double youngs_modulus_gpa = 0.0;
    double poisson_ratio = 0.0;
    std::vector<HardeningPoint> hardening;  // empty: purely elastic

    /// Throws ParameterError if E, nu or the hardening table are inadmissible.
    void validate() const;

    bool is_plastic() const { return !hardening.empty(); }
    double youngs_modulus_mpa() const { return youngs_modulus_gpa * 1000.0; }
    double shear_modulus_mpa() const;
    double bulk_modulus_mpa() const;

    /// Piecewise-linear flow stress; beyond the last entry the last segment's
    /// slope is extrapolated (zero slope for a single-entry table).
    double flow_stress(double eq_plastic_strain) const;

    /// F3900 epoxy elastic constants with the default placeholder hardening curve.
    static MaterialModel f3900_matrix();
    /// T800S fibre, transverse elastic constants.
    static MaterialModel t800s_fibre();
    /// 60 MPa initial yield saturating to 80 MPa at eps_p = 0.05.
    static std::vector<HardeningPoint> default_matrix_hardening();
};

struct PhaseMaterials {
    MaterialModel matrix;
    MaterialModel fibre;

    const MaterialModel& operator[](Phase p) const { return p == Phase::Fibre ? fibre : matrix; }
    static PhaseMaterials defaults() { return {MaterialModel::f3900_matrix(), MaterialModel::t800s_fibre()}; }
};

/// Isotropic plane-strain stiffness (MPa); the xx row gives the out-of-plane
/// stress produced by the in-plane strains with eps_xx = 0.
Matrix4 elastic_tangent(const MaterialModel& mat);

}  // namespace fibrevt
