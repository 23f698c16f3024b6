#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <span>
#include <vector>

#include "fibrevt/material.hpp"
#include "fibrevt/mesh.hpp"
#include "fibrevt/plasticity.hpp"

namespace fibrevt {

using SparseMatrix = Eigen::SparseMatrix<double>;
using ElementMatrix = Eigen::Matrix<double, 8, 8>;
using ElementVector = Eigen::Matrix<double, 8, 1>;

using StrainMatrix = Eigen::Matrix<double, 4, 8>;

inline constexpr int kGaussPerElement = 4;

/// Full: plain 2x2 Gauss. SelectiveReduced: 2x2 Gauss with the volumetric
/// strain replaced by its element average (B-bar), which avoids volumetric
/// locking once plastic flow is nearly incompressible. Under B-bar the
/// Gauss-point eps_xx is the (generally nonzero) dilatation correction.
enum class Integration { Full, SelectiveReduced };

/// Sparsity of the global stiffness for a structured mesh, with the storage
/// slot of every element-matrix entry precomputed so assembly is a scatter.
class StiffnessPattern {
public:
    explicit StiffnessPattern(const Mesh& mesh);

    const SparseMatrix& zero_matrix() const { return zero_; }
    const int* element_slots(int element) const { return slots_.data() + 64 * static_cast<std::size_t>(element); }
    /// Elements grouped so no two in a group share a node.
    const std::vector<std::vector<int>>& colours() const { return colours_; }

private:
    SparseMatrix zero_;
    std::vector<int> slots_;
    std::vector<std::vector<int>> colours_;
};

struct AssemblyResult {
    Eigen::VectorXd residual;         // internal force minus external force (none applied), uN
    SparseMatrix stiffness;           // full, unconstrained tangent
    std::vector<GaussPointState> states;  // trial states, kGaussPerElement per element
    int extrapolated_points = 0;
};

/// Virgin Gauss-point states for every element of the mesh.
std::vector<GaussPointState> initial_states(const Mesh& mesh);

/// Element dof indices (u_y, u_z per node, connectivity order).
std::array<int, 8> element_dofs(const Mesh& mesh, int element);

/// Strain-displacement matrix (4 x 8) of a square element at Gauss point gp.
StrainMatrix strain_displacement(double element_size, int gp);

/// Quadrature weight times Jacobian determinant for a square element.
inline double gauss_weight(double element_size) { return 0.25 * element_size * element_size; }

/// OpenMP assembly: elements of one colour are processed in parallel and
/// colours are scattered in fixed order, so the result does not depend on
/// the thread count. Throws NumericalError naming the first bad element.
AssemblyResult assemble(const Mesh& mesh, const PhaseMaterials& materials, std::span<const GaussPointState> states,
                        const Eigen::VectorXd& u, const StiffnessPattern& pattern,
                        Integration integration = Integration::SelectiveReduced);

/// Single-threaded reference in plain element order.
AssemblyResult assemble_serial(const Mesh& mesh, const PhaseMaterials& materials,
                               std::span<const GaussPointState> states, const Eigen::VectorXd& u,
                               const StiffnessPattern& pattern,
                               Integration integration = Integration::SelectiveReduced);

namespace detail {

struct ElementOutput {
    ElementMatrix stiffness;
    ElementVector force;
    int extrapolated = 0;
    bool finite = true;
};

/// Integrates one element and writes its trial Gauss-point states.
ElementOutput integrate_element(const Mesh& mesh, const PhaseMaterials& materials,
                                const std::array<StrainMatrix, kGaussPerElement>& b, int element,
                                std::span<const GaussPointState> states, const Eigen::VectorXd& u,
                                std::span<GaussPointState> trial);

std::array<StrainMatrix, kGaussPerElement> gauss_strain_matrices(double element_size, Integration integration);

void check_sizes(const Mesh& mesh, std::span<const GaussPointState> states, const Eigen::VectorXd& u);

}  // namespace detail

}  // namespace fibrevt
