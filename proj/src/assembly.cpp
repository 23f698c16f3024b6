#include "fibrevt/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fibrevt/errors.hpp"

namespace fibrevt {

StiffnessPattern::StiffnessPattern(const Mesh& mesh) {
    const int ndof = mesh.num_dofs();
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(64 * static_cast<std::size_t>(mesh.num_elements()));
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const auto dofs = element_dofs(mesh, e);
        for (int i : dofs)
            for (int j : dofs) triplets.emplace_back(i, j, 0.0);
    }
    zero_.resize(ndof, ndof);
    zero_.setFromTriplets(triplets.begin(), triplets.end());
    zero_.makeCompressed();

    const int* outer = zero_.outerIndexPtr();
    const int* inner = zero_.innerIndexPtr();
    slots_.resize(64 * static_cast<std::size_t>(mesh.num_elements()));
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const auto dofs = element_dofs(mesh, e);
        int* slot = slots_.data() + 64 * static_cast<std::size_t>(e);
        for (int j = 0; j < 8; ++j) {
            const int* begin = inner + outer[dofs[j]];
            const int* end = inner + outer[dofs[j] + 1];
            for (int i = 0; i < 8; ++i)
                slot[8 * j + i] = static_cast<int>(std::lower_bound(begin, end, dofs[i]) - inner);
        }
    }

    colours_.resize(4);
    for (int ey = 0; ey < mesh.n_y; ++ey)
        for (int ez = 0; ez < mesh.n_z; ++ez) colours_[(ez % 2) + 2 * (ey % 2)].push_back(ey * mesh.n_z + ez);
}

std::vector<GaussPointState> initial_states(const Mesh& mesh) {
    return std::vector<GaussPointState>(static_cast<std::size_t>(mesh.num_elements()) * kGaussPerElement);
}

std::array<int, 8> element_dofs(const Mesh& mesh, int element) {
    const auto& c = mesh.connectivity[static_cast<std::size_t>(element)];
    std::array<int, 8> dofs{};
    for (int a = 0; a < 4; ++a) {
        dofs[2 * a] = Mesh::dof_y(c[a]);
        dofs[2 * a + 1] = Mesh::dof_z(c[a]);
    }
    return dofs;
}

StrainMatrix strain_displacement(double element_size, int gp) {
    // natural coordinates: xi along z, eta along y; nodes counter-clockwise
    static constexpr double xi_a[4] = {-1.0, 1.0, 1.0, -1.0};
    static constexpr double eta_a[4] = {-1.0, -1.0, 1.0, 1.0};
    const double g = 1.0 / std::sqrt(3.0);
    const double xi = xi_a[gp] * g;
    const double eta = eta_a[gp] * g;
    const double scale = 2.0 / element_size;

    StrainMatrix b = StrainMatrix::Zero();
    for (int a = 0; a < 4; ++a) {
        const double dn_dz = 0.25 * xi_a[a] * (1.0 + eta * eta_a[a]) * scale;
        const double dn_dy = 0.25 * eta_a[a] * (1.0 + xi * xi_a[a]) * scale;
        b(0, 2 * a) = dn_dy;
        b(1, 2 * a + 1) = dn_dz;
        b(3, 2 * a) = dn_dz;
        b(3, 2 * a + 1) = dn_dy;
    }
    return b;
}

namespace detail {

std::array<StrainMatrix, kGaussPerElement> gauss_strain_matrices(double element_size, Integration integration) {
    std::array<StrainMatrix, kGaussPerElement> b;
    for (int gp = 0; gp < kGaussPerElement; ++gp) b[gp] = strain_displacement(element_size, gp);
    if (integration == Integration::Full) return b;

    // B-bar: replace the dilatation at each point by the element average
    Eigen::Matrix<double, 1, 8> mean = Eigen::Matrix<double, 1, 8>::Zero();
    for (const auto& m : b) mean += 0.25 * (m.row(0) + m.row(1) + m.row(2));
    for (auto& m : b) {
        const Eigen::Matrix<double, 1, 8> vol = m.row(0) + m.row(1) + m.row(2);
        for (int i = 0; i < 3; ++i) m.row(i) += (mean - vol) / 3.0;
    }
    return b;
}

ElementOutput integrate_element(const Mesh& mesh, const PhaseMaterials& materials,
                                const std::array<StrainMatrix, kGaussPerElement>& b, int element,
                                std::span<const GaussPointState> states, const Eigen::VectorXd& u,
                                std::span<GaussPointState> trial) {
    const auto dofs = element_dofs(mesh, element);
    ElementVector ue;
    for (int i = 0; i < 8; ++i) ue(i) = u(dofs[i]);

    const MaterialModel& mat = materials[mesh.element_phase[static_cast<std::size_t>(element)]];
    const double w = gauss_weight(mesh.element_size);
    ElementOutput out;
    out.stiffness.setZero();
    out.force.setZero();
    for (int gp = 0; gp < kGaussPerElement; ++gp) {
        const std::size_t q = static_cast<std::size_t>(element) * kGaussPerElement + gp;
        const Vector4 strain = b[gp] * ue;
        const ReturnMapResult rm = return_map(states[q], strain - states[q].strain, mat);
        trial[q] = rm.state;
        out.extrapolated += rm.extrapolated ? 1 : 0;
        out.stiffness.noalias() += w * b[gp].transpose() * rm.tangent * b[gp];
        out.force.noalias() += w * b[gp].transpose() * rm.state.stress;
    }
    out.finite = out.stiffness.allFinite() && out.force.allFinite();
    return out;
}

void check_sizes(const Mesh& mesh, std::span<const GaussPointState> states, const Eigen::VectorXd& u) {
    if (u.size() != mesh.num_dofs())
        throw ParameterError("assemble: displacement has " + std::to_string(u.size()) + " entries, mesh has " +
                             std::to_string(mesh.num_dofs()) + " dofs");
    if (states.size() != static_cast<std::size_t>(mesh.num_elements()) * kGaussPerElement)
        throw ParameterError("assemble: Gauss-point state count does not match mesh");
}

}  // namespace detail

AssemblyResult assemble(const Mesh& mesh, const PhaseMaterials& materials, std::span<const GaussPointState> states,
                        const Eigen::VectorXd& u, const StiffnessPattern& pattern, Integration integration) {
    detail::check_sizes(mesh, states, u);
    AssemblyResult out;
    out.residual = Eigen::VectorXd::Zero(mesh.num_dofs());
    out.stiffness = pattern.zero_matrix();
    out.states.resize(states.size());
    const auto b = detail::gauss_strain_matrices(mesh.element_size, integration);
    double* values = out.stiffness.valuePtr();
    int bad_element = std::numeric_limits<int>::max();
    int extrapolated = 0;

    for (const auto& colour : pattern.colours()) {
        const int count = static_cast<int>(colour.size());
#pragma omp parallel for schedule(static) reduction(min : bad_element) reduction(+ : extrapolated)
        for (int k = 0; k < count; ++k) {
            const int e = colour[static_cast<std::size_t>(k)];
            const auto el = detail::integrate_element(mesh, materials, b, e, states, u, out.states);
            extrapolated += el.extrapolated;
            if (!el.finite) {
                bad_element = std::min(bad_element, e);
                continue;
            }
            const int* slot = pattern.element_slots(e);
            for (int j = 0; j < 8; ++j)
                for (int i = 0; i < 8; ++i) values[slot[8 * j + i]] += el.stiffness(i, j);
            const auto dofs = element_dofs(mesh, e);
            for (int i = 0; i < 8; ++i) out.residual(dofs[i]) += el.force(i);
        }
    }
    if (bad_element != std::numeric_limits<int>::max())
        throw NumericalError("assemble: non-finite entries in element " + std::to_string(bad_element), bad_element);
    out.extrapolated_points = extrapolated;
    return out;
}

}  // namespace fibrevt
