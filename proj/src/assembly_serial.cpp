#include <string>

#include "fibrevt/assembly.hpp"
#include "fibrevt/errors.hpp"

namespace fibrevt {

AssemblyResult assemble_serial(const Mesh& mesh, const PhaseMaterials& materials,
                               std::span<const GaussPointState> states, const Eigen::VectorXd& u,
                               const StiffnessPattern& pattern, Integration integration) {
    detail::check_sizes(mesh, states, u);
    AssemblyResult out;
    out.residual = Eigen::VectorXd::Zero(mesh.num_dofs());
    out.stiffness = pattern.zero_matrix();
    out.states.resize(states.size());
    const auto b = detail::gauss_strain_matrices(mesh.element_size, integration);
    double* values = out.stiffness.valuePtr();

    for (int e = 0; e < mesh.num_elements(); ++e) {
        const auto el = detail::integrate_element(mesh, materials, b, e, states, u, out.states);
        if (!el.finite) throw NumericalError("assemble: non-finite entries in element " + std::to_string(e), e);
        out.extrapolated_points += el.extrapolated;
        const int* slot = pattern.element_slots(e);
        for (int j = 0; j < 8; ++j)
            for (int i = 0; i < 8; ++i) values[slot[8 * j + i]] += el.stiffness(i, j);
        const auto dofs = element_dofs(mesh, e);
        for (int i = 0; i < 8; ++i) out.residual(dofs[i]) += el.force(i);
    }
    return out;
}

}  // namespace fibrevt
