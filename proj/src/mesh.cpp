#include "fibrevt/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fibrevt/errors.hpp"

namespace fibrevt {

double Mesh::fibre_fraction() const {
    if (element_phase.empty()) return 0.0;
    const auto n = std::count(element_phase.begin(), element_phase.end(), Phase::Fibre);
    return static_cast<double>(n) / static_cast<double>(element_phase.size());
}

Mesh make_uniform_mesh(double h, int n, Phase phase) {
    if (n < 1 || !(h > 0.0)) throw ParameterError("make_uniform_mesh: invalid size");
    Mesh m;
    m.n_z = m.n_y = n;
    m.domain_size = h;
    m.element_size = h / n;
    m.nodes.reserve(static_cast<std::size_t>(m.num_nodes()));
    for (int iy = 0; iy <= n; ++iy)
        for (int iz = 0; iz <= n; ++iz) m.nodes.push_back({iy * m.element_size, iz * m.element_size});
    m.connectivity.reserve(static_cast<std::size_t>(m.num_elements()));
    for (int ey = 0; ey < n; ++ey)
        for (int ez = 0; ez < n; ++ez)
            m.connectivity.push_back(
                {m.node_id(ez, ey), m.node_id(ez + 1, ey), m.node_id(ez + 1, ey + 1), m.node_id(ez, ey + 1)});
    m.element_phase.assign(static_cast<std::size_t>(m.num_elements()), phase);
    return m;
}

Mesh build_mesh(const Microstructure& ms, double target_element_size) {
    if (!(target_element_size > 0.0)) throw ParameterError("build_mesh: element size must be positive");
    const int n = static_cast<int>(std::lround(ms.domain_size / target_element_size));
    if (n < 8)
        throw ResolutionError("build_mesh: " + std::to_string(n) + " elements per side, need at least 8");

    Mesh m = make_uniform_mesh(ms.domain_size, n, Phase::Matrix);
    const double h = m.element_size;
    for (const auto& f : ms.fibres) {
        const int z0 = std::max(0, static_cast<int>(std::floor((f.center_z - f.radius) / h)));
        const int z1 = std::min(n - 1, static_cast<int>(std::ceil((f.center_z + f.radius) / h)));
        const int y0 = std::max(0, static_cast<int>(std::floor((f.center_y - f.radius) / h)));
        const int y1 = std::min(n - 1, static_cast<int>(std::ceil((f.center_y + f.radius) / h)));
        for (int ey = y0; ey <= y1; ++ey) {
            const double dy = (ey + 0.5) * h - f.center_y;
            for (int ez = z0; ez <= z1; ++ez) {
                const double dz = (ez + 0.5) * h - f.center_z;
                if (dy * dy + dz * dz <= f.radius * f.radius)
                    m.element_phase[static_cast<std::size_t>(ey) * n + ez] = Phase::Fibre;
            }
        }
    }
    return m;
}

}  // namespace fibrevt
