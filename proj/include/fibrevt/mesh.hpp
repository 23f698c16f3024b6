#pragma once

#include <array>
#include <vector>

#include "fibrevt/microgen.hpp"

namespace fibrevt {

/// Structured voxel grid of square 4-node plane-strain quads over [0,h]x[0,h].
///
/// Elements are indexed row-major with z (loading axis) fastest:
/// element (ez, ey) -> ey * n_z + ez; node (iz, iy) -> iy * (n_z + 1) + iz.
/// Connectivity is counter-clockwise in the (z, y) plane. Node dofs are
/// 2*node (u_y) and 2*node + 1 (u_z).
struct Mesh {
    int n_z = 0;  // elements along z
    int n_y = 0;  // elements along y
    double element_size = 0.0;
    double domain_size = 0.0;
    std::vector<std::array<double, 2>> nodes;  // (y, z)
    std::vector<std::array<int, 4>> connectivity;
    std::vector<Phase> element_phase;

    int num_elements() const { return n_z * n_y; }
    int num_nodes() const { return (n_z + 1) * (n_y + 1); }
    int num_dofs() const { return 2 * num_nodes(); }
    int node_id(int iz, int iy) const { return iy * (n_z + 1) + iz; }
    static int dof_y(int node) { return 2 * node; }
    static int dof_z(int node) { return 2 * node + 1; }
    double fibre_fraction() const;
};

/// Uniform n x n grid over a square of side h with a single phase.
Mesh make_uniform_mesh(double h, int n, Phase phase = Phase::Matrix);

/// Voxel mesh with n = round(h_c / target_element_size) elements per side;
/// an element is FIBRE iff its centroid lies inside a fibre disc.
/// Throws ResolutionError if n < 8.
Mesh build_mesh(const Microstructure& ms, double target_element_size);

}  // namespace fibrevt
