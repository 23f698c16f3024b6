#pragma once

// Virtual transverse tensile test: u_z ramped on the edge z = h_c, u_z = 0 on
// z = 0, u_y = 0 on y = 0. Homogenized stress is the edge reaction over h_c
// (unit thickness), strain is the edge displacement over h_c.

#include <string>
#include <vector>

#include "fibrevt/mesh.hpp"
#include "fibrevt/solver.hpp"

namespace fibrevt {

struct TensileTestConfig {
    double max_strain = 0.04;
    int n_increments = 40;
    double element_size_factor = 1.0;  // element size as a multiple of r_f
    int max_cutbacks = 4;              // halvings per increment before aborting
    NewtonOptions newton{};

    void validate() const;
};

struct CurvePoint {
    double strain = 0.0;
    double stress = 0.0;  // MPa
};

struct StressStrainCurve {
    std::vector<CurvePoint> points;  // starts at (0, 0)
};

struct IncrementRecord {
    int increment = 0;
    double applied_strain = 0.0;
    double reaction_force_un = 0.0;  // on z = h_c, uN per unit thickness
    int newton_iters = 0;
    int cutback_level = 0;
};

enum class TestStatus { Ok, SolverFail, NotYielded };

struct TestResult {
    TestStatus status = TestStatus::Ok;
    std::string failure_reason;
    StressStrainCurve curve;
    double youngs_modulus_gpa = 0.0;
    double yield_strength_mpa = 0.0;
    double vf_actual = 0.0;  // element fibre fraction of the mesh
    std::vector<IncrementRecord> solver_log;
    int newton_total_iters = 0;
    int extrapolation_warnings = 0;
    double reaction_balance = 0.0;  // |F(z=h) + F(z=0)| / |F(z=h)| at the last increment
};

/// Dirichlet constraints for the given applied strain, ordered u_z(z=0),
/// u_z(z=h), u_y(y=0), each edge by increasing node id.
ConstraintSet apply_boundary_conditions(const Mesh& mesh, double applied_strain);

/// Node ids on the loaded edge z = h and the fixed edge z = 0.
std::vector<int> loaded_edge_nodes(const Mesh& mesh);
std::vector<int> fixed_edge_nodes(const Mesh& mesh);

TestResult run_tensile_test(const Mesh& mesh, const PhaseMaterials& materials, const TensileTestConfig& cfg);

/// Meshes the microstructure with element size cfg.element_size_factor * r_f and runs the test.
TestResult run_tensile_test(const Microstructure& ms, const PhaseMaterials& materials, const TensileTestConfig& cfg);

/// Secant slope to the first increment, in GPa.
double extract_youngs_modulus(const StressStrainCurve& curve);

/// Offset (proof) stress in MPa: first intersection of the piecewise-linear
/// curve with sigma = E (eps - offset). Throws NotYieldedError if none.
double extract_proof_stress(const StressStrainCurve& curve, double youngs_modulus_gpa, double offset = 0.002);

const char* to_string(TestStatus s);

}  // namespace fibrevt
