#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "check.hpp"
#include "fibrevt/analysis.hpp"
#include "fibrevt/errors.hpp"
#include "fibrevt/virtest.hpp"

using namespace fibrevt;

namespace {

StressStrainCurve curve_of(std::initializer_list<CurvePoint> pts) { return StressStrainCurve{pts}; }

void test_boundary_conditions() {
    std::cout << "\n=== apply_boundary_conditions ===\n";
    const Mesh m = make_uniform_mesh(25.8, 50);
    const auto zero = apply_boundary_conditions(m, 0.0);
    CHECK(std::all_of(zero.begin(), zero.end(), [](const Constraint& c) { return c.value == 0.0; }),
          "applied strain 0 -> all prescribed values zero");

    const auto cs = apply_boundary_conditions(m, 0.01);
    int left = 0, right = 0, bottom = 0;
    std::set<int> dofs;
    bool values_ok = true;
    for (const auto& c : cs) {
        dofs.insert(c.dof);
        const int node = c.dof / 2;
        const double y = m.nodes[node][0], z = m.nodes[node][1];
        if (c.dof % 2 == 1 && z == 0.0) {
            ++left;
            values_ok = values_ok && c.value == 0.0;
        } else if (c.dof % 2 == 1 && z == m.domain_size) {
            ++right;
            values_ok = values_ok && check::near_rel(c.value, 0.01 * 25.8, 1e-15);
        } else if (c.dof % 2 == 0 && y == 0.0) {
            ++bottom;
            values_ok = values_ok && c.value == 0.0;
        }
    }
    CHECK(left == 51 && right == 51 && bottom == 51 && cs.size() == 153, "51 constraints per edge at nx=50");
    CHECK(dofs.size() == cs.size(), "no dof prescribed twice");
    CHECK(values_ok, "u_z = 0 at z=0, u_z = strain*h at z=h, u_y = 0 at y=0");
    const int corner = m.node_id(0, 0);
    CHECK(dofs.count(Mesh::dof_y(corner)) && dofs.count(Mesh::dof_z(corner)), "corner node constrained in both directions");
}

void test_extract_youngs() {
    std::cout << "\n=== extract_youngs_modulus ===\n";
    CHECK(check::near_rel(extract_youngs_modulus(curve_of({{0, 0}, {0.001, 3.0}})), 3.0, 1e-14), "(0.001, 3 MPa) -> 3 GPa");
    StressStrainCurve lin;
    for (int k = 0; k <= 40; ++k) lin.points.push_back({0.001 * k, 5000.0 * 0.001 * k});
    CHECK(check::near_rel(extract_youngs_modulus(lin), 5.0, 1e-14), "sigma = 5000 eps -> 5 GPa");
    CHECK_THROWS(extract_youngs_modulus(curve_of({{0, 0}, {0.0, 1.0}})), ParameterError, "eps_1 <= 0 rejected");
    CHECK_THROWS(extract_youngs_modulus(curve_of({{0, 0}})), ParameterError, "single point rejected");
}

void test_extract_proof_stress() {
    std::cout << "\n=== extract_proof_stress ===\n";
    const auto epp = curve_of({{0, 0}, {0.02, 60.0}, {0.04, 60.0}});
    CHECK(check::near_abs(extract_proof_stress(epp, 3.0), 60.0, 1e-12), "elastic-perfectly-plastic plateau -> 60 MPa");

    StressStrainCurve lin;
    for (int k = 0; k <= 40; ++k) lin.points.push_back({0.001 * k, 3000.0 * 0.001 * k});
    CHECK_THROWS(extract_proof_stress(lin, 3.0), NotYieldedError, "linear curve -> NotYieldedError");

    // E = 3 GPa to 60 MPa, then tangent 0.3 GPa. Line-line intersection:
    // 3000 (e - 0.002) = 60 + 300 (e - 0.02)  ->  e = 1/45, sigma = 182/3.
    const auto bil = curve_of({{0, 0}, {0.02, 60.0}, {0.04, 66.0}});
    CHECK(check::near_abs(extract_proof_stress(bil, 3.0), 182.0 / 3.0, 1e-6), "bilinear curve -> 60.6667 MPa");

    // Densely sampled bilinear curve gives the same answer.
    StressStrainCurve dense;
    for (int k = 0; k <= 400; ++k) {
        const double e = 1e-4 * k;
        dense.points.push_back({e, e <= 0.02 ? 3000.0 * e : 60.0 + 300.0 * (e - 0.02)});
    }
    CHECK(check::near_abs(extract_proof_stress(dense, 3.0), 182.0 / 3.0, 1e-6), "dense bilinear curve -> 60.6667 MPa");
}

void test_elastic_oracles() {
    std::cout << "\n=== homogeneous plate oracles ===\n";
    TensileTestConfig cfg;
    cfg.max_strain = 0.01;
    cfg.n_increments = 10;
    const Mesh m = make_uniform_mesh(25.8, 50, Phase::Matrix);
    const PhaseMaterials elastic{MaterialModel{2.82, 0.387, {}}, MaterialModel::t800s_fibre()};
    auto r = run_tensile_test(m, elastic, cfg);
    CHECK(r.status == TestStatus::NotYielded, "elastic matrix never yields");
    CHECK(check::near_rel(r.youngs_modulus_gpa, 3.3167456844081196, 0.005), "all-matrix E_c = E/(1-nu^2) within 0.5%");

    const Mesh f = make_uniform_mesh(25.8, 50, Phase::Fibre);
    r = run_tensile_test(f, elastic, cfg);
    CHECK(check::near_rel(r.youngs_modulus_gpa, 16.544, 0.005), "all-fibre E_c = 16.544 GPa within 0.5%");
    CHECK(r.reaction_balance < 1e-6, "reactions balance on the two loaded edges");
}

void test_microstructure_test() {
    std::cout << "\n=== virtual test on a Vf=0.40 microstructure ===\n";
    const auto ms = generate_microstructure(25.8, 0.516, 0.40, 21);
    const PhaseMaterials mats = PhaseMaterials::defaults();
    TensileTestConfig cfg;
    const auto r = run_tensile_test(ms, mats, cfg);
    std::cout << "  E_c=" << r.youngs_modulus_gpa << " GPa  sigma_y=" << r.yield_strength_mpa
              << " MPa  newton=" << r.newton_total_iters << "\n";
    CHECK(r.status == TestStatus::Ok, "test completes with status OK");
    CHECK(r.curve.points.size() == static_cast<std::size_t>(cfg.n_increments) + 1 && r.curve.points[0].strain == 0.0 &&
              r.curve.points[0].stress == 0.0,
          "curve starts at (0,0) with one point per increment");
    const auto b = voigt_reuss_bounds(0.40, 2.82, 15.51);
    CHECK(r.youngs_modulus_gpa > b.reuss && r.youngs_modulus_gpa < b.voigt, "Reuss < E_c < Voigt");
    bool monotone = true, increasing = true;
    for (std::size_t k = 1; k < r.curve.points.size(); ++k) {
        monotone = monotone && r.curve.points[k].stress >= r.curve.points[k - 1].stress;
        increasing = increasing && r.curve.points[k].strain > r.curve.points[k - 1].strain;
    }
    CHECK(monotone && increasing, "stress non-decreasing, strain strictly increasing");
    CHECK(r.reaction_balance < 1e-6, "reaction equilibrium within 1e-6");
    CHECK(r.yield_strength_mpa > 60.0, "sigma_y above the matrix initial yield");
    CHECK(r.solver_log.size() == static_cast<std::size_t>(cfg.n_increments), "one log record per increment");

    TensileTestConfig doubled = cfg;
    doubled.n_increments = 2 * cfg.n_increments;
    const auto r2 = run_tensile_test(ms, mats, doubled);
    const double de = std::fabs(r2.youngs_modulus_gpa - r.youngs_modulus_gpa) / r.youngs_modulus_gpa;
    const double ds = std::fabs(r2.yield_strength_mpa - r.yield_strength_mpa) / r.yield_strength_mpa;
    std::cout << "  doubling increments: dE=" << de << " dsigma=" << ds << "\n";
    CHECK(de < 1e-3, "doubling n_increments changes E_c by < 0.1%");
    CHECK(ds < 1e-2, "doubling n_increments changes sigma_y by < 1%");

    TensileTestConfig starved = cfg;
    starved.newton.max_iterations = 1;
    starved.newton.rel_tol = 1e-14;
    starved.max_cutbacks = 1;
    const auto rf = run_tensile_test(ms, mats, starved);
    CHECK(rf.status == TestStatus::SolverFail && !rf.failure_reason.empty(), "solver abort reported as SOLVER_FAIL");

    TensileTestConfig bad = cfg;
    bad.n_increments = 5;
    CHECK_THROWS(bad.validate(), ParameterError, "n_increments < 10 rejected");
}

}  // namespace

int main() {
    test_boundary_conditions();
    test_extract_youngs();
    test_extract_proof_stress();
    test_elastic_oracles();
    test_microstructure_test();
    return check::summary("test_virtest");
}
