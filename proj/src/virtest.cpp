#include "fibrevt/virtest.hpp"

#include <cmath>
#include <string>

#include "fibrevt/errors.hpp"

namespace fibrevt {

void TensileTestConfig::validate() const {
    if (!(max_strain > 0.0) || !std::isfinite(max_strain)) throw ParameterError("test: max_strain must be positive");
    if (n_increments < 10) throw ParameterError("test: n_increments must be >= 10");
    if (!(element_size_factor > 0.0)) throw ParameterError("test: element_size_factor must be positive");
    if (max_cutbacks < 0) throw ParameterError("test: max_cutbacks must be >= 0");
}

const char* to_string(TestStatus s) {
    switch (s) {
        case TestStatus::Ok: return "OK";
        case TestStatus::SolverFail: return "SOLVER_FAIL";
        case TestStatus::NotYielded: return "NOT_YIELDED";
    }
    return "?";
}

std::vector<int> loaded_edge_nodes(const Mesh& mesh) {
    std::vector<int> nodes;
    for (int iy = 0; iy <= mesh.n_y; ++iy) nodes.push_back(mesh.node_id(mesh.n_z, iy));
    return nodes;
}

std::vector<int> fixed_edge_nodes(const Mesh& mesh) {
    std::vector<int> nodes;
    for (int iy = 0; iy <= mesh.n_y; ++iy) nodes.push_back(mesh.node_id(0, iy));
    return nodes;
}

ConstraintSet apply_boundary_conditions(const Mesh& mesh, double applied_strain) {
    ConstraintSet cs;
    cs.reserve(static_cast<std::size_t>(2 * (mesh.n_y + 1) + mesh.n_z + 1));
    for (int node : fixed_edge_nodes(mesh)) cs.push_back({Mesh::dof_z(node), 0.0});
    const double u0 = applied_strain * mesh.domain_size;
    for (int node : loaded_edge_nodes(mesh)) cs.push_back({Mesh::dof_z(node), u0});
    for (int iz = 0; iz <= mesh.n_z; ++iz) cs.push_back({Mesh::dof_y(mesh.node_id(iz, 0)), 0.0});
    return cs;
}

namespace {

double edge_force(const Eigen::VectorXd& internal_force, const std::vector<int>& nodes) {
    double f = 0.0;
    for (int n : nodes) f += internal_force(Mesh::dof_z(n));
    return f;
}

class LoadDriver {
public:
    LoadDriver(const Mesh& mesh, const PhaseMaterials& materials, const TensileTestConfig& cfg, TestResult& result)
        : mesh_(mesh),
          cfg_(cfg),
          result_(result),
          solver_(mesh, materials, apply_boundary_conditions(mesh, 0.0), cfg.newton),
          system_{Eigen::VectorXd::Zero(mesh.num_dofs()), {}},
          states_(initial_states(mesh)),
          loaded_(loaded_edge_nodes(mesh)),
          fixed_(fixed_edge_nodes(mesh)) {}

    // Advances from the current strain to `target`, halving on non-convergence.
    void advance(int increment, double from, double target, int level) {
        system_.constraints = apply_boundary_conditions(mesh_, target);
        try {
            const IncrementReport rep = solver_.solve_increment(system_, states_);
            record(increment, target, rep, level);
        } catch (const ConvergenceFailure& e) {
            result_.newton_total_iters += e.iterations();
            if (level >= cfg_.max_cutbacks)
                throw ConvergenceFailure("increment " + std::to_string(increment) + " failed after " +
                                             std::to_string(level) + " cutbacks",
                                         0);
            const double mid = 0.5 * (from + target);
            advance(increment, from, mid, level + 1);
            advance(increment, mid, target, level + 1);
        }
    }

private:
    void record(int increment, double strain, const IncrementReport& rep, int level) {
        const double f_loaded = edge_force(rep.internal_force, loaded_);
        const double f_fixed = edge_force(rep.internal_force, fixed_);
        result_.curve.points.push_back({strain, f_loaded / mesh_.domain_size});
        result_.solver_log.push_back({increment, strain, f_loaded, rep.iterations, level});
        result_.newton_total_iters += rep.iterations;
        result_.extrapolation_warnings += rep.extrapolated_points;
        result_.reaction_balance = f_loaded != 0.0 ? std::abs(f_loaded + f_fixed) / std::abs(f_loaded) : 0.0;
    }

    const Mesh& mesh_;
    const TensileTestConfig& cfg_;
    TestResult& result_;
    IncrementSolver solver_;
    DofSystem system_;
    std::vector<GaussPointState> states_;
    std::vector<int> loaded_;
    std::vector<int> fixed_;
};

}  // namespace

TestResult run_tensile_test(const Mesh& mesh, const PhaseMaterials& materials, const TensileTestConfig& cfg) {
    cfg.validate();
    TestResult result;
    result.vf_actual = mesh.fibre_fraction();
    result.curve.points.push_back({0.0, 0.0});

    try {
        LoadDriver driver(mesh, materials, cfg, result);
        double done = 0.0;
        for (int inc = 1; inc <= cfg.n_increments; ++inc) {
            const double target = cfg.max_strain * inc / cfg.n_increments;
            driver.advance(inc, done, target, 0);
            done = target;
        }
    } catch (const ConvergenceFailure& e) {
        result.status = TestStatus::SolverFail;
        result.failure_reason = e.what();
    } catch (const SingularSystemError& e) {
        result.status = TestStatus::SolverFail;
        result.failure_reason = e.what();
    } catch (const NumericalError& e) {
        result.status = TestStatus::SolverFail;
        result.failure_reason = e.what();
    }
    if (result.status != TestStatus::Ok || result.curve.points.size() < 2) {
        result.status = TestStatus::SolverFail;
        return result;
    }

    result.youngs_modulus_gpa = extract_youngs_modulus(result.curve);
    try {
        result.yield_strength_mpa = extract_proof_stress(result.curve, result.youngs_modulus_gpa);
    } catch (const NotYieldedError& e) {
        result.status = TestStatus::NotYielded;
        result.failure_reason = e.what();
    }
    return result;
}

TestResult run_tensile_test(const Microstructure& ms, const PhaseMaterials& materials, const TensileTestConfig& cfg) {
    cfg.validate();
    const Mesh mesh = build_mesh(ms, cfg.element_size_factor * ms.mean_radius);
    return run_tensile_test(mesh, materials, cfg);
}

double extract_youngs_modulus(const StressStrainCurve& curve) {
    if (curve.points.size() < 2) throw ParameterError("extract_youngs_modulus: need at least two points");
    const auto& p0 = curve.points[0];
    const auto& p1 = curve.points[1];
    if (!(p1.strain - p0.strain > 0.0)) throw ParameterError("extract_youngs_modulus: first strain must be positive");
    return (p1.stress - p0.stress) / (p1.strain - p0.strain) / 1000.0;
}

double extract_proof_stress(const StressStrainCurve& curve, double youngs_modulus_gpa, double offset) {
    const double e = youngs_modulus_gpa * 1000.0;
    // gap between the curve and the offset line; positive before the crossing
    auto gap = [&](const CurvePoint& p) { return p.stress - e * (p.strain - offset); };
    for (std::size_t k = 1; k < curve.points.size(); ++k) {
        const auto& a = curve.points[k - 1];
        const auto& b = curve.points[k];
        const double ga = gap(a), gb = gap(b);
        if (ga > 0.0 && gb <= 0.0) {
            const double t = ga / (ga - gb);
            return a.stress + t * (b.stress - a.stress);
        }
    }
    throw NotYieldedError("extract_proof_stress: curve does not reach the offset line");
}

}  // namespace fibrevt
