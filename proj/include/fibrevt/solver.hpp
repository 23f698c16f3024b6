#pragma once

#include <Eigen/SparseCholesky>
#include <vector>

#include "fibrevt/assembly.hpp"

namespace fibrevt {

struct Constraint {
    int dof = 0;
    double value = 0.0;  // prescribed displacement, um
};

using ConstraintSet = std::vector<Constraint>;

/// Displacements plus the Dirichlet constraints to enforce on them.
struct DofSystem {
    Eigen::VectorXd u;
    ConstraintSet constraints;
};

struct NewtonOptions {
    double rel_tol = 1e-6;
    double abs_tol = 1e-10;
    int max_iterations = 20;
    int max_line_search = 5;  // step halvings per iteration; 0 disables backtracking
    Integration integration = Integration::SelectiveReduced;
};

struct IncrementReport {
    int iterations = 0;                  // linear solves performed
    std::vector<double> residual_norms;  // free-dof residual norm before each solve and at convergence
    Eigen::VectorXd internal_force;      // at the converged state; reactions on prescribed dofs
    int extrapolated_points = 0;
};

/// Newton-Raphson driver for one load increment with a fixed set of
/// prescribed dofs, backtracking on the residual norm. The constrained
/// tangent is factorized with a sparse LDL^T whose symbolic analysis is
/// done once per solver.
class IncrementSolver {
public:
    IncrementSolver(const Mesh& mesh, const PhaseMaterials& materials, const ConstraintSet& constraints,
                    NewtonOptions options = {});

    /// Imposes system.constraints on system.u and iterates to equilibrium.
    /// On success u and states hold the converged, committed solution.
    /// Throws ConvergenceFailure (u and states untouched) when the iteration
    /// limit is hit, SingularSystemError when the constrained tangent is singular.
    IncrementReport solve_increment(DofSystem& system, std::vector<GaussPointState>& states);

    int num_free_dofs() const { return static_cast<int>(free_dofs_.size()); }

private:
    void reduce(const SparseMatrix& full);

    const Mesh& mesh_;
    PhaseMaterials materials_;
    NewtonOptions options_;
    StiffnessPattern pattern_;
    std::vector<int> prescribed_dofs_;
    std::vector<int> free_dofs_;
    SparseMatrix reduced_;
    std::vector<int> reduced_source_;  // full value index per reduced value
    Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> factor_;
    bool analysed_ = false;
};

}  // namespace fibrevt
