#include "fibrevt/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fibrevt/errors.hpp"

namespace fibrevt {

IncrementSolver::IncrementSolver(const Mesh& mesh, const PhaseMaterials& materials, const ConstraintSet& constraints,
                                 NewtonOptions options)
    : mesh_(mesh), materials_(materials), options_(options), pattern_(mesh) {
    materials_.matrix.validate();
    materials_.fibre.validate();

    const int ndof = mesh.num_dofs();
    std::vector<int> free_index(static_cast<std::size_t>(ndof), 0);
    for (const auto& c : constraints) {
        if (c.dof < 0 || c.dof >= ndof) throw ParameterError("IncrementSolver: constraint dof out of range");
        if (free_index[static_cast<std::size_t>(c.dof)] < 0)
            throw ParameterError("IncrementSolver: dof " + std::to_string(c.dof) + " constrained twice");
        free_index[static_cast<std::size_t>(c.dof)] = -1;
        prescribed_dofs_.push_back(c.dof);
    }
    for (int d = 0; d < ndof; ++d) {
        if (free_index[static_cast<std::size_t>(d)] < 0) continue;
        free_index[static_cast<std::size_t>(d)] = static_cast<int>(free_dofs_.size());
        free_dofs_.push_back(d);
    }

    // Reduced pattern keeps full column-major order, so values map one to one.
    const SparseMatrix& full = pattern_.zero_matrix();
    const int nfree = num_free_dofs();
    std::vector<int> outer(static_cast<std::size_t>(nfree) + 1, 0);
    std::vector<int> inner;
    for (int jf = 0; jf < nfree; ++jf) {
        const int j = free_dofs_[static_cast<std::size_t>(jf)];
        for (int p = full.outerIndexPtr()[j]; p < full.outerIndexPtr()[j + 1]; ++p) {
            const int fi = free_index[static_cast<std::size_t>(full.innerIndexPtr()[p])];
            if (fi < 0) continue;
            inner.push_back(fi);
            reduced_source_.push_back(p);
        }
        outer[static_cast<std::size_t>(jf) + 1] = static_cast<int>(inner.size());
    }
    reduced_.resize(nfree, nfree);
    reduced_.reserve(static_cast<Eigen::Index>(inner.size()));
    for (int jf = 0; jf < nfree; ++jf) {
        reduced_.startVec(jf);
        for (int p = outer[static_cast<std::size_t>(jf)]; p < outer[static_cast<std::size_t>(jf) + 1]; ++p)
            reduced_.insertBack(inner[static_cast<std::size_t>(p)], jf) = 0.0;
    }
    reduced_.finalize();
    reduced_.makeCompressed();
}

void IncrementSolver::reduce(const SparseMatrix& full) {
    const double* src = full.valuePtr();
    double* dst = reduced_.valuePtr();
    for (std::size_t k = 0; k < reduced_source_.size(); ++k) dst[k] = src[reduced_source_[k]];
}

IncrementReport IncrementSolver::solve_increment(DofSystem& system, std::vector<GaussPointState>& states) {
    if (system.u.size() != mesh_.num_dofs()) throw ParameterError("solve_increment: displacement size mismatch");
    if (system.constraints.size() != prescribed_dofs_.size())
        throw ParameterError("solve_increment: constraint set differs from the solver's");

    Eigen::VectorXd u = system.u;
    for (std::size_t k = 0; k < system.constraints.size(); ++k) {
        if (system.constraints[k].dof != prescribed_dofs_[k])
            throw ParameterError("solve_increment: constraint set differs from the solver's");
        u(system.constraints[k].dof) = system.constraints[k].value;
    }

    const int nfree = num_free_dofs();
    IncrementReport report;
    Eigen::VectorXd r_free(nfree);
    double reference = 0.0;

    auto free_norm = [&](const AssemblyResult& a) {
        for (int k = 0; k < nfree; ++k) r_free(k) = a.residual(free_dofs_[static_cast<std::size_t>(k)]);
        return r_free.norm();
    };

    AssemblyResult asmb = assemble(mesh_, materials_, states, u, pattern_, options_.integration);
    double norm = free_norm(asmb);
    for (int iter = 0;; ++iter) {
        double reaction_sq = 0.0;
        for (int d : prescribed_dofs_) reaction_sq += asmb.residual(d) * asmb.residual(d);

        if (!std::isfinite(norm)) throw ConvergenceFailure("solve_increment: non-finite residual", iter);
        if (iter == 0) reference = norm;
        report.residual_norms.push_back(norm);

        const double scale = std::max(reference, std::sqrt(reaction_sq));
        if (norm <= options_.abs_tol || norm <= options_.rel_tol * scale) {
            report.iterations = iter;
            report.internal_force = std::move(asmb.residual);
            report.extrapolated_points = asmb.extrapolated_points;
            system.u = std::move(u);
            states = std::move(asmb.states);
            return report;
        }
        if (iter == options_.max_iterations)
            throw ConvergenceFailure("solve_increment: no convergence in " + std::to_string(iter) + " iterations", iter);

        free_norm(asmb);  // r_free back to the current residual
        reduce(asmb.stiffness);
        if (!analysed_) {
            factor_.analyzePattern(reduced_);
            analysed_ = true;
        }
        factor_.factorize(reduced_);
        if (factor_.info() != Eigen::Success) throw SingularSystemError("solve_increment: factorization failed");
        const auto& d = factor_.vectorD();
        const double dmax = d.cwiseAbs().maxCoeff();
        if (!(d.minCoeff() > 1e-12 * dmax))
            throw SingularSystemError("solve_increment: constrained stiffness is singular or indefinite");

        const Eigen::VectorXd du = factor_.solve(-r_free);

        // Backtrack on the residual norm; if no trial step reduces it, take the full step.
        Eigen::VectorXd trial = u;
        double alpha = 1.0;
        for (int ls = 0;; ++ls) {
            for (int k = 0; k < nfree; ++k) {
                const int dof = free_dofs_[static_cast<std::size_t>(k)];
                trial(dof) = u(dof) + alpha * du(k);
            }
            AssemblyResult next = assemble(mesh_, materials_, states, trial, pattern_, options_.integration);
            const double next_norm = free_norm(next);
            if (next_norm < norm || ls == options_.max_line_search) {
                if (!(next_norm < norm) && alpha < 1.0) {
                    for (int k = 0; k < nfree; ++k) {
                        const int dof = free_dofs_[static_cast<std::size_t>(k)];
                        trial(dof) = u(dof) + du(k);
                    }
                    next = assemble(mesh_, materials_, states, trial, pattern_, options_.integration);
                    norm = free_norm(next);
                } else {
                    norm = next_norm;
                }
                u = trial;
                asmb = std::move(next);
                break;
            }
            alpha *= 0.5;
        }
    }
}

}  // namespace fibrevt
