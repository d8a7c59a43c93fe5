#pragma once

#include <functional>

#include <Eigen/Dense>

namespace exocause {

/// Objective callable: returns the value at x and, when grad is non-null,
/// fills the gradient. Must return -inf (never throw) on infeasible points so
/// the line search can back off.
using Objective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd* grad)>;

struct OptimResult {
    Eigen::VectorXd x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Deterministic L-BFGS ascent with Armijo backtracking. Stops when the
/// relative objective change falls below tol or after max_iters iterations.
/// Every accepted step is non-decreasing in the objective.
OptimResult maximize_lbfgs(const Objective& f, const Eigen::VectorXd& x0, int max_iters,
                           double tol, int memory = 8);

}  // namespace exocause
