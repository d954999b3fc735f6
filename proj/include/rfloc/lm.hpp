// SPDX-License-Identifier: Apache-2.0
//
// Damped least-squares (Levenberg-Marquardt) minimizer for small dense
// problems. Interpolates between gradient descent (large damping) and
// Gauss-Newton (small damping) through the Marquardt-scaled system
//
//     (J^T J + lambda * diag(J^T J)) * delta = -J^T r
//
// with an accept/reject loop on the damping parameter.

#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>

namespace rfloc {

using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using JacobianFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

struct LmConfig {
    double initial_damping = 1e-3;
    double damping_increase = 10.0;   // applied on rejected steps
    double damping_decrease = 10.0;   // divisor on accepted steps
    double step_tolerance = 1e-8;     // stop when ||delta|| drops below
    double residual_tolerance = 1e-10;  // stop when objective improvement drops below
    int max_iterations = 100;

    // Throws std::invalid_argument on out-of-range settings
    // (factors > 1, tolerances > 0, max_iterations >= 1).
    void validate() const;
};

enum class LmTermination {
    StepBelowTolerance,       // ||delta|| < step_tolerance
    ObjectiveStalled,         // accepted improvement < residual_tolerance
    MaxIterations,
    SingularNormalEquations,  // augmented system unsolvable at lambda >= 1e12
};

// Snapshot of the iteration, passed to the optional observer.
struct LmState {
    Eigen::VectorXd params;
    double damping = 0.0;
    int iteration = 0;
    double objective = 0.0;  // sum of squared residuals
};

struct LmResult {
    Eigen::VectorXd params;
    int iterations = 0;
    double final_objective = 0.0;
    bool converged = false;
    LmTermination termination = LmTermination::MaxIterations;
};

const char* to_string(LmTermination t);

// One damped step: solves (J^T J + lambda diag(J^T J)) delta = -J^T r.
// Returns nullopt when the augmented matrix is singular or the solve
// produces non-finite values. lambda = 0 yields the plain Gauss-Newton step.
std::optional<Eigen::VectorXd> lm_step(const Eigen::MatrixXd& jacobian,
                                       const Eigen::VectorXd& residual,
                                       double damping);

// Minimizes ||residual_fn(p)||^2 starting from `initial`. The residual
// vector must be at least as long as the parameter vector and the Jacobian
// must be residuals x parameters; violations throw std::invalid_argument.
// Singular geometry degrades to a non-converged result, never a crash.
// `observer`, when set, is invoked once per iteration with the accepted state.
LmResult minimize(const ResidualFn& residual_fn, const JacobianFn& jacobian_fn,
                  const Eigen::VectorXd& initial, const LmConfig& config = {},
                  const std::function<void(const LmState&)>& observer = nullptr);

}  // namespace rfloc
