// SPDX-License-Identifier: Apache-2.0

#include "rfloc/lm.hpp"

#include <cmath>
#include <stdexcept>

namespace rfloc {

namespace {
// Damping ceiling: a singular augmented system at or beyond this value
// terminates the solve instead of escalating forever.
constexpr double kMaxDamping = 1e12;
}  // namespace

void LmConfig::validate() const {
    if (!(initial_damping > 0.0) || !std::isfinite(initial_damping)) {
        throw std::invalid_argument("initial_damping must be > 0");
    }
    if (!(damping_increase > 1.0) || !(damping_decrease > 1.0)) {
        throw std::invalid_argument("damping factors must be > 1");
    }
    if (!(step_tolerance > 0.0) || !(residual_tolerance > 0.0)) {
        throw std::invalid_argument("tolerances must be > 0");
    }
    if (max_iterations < 1) {
        throw std::invalid_argument("max_iterations must be >= 1");
    }
}

const char* to_string(LmTermination t) {
    switch (t) {
        case LmTermination::StepBelowTolerance: return "step-below-tolerance";
        case LmTermination::ObjectiveStalled: return "objective-stalled";
        case LmTermination::MaxIterations: return "max-iterations";
        case LmTermination::SingularNormalEquations: return "singular-normal-equations";
    }
    return "unknown";
}

std::optional<Eigen::VectorXd> lm_step(const Eigen::MatrixXd& jacobian,
                                       const Eigen::VectorXd& residual,
                                       double damping) {
    const Eigen::MatrixXd normal = jacobian.transpose() * jacobian;
    Eigen::MatrixXd augmented = normal;
    augmented.diagonal() += damping * normal.diagonal();

    Eigen::FullPivLU<Eigen::MatrixXd> lu(augmented);
    if (!lu.isInvertible()) {
        return std::nullopt;
    }
    Eigen::VectorXd delta = lu.solve(-jacobian.transpose() * residual);
    if (!delta.allFinite()) {
        return std::nullopt;
    }
    return delta;
}

LmResult minimize(const ResidualFn& residual_fn, const JacobianFn& jacobian_fn,
                  const Eigen::VectorXd& initial, const LmConfig& config,
                  const std::function<void(const LmState&)>& observer) {
    config.validate();

    Eigen::VectorXd params = initial;
    Eigen::VectorXd residual = residual_fn(params);
    if (residual.size() < params.size()) {
        throw std::invalid_argument("residual vector shorter than parameter vector");
    }

    double objective = residual.squaredNorm();
    double damping = config.initial_damping;

    LmResult result;
    result.params = params;
    result.final_objective = objective;
    result.termination = LmTermination::MaxIterations;

    Eigen::MatrixXd jacobian;
    bool jacobian_stale = true;

    for (int iteration = 1; iteration <= config.max_iterations; ++iteration) {
        result.iterations = iteration;

        if (jacobian_stale) {
            jacobian = jacobian_fn(params);
            if (jacobian.rows() != residual.size() || jacobian.cols() != params.size()) {
                throw std::invalid_argument("jacobian dimensions inconsistent with residual/parameters");
            }
            jacobian_stale = false;
        }

        const std::optional<Eigen::VectorXd> delta = lm_step(jacobian, residual, damping);
        if (!delta) {
            if (damping >= kMaxDamping) {
                result.termination = LmTermination::SingularNormalEquations;
                break;
            }
            damping *= config.damping_increase;
            continue;
        }

        const Eigen::VectorXd trial = params + *delta;
        const Eigen::VectorXd trial_residual = residual_fn(trial);
        const double trial_objective = trial_residual.squaredNorm();

        bool accepted = false;
        double improvement = 0.0;
        if (std::isfinite(trial_objective) && trial_objective <= objective) {
            improvement = objective - trial_objective;
            params = trial;
            residual = trial_residual;
            objective = trial_objective;
            damping /= config.damping_decrease;
            jacobian_stale = true;
            accepted = true;
        } else {
            damping *= config.damping_increase;
        }

        if (observer) {
            observer(LmState{params, damping, iteration, objective});
        }

        // Fig.-1 style exit: the calculated step fell below the limit.
        if (delta->norm() < config.step_tolerance) {
            result.converged = true;
            result.termination = LmTermination::StepBelowTolerance;
            break;
        }
        if (accepted && improvement < config.residual_tolerance) {
            result.converged = true;
            result.termination = LmTermination::ObjectiveStalled;
            break;
        }
    }

    result.params = params;
    result.final_objective = objective;
    return result;
}

}  // namespace rfloc
