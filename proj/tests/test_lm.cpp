// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"

#include <cmath>
#include <random>

#include "rfloc/lm.hpp"
#include "rfloc/localizer.hpp"

using namespace rfloc;
using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::VectorXd;

namespace {

// Rosenbrock-style residuals r = [10 (y - x^2), 1 - x].
VectorXd rosenbrock_residual(const VectorXd& p) {
    VectorXd r(2);
    r(0) = 10.0 * (p(1) - p(0) * p(0));
    r(1) = 1.0 - p(0);
    return r;
}

MatrixXd rosenbrock_jacobian(const VectorXd& p) {
    MatrixXd j(2, 2);
    j(0, 0) = -20.0 * p(0);
    j(0, 1) = 10.0;
    j(1, 0) = -1.0;
    j(1, 1) = 0.0;
    return j;
}

// Independent oracle: plain gradient descent on ||r||^2, no shared code
// with the solver under test.
Vector2d gradient_descent_oracle(Vector2d p, double step, long iterations) {
    for (long i = 0; i < iterations; ++i) {
        const double x = p.x();
        const double y = p.y();
        // d/dx ||r||^2 = 2*10(y-x^2)*(-20x)... expanded by hand:
        const double r0 = 10.0 * (y - x * x);
        const double r1 = 1.0 - x;
        const double gx = 2.0 * (r0 * (-20.0 * x) + r1 * (-1.0));
        const double gy = 2.0 * (r0 * 10.0);
        p.x() -= step * gx;
        p.y() -= step * gy;
    }
    return p;
}

MatrixXd central_difference_jacobian(const ResidualFn& f, const VectorXd& p, double h) {
    const VectorXd r0 = f(p);
    MatrixXd j(r0.size(), p.size());
    for (Eigen::Index c = 0; c < p.size(); ++c) {
        VectorXd hi = p;
        VectorXd lo = p;
        hi(c) += h;
        lo(c) -= h;
        j.col(c) = (f(hi) - f(lo)) / (2.0 * h);
    }
    return j;
}

}  // namespace

TEST_CASE("linear residual converges to the exact solution") {
    const ResidualFn residual = [](const VectorXd& p) {
        VectorXd r(2);
        r(0) = p(0) - 3.0;
        r(1) = p(1) - 4.0;
        return r;
    };
    const JacobianFn jacobian = [](const VectorXd&) {
        return MatrixXd::Identity(2, 2);
    };
    const LmResult result = minimize(residual, jacobian, VectorXd::Zero(2));
    CHECK(result.converged);
    CHECK(result.params(0) == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(result.params(1) == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(result.final_objective < 1e-18);
}

TEST_CASE("rosenbrock valley: matches the gradient-descent oracle") {
    // Oracle first: a long plain-gradient run lands at the optimum (1, 1).
    const Vector2d oracle = gradient_descent_oracle({-1.2, 1.0}, 1e-3, 2'000'000);
    REQUIRE((oracle - Vector2d(1.0, 1.0)).norm() < 1e-3);

    Vector2d start(-1.2, 1.0);
    const LmResult result =
        minimize(rosenbrock_residual, rosenbrock_jacobian, start);
    CHECK(result.converged);
    CHECK((Vector2d(result.params) - Vector2d(1.0, 1.0)).norm() < 1e-6);
}

TEST_CASE("noise-free trilateration: hand-checked distances sqrt(2), sqrt(10), sqrt(5)") {
    const std::vector<Vec2> anchors = {{0.0, 0.0}, {4.0, 0.0}, {0.0, 3.0}};
    const std::vector<double> distances = {std::sqrt(2.0), std::sqrt(10.0), std::sqrt(5.0)};
    const Vec2 centroid = (anchors[0] + anchors[1] + anchors[2]) / 3.0;

    const LmResult result = minimize(trilateration_residual(anchors, distances),
                                     trilateration_jacobian(anchors),
                                     Vector2d(centroid));
    CHECK(result.converged);
    CHECK((Vector2d(result.params) - Vector2d(1.0, 1.0)).norm() < 1e-6);
    CHECK(result.final_objective < 1e-10);
}

TEST_CASE("descent property: accepted objective never increases") {
    double previous = std::numeric_limits<double>::infinity();
    bool monotone = true;
    const auto observer = [&](const LmState& state) {
        if (state.objective > previous + 1e-15) {
            monotone = false;
        }
        previous = state.objective;
        CHECK(state.damping > 0.0);
        CHECK(state.objective >= 0.0);
    };
    minimize(rosenbrock_residual, rosenbrock_jacobian, Vector2d(-1.2, 1.0), {}, observer);
    CHECK(monotone);
}

TEST_CASE("analytic trilateration jacobian matches central differences") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> coord(0.0, 10.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Vec2> anchors;
        for (int i = 0; i < 4; ++i) {
            anchors.push_back({coord(rng), coord(rng)});
        }
        std::vector<double> distances = {1.0, 2.0, 3.0, 4.0};
        const ResidualFn residual = trilateration_residual(anchors, distances);
        const JacobianFn jacobian = trilateration_jacobian(anchors);

        Vector2d p(coord(rng), coord(rng));
        bool near_anchor = false;
        for (const Vec2& a : anchors) {
            if ((Vec2(p) - a).norm() < 1e-3) near_anchor = true;
        }
        if (near_anchor) continue;

        const MatrixXd analytic = jacobian(p);
        const MatrixXd numeric = central_difference_jacobian(residual, p, 1e-6);
        for (Eigen::Index r = 0; r < analytic.rows(); ++r) {
            for (Eigen::Index c = 0; c < analytic.cols(); ++c) {
                const double denom = std::max(std::abs(numeric(r, c)), 1e-8);
                CHECK(std::abs(analytic(r, c) - numeric(r, c)) / denom < 1e-5);
            }
        }
    }
}

TEST_CASE("damping regimes: gradient direction at huge lambda, gauss-newton at zero") {
    const std::vector<Vec2> anchors = {{0.0, 0.0}, {4.0, 0.0}, {4.0, 4.0}, {0.0, 4.0}};
    const std::vector<double> distances = {2.0, 2.5, 3.0, 2.2};
    const ResidualFn residual = trilateration_residual(anchors, distances);
    const JacobianFn jacobian = trilateration_jacobian(anchors);

    const Vector2d p(2.0, 2.0);
    const VectorXd r = residual(p);
    const MatrixXd j = jacobian(p);
    const VectorXd gradient = j.transpose() * r;

    SUBCASE("large lambda behaves like gradient descent") {
        const auto step = lm_step(j, r, 1e8);
        REQUIRE(step.has_value());
        const double cosine = -step->dot(gradient) / (step->norm() * gradient.norm());
        CHECK(cosine > 0.99);
    }

    SUBCASE("zero lambda equals the gauss-newton step") {
        const auto step = lm_step(j, r, 0.0);
        REQUIRE(step.has_value());
        // Independent route: explicit 2x2 normal-equations solve by Cramer.
        const MatrixXd n = j.transpose() * j;
        const VectorXd b = -gradient;
        const double det = n(0, 0) * n(1, 1) - n(0, 1) * n(1, 0);
        REQUIRE(std::abs(det) > 1e-12);
        const double gx = (b(0) * n(1, 1) - n(0, 1) * b(1)) / det;
        const double gy = (n(0, 0) * b(1) - b(0) * n(1, 0)) / det;
        CHECK(std::abs((*step)(0) - gx) < 1e-10);
        CHECK(std::abs((*step)(1) - gy) < 1e-10);
    }
}

TEST_CASE("noise-free random trilateration instances reach tiny objectives") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> coord(0.0, 10.0);
    int solved = 0;
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Vec2> anchors;
        for (int i = 0; i < 4; ++i) {
            anchors.push_back({coord(rng), coord(rng)});
        }
        // General position: demand a spread-out triangle among the first three.
        const double area = std::abs(cross2(anchors[1] - anchors[0], anchors[2] - anchors[0])) / 2.0;
        if (area < 4.0) continue;

        const Vec2 truth{coord(rng), coord(rng)};
        std::vector<double> distances;
        for (const Vec2& a : anchors) {
            distances.push_back((truth - a).norm());
        }
        Vec2 centroid = Vec2::Zero();
        for (const Vec2& a : anchors) centroid += a;
        centroid /= static_cast<double>(anchors.size());

        const LmResult result = minimize(trilateration_residual(anchors, distances),
                                         trilateration_jacobian(anchors),
                                         Vector2d(centroid));
        CHECK(result.final_objective < 1e-10);
        ++solved;
    }
    CHECK(solved > 20);
}

TEST_CASE("singular geometry degrades to a non-converged result") {
    // Residuals independent of the parameters: zero Jacobian everywhere.
    const ResidualFn residual = [](const VectorXd&) {
        VectorXd r(3);
        r << 1.0, 2.0, 3.0;
        return r;
    };
    const JacobianFn jacobian = [](const VectorXd&) { return MatrixXd::Zero(3, 2); };
    const LmResult result = minimize(residual, jacobian, VectorXd::Zero(2));
    CHECK_FALSE(result.converged);
    CHECK(result.termination == LmTermination::SingularNormalEquations);
}

TEST_CASE("max iterations is reported and never counts as convergence") {
    LmConfig config;
    config.max_iterations = 2;
    const LmResult result =
        minimize(rosenbrock_residual, rosenbrock_jacobian, Vector2d(-1.2, 1.0), config);
    CHECK_FALSE(result.converged);
    CHECK(result.termination == LmTermination::MaxIterations);
    CHECK(result.iterations == 2);
}

TEST_CASE("config and dimension validation") {
    LmConfig bad;
    bad.damping_increase = 1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = {};
    bad.step_tolerance = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = {};
    bad.max_iterations = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    // Fewer residuals than parameters.
    const ResidualFn short_residual = [](const VectorXd&) {
        return VectorXd::Ones(1);
    };
    const JacobianFn jacobian = [](const VectorXd&) { return MatrixXd::Zero(1, 2); };
    CHECK_THROWS_AS(minimize(short_residual, jacobian, VectorXd::Zero(2)),
                    std::invalid_argument);

    // Jacobian shape inconsistent with the residual vector.
    const ResidualFn residual = [](const VectorXd& p) {
        VectorXd r(3);
        r << p(0), p(1), p(0) + p(1);
        return r;
    };
    const JacobianFn bad_jacobian = [](const VectorXd&) { return MatrixXd::Zero(2, 2); };
    CHECK_THROWS_AS(minimize(residual, bad_jacobian, VectorXd::Zero(2)),
                    std::invalid_argument);
}

TEST_CASE("objective at the result never exceeds the initial objective") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> coord(-5.0, 5.0);
    for (int trial = 0; trial < 20; ++trial) {
        const Vector2d start(coord(rng), coord(rng));
        const double initial = rosenbrock_residual(start).squaredNorm();
        const LmResult result = minimize(rosenbrock_residual, rosenbrock_jacobian, start);
        CHECK(result.final_objective <= initial + 1e-12);
    }
}
