#pragma once

#include <cstdint>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "proxyopt/error.hpp"
#include "proxyopt/objective.hpp"
#include "proxyopt/opt_result.hpp"

namespace proxyopt {

struct PsoConfig {
    int swarm_size = 40;
    /// Number of swarm evaluation rounds, counting the initial one.
    int iterations = 200;
    double inertia = 0.729;
    double cognitive = 1.49445;
    double social = 1.49445;
    /// Draw r1, r2 per coordinate instead of once per particle.
    bool per_dimension_random = false;
    std::uint64_t seed = 0;

    void validate() const {
        if (swarm_size < 2) throw Error(ErrorCode::InvalidParameter, "PSO swarm_size must be >= 2");
        if (iterations < 1) throw Error(ErrorCode::InvalidParameter, "PSO iterations must be >= 1");
        if (!(inertia >= 0.0) || !(cognitive >= 0.0) || !(social >= 0.0)) {
            throw Error(ErrorCode::InvalidParameter, "PSO coefficients must be non-negative");
        }
    }
};

/// Swarm state; particle i is row i of every matrix.
struct PsoState {
    Eigen::MatrixXd positions;
    Eigen::MatrixXd velocities;
    Eigen::MatrixXd pbest_positions;
    Eigen::VectorXd pbest_values;
    Eigen::VectorXd gbest_position;
    double gbest_value = 0.0;
    int iteration = 0;
    std::size_t evaluations = 0;
};

/// V' = w V + c1 r1 (pbest - X) + c2 r2 (gbest - X). `r1` and `r2` are either
/// scalars or per-coordinate arrays.
template <typename V, typename X, typename P, typename G, typename R>
Eigen::VectorXd pso_velocity(const Eigen::MatrixBase<V>& velocity, const Eigen::MatrixBase<X>& position,
                             const Eigen::MatrixBase<P>& pbest, const Eigen::MatrixBase<G>& gbest, double inertia,
                             double cognitive, double social, const R& r1, const R& r2) {
    return (inertia * velocity.array() + cognitive * r1 * (pbest - position).array() +
            social * r2 * (gbest - position).array())
        .matrix();
}

template <ObjectiveLike Obj>
PsoState pso_init(const PsoConfig& config, const Obj& objective, std::mt19937_64& rng) {
    config.validate();
    const Eigen::VectorXd& lower = objective.lower();
    const Eigen::VectorXd& upper = objective.upper();
    const Eigen::Index d = lower.size();
    const Eigen::VectorXd range = upper - lower;
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    PsoState s;
    s.positions.resize(config.swarm_size, d);
    s.velocities.resize(config.swarm_size, d);
    for (int i = 0; i < config.swarm_size; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) s.positions(i, j) = lower(j) + unit(rng) * range(j);
    }
    for (int i = 0; i < config.swarm_size; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) s.velocities(i, j) = 0.1 * range(j) * (2.0 * unit(rng) - 1.0);
    }
    s.pbest_positions = s.positions;
    s.pbest_values.resize(config.swarm_size);
    for (int i = 0; i < config.swarm_size; ++i) {
        s.pbest_values(i) = objective(Eigen::VectorXd(s.positions.row(i).transpose()));
    }
    s.evaluations = static_cast<std::size_t>(config.swarm_size);
    Eigen::Index best;
    s.gbest_value = s.pbest_values.minCoeff(&best);
    s.gbest_position = s.pbest_positions.row(best).transpose();
    s.iteration = 1;
    return s;
}

/// One synchronous swarm update: every particle moves against the gbest of
/// the previous iteration, then pbest and gbest are refreshed.
template <ObjectiveLike Obj>
void pso_step(PsoState& s, const PsoConfig& config, const Obj& objective, std::mt19937_64& rng) {
    const Eigen::VectorXd& lower = objective.lower();
    const Eigen::VectorXd& upper = objective.upper();
    const Eigen::Index d = lower.size();
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    for (Eigen::Index i = 0; i < s.positions.rows(); ++i) {
        Eigen::VectorXd v;
        const auto x = s.positions.row(i).transpose();
        const auto vel = s.velocities.row(i).transpose();
        const auto pbest = s.pbest_positions.row(i).transpose();
        if (config.per_dimension_random) {
            Eigen::ArrayXd r1(d), r2(d);
            for (Eigen::Index j = 0; j < d; ++j) r1(j) = unit(rng);
            for (Eigen::Index j = 0; j < d; ++j) r2(j) = unit(rng);
            v = pso_velocity(vel, x, pbest, s.gbest_position, config.inertia, config.cognitive, config.social, r1, r2);
        } else {
            const double r1 = unit(rng);
            const double r2 = unit(rng);
            v = pso_velocity(vel, x, pbest, s.gbest_position, config.inertia, config.cognitive, config.social, r1, r2);
        }
        Eigen::VectorXd next = x + v;
        const auto clamped = clamp_to_box(next, lower, upper);
        for (Eigen::Index j = 0; j < d; ++j) {
            if (clamped(j)) v(j) = 0.0;
        }
        s.positions.row(i) = next.transpose();
        s.velocities.row(i) = v.transpose();

        const double value = objective(next);
        ++s.evaluations;
        if (value < s.pbest_values(i)) {
            s.pbest_values(i) = value;
            s.pbest_positions.row(i) = next.transpose();
        }
    }
    Eigen::Index best;
    const double best_value = s.pbest_values.minCoeff(&best);
    if (best_value < s.gbest_value) {
        s.gbest_value = best_value;
        s.gbest_position = s.pbest_positions.row(best).transpose();
    }
    ++s.iteration;
}

template <ObjectiveLike Obj>
OptResult pso_run(const PsoConfig& config, const Obj& objective) {
    config.validate();
    const Eigen::VectorXd& lower = objective.lower();
    const Eigen::VectorXd& upper = objective.upper();
    if (!lower.allFinite() || !upper.allFinite()) throw Error(ErrorCode::InvalidParameter, "PSO needs finite bounds");

    std::mt19937_64 rng(config.seed);
    PsoState state = pso_init(config, objective, rng);
    OptResult result;
    result.seed = config.seed;
    result.trajectory.reserve(static_cast<std::size_t>(config.iterations));
    result.trajectory.push_back(state.gbest_value);
    while (state.iteration < config.iterations) {
        pso_step(state, config, objective, rng);
        result.trajectory.push_back(state.gbest_value);
    }
    result.best_point = state.gbest_position;
    result.best_value = state.gbest_value;
    result.evaluations = state.evaluations;
    return result;
}

}  // namespace proxyopt
