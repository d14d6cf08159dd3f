#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "proxyopt/error.hpp"
#include "proxyopt/objective.hpp"
#include "proxyopt/opt_result.hpp"

namespace proxyopt {

/**
 * Real-coded GA: tournament selection, BLX-alpha crossover, per-gene Gaussian
 * mutation, elitism. Fitness is the negated objective, so "fitter" means a
 * lower objective value throughout.
 */
struct GaConfig {
    int population_size = 50;
    /// Number of generations evaluated, counting the initial population.
    int generations = 200;
    int tournament_size = 3;
    double crossover_prob = 0.9;
    /// Per-gene mutation probability; unset means 1/d.
    std::optional<double> mutation_prob;
    double mutation_sigma_frac = 0.1;
    double blend_alpha = 0.5;
    int elitism_count = 1;
    std::uint64_t seed = 0;

    double resolved_mutation_prob(Eigen::Index dim) const {
        return mutation_prob.value_or(1.0 / static_cast<double>(dim));
    }

    void validate() const {
        if (population_size < 2 || population_size % 2 != 0) {
            throw Error(ErrorCode::InvalidParameter, "GA population_size must be even and >= 2");
        }
        if (generations < 1) throw Error(ErrorCode::InvalidParameter, "GA generations must be >= 1");
        if (tournament_size < 1 || tournament_size > population_size) {
            throw Error(ErrorCode::InvalidParameter, "GA tournament_size must lie in [1, population_size]");
        }
        if (!(crossover_prob >= 0.0 && crossover_prob <= 1.0)) {
            throw Error(ErrorCode::InvalidParameter, "GA crossover_prob must lie in [0, 1]");
        }
        if (mutation_prob && !(*mutation_prob >= 0.0 && *mutation_prob <= 1.0)) {
            throw Error(ErrorCode::InvalidParameter, "GA mutation_prob must lie in [0, 1]");
        }
        if (!(mutation_sigma_frac > 0.0)) throw Error(ErrorCode::InvalidParameter, "GA mutation_sigma_frac must be > 0");
        if (!(blend_alpha >= 0.0)) throw Error(ErrorCode::InvalidParameter, "GA blend_alpha must be >= 0");
        if (elitism_count < 0 || elitism_count >= population_size) {
            throw Error(ErrorCode::InvalidParameter, "GA elitism_count must lie in [0, population_size)");
        }
    }
};

/// Individual i is row i of `population`.
struct GaState {
    Eigen::MatrixXd population;
    Eigen::VectorXd values;
    Eigen::VectorXd best_point;
    double best_value = 0.0;
    int generation = 0;
    std::size_t evaluations = 0;
};

namespace detail {

inline Eigen::Index tournament(const Eigen::VectorXd& values, int size, std::mt19937_64& rng) {
    std::uniform_int_distribution<Eigen::Index> pick(0, values.size() - 1);
    Eigen::Index winner = pick(rng);
    for (int k = 1; k < size; ++k) {
        const Eigen::Index challenger = pick(rng);
        if (values(challenger) < values(winner)) winner = challenger;
    }
    return winner;
}

inline void refresh_best(GaState& s) {
    Eigen::Index best;
    const double value = s.values.minCoeff(&best);
    if (s.generation == 0 || value < s.best_value) {
        s.best_value = value;
        s.best_point = s.population.row(best).transpose();
    }
}

}  // namespace detail

/// BLX-alpha: each child gene is uniform on [min - alpha I, max + alpha I]
/// with I = |a - b|. Children are not clamped here.
template <typename A, typename B>
std::pair<Eigen::VectorXd, Eigen::VectorXd> blend_crossover(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b,
                                                            double alpha, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Eigen::VectorXd c1(a.size()), c2(a.size());
    for (Eigen::Index j = 0; j < a.size(); ++j) {
        const double lo = std::min(a(j), b(j));
        const double hi = std::max(a(j), b(j));
        const double spread = alpha * (hi - lo);
        c1(j) = lo - spread + unit(rng) * (hi - lo + 2.0 * spread);
        c2(j) = lo - spread + unit(rng) * (hi - lo + 2.0 * spread);
    }
    return {c1, c2};
}

template <ObjectiveLike Obj>
GaState ga_init(const GaConfig& config, const Obj& objective, std::mt19937_64& rng) {
    config.validate();
    const Eigen::VectorXd& lower = objective.lower();
    const Eigen::VectorXd& upper = objective.upper();
    const Eigen::Index d = lower.size();
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    GaState s;
    s.population.resize(config.population_size, d);
    for (int i = 0; i < config.population_size; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) s.population(i, j) = lower(j) + unit(rng) * (upper(j) - lower(j));
    }
    s.values.resize(config.population_size);
    for (int i = 0; i < config.population_size; ++i) {
        s.values(i) = objective(Eigen::VectorXd(s.population.row(i).transpose()));
    }
    s.evaluations = static_cast<std::size_t>(config.population_size);
    detail::refresh_best(s);
    s.generation = 1;
    return s;
}

/// Produces the next generation. Elites keep their stored values and are not
/// re-evaluated.
template <ObjectiveLike Obj>
void ga_step(GaState& s, const GaConfig& config, const Obj& objective, std::mt19937_64& rng) {
    const Eigen::VectorXd& lower = objective.lower();
    const Eigen::VectorXd& upper = objective.upper();
    const Eigen::Index d = lower.size();
    const Eigen::Index pop = s.population.rows();
    const Eigen::VectorXd mutation_sigma = config.mutation_sigma_frac * (upper - lower);
    const double mutation_prob = config.resolved_mutation_prob(d);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);

    std::vector<Eigen::Index> order(static_cast<std::size_t>(pop));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return s.values(a) < s.values(b); });

    Eigen::MatrixXd next(pop, d);
    Eigen::VectorXd next_values(pop);
    Eigen::Index filled = 0;
    for (; filled < config.elitism_count; ++filled) {
        next.row(filled) = s.population.row(order[static_cast<std::size_t>(filled)]);
        next_values(filled) = s.values(order[static_cast<std::size_t>(filled)]);
    }

    auto mutate_and_store = [&](Eigen::VectorXd child) {
        for (Eigen::Index j = 0; j < d; ++j) {
            if (unit(rng) < mutation_prob) child(j) += mutation_sigma(j) * normal(rng);
        }
        clamp_to_box(child, lower, upper);
        next.row(filled) = child.transpose();
        next_values(filled) = objective(child);
        ++s.evaluations;
        ++filled;
    };

    while (filled < pop) {
        const auto a = s.population.row(detail::tournament(s.values, config.tournament_size, rng)).transpose();
        const auto b = s.population.row(detail::tournament(s.values, config.tournament_size, rng)).transpose();
        Eigen::VectorXd c1 = a;
        Eigen::VectorXd c2 = b;
        if (unit(rng) < config.crossover_prob) std::tie(c1, c2) = blend_crossover(a, b, config.blend_alpha, rng);
        mutate_and_store(std::move(c1));
        if (filled < pop) mutate_and_store(std::move(c2));
    }

    s.population = std::move(next);
    s.values = std::move(next_values);
    detail::refresh_best(s);
    ++s.generation;
}

template <ObjectiveLike Obj>
OptResult ga_run(const GaConfig& config, const Obj& objective) {
    config.validate();
    if (!objective.lower().allFinite() || !objective.upper().allFinite()) {
        throw Error(ErrorCode::InvalidParameter, "GA needs finite bounds");
    }
    std::mt19937_64 rng(config.seed);
    GaState state = ga_init(config, objective, rng);
    OptResult result;
    result.seed = config.seed;
    result.trajectory.reserve(static_cast<std::size_t>(config.generations));
    result.trajectory.push_back(state.best_value);
    while (state.generation < config.generations) {
        ga_step(state, config, objective, rng);
        result.trajectory.push_back(state.best_value);
    }
    result.best_point = state.best_point;
    result.best_value = state.best_value;
    result.evaluations = state.evaluations;
    return result;
}

}  // namespace proxyopt
