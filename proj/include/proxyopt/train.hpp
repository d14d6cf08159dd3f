#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "proxyopt/adam.hpp"
#include "proxyopt/mlp.hpp"
#include "proxyopt/sampling.hpp"

namespace proxyopt {

struct TrainConfig {
    int epochs = 100;
    int batch_size = 64;
    double learning_rate = 1e-3;
    std::uint64_t seed = 0;
    bool shuffle = true;
};

template <typename Scalar>
struct TrainResult {
    Mlp<Scalar> model;
    /// Loss of the untrained network over the full training set.
    double initial_loss = 0.0;
    /// Loss of the trained network over the full training set.
    double final_loss = 0.0;
    /// Sample-weighted mean mini-batch loss of each epoch.
    std::vector<double> loss_history;
};

/**
 * Fits `model` to (inputs, targets) with mini-batch Adam under MSE. The input
 * normalization is fixed from the box [lower, upper] and the target
 * normalization from the targets before the first step.
 */
template <typename Scalar>
TrainResult<Scalar> train(Mlp<Scalar> model, const typename Mlp<Scalar>::Matrix& inputs,
                          const typename Mlp<Scalar>::Vector& targets, const typename Mlp<Scalar>::Vector& lower,
                          const typename Mlp<Scalar>::Vector& upper, const TrainConfig& config) {
    using Matrix = typename Mlp<Scalar>::Matrix;
    using RowVector = typename Mlp<Scalar>::RowVector;

    if (config.epochs < 1) throw Error(ErrorCode::InvalidParameter, "epochs must be >= 1");
    if (config.batch_size < 1) throw Error(ErrorCode::InvalidParameter, "batch_size must be >= 1");
    if (!(config.learning_rate > 0.0)) throw Error(ErrorCode::InvalidParameter, "learning_rate must be positive");
    const Eigen::Index n = inputs.rows();
    if (n == 0) throw Error(ErrorCode::InvalidInput, "empty training set");
    if (targets.size() != n) throw Error(ErrorCode::ShapeMismatch, "inputs and targets differ in length");
    if (inputs.cols() != model.input_dim()) {
        throw Error(ErrorCode::ShapeMismatch, "training data has " + std::to_string(inputs.cols()) +
                                                  " columns, model expects " + std::to_string(model.input_dim()));
    }

    model.norm = fit_normalization<Scalar>(lower, upper, targets);
    const Matrix xn = model.norm.normalize_inputs(inputs.transpose());
    const RowVector yn = ((targets.array() - model.norm.target_mean) / model.norm.target_std).matrix().transpose();

    TrainResult<Scalar> result;
    {
        const RowVector pred = model.forward_normalized(xn);
        result.initial_loss = static_cast<double>((pred - yn).squaredNorm() / Scalar(n));
    }

    auto state = make_adam_state(model, Scalar(config.learning_rate));
    std::mt19937_64 rng(config.seed);
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});

    const Eigen::Index batch = std::min<Eigen::Index>(config.batch_size, n);
    Matrix xb(xn.rows(), batch);
    RowVector yb(batch);

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        if (config.shuffle) std::shuffle(order.begin(), order.end(), rng);
        double weighted = 0.0;
        for (Eigen::Index start = 0; start < n; start += batch) {
            const Eigen::Index len = std::min(batch, n - start);
            if (len != xb.cols()) {
                xb.resize(xn.rows(), len);
                yb.resize(len);
            }
            for (Eigen::Index k = 0; k < len; ++k) {
                const Eigen::Index src = order[static_cast<std::size_t>(start + k)];
                xb.col(k) = xn.col(src);
                yb(k) = yn(src);
            }
            const auto lg = normalized_loss_and_gradients(model, xb, yb);
            if (!std::isfinite(static_cast<double>(lg.loss)) || !lg.gradients.all_finite()) {
                throw Error(ErrorCode::TrainingDiverged, "training diverged in epoch " + std::to_string(epoch),
                            static_cast<std::size_t>(epoch));
            }
            adam_step(model, lg.gradients, state);
            weighted += static_cast<double>(lg.loss) * static_cast<double>(len);
        }
        result.loss_history.push_back(weighted / static_cast<double>(n));
    }
    {
        const RowVector pred = model.forward_normalized(xn);
        result.final_loss = static_cast<double>((pred - yn).squaredNorm() / Scalar(n));
    }
    result.model = std::move(model);
    return result;
}

inline TrainResult<double> train(MlpModel model, const SampleSet& samples, const TrainConfig& config) {
    return train<double>(std::move(model), samples.inputs, samples.targets, samples.spec.lower, samples.spec.upper,
                         config);
}

}  // namespace proxyopt
