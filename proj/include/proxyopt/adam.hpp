#pragma once

#include <cmath>
#include <cstdint>

#include "proxyopt/mlp.hpp"

namespace proxyopt {

template <typename Scalar>
struct AdamState {
    Gradients<Scalar> first_moment;
    Gradients<Scalar> second_moment;
    std::uint64_t step_count = 0;
    Scalar learning_rate = Scalar(1e-3);
    Scalar beta1 = Scalar(0.9);
    Scalar beta2 = Scalar(0.999);
    Scalar epsilon = Scalar(1e-8);
};

template <typename Scalar>
AdamState<Scalar> make_adam_state(const Mlp<Scalar>& model, Scalar learning_rate = Scalar(1e-3)) {
    AdamState<Scalar> state;
    state.first_moment = Gradients<Scalar>::zeros_like(model);
    state.second_moment = Gradients<Scalar>::zeros_like(model);
    state.learning_rate = learning_rate;
    return state;
}

namespace detail {

template <typename Param, typename Grad, typename Moment>
void adam_update(Param& p, const Grad& g, Moment& m, Moment& v, typename Param::Scalar beta1,
                 typename Param::Scalar beta2, typename Param::Scalar step_size, typename Param::Scalar bias2,
                 typename Param::Scalar epsilon) {
    using std::sqrt;
    m = beta1 * m + (1 - beta1) * g;
    v = beta2 * v + (1 - beta2) * g.cwiseProduct(g);
    // p -= lr * m_hat / (sqrt(v_hat) + eps) with m_hat = m / bias1, v_hat = v / bias2.
    p.array() -= step_size * m.array() / ((v.array() / bias2).sqrt() + epsilon);
}

}  // namespace detail

/// One bias-corrected Adam update in place. Rejects non-finite gradients.
template <typename Scalar>
void adam_step(Mlp<Scalar>& model, const Gradients<Scalar>& grads, AdamState<Scalar>& state) {
    using std::pow;
    const std::size_t layers = model.num_layers();
    if (grads.weights.size() != layers || grads.biases.size() != layers || state.first_moment.weights.size() != layers) {
        throw Error(ErrorCode::ShapeMismatch, "adam_step: layer count mismatch");
    }
    for (std::size_t l = 0; l < layers; ++l) {
        if (grads.weights[l].rows() != model.weights[l].rows() || grads.weights[l].cols() != model.weights[l].cols() ||
            grads.biases[l].size() != model.biases[l].size() ||
            state.first_moment.weights[l].size() != model.weights[l].size()) {
            throw Error(ErrorCode::ShapeMismatch, "adam_step: shape mismatch in layer " + std::to_string(l));
        }
    }
    if (!grads.all_finite()) throw Error(ErrorCode::TrainingDiverged, "adam_step: non-finite gradient");

    state.step_count += 1;
    const auto t = static_cast<Scalar>(state.step_count);
    const Scalar bias1 = Scalar(1) - pow(state.beta1, t);
    const Scalar bias2 = Scalar(1) - pow(state.beta2, t);
    const Scalar step_size = state.learning_rate / bias1;

    for (std::size_t l = 0; l < layers; ++l) {
        detail::adam_update(model.weights[l], grads.weights[l], state.first_moment.weights[l],
                            state.second_moment.weights[l], state.beta1, state.beta2, step_size, bias2, state.epsilon);
        detail::adam_update(model.biases[l], grads.biases[l], state.first_moment.biases[l], state.second_moment.biases[l],
                            state.beta1, state.beta2, step_size, bias2, state.epsilon);
    }
}

}  // namespace proxyopt
