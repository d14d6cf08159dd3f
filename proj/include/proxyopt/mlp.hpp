#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "proxyopt/error.hpp"

namespace proxyopt {

/// Affine maps between domain units and the units the network sees.
/// Inputs go to [-1, 1] per axis, targets are standardized.
template <typename Scalar>
struct Normalization {
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    Vector input_center;
    Vector input_halfrange;
    Scalar target_mean = Scalar(0);
    Scalar target_std = Scalar(1);

    static Normalization identity(Eigen::Index dim) {
        Normalization n;
        n.input_center = Vector::Zero(dim);
        n.input_halfrange = Vector::Ones(dim);
        return n;
    }

    /// Columns of `x` are points.
    template <typename Derived>
    auto normalize_inputs(const Eigen::MatrixBase<Derived>& x) const {
        return ((x.colwise() - input_center).array().colwise() / input_halfrange.array()).matrix();
    }

    Scalar normalize_target(Scalar y) const { return (y - target_mean) / target_std; }
    Scalar denormalize_target(Scalar y) const { return y * target_std + target_mean; }

    template <typename Other>
    Normalization<Other> cast() const {
        Normalization<Other> n;
        n.input_center = input_center.template cast<Other>();
        n.input_halfrange = input_halfrange.template cast<Other>();
        n.target_mean = Other(target_mean);
        n.target_std = Other(target_std);
        return n;
    }
};

/// Fits the input map to box bounds and the target map to the data.
template <typename Scalar>
Normalization<Scalar> fit_normalization(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& lower,
                                        const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& upper,
                                        const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& targets) {
    using std::sqrt;
    if (lower.size() != upper.size()) throw Error(ErrorCode::ShapeMismatch, "bounds have different sizes");
    if (!((upper - lower).array() > Scalar(0)).all()) {
        throw Error(ErrorCode::InvalidParameter, "normalization needs lower < upper on every axis");
    }
    if (targets.size() == 0) throw Error(ErrorCode::InvalidInput, "cannot fit normalization to an empty target set");

    Normalization<Scalar> n;
    n.input_center = (upper + lower) / Scalar(2);
    n.input_halfrange = (upper - lower) / Scalar(2);
    n.target_mean = targets.mean();
    const Scalar var = (targets.array() - n.target_mean).square().mean();
    const Scalar sd = sqrt(var);
    // A constant target set keeps unit scale.
    n.target_std = (sd > Scalar(0) && std::isfinite(static_cast<double>(sd))) ? sd : Scalar(1);
    return n;
}

/**
 * Fully connected regression network: ReLU on every hidden layer, identity on
 * the scalar output. `weights[l]` maps layer l to layer l+1 and has shape
 * layer_sizes[l+1] x layer_sizes[l].
 */
template <typename Scalar>
struct Mlp {
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

    std::vector<int> layer_sizes;
    std::vector<Matrix> weights;
    std::vector<Vector> biases;
    Normalization<Scalar> norm;

    int input_dim() const { return layer_sizes.front(); }
    std::size_t num_layers() const { return weights.size(); }

    std::size_t parameter_count() const {
        std::size_t count = 0;
        for (std::size_t l = 0; l < weights.size(); ++l) {
            count += static_cast<std::size_t>(weights[l].size() + biases[l].size());
        }
        return count;
    }

    /// Network output in normalized units; columns of `xn` are normalized points.
    template <typename Derived>
    RowVector forward_normalized(const Eigen::MatrixBase<Derived>& xn) const {
        Matrix act = xn;
        for (std::size_t l = 0; l < weights.size(); ++l) {
            Matrix z = weights[l] * act;
            z.colwise() += biases[l];
            if (l + 1 < weights.size()) {
                act = z.cwiseMax(Scalar(0));
            } else {
                act = std::move(z);
            }
        }
        return act.row(0);
    }

    /// Predictions in function units for every row of `x` (n x d).
    Vector predict(const Matrix& x) const {
        if (x.cols() != input_dim()) {
            throw Error(ErrorCode::ShapeMismatch, "predict: expected " + std::to_string(input_dim()) + " columns");
        }
        const RowVector yn = forward_normalized(norm.normalize_inputs(x.transpose()));
        return ((yn.array() * norm.target_std) + norm.target_mean).matrix().transpose();
    }

    template <typename Other>
    Mlp<Other> cast() const {
        Mlp<Other> m;
        m.layer_sizes = layer_sizes;
        for (const auto& w : weights) m.weights.push_back(w.template cast<Other>());
        for (const auto& b : biases) m.biases.push_back(b.template cast<Other>());
        m.norm = norm.template cast<Other>();
        return m;
    }
};

using MlpModel = Mlp<double>;

template <typename Scalar>
void validate_architecture(const std::vector<int>& layer_sizes) {
    if (layer_sizes.size() < 3) {
        throw Error(ErrorCode::InvalidArchitecture, "need an input layer, at least one hidden layer and an output layer");
    }
    for (const int width : layer_sizes) {
        if (width <= 0) throw Error(ErrorCode::InvalidArchitecture, "layer widths must be positive");
    }
    if (layer_sizes.back() != 1) throw Error(ErrorCode::InvalidArchitecture, "output layer must have width 1");
}

/// He-initialized network (weights ~ N(0, 2/fan_in), biases ~ U(-1/sqrt(fan_in),
/// 1/sqrt(fan_in))) with an identity normalization. Nonzero biases spread the
/// first-layer ReLU kinks across the domain instead of through the origin.
/// Deterministic in `seed` and independent of Scalar.
template <typename Scalar = double>
Mlp<Scalar> build_mlp(const std::vector<int>& layer_sizes, std::uint64_t seed) {
    validate_architecture<Scalar>(layer_sizes);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);

    Mlp<Scalar> model;
    model.layer_sizes = layer_sizes;
    for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
        const int fan_in = layer_sizes[l];
        const int fan_out = layer_sizes[l + 1];
        const double scale = std::sqrt(2.0 / fan_in);
        typename Mlp<Scalar>::Matrix w(fan_out, fan_in);
        for (int r = 0; r < fan_out; ++r) {
            for (int c = 0; c < fan_in; ++c) w(r, c) = Scalar(scale * normal(rng));
        }
        typename Mlp<Scalar>::Vector b(fan_out);
        const double bias_bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        for (int r = 0; r < fan_out; ++r) b(r) = Scalar(bias_bound * unit(rng));
        model.weights.push_back(std::move(w));
        model.biases.push_back(std::move(b));
    }
    model.norm = Normalization<Scalar>::identity(layer_sizes.front());
    return model;
}

/// Single-point prediction in function units.
template <typename Scalar, typename Derived>
Scalar forward(const Mlp<Scalar>& model, const Eigen::MatrixBase<Derived>& x) {
    if (x.size() != model.input_dim()) {
        throw Error(ErrorCode::ShapeMismatch, "forward: input has " + std::to_string(x.size()) + " entries, model expects " +
                                                  std::to_string(model.input_dim()));
    }
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (!std::isfinite(static_cast<double>(x(i)))) throw Error(ErrorCode::InvalidInput, "forward: non-finite input");
    }
    const typename Mlp<Scalar>::Vector col = x.template cast<Scalar>();
    const Scalar yn = model.forward_normalized(model.norm.normalize_inputs(col))(0);
    return model.norm.denormalize_target(yn);
}

/// Parameter-shaped container for gradients and optimizer moments.
template <typename Scalar>
struct Gradients {
    std::vector<typename Mlp<Scalar>::Matrix> weights;
    std::vector<typename Mlp<Scalar>::Vector> biases;

    static Gradients zeros_like(const Mlp<Scalar>& model) {
        Gradients g;
        for (std::size_t l = 0; l < model.num_layers(); ++l) {
            g.weights.push_back(Mlp<Scalar>::Matrix::Zero(model.weights[l].rows(), model.weights[l].cols()));
            g.biases.push_back(Mlp<Scalar>::Vector::Zero(model.biases[l].size()));
        }
        return g;
    }

    bool all_finite() const {
        for (const auto& w : weights) {
            if (!w.allFinite()) return false;
        }
        for (const auto& b : biases) {
            if (!b.allFinite()) return false;
        }
        return true;
    }
};

template <typename Scalar>
struct LossAndGradients {
    Scalar loss = Scalar(0);
    Gradients<Scalar> gradients;
};

/**
 * Mean squared error in normalized target units and its gradient with respect
 * to every weight and bias. `xn` holds normalized points as columns and `yn`
 * the matching normalized targets.
 */
template <typename Scalar>
LossAndGradients<Scalar> normalized_loss_and_gradients(const Mlp<Scalar>& model,
                                                       const Eigen::Ref<const typename Mlp<Scalar>::Matrix>& xn,
                                                       const Eigen::Ref<const typename Mlp<Scalar>::RowVector>& yn) {
    using Matrix = typename Mlp<Scalar>::Matrix;
    const std::size_t layers = model.num_layers();
    const Eigen::Index n = xn.cols();
    if (n == 0) throw Error(ErrorCode::ShapeMismatch, "empty batch");
    if (yn.size() != n) throw Error(ErrorCode::ShapeMismatch, "batch inputs and targets differ in length");
    if (xn.rows() != model.input_dim()) throw Error(ErrorCode::ShapeMismatch, "batch input width does not match model");

    // activations[l] is the input to layer l; activations[layers] is the output.
    std::vector<Matrix> activations(layers + 1);
    activations[0] = xn;
    for (std::size_t l = 0; l < layers; ++l) {
        Matrix z = model.weights[l] * activations[l];
        z.colwise() += model.biases[l];
        activations[l + 1] = (l + 1 < layers) ? Matrix(z.cwiseMax(Scalar(0))) : std::move(z);
    }

    const auto residual = (activations[layers].row(0) - yn).eval();
    LossAndGradients<Scalar> out;
    out.loss = residual.squaredNorm() / Scalar(n);
    out.gradients.weights.resize(layers);
    out.gradients.biases.resize(layers);

    Matrix delta = (Scalar(2) / Scalar(n)) * residual;
    for (std::size_t l = layers; l-- > 0;) {
        out.gradients.weights[l].noalias() = delta * activations[l].transpose();
        out.gradients.biases[l] = delta.rowwise().sum();
        if (l > 0) {
            Matrix back = model.weights[l].transpose() * delta;
            // ReLU derivative, taken as 0 at the kink.
            delta = (activations[l].array() > Scalar(0)).select(back, Scalar(0));
        }
    }
    return out;
}

/// Loss and gradients for a batch in function units (rows of `inputs` are points).
template <typename Scalar>
LossAndGradients<Scalar> loss_and_gradients(const Mlp<Scalar>& model, const typename Mlp<Scalar>::Matrix& inputs,
                                            const typename Mlp<Scalar>::Vector& targets) {
    if (inputs.rows() != targets.size()) {
        throw Error(ErrorCode::ShapeMismatch, "batch has " + std::to_string(inputs.rows()) + " inputs but " +
                                                  std::to_string(targets.size()) + " targets");
    }
    if (inputs.cols() != model.input_dim()) throw Error(ErrorCode::ShapeMismatch, "batch input width does not match model");
    const typename Mlp<Scalar>::Matrix xn = model.norm.normalize_inputs(inputs.transpose());
    const typename Mlp<Scalar>::RowVector yn =
        ((targets.array() - model.norm.target_mean) / model.norm.target_std).matrix().transpose();
    return normalized_loss_and_gradients(model, xn, yn);
}

/// Parameters in a fixed order: per layer, the weight matrix row-major, then the bias.
template <typename Scalar>
typename Mlp<Scalar>::Vector flatten_parameters(const std::vector<typename Mlp<Scalar>::Matrix>& weights,
                                               const std::vector<typename Mlp<Scalar>::Vector>& biases) {
    Eigen::Index total = 0;
    for (std::size_t l = 0; l < weights.size(); ++l) total += weights[l].size() + biases[l].size();
    typename Mlp<Scalar>::Vector flat(total);
    Eigen::Index k = 0;
    for (std::size_t l = 0; l < weights.size(); ++l) {
        for (Eigen::Index r = 0; r < weights[l].rows(); ++r) {
            for (Eigen::Index c = 0; c < weights[l].cols(); ++c) flat(k++) = weights[l](r, c);
        }
        for (Eigen::Index r = 0; r < biases[l].size(); ++r) flat(k++) = biases[l](r);
    }
    return flat;
}

template <typename Scalar>
typename Mlp<Scalar>::Vector flatten_parameters(const Mlp<Scalar>& model) {
    return flatten_parameters<Scalar>(model.weights, model.biases);
}

template <typename Scalar>
typename Mlp<Scalar>::Vector flatten_parameters(const Gradients<Scalar>& grads) {
    return flatten_parameters<Scalar>(grads.weights, grads.biases);
}

/// Reference to the k-th parameter in flatten_parameters order.
template <typename Scalar>
Scalar& parameter_at(Mlp<Scalar>& model, std::size_t k) {
    for (std::size_t l = 0; l < model.num_layers(); ++l) {
        const auto wsize = static_cast<std::size_t>(model.weights[l].size());
        if (k < wsize) {
            const auto cols = static_cast<std::size_t>(model.weights[l].cols());
            return model.weights[l](static_cast<Eigen::Index>(k / cols), static_cast<Eigen::Index>(k % cols));
        }
        k -= wsize;
        const auto bsize = static_cast<std::size_t>(model.biases[l].size());
        if (k < bsize) return model.biases[l](static_cast<Eigen::Index>(k));
        k -= bsize;
    }
    throw Error(ErrorCode::InvalidParameter, "parameter index out of range");
}

/// FNV-1a over the raw bytes of every parameter and the normalization.
inline std::uint64_t parameter_checksum(const MlpModel& model) {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](double v) {
        unsigned char bytes[sizeof(double)];
        std::memcpy(bytes, &v, sizeof(double));
        for (unsigned char b : bytes) {
            h ^= b;
            h *= 1099511628211ULL;
        }
    };
    for (int s : model.layer_sizes) mix(static_cast<double>(s));
    const auto flat = flatten_parameters(model);
    for (Eigen::Index i = 0; i < flat.size(); ++i) mix(flat(i));
    for (Eigen::Index i = 0; i < model.norm.input_center.size(); ++i) {
        mix(model.norm.input_center(i));
        mix(model.norm.input_halfrange(i));
    }
    mix(model.norm.target_mean);
    mix(model.norm.target_std);
    return h;
}

}  // namespace proxyopt
