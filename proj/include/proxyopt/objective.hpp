#pragma once

#include <concepts>
#include <memory>

#include <Eigen/Dense>

#include "proxyopt/benchmarks.hpp"
#include "proxyopt/mlp.hpp"

namespace proxyopt {

/// Anything the optimizers can minimize: a box and a scalar function on it.
template <typename T>
concept ObjectiveLike = requires(const T& f, const Eigen::VectorXd& x) {
    { f(x) } -> std::convertible_to<double>;
    { f.lower() } -> std::convertible_to<const Eigen::VectorXd&>;
    { f.upper() } -> std::convertible_to<const Eigen::VectorXd&>;
};

/**
 * The landscape an optimizer sees: either the exact benchmark or a trained
 * proxy of it. Both share the benchmark's box, and evaluation outside the
 * box is an error, so callers clamp first.
 */
class Objective {
public:
    enum class Kind { TrueFunction, Proxy };

    static Objective true_function(BenchmarkSpec spec);
    static Objective proxy(std::shared_ptr<const MlpModel> model, BenchmarkSpec spec);

    Kind kind() const { return kind_; }
    const BenchmarkSpec& spec() const { return spec_; }
    const Eigen::VectorXd& lower() const { return spec_.lower; }
    const Eigen::VectorXd& upper() const { return spec_.upper; }
    int dim() const { return spec_.dim; }
    const MlpModel* model() const { return model_.get(); }

    double operator()(const Eigen::Ref<const Eigen::VectorXd>& x) const;

private:
    Objective(Kind kind, BenchmarkSpec spec, std::shared_ptr<const MlpModel> model)
        : kind_(kind), spec_(std::move(spec)), model_(std::move(model)) {}

    Kind kind_;
    BenchmarkSpec spec_;
    std::shared_ptr<const MlpModel> model_;
};

inline double evaluate(const Objective& objective, const Eigen::Ref<const Eigen::VectorXd>& x) { return objective(x); }

}  // namespace proxyopt
