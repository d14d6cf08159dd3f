#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "proxyopt/error.hpp"

namespace proxyopt {

enum class Benchmark { Rosenbrock, Rastrigin, Ackley };

std::string to_string(Benchmark b);
Benchmark parse_benchmark(std::string_view name);

/**
 * Rosenbrock valley, sum over consecutive coordinate pairs of
 * 100 (x_{i+1} - x_i^2)^2 + (x_i - 1)^2. Minimum 0 at the all-ones vector.
 */
template <typename Derived>
typename Derived::Scalar rosenbrock(const Eigen::MatrixBase<Derived>& x) {
    using Scalar = typename Derived::Scalar;
    if (x.size() < 2) {
        throw Error(ErrorCode::InvalidDimension, "rosenbrock requires at least 2 dimensions");
    }
    Scalar sum(0);
    for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
        const Scalar valley = x(i + 1) - x(i) * x(i);
        const Scalar offset = x(i) - Scalar(1);
        sum += Scalar(100) * valley * valley + offset * offset;
    }
    return sum;
}

/// Rastrigin: 10 d + sum(x_i^2 - 10 cos(2 pi x_i)). Minimum 0 at the origin.
template <typename Derived>
typename Derived::Scalar rastrigin(const Eigen::MatrixBase<Derived>& x) {
    using Scalar = typename Derived::Scalar;
    using std::cos;
    if (x.size() < 1) {
        throw Error(ErrorCode::InvalidDimension, "rastrigin requires at least 1 dimension");
    }
    const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
    Scalar sum = Scalar(10) * Scalar(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        sum += x(i) * x(i) - Scalar(10) * cos(two_pi * x(i));
    }
    return sum;
}

/// Ackley with the usual constants a = 20, b = 0.2, c = 2 pi.
template <typename Derived>
typename Derived::Scalar ackley(const Eigen::MatrixBase<Derived>& x) {
    using Scalar = typename Derived::Scalar;
    using std::cos;
    using std::exp;
    using std::sqrt;
    if (x.size() < 1) {
        throw Error(ErrorCode::InvalidDimension, "ackley requires at least 1 dimension");
    }
    const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
    const Scalar inv_d = Scalar(1) / Scalar(x.size());
    Scalar sq(0);
    Scalar cs(0);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        sq += x(i) * x(i);
        cs += cos(two_pi * x(i));
    }
    return Scalar(-20) * exp(Scalar(-0.2) * sqrt(sq * inv_d)) - exp(cs * inv_d) + Scalar(20) +
           std::numbers::e_v<Scalar>;
}

template <typename Derived>
typename Derived::Scalar evaluate(Benchmark b, const Eigen::MatrixBase<Derived>& x) {
    switch (b) {
        case Benchmark::Rosenbrock: return rosenbrock(x);
        case Benchmark::Rastrigin: return rastrigin(x);
        case Benchmark::Ackley: return ackley(x);
    }
    throw Error(ErrorCode::UnknownBenchmark, "unknown benchmark");
}

/// A test function at a fixed dimension together with its box domain and minimizer.
struct BenchmarkSpec {
    Benchmark name = Benchmark::Rosenbrock;
    int dim = 2;
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;
    Eigen::VectorXd global_min_point;
    double global_min_value = 0.0;

    double operator()(const Eigen::Ref<const Eigen::VectorXd>& x) const { return evaluate(name, x); }

    bool contains(const Eigen::Ref<const Eigen::VectorXd>& x) const {
        return x.size() == dim && (x.array() >= lower.array()).all() && (x.array() <= upper.array()).all();
    }

    Eigen::VectorXd range() const { return upper - lower; }
};

/// Symmetric per-axis half-width of the default domain.
double default_half_width(Benchmark b);

/// Default domain and minimizer: Rosenbrock on [-2.048, 2.048]^d, Rastrigin on
/// [-5.12, 5.12]^d, Ackley on [-32.768, 32.768]^d.
BenchmarkSpec make_spec(Benchmark name, int dim);

/// Same as make_spec but with a caller-supplied symmetric half-width.
BenchmarkSpec make_spec(Benchmark name, int dim, double half_width);

}  // namespace proxyopt
