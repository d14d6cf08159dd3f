#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace proxyopt {

/// Outcome of one optimizer run. `trajectory` holds the best-so-far value
/// after each iteration (the first entry is the initial population), so it
/// is non-increasing and ends at `best_value`.
struct OptResult {
    Eigen::VectorXd best_point;
    double best_value = 0.0;
    std::vector<double> trajectory;
    std::size_t evaluations = 0;
    std::uint64_t seed = 0;
};

/// Projects `x` onto the box in place; returns a mask of the clamped axes.
template <typename Derived>
Eigen::Array<bool, Eigen::Dynamic, 1> clamp_to_box(Eigen::MatrixBase<Derived>& x, const Eigen::VectorXd& lower,
                                                   const Eigen::VectorXd& upper) {
    Eigen::Array<bool, Eigen::Dynamic, 1> clamped(x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        clamped(j) = x(j) < lower(j) || x(j) > upper(j);
        if (x(j) < lower(j)) x(j) = lower(j);
        if (x(j) > upper(j)) x(j) = upper(j);
    }
    return clamped;
}

}  // namespace proxyopt
