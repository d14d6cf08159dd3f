#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "proxyopt/benchmarks.hpp"

namespace proxyopt {

enum class SamplingScheme { Dense, Sparse, Gaussian };

std::string to_string(SamplingScheme s);
SamplingScheme parse_scheme(std::string_view name);

inline constexpr double kDefaultSigmaFrac = 0.1;
inline constexpr double kSparseFraction = 0.25;

/// Labeled training data for a proxy. Rows of `inputs` are points in
/// function-domain units; `targets` holds the exact function values.
struct SampleSet {
    Eigen::MatrixXd inputs;   // n x d
    Eigen::VectorXd targets;  // n
    SamplingScheme scheme = SamplingScheme::Dense;
    BenchmarkSpec spec;
    std::uint64_t seed = 0;

    Eigen::Index size() const { return inputs.rows(); }
    Eigen::Index dim() const { return inputs.cols(); }
};

/// Largest k with k^dim <= n.
Eigen::Index grid_points_per_axis(Eigen::Index n, int dim);

/// Space-filling inputs without labels: a full grid for dim <= 2, otherwise
/// the first n points of a Sobol sequence (origin skipped) scaled to the box.
Eigen::MatrixXd space_filling_points(const BenchmarkSpec& spec, Eigen::Index n);

SampleSet sample_dense(const BenchmarkSpec& spec, Eigen::Index n);
SampleSet sample_sparse(const BenchmarkSpec& spec, Eigen::Index n_dense);
SampleSet sample_gaussian(const BenchmarkSpec& spec, Eigen::Index n, double sigma_frac, std::uint64_t seed);

/// Uniform i.i.d. points in the box; used for held-out diagnostics.
Eigen::MatrixXd sample_uniform(const BenchmarkSpec& spec, Eigen::Index n, std::uint64_t seed);

Eigen::VectorXd label_samples(const BenchmarkSpec& spec, const Eigen::MatrixXd& inputs);

/// Header `x0,...,x{d-1},f`, one row per sample.
void write_samples_csv(std::ostream& out, const SampleSet& samples);
void write_samples_csv(const std::string& path, const SampleSet& samples);

struct SampleTable {
    Eigen::MatrixXd inputs;
    Eigen::VectorXd targets;
};

/// Parses the format written by write_samples_csv. Errors name the 1-based line.
SampleTable read_samples_csv(std::istream& in);
SampleTable read_samples_csv(const std::string& path);

}  // namespace proxyopt
