#include "proxyopt/benchmarks.hpp"

#include <algorithm>
#include <cctype>

namespace proxyopt {

std::string to_string(Benchmark b) {
    switch (b) {
        case Benchmark::Rosenbrock: return "rosenbrock";
        case Benchmark::Rastrigin: return "rastrigin";
        case Benchmark::Ackley: return "ackley";
    }
    return "unknown";
}

Benchmark parse_benchmark(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "rosenbrock") return Benchmark::Rosenbrock;
    if (lower == "rastrigin") return Benchmark::Rastrigin;
    if (lower == "ackley") return Benchmark::Ackley;
    throw Error(ErrorCode::UnknownBenchmark, "unknown benchmark '" + std::string(name) + "'");
}

double default_half_width(Benchmark b) {
    switch (b) {
        case Benchmark::Rosenbrock: return 2.048;
        case Benchmark::Rastrigin: return 5.12;
        case Benchmark::Ackley: return 32.768;
    }
    throw Error(ErrorCode::UnknownBenchmark, "unknown benchmark");
}

BenchmarkSpec make_spec(Benchmark name, int dim) { return make_spec(name, dim, default_half_width(name)); }

BenchmarkSpec make_spec(Benchmark name, int dim, double half_width) {
    const int min_dim = name == Benchmark::Rosenbrock ? 2 : 1;
    if (dim < min_dim) {
        throw Error(ErrorCode::InvalidDimension,
                    to_string(name) + " requires dim >= " + std::to_string(min_dim) + ", got " + std::to_string(dim));
    }
    if (!(half_width > 0.0) || !std::isfinite(half_width)) {
        throw Error(ErrorCode::InvalidParameter, "domain half-width must be positive and finite");
    }

    BenchmarkSpec spec;
    spec.name = name;
    spec.dim = dim;
    spec.lower = Eigen::VectorXd::Constant(dim, -half_width);
    spec.upper = Eigen::VectorXd::Constant(dim, half_width);
    spec.global_min_point =
        name == Benchmark::Rosenbrock ? Eigen::VectorXd::Ones(dim) : Eigen::VectorXd::Zero(dim);
    if (!spec.contains(spec.global_min_point)) {
        throw Error(ErrorCode::InvalidParameter, "domain does not contain the global minimizer");
    }
    return spec;
}

}  // namespace proxyopt
