#include "proxyopt/sampling.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <boost/random/sobol.hpp>

#include "proxyopt/csv.hpp"

namespace proxyopt {

std::string to_string(SamplingScheme s) {
    switch (s) {
        case SamplingScheme::Dense: return "dense";
        case SamplingScheme::Sparse: return "sparse";
        case SamplingScheme::Gaussian: return "gaussian";
    }
    return "unknown";
}

SamplingScheme parse_scheme(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "dense") return SamplingScheme::Dense;
    if (lower == "sparse") return SamplingScheme::Sparse;
    if (lower == "gaussian") return SamplingScheme::Gaussian;
    throw Error(ErrorCode::InvalidParameter, "unknown sampling scheme '" + std::string(name) + "'");
}

namespace {

bool pow_at_most(Eigen::Index base, int exp, Eigen::Index limit) {
    Eigen::Index acc = 1;
    for (int i = 0; i < exp; ++i) {
        if (acc > limit / std::max<Eigen::Index>(base, 1)) return base == 0;
        acc *= base;
    }
    return acc <= limit;
}

Eigen::MatrixXd grid_points(const BenchmarkSpec& spec, Eigen::Index per_axis) {
    const int d = spec.dim;
    Eigen::Index total = 1;
    for (int i = 0; i < d; ++i) total *= per_axis;

    Eigen::MatrixXd pts(total, d);
    for (Eigen::Index row = 0; row < total; ++row) {
        Eigen::Index rem = row;
        for (int axis = d - 1; axis >= 0; --axis) {
            const Eigen::Index k = rem % per_axis;
            rem /= per_axis;
            if (per_axis == 1) {
                pts(row, axis) = 0.5 * (spec.lower(axis) + spec.upper(axis));
            } else {
                const double t = static_cast<double>(k) / static_cast<double>(per_axis - 1);
                // Endpoints are exact, interior points are affine in k.
                pts(row, axis) = k + 1 == per_axis ? spec.upper(axis)
                                                   : spec.lower(axis) + t * (spec.upper(axis) - spec.lower(axis));
            }
        }
    }
    return pts;
}

Eigen::MatrixXd sobol_points(const BenchmarkSpec& spec, Eigen::Index n) {
    boost::random::sobol engine(static_cast<std::size_t>(spec.dim));
    Eigen::MatrixXd pts(n, spec.dim);
    for (Eigen::Index row = 0; row < n; ++row) {
        for (int axis = 0; axis < spec.dim; ++axis) {
            const double u = std::ldexp(static_cast<double>(engine()), -64);
            pts(row, axis) = std::clamp(spec.lower(axis) + u * (spec.upper(axis) - spec.lower(axis)),
                                        spec.lower(axis), spec.upper(axis));
        }
    }
    return pts;
}

SampleSet labeled(const BenchmarkSpec& spec, Eigen::MatrixXd inputs, SamplingScheme scheme, std::uint64_t seed) {
    SampleSet set;
    set.targets = label_samples(spec, inputs);
    set.inputs = std::move(inputs);
    set.scheme = scheme;
    set.spec = spec;
    set.seed = seed;
    return set;
}

}  // namespace

Eigen::Index grid_points_per_axis(Eigen::Index n, int dim) {
    if (n <= 0 || dim <= 0) return 0;
    auto k = static_cast<Eigen::Index>(std::floor(std::pow(static_cast<double>(n), 1.0 / dim)));
    while (k > 0 && !pow_at_most(k, dim, n)) --k;
    while (pow_at_most(k + 1, dim, n)) ++k;
    return k;
}

Eigen::MatrixXd space_filling_points(const BenchmarkSpec& spec, Eigen::Index n) {
    if (n < 1) throw Error(ErrorCode::InsufficientSamples, "need at least one sample");
    if (spec.dim <= 2) return grid_points(spec, grid_points_per_axis(n, spec.dim));
    return sobol_points(spec, n);
}

SampleSet sample_dense(const BenchmarkSpec& spec, Eigen::Index n) {
    if (spec.dim <= 2 && grid_points_per_axis(n, spec.dim) < 2) {
        throw Error(ErrorCode::InsufficientSamples, "dense grid in " + std::to_string(spec.dim) +
                                                        "D needs at least 2^d samples, got " + std::to_string(n));
    }
    if (n < 1) throw Error(ErrorCode::InsufficientSamples, "need at least one sample");
    return labeled(spec, space_filling_points(spec, n), SamplingScheme::Dense, 0);
}

SampleSet sample_sparse(const BenchmarkSpec& spec, Eigen::Index n_dense) {
    if (n_dense < 4) {
        throw Error(ErrorCode::InsufficientSamples, "sparse sampling needs n_dense >= 4, got " + std::to_string(n_dense));
    }
    const auto n = static_cast<Eigen::Index>(std::llround(kSparseFraction * static_cast<double>(n_dense)));
    return labeled(spec, space_filling_points(spec, n), SamplingScheme::Sparse, 0);
}

SampleSet sample_gaussian(const BenchmarkSpec& spec, Eigen::Index n, double sigma_frac, std::uint64_t seed) {
    if (!(sigma_frac > 0.0) || sigma_frac > 1.0) {
        throw Error(ErrorCode::InvalidParameter, "sigma_frac must lie in (0, 1]");
    }
    if (n < 1) throw Error(ErrorCode::InsufficientSamples, "need at least one sample");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const Eigen::VectorXd sigma = sigma_frac * spec.range();

    // Axes are independent, so per-coordinate rejection yields the same
    // truncated distribution as rejecting whole points.
    Eigen::MatrixXd pts(n, spec.dim);
    for (Eigen::Index row = 0; row < n; ++row) {
        for (int axis = 0; axis < spec.dim; ++axis) {
            double v;
            do {
                v = spec.global_min_point(axis) + sigma(axis) * normal(rng);
            } while (v < spec.lower(axis) || v > spec.upper(axis));
            pts(row, axis) = v;
        }
    }
    return labeled(spec, std::move(pts), SamplingScheme::Gaussian, seed);
}

Eigen::MatrixXd sample_uniform(const BenchmarkSpec& spec, Eigen::Index n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Eigen::MatrixXd pts(n, spec.dim);
    for (Eigen::Index row = 0; row < n; ++row) {
        for (int axis = 0; axis < spec.dim; ++axis) {
            pts(row, axis) = spec.lower(axis) + unit(rng) * (spec.upper(axis) - spec.lower(axis));
        }
    }
    return pts;
}

Eigen::VectorXd label_samples(const BenchmarkSpec& spec, const Eigen::MatrixXd& inputs) {
    if (inputs.cols() != spec.dim) {
        throw Error(ErrorCode::ShapeMismatch, "inputs have " + std::to_string(inputs.cols()) + " columns, spec has dim " +
                                                  std::to_string(spec.dim));
    }
    Eigen::VectorXd targets(inputs.rows());
    for (Eigen::Index row = 0; row < inputs.rows(); ++row) {
        const Eigen::VectorXd x = inputs.row(row).transpose();
        if (!spec.contains(x)) {
            throw Error(ErrorCode::OutOfDomain, "sample row " + std::to_string(row) + " lies outside the domain",
                        static_cast<std::size_t>(row));
        }
        targets(row) = spec(x);
    }
    return targets;
}

void write_samples_csv(std::ostream& out, const SampleSet& samples) {
    const Eigen::Index d = samples.dim();
    for (Eigen::Index j = 0; j < d; ++j) out << 'x' << j << ',';
    out << "f\n";
    for (Eigen::Index row = 0; row < samples.size(); ++row) {
        for (Eigen::Index j = 0; j < d; ++j) out << format_double(samples.inputs(row, j)) << ',';
        out << format_double(samples.targets(row)) << '\n';
    }
}

void write_samples_csv(const std::string& path, const SampleSet& samples) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
    write_samples_csv(out, samples);
    if (!out) throw Error(ErrorCode::Io, "failed writing '" + path + "'");
}

SampleTable read_samples_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line)) throw Error(ErrorCode::Parse, "line 1: missing header", 1);
    if (!line.empty() && line.back() == '\r') line.pop_back();

    const auto header = split_fields(line);
    const auto d = static_cast<Eigen::Index>(header.size()) - 1;
    if (d < 1 || header.back() != "f") throw Error(ErrorCode::Parse, "line 1: expected header x0,...,f", 1);
    for (Eigen::Index j = 0; j < d; ++j) {
        if (header[static_cast<std::size_t>(j)] != "x" + std::to_string(j)) {
            throw Error(ErrorCode::Parse, "line 1: expected column x" + std::to_string(j), 1);
        }
    }

    std::vector<double> values;
    Eigen::Index rows = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (static_cast<Eigen::Index>(fields.size()) != d + 1) {
            throw Error(ErrorCode::Parse,
                        "line " + std::to_string(line_no) + ": expected " + std::to_string(d + 1) + " fields", line_no);
        }
        for (const auto field : fields) {
            double v;
            if (!parse_double(field, v) || !std::isfinite(v)) {
                throw Error(ErrorCode::Parse, "line " + std::to_string(line_no) + ": bad number '" + std::string(field) + "'",
                            line_no);
            }
            values.push_back(v);
        }
        ++rows;
    }
    if (rows == 0) throw Error(ErrorCode::Parse, "no sample rows", line_no);

    SampleTable table;
    table.inputs.resize(rows, d);
    table.targets.resize(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index j = 0; j < d; ++j) table.inputs(r, j) = values[static_cast<std::size_t>(r * (d + 1) + j)];
        table.targets(r) = values[static_cast<std::size_t>(r * (d + 1) + d)];
    }
    return table;
}

SampleTable read_samples_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
    return read_samples_csv(in);
}

}  // namespace proxyopt
