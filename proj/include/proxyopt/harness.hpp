#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "proxyopt/benchmarks.hpp"
#include "proxyopt/ga.hpp"
#include "proxyopt/mlp.hpp"
#include "proxyopt/objective.hpp"
#include "proxyopt/pso.hpp"
#include "proxyopt/sampling.hpp"
#include "proxyopt/train.hpp"

namespace proxyopt {

inline constexpr const char* kVersion = "1.0.0";

enum class Landscape { GroundTruth, Dense, Sparse, Gaussian };
enum class OptimizerKind { Pso, Ga };

std::string to_string(Landscape l);
std::string to_string(OptimizerKind o);
Landscape parse_landscape(std::string_view name);
OptimizerKind parse_optimizer(std::string_view name);
SamplingScheme scheme_for(Landscape l);

inline const std::vector<Benchmark> kAllBenchmarks{Benchmark::Rosenbrock, Benchmark::Rastrigin, Benchmark::Ackley};
inline const std::vector<Landscape> kAllLandscapes{Landscape::GroundTruth, Landscape::Dense, Landscape::Sparse,
                                                   Landscape::Gaussian};
inline const std::vector<OptimizerKind> kAllOptimizers{OptimizerKind::Pso, OptimizerKind::Ga};

/// Hidden widths and epoch count used for a (function, dimension) pair.
struct Architecture {
    std::vector<int> hidden;
    int epochs = 100;
};

/// Rosenbrock: {15,50,15} for 100 epochs up to 2D, {15,50,15,10} for 100
/// epochs up to 4D and for 500 epochs beyond. Rastrigin and Ackley:
/// {20,50,120,70,20,10} for 500 epochs at every dimension.
Architecture default_architecture(Benchmark function, int dim);

std::vector<int> layer_sizes(int dim, const std::vector<int>& hidden);

/// Half-width of the box used in experiments. Ackley runs on [-5, 5]^d;
/// the other functions use their default domains.
double experiment_half_width(Benchmark function);

BenchmarkSpec experiment_spec(Benchmark function, int dim, std::optional<double> half_width = std::nullopt);

struct ExperimentConfig {
    Benchmark function = Benchmark::Rosenbrock;
    int dim = 2;
    Landscape landscape = Landscape::GroundTruth;
    OptimizerKind optimizer = OptimizerKind::Pso;
    int n_seeds = 5;
    Eigen::Index n_samples = 10000;
    double sigma_frac = kDefaultSigmaFrac;
    std::optional<double> half_width;
    std::optional<std::vector<int>> hidden_layers;
    std::optional<int> epochs;
    int batch_size = 64;
    double learning_rate = 1e-3;
    PsoConfig pso;
    GaConfig ga;
    std::uint64_t master_seed = 0;

    void validate() const;
};

/// Independent streams for one trial, split off the master seed by grid
/// position. Sampling and training seeds ignore the optimizer, so both
/// optimizers see the same proxy; the optimizer seed ignores the landscape,
/// so every landscape starts from the same initial population.
struct TrialSeeds {
    std::uint64_t sampling = 0;
    std::uint64_t training = 0;
    std::uint64_t optimizer = 0;
};

TrialSeeds derive_seeds(std::uint64_t master_seed, Benchmark function, int dim, Landscape landscape,
                        OptimizerKind optimizer, int seed_index);

/// A trained proxy plus the diagnostics logged alongside it.
struct ProxyInfo {
    std::shared_ptr<const MlpModel> model;
    Eigen::Index n_train = 0;
    double initial_loss = 0.0;
    double final_loss = 0.0;
    std::vector<double> loss_history;
    /// MSE in function units on n/10 uniform points not used for training.
    double holdout_mse = 0.0;
    std::uint64_t checksum = 0;
};

SampleSet build_samples(const BenchmarkSpec& spec, Landscape landscape, Eigen::Index n_samples, double sigma_frac,
                        std::uint64_t sampling_seed);

ProxyInfo train_proxy(const ExperimentConfig& config, const BenchmarkSpec& spec, const TrialSeeds& seeds);

/// Ground truth for GroundTruth, otherwise a proxy trained per `config`.
Objective build_landscape(const ExperimentConfig& config, const BenchmarkSpec& spec, const TrialSeeds& seeds,
                          ProxyInfo* proxy_out = nullptr);

OptResult run_optimizer(OptimizerKind kind, const ExperimentConfig& config, const Objective& objective,
                        std::uint64_t seed);

double euclidean_distance(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& x_star);

struct TrialResult {
    Benchmark function = Benchmark::Rosenbrock;
    int dim = 2;
    Landscape landscape = Landscape::GroundTruth;
    OptimizerKind optimizer = OptimizerKind::Pso;
    int seed_index = 0;
    TrialSeeds seeds;
    OptResult result;
    double distance = 0.0;
    std::optional<std::uint64_t> proxy_checksum;
    /// Empty on success.
    std::string error;

    bool ok() const { return error.empty(); }
};

TrialResult run_trial(const ExperimentConfig& config, int seed_index);

struct Summary {
    double mean = 0.0;
    double std = 0.0;
};

/// Arithmetic mean and population standard deviation (divide by n).
Summary summarize(const std::vector<double>& distances);

struct SummaryRow {
    Benchmark function = Benchmark::Rosenbrock;
    int dim = 2;
    Landscape landscape = Landscape::GroundTruth;
    OptimizerKind optimizer = OptimizerKind::Pso;
    /// Distances of the successful seeds, in seed order.
    std::vector<double> distances;
    double mean = 0.0;
    double std = 0.0;
    /// Non-empty when at least one seed failed.
    std::string error;
};

struct ProxyRecord {
    Benchmark function = Benchmark::Rosenbrock;
    int dim = 2;
    Landscape landscape = Landscape::Dense;
    int seed_index = 0;
    ProxyInfo info;
};

struct TableConfig {
    int dim = 2;
    std::vector<Benchmark> functions = kAllBenchmarks;
    std::vector<Landscape> landscapes = kAllLandscapes;
    std::vector<OptimizerKind> optimizers = kAllOptimizers;
    /// Template for every cell; its function, dim, landscape and optimizer are overwritten.
    ExperimentConfig base;
    int jobs = 1;
};

struct TableResult {
    /// Grid order: landscape, function, optimizer, seed.
    std::vector<TrialResult> trials;
    /// Grid order: landscape, function, optimizer.
    std::vector<SummaryRow> rows;
    std::vector<ProxyRecord> proxies;
};

using ProgressFn = std::function<void(const std::string&)>;

/// Runs the landscape x function x optimizer x seed grid. One proxy is trained
/// per (function, landscape, seed) and shared by all optimizers of that cell.
/// Results are ordered by grid position regardless of `jobs`.
TableResult run_table(const TableConfig& config, const ProgressFn& progress = {});

/// Per-seed CSV: function,dim,landscape,optimizer,seed,distance,best_value,evaluations
void write_trials_csv(std::ostream& out, const std::vector<TrialResult>& trials);
/// Long-form summary: one line per SummaryRow.
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);
/// Wide summary: a line per landscape,
/// mean/std column pairs per (function, optimizer).
void write_table_layout_csv(std::ostream& out, const std::vector<SummaryRow>& rows);
void write_proxies_csv(std::ostream& out, const std::vector<ProxyRecord>& proxies);
/// Human-readable "mean ± std" table with two decimals.
void print_table(std::ostream& out, const std::vector<SummaryRow>& rows);

inline constexpr int kRasterResolution = 200;

/// Points of one figure panel: a final best point per seed.
struct FigurePoint {
    Landscape landscape = Landscape::GroundTruth;
    OptimizerKind optimizer = OptimizerKind::Pso;
    int seed_index = 0;
    Eigen::VectorXd point;
    double value = 0.0;
    double true_value = 0.0;
    double distance = 0.0;
};

struct FigureData {
    /// One row per lattice node: x0, x1, true value, then one proxy column per seed.
    Eigen::MatrixXd raster;
    std::vector<FigurePoint> points;
};

/// Values of the true function and each proxy on a resolution^2 lattice
/// spanning the box. Only 2D specs are accepted.
Eigen::MatrixXd rasterize(const BenchmarkSpec& spec, const std::vector<std::shared_ptr<const MlpModel>>& proxies,
                          int resolution = kRasterResolution);

/// Trains `config.n_seeds` proxies for `config.landscape` and runs PSO and GA
/// on the true function and on each proxy.
FigureData export_figure_data(const ExperimentConfig& config, const ProgressFn& progress = {});

void write_raster_csv(std::ostream& out, const FigureData& data);
void write_points_csv(std::ostream& out, const FigureData& data);

}  // namespace proxyopt
