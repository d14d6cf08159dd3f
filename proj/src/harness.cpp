#include "proxyopt/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <iomanip>
#include <limits>
#include <mutex>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "proxyopt/csv.hpp"

namespace proxyopt {

namespace {

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    std::replace(out.begin(), out.end(), '_', '-');
    return out;
}

std::uint64_t split_seed(std::uint64_t master, std::uint32_t component, Benchmark function, int dim, Landscape landscape,
                         OptimizerKind optimizer, int seed_index) {
    std::seed_seq seq{static_cast<std::uint32_t>(master & 0xffffffffU), static_cast<std::uint32_t>(master >> 32),
                      component,
                      static_cast<std::uint32_t>(function),
                      static_cast<std::uint32_t>(dim),
                      static_cast<std::uint32_t>(landscape),
                      static_cast<std::uint32_t>(optimizer),
                      static_cast<std::uint32_t>(seed_index)};
    std::uint32_t words[2];
    seq.generate(words, words + 2);
    return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

std::string tag_seed(int seed_index, const std::string& what) { return "seed " + std::to_string(seed_index) + ": " + what; }

}  // namespace

std::string to_string(Landscape l) {
    switch (l) {
        case Landscape::GroundTruth: return "ground-truth";
        case Landscape::Dense: return "dense";
        case Landscape::Sparse: return "sparse";
        case Landscape::Gaussian: return "gaussian";
    }
    return "unknown";
}

std::string to_string(OptimizerKind o) { return o == OptimizerKind::Pso ? "pso" : "ga"; }

Landscape parse_landscape(std::string_view name) {
    const auto s = lowercase(name);
    if (s == "ground-truth" || s == "groundtruth") return Landscape::GroundTruth;
    if (s == "dense") return Landscape::Dense;
    if (s == "sparse") return Landscape::Sparse;
    if (s == "gaussian") return Landscape::Gaussian;
    throw Error(ErrorCode::InvalidParameter, "unknown landscape '" + std::string(name) + "'");
}

OptimizerKind parse_optimizer(std::string_view name) {
    const auto s = lowercase(name);
    if (s == "pso" || s == "ps") return OptimizerKind::Pso;
    if (s == "ga") return OptimizerKind::Ga;
    throw Error(ErrorCode::InvalidParameter, "unknown optimizer '" + std::string(name) + "'");
}

SamplingScheme scheme_for(Landscape l) {
    switch (l) {
        case Landscape::Dense: return SamplingScheme::Dense;
        case Landscape::Sparse: return SamplingScheme::Sparse;
        case Landscape::Gaussian: return SamplingScheme::Gaussian;
        case Landscape::GroundTruth: break;
    }
    throw Error(ErrorCode::InvalidParameter, "the ground-truth landscape has no sampling scheme");
}

Architecture default_architecture(Benchmark function, int dim) {
    if (function == Benchmark::Rosenbrock) {
        if (dim <= 2) return {{15, 50, 15}, 100};
        if (dim <= 4) return {{15, 50, 15, 10}, 100};
        return {{15, 50, 15, 10}, 500};
    }
    return {{20, 50, 120, 70, 20, 10}, 500};
}

std::vector<int> layer_sizes(int dim, const std::vector<int>& hidden) {
    std::vector<int> sizes{dim};
    sizes.insert(sizes.end(), hidden.begin(), hidden.end());
    sizes.push_back(1);
    return sizes;
}

double experiment_half_width(Benchmark function) {
    return function == Benchmark::Ackley ? 5.0 : default_half_width(function);
}

BenchmarkSpec experiment_spec(Benchmark function, int dim, std::optional<double> half_width) {
    return make_spec(function, dim, half_width.value_or(experiment_half_width(function)));
}

void ExperimentConfig::validate() const {
    if (n_seeds < 1) throw Error(ErrorCode::InvalidParameter, "n_seeds must be >= 1");
    if (n_samples < 1) throw Error(ErrorCode::InvalidParameter, "n_samples must be >= 1");
    if (!(sigma_frac > 0.0 && sigma_frac <= 1.0)) throw Error(ErrorCode::InvalidParameter, "sigma_frac must lie in (0, 1]");
    if (epochs && *epochs < 1) throw Error(ErrorCode::InvalidParameter, "epochs must be >= 1");
    if (batch_size < 1) throw Error(ErrorCode::InvalidParameter, "batch_size must be >= 1");
    if (!(learning_rate > 0.0)) throw Error(ErrorCode::InvalidParameter, "learning_rate must be positive");
    pso.validate();
    ga.validate();
}

TrialSeeds derive_seeds(std::uint64_t master_seed, Benchmark function, int dim, Landscape landscape,
                        OptimizerKind optimizer, int seed_index) {
    TrialSeeds seeds;
    // Optimizer is fixed to Pso for the proxy streams, landscape to
    // GroundTruth for the optimizer stream.
    seeds.sampling = split_seed(master_seed, 1, function, dim, landscape, OptimizerKind::Pso, seed_index);
    seeds.training = split_seed(master_seed, 2, function, dim, landscape, OptimizerKind::Pso, seed_index);
    seeds.optimizer = split_seed(master_seed, 3, function, dim, Landscape::GroundTruth, optimizer, seed_index);
    return seeds;
}

SampleSet build_samples(const BenchmarkSpec& spec, Landscape landscape, Eigen::Index n_samples, double sigma_frac,
                        std::uint64_t sampling_seed) {
    switch (scheme_for(landscape)) {
        case SamplingScheme::Dense: return sample_dense(spec, n_samples);
        case SamplingScheme::Sparse: return sample_sparse(spec, n_samples);
        case SamplingScheme::Gaussian: return sample_gaussian(spec, n_samples, sigma_frac, sampling_seed);
    }
    throw Error(ErrorCode::InvalidParameter, "unknown sampling scheme");
}

ProxyInfo train_proxy(const ExperimentConfig& config, const BenchmarkSpec& spec, const TrialSeeds& seeds) {
    const SampleSet samples = build_samples(spec, config.landscape, config.n_samples, config.sigma_frac, seeds.sampling);
    const Architecture arch = default_architecture(spec.name, spec.dim);
    const std::vector<int> hidden = config.hidden_layers.value_or(arch.hidden);

    TrainConfig tc;
    tc.epochs = config.epochs.value_or(arch.epochs);
    tc.batch_size = config.batch_size;
    tc.learning_rate = config.learning_rate;
    tc.seed = seeds.training;

    auto trained = train(build_mlp(layer_sizes(spec.dim, hidden), seeds.training), samples, tc);

    ProxyInfo info;
    info.n_train = samples.size();
    info.initial_loss = trained.initial_loss;
    info.final_loss = trained.final_loss;
    info.loss_history = std::move(trained.loss_history);

    const Eigen::Index n_holdout = std::max<Eigen::Index>(1, config.n_samples / 10);
    const Eigen::MatrixXd probe = sample_uniform(spec, n_holdout, seeds.training ^ 0x9e3779b97f4a7c15ULL);
    const Eigen::VectorXd truth = label_samples(spec, probe);
    info.holdout_mse = (trained.model.predict(probe) - truth).squaredNorm() / static_cast<double>(n_holdout);

    info.checksum = parameter_checksum(trained.model);
    info.model = std::make_shared<const MlpModel>(std::move(trained.model));
    return info;
}

Objective build_landscape(const ExperimentConfig& config, const BenchmarkSpec& spec, const TrialSeeds& seeds,
                          ProxyInfo* proxy_out) {
    if (config.landscape == Landscape::GroundTruth) return Objective::true_function(spec);
    ProxyInfo info = train_proxy(config, spec, seeds);
    auto objective = Objective::proxy(info.model, spec);
    if (proxy_out) *proxy_out = std::move(info);
    return objective;
}

OptResult run_optimizer(OptimizerKind kind, const ExperimentConfig& config, const Objective& objective,
                        std::uint64_t seed) {
    if (kind == OptimizerKind::Pso) {
        PsoConfig pc = config.pso;
        pc.seed = seed;
        return pso_run(pc, objective);
    }
    GaConfig gc = config.ga;
    gc.seed = seed;
    return ga_run(gc, objective);
}

double euclidean_distance(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& x_star) {
    if (x.size() != x_star.size()) {
        throw Error(ErrorCode::InvalidDimension, "distance between points of dimension " + std::to_string(x.size()) +
                                                     " and " + std::to_string(x_star.size()));
    }
    return (x - x_star).norm();
}

TrialResult run_trial(const ExperimentConfig& config, int seed_index) {
    config.validate();
    const BenchmarkSpec spec = experiment_spec(config.function, config.dim, config.half_width);

    TrialResult trial;
    trial.function = config.function;
    trial.dim = config.dim;
    trial.landscape = config.landscape;
    trial.optimizer = config.optimizer;
    trial.seed_index = seed_index;
    trial.seeds = derive_seeds(config.master_seed, config.function, config.dim, config.landscape, config.optimizer,
                               seed_index);
    try {
        ProxyInfo proxy;
        const Objective objective = build_landscape(config, spec, trial.seeds, &proxy);
        if (proxy.model) trial.proxy_checksum = proxy.checksum;
        trial.result = run_optimizer(config.optimizer, config, objective, trial.seeds.optimizer);
    } catch (const Error& e) {
        throw Error(e.code(), tag_seed(seed_index, e.what()), e.index());
    }
    trial.distance = euclidean_distance(trial.result.best_point, spec.global_min_point);
    return trial;
}

Summary summarize(const std::vector<double>& distances) {
    if (distances.empty()) throw Error(ErrorCode::InvalidInput, "cannot summarize an empty list");
    const auto n = static_cast<double>(distances.size());
    double mean = 0.0;
    for (double d : distances) mean += d;
    mean /= n;
    double var = 0.0;
    for (double d : distances) var += (d - mean) * (d - mean);
    return {mean, std::sqrt(var / n)};
}

TableResult run_table(const TableConfig& config, const ProgressFn& progress) {
    ExperimentConfig base = config.base;
    base.dim = config.dim;
    base.validate();

    const auto L = config.landscapes.size();
    const auto F = config.functions.size();
    const auto O = config.optimizers.size();
    const auto S = static_cast<std::size_t>(base.n_seeds);

    TableResult table;
    table.trials.resize(L * F * O * S);
    std::vector<std::optional<ProxyRecord>> proxies(L * F * S);

    std::mutex log_mutex;
    auto log = [&](const std::string& msg) {
        if (!progress) return;
        std::lock_guard lock(log_mutex);
        progress(msg);
    };

    // One job per (landscape, function, seed): build the landscape once, then
    // run every optimizer on it.
    auto run_job = [&](std::size_t job) {
        const std::size_t li = job / (F * S);
        const std::size_t fi = (job / S) % F;
        const std::size_t si = job % S;
        ExperimentConfig cell = base;
        cell.landscape = config.landscapes[li];
        cell.function = config.functions[fi];
        const int seed_index = static_cast<int>(si);
        const BenchmarkSpec spec = experiment_spec(cell.function, cell.dim, cell.half_width);

        auto slot = [&](std::size_t oi) -> TrialResult& { return table.trials[((li * F + fi) * O + oi) * S + si]; };
        for (std::size_t oi = 0; oi < O; ++oi) {
            TrialResult& t = slot(oi);
            t.function = cell.function;
            t.dim = cell.dim;
            t.landscape = cell.landscape;
            t.optimizer = config.optimizers[oi];
            t.seed_index = seed_index;
            t.seeds = derive_seeds(cell.master_seed, cell.function, cell.dim, cell.landscape, t.optimizer, seed_index);
            t.distance = std::numeric_limits<double>::quiet_NaN();
            t.result.best_value = std::numeric_limits<double>::quiet_NaN();
        }

        const std::string where = to_string(cell.function) + " " + std::to_string(cell.dim) + "D " +
                                  to_string(cell.landscape) + " seed " + std::to_string(seed_index);
        std::optional<Objective> objective;
        try {
            ProxyInfo info;
            objective = build_landscape(cell, spec, slot(0).seeds, &info);
            if (info.model) {
                log(where + ": proxy trained, loss " + format_double(info.initial_loss) + " -> " +
                    format_double(info.final_loss) + ", holdout mse " + format_double(info.holdout_mse));
                for (std::size_t oi = 0; oi < O; ++oi) slot(oi).proxy_checksum = info.checksum;
                proxies[(li * F + fi) * S + si] = ProxyRecord{cell.function, cell.dim, cell.landscape, seed_index, info};
            }
        } catch (const std::exception& e) {
            for (std::size_t oi = 0; oi < O; ++oi) slot(oi).error = tag_seed(seed_index, e.what());
            log(where + ": FAILED " + e.what());
            return;
        }

        for (std::size_t oi = 0; oi < O; ++oi) {
            TrialResult& t = slot(oi);
            try {
                t.result = run_optimizer(t.optimizer, cell, *objective, t.seeds.optimizer);
                t.distance = euclidean_distance(t.result.best_point, spec.global_min_point);
                log(where + " " + to_string(t.optimizer) + ": distance " + format_double(t.distance));
            } catch (const std::exception& e) {
                t.error = tag_seed(seed_index, e.what());
                log(where + " " + to_string(t.optimizer) + ": FAILED " + e.what());
            }
        }
    };

    const std::size_t jobs = L * F * S;
    const auto workers = static_cast<std::size_t>(std::max(1, config.jobs));
    if (workers == 1) {
        for (std::size_t j = 0; j < jobs; ++j) run_job(j);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < std::min(workers, jobs); ++w) {
            pool.emplace_back([&] {
                for (std::size_t j = next++; j < jobs; j = next++) run_job(j);
            });
        }
        for (auto& t : pool) t.join();
    }

    for (auto& p : proxies) {
        if (p) table.proxies.push_back(std::move(*p));
    }

    for (std::size_t li = 0; li < L; ++li) {
        for (std::size_t fi = 0; fi < F; ++fi) {
            for (std::size_t oi = 0; oi < O; ++oi) {
                SummaryRow row;
                row.function = config.functions[fi];
                row.dim = config.dim;
                row.landscape = config.landscapes[li];
                row.optimizer = config.optimizers[oi];
                std::string failed;
                for (std::size_t si = 0; si < S; ++si) {
                    const TrialResult& t = table.trials[((li * F + fi) * O + oi) * S + si];
                    if (t.ok()) {
                        row.distances.push_back(t.distance);
                    } else {
                        failed += (failed.empty() ? "" : "; ") + t.error;
                    }
                }
                if (row.distances.empty()) {
                    row.mean = row.std = std::numeric_limits<double>::quiet_NaN();
                } else {
                    const Summary s = summarize(row.distances);
                    row.mean = s.mean;
                    row.std = s.std;
                }
                row.error = failed;
                table.rows.push_back(std::move(row));
            }
        }
    }
    return table;
}

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

}  // namespace

void write_trials_csv(std::ostream& out, const std::vector<TrialResult>& trials) {
    out << "function,dim,landscape,optimizer,seed,distance,best_value,evaluations\n";
    for (const auto& t : trials) {
        out << to_string(t.function) << ',' << t.dim << ',' << to_string(t.landscape) << ',' << to_string(t.optimizer)
            << ',' << t.seed_index << ',' << format_double(t.ok() ? t.distance : std::nan("")) << ','
            << format_double(t.ok() ? t.result.best_value : std::nan("")) << ',' << t.result.evaluations << '\n';
    }
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
    out << "function,dim,landscape,optimizer,n,mean_distance,std_distance,error\n";
    for (const auto& r : rows) {
        out << to_string(r.function) << ',' << r.dim << ',' << to_string(r.landscape) << ',' << to_string(r.optimizer)
            << ',' << r.distances.size() << ',' << format_double(r.mean) << ',' << format_double(r.std) << ','
            << csv_escape(r.error) << '\n';
    }
}

namespace {

struct Layout {
    std::vector<Landscape> landscapes;
    std::vector<std::pair<Benchmark, OptimizerKind>> columns;
};

Layout layout_of(const std::vector<SummaryRow>& rows) {
    Layout l;
    for (const auto& r : rows) {
        if (std::find(l.landscapes.begin(), l.landscapes.end(), r.landscape) == l.landscapes.end()) {
            l.landscapes.push_back(r.landscape);
        }
        const auto col = std::make_pair(r.function, r.optimizer);
        if (std::find(l.columns.begin(), l.columns.end(), col) == l.columns.end()) l.columns.push_back(col);
    }
    return l;
}

const SummaryRow* find_row(const std::vector<SummaryRow>& rows, Landscape l, Benchmark f, OptimizerKind o) {
    for (const auto& r : rows) {
        if (r.landscape == l && r.function == f && r.optimizer == o) return &r;
    }
    return nullptr;
}

}  // namespace

void write_table_layout_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
    const Layout layout = layout_of(rows);
    out << "landscape";
    for (const auto& [f, o] : layout.columns) {
        out << ',' << to_string(f) << '_' << to_string(o) << "_mean," << to_string(f) << '_' << to_string(o) << "_std";
    }
    out << '\n';
    for (const Landscape l : layout.landscapes) {
        out << to_string(l);
        for (const auto& [f, o] : layout.columns) {
            const SummaryRow* r = find_row(rows, l, f, o);
            out << ',' << (r ? format_double(r->mean) : "") << ',' << (r ? format_double(r->std) : "");
        }
        out << '\n';
    }
}

void write_proxies_csv(std::ostream& out, const std::vector<ProxyRecord>& proxies) {
    out << "function,dim,landscape,seed,checksum,n_train,initial_loss,final_loss,holdout_mse\n";
    for (const auto& p : proxies) {
        std::ostringstream checksum;
        checksum << std::hex << std::setw(16) << std::setfill('0') << p.info.checksum;
        out << to_string(p.function) << ',' << p.dim << ',' << to_string(p.landscape) << ',' << p.seed_index << ','
            << checksum.str() << ',' << p.info.n_train << ',' << format_double(p.info.initial_loss) << ','
            << format_double(p.info.final_loss) << ',' << format_double(p.info.holdout_mse) << '\n';
    }
}

void print_table(std::ostream& out, const std::vector<SummaryRow>& rows) {
    const Layout layout = layout_of(rows);
    out << std::left << std::setw(14) << "landscape";
    for (const auto& [f, o] : layout.columns) out << std::setw(16) << (to_string(f) + "/" + to_string(o));
    out << '\n';
    for (const Landscape l : layout.landscapes) {
        out << std::setw(14) << to_string(l);
        for (const auto& [f, o] : layout.columns) {
            const SummaryRow* r = find_row(rows, l, f, o);
            std::ostringstream cell;
            cell << std::fixed << std::setprecision(2);
            if (r) cell << r->mean << " ± " << r->std << (r->error.empty() ? "" : "!");
            // setw counts bytes; "±" is two.
            out << std::setw(17) << cell.str();
        }
        out << '\n';
    }
    out << std::right;
}

Eigen::MatrixXd rasterize(const BenchmarkSpec& spec, const std::vector<std::shared_ptr<const MlpModel>>& proxies,
                          int resolution) {
    if (spec.dim != 2) throw Error(ErrorCode::InvalidDimension, "landscape rasters are only defined for 2D functions");
    if (resolution < 2) throw Error(ErrorCode::InvalidParameter, "raster resolution must be >= 2");

    const Eigen::Index n = static_cast<Eigen::Index>(resolution) * resolution;
    Eigen::MatrixXd lattice(n, 2);
    for (int i = 0; i < resolution; ++i) {
        for (int j = 0; j < resolution; ++j) {
            const Eigen::Index row = static_cast<Eigen::Index>(i) * resolution + j;
            const double ti = static_cast<double>(i) / (resolution - 1);
            const double tj = static_cast<double>(j) / (resolution - 1);
            lattice(row, 0) = i + 1 == resolution ? spec.upper(0) : spec.lower(0) + ti * (spec.upper(0) - spec.lower(0));
            lattice(row, 1) = j + 1 == resolution ? spec.upper(1) : spec.lower(1) + tj * (spec.upper(1) - spec.lower(1));
        }
    }

    Eigen::MatrixXd raster(n, 3 + static_cast<Eigen::Index>(proxies.size()));
    raster.leftCols(2) = lattice;
    raster.col(2) = label_samples(spec, lattice);
    for (std::size_t k = 0; k < proxies.size(); ++k) {
        if (proxies[k]->input_dim() != 2) throw Error(ErrorCode::InvalidDimension, "proxy is not 2D");
        raster.col(3 + static_cast<Eigen::Index>(k)) = proxies[k]->predict(lattice);
    }
    return raster;
}

FigureData export_figure_data(const ExperimentConfig& config, const ProgressFn& progress) {
    config.validate();
    if (config.dim != 2) throw Error(ErrorCode::InvalidDimension, "figure data is only produced for 2D experiments");
    const BenchmarkSpec spec = experiment_spec(config.function, config.dim, config.half_width);
    const Objective truth = Objective::true_function(spec);

    FigureData data;
    std::vector<std::shared_ptr<const MlpModel>> models;
    for (int si = 0; si < config.n_seeds; ++si) {
        std::optional<Objective> proxy;
        if (config.landscape != Landscape::GroundTruth) {
            const TrialSeeds ts = derive_seeds(config.master_seed, config.function, 2, config.landscape,
                                               OptimizerKind::Pso, si);
            ProxyInfo info = train_proxy(config, spec, ts);
            if (progress) {
                progress("seed " + std::to_string(si) + ": proxy trained, loss " + format_double(info.initial_loss) +
                         " -> " + format_double(info.final_loss));
            }
            models.push_back(info.model);
            proxy = Objective::proxy(info.model, spec);
        }
        for (const OptimizerKind kind : kAllOptimizers) {
            const std::uint64_t seed =
                derive_seeds(config.master_seed, config.function, 2, config.landscape, kind, si).optimizer;
            auto record = [&](Landscape landscape, const Objective& objective) {
                const OptResult r = run_optimizer(kind, config, objective, seed);
                data.points.push_back(FigurePoint{landscape, kind, si, r.best_point, r.best_value, spec(r.best_point),
                                                  euclidean_distance(r.best_point, spec.global_min_point)});
            };
            record(Landscape::GroundTruth, truth);
            if (proxy) record(config.landscape, *proxy);
        }
    }
    data.raster = rasterize(spec, models);
    return data;
}

void write_raster_csv(std::ostream& out, const FigureData& data) {
    out << "x0,x1,true";
    for (Eigen::Index k = 3; k < data.raster.cols(); ++k) out << ",proxy_seed" << (k - 3);
    out << '\n';
    for (Eigen::Index r = 0; r < data.raster.rows(); ++r) {
        for (Eigen::Index c = 0; c < data.raster.cols(); ++c) out << (c ? "," : "") << format_double(data.raster(r, c));
        out << '\n';
    }
}

void write_points_csv(std::ostream& out, const FigureData& data) {
    out << "landscape,optimizer,seed,x0,x1,value,true_value,distance\n";
    for (const auto& p : data.points) {
        out << to_string(p.landscape) << ',' << to_string(p.optimizer) << ',' << p.seed_index << ','
            << format_double(p.point(0)) << ',' << format_double(p.point(1)) << ',' << format_double(p.value) << ','
            << format_double(p.true_value) << ',' << format_double(p.distance) << '\n';
    }
}

}  // namespace proxyopt
