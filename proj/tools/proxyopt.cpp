// proxyopt: train NN proxies of benchmark functions and measure how PSO and
// GA degrade when optimizing the proxy instead of the true function.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "proxyopt/benchmarks.hpp"
#include "proxyopt/config_json.hpp"
#include "proxyopt/csv.hpp"
#include "proxyopt/harness.hpp"
#include "proxyopt/model_io.hpp"
#include "proxyopt/sampling.hpp"
#include "proxyopt/train.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace proxyopt;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

/// Raised for argument combinations CLI11 cannot express; mapped to exit 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open config '" + path + "'");
    try {
        json j = json::parse(in);
        // A manifest written by this tool can be fed back as a config.
        if (j.is_object() && j.contains("config") && j.contains("command")) {
            json config = j.at("config");
            // Inputs named on the command line, not settings.
            for (const char* key : {"objective", "model", "samples", "resolved_architectures"}) config.erase(key);
            return config;
        }
        return j;
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::Parse, "config '" + path + "': " + e.what());
    }
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out) throw Error(ErrorCode::Io, "failed writing '" + path.string() + "'");
}

template <typename Writer>
void write_file(const fs::path& path, Writer&& writer) {
    std::ostringstream ss;
    writer(ss);
    write_text(path, ss.str());
}

struct Manifest {
    std::string command;
    std::optional<std::string> config_file;
    json config;
    std::uint64_t master_seed = 0;
    std::string output;
    std::string started_at = utc_now();

    void write(const fs::path& path) const {
        json j{{"command", command},
               {"config_file", config_file ? json(*config_file) : json(nullptr)},
               {"config", config},
               {"master_seed", master_seed},
               {"output", output},
               {"started_at", started_at},
               {"finished_at", utc_now()},
               {"version", kVersion},
               {"std_convention", "population"}};
        write_text(path, j.dump(2) + "\n");
    }
};

/// Seed precedence: --seed flag, then PROXYOPT_SEED, then the config file.
void apply_seed(std::uint64_t& target, const CLI::Option* flag, std::uint64_t flag_value) {
    if (flag->count() > 0) {
        target = flag_value;
        return;
    }
    if (const char* env = std::getenv("PROXYOPT_SEED"); env && *env) {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(env, &used);
            if (used != std::string(env).size()) throw std::invalid_argument("trailing characters");
            target = v;
        } catch (const std::exception&) {
            throw UsageError(std::string("PROXYOPT_SEED is not an unsigned integer: '") + env + "'");
        }
    }
}

int default_jobs() { return static_cast<int>(std::max(1U, std::thread::hardware_concurrency())); }

// Options shared by commands that train proxies and run optimizers.
struct ExperimentFlags {
    std::string config_file;
    std::string function;
    int dim = 2;
    std::string landscape;
    std::string optimizer;
    int seeds = 5;
    long long n = 10000;
    double sigma_frac = kDefaultSigmaFrac;
    double half_width = 0.0;
    std::vector<int> layers;
    int epochs = 0;
    int batch_size = 64;
    double learning_rate = 1e-3;
    std::uint64_t seed = 0;
    int iterations = 0;
    int swarm_size = 0;
    int population = 0;
    bool per_dimension_random = false;

    CLI::Option* o_config = nullptr;
    CLI::Option* o_function = nullptr;
    CLI::Option* o_dim = nullptr;
    CLI::Option* o_landscape = nullptr;
    CLI::Option* o_optimizer = nullptr;
    CLI::Option* o_seeds = nullptr;
    CLI::Option* o_n = nullptr;
    CLI::Option* o_sigma = nullptr;
    CLI::Option* o_half_width = nullptr;
    CLI::Option* o_layers = nullptr;
    CLI::Option* o_epochs = nullptr;
    CLI::Option* o_batch = nullptr;
    CLI::Option* o_lr = nullptr;
    CLI::Option* o_seed = nullptr;
    CLI::Option* o_iterations = nullptr;
    CLI::Option* o_swarm = nullptr;
    CLI::Option* o_population = nullptr;
    CLI::Option* o_per_dim = nullptr;

    void add_config(CLI::App& app) {
        o_config = app.add_option("--config", config_file, "JSON config file (or a manifest from a previous run)")
                       ->check(CLI::ExistingFile);
        o_seed = app.add_option("--seed", seed, "Master seed (overrides PROXYOPT_SEED and the config file)");
    }
    void add_problem(CLI::App& app) {
        o_function = app.add_option("--function", function, "rosenbrock | rastrigin | ackley");
        o_dim = app.add_option("--dim", dim, "Dimension")->check(CLI::PositiveNumber);
        o_half_width = app.add_option("--half-width", half_width, "Override the symmetric domain half-width")
                           ->check(CLI::PositiveNumber);
    }
    void add_sampling(CLI::App& app) {
        o_n = app.add_option("--n", n, "Dense sample budget")->check(CLI::PositiveNumber);
        o_sigma = app.add_option("--sigma-frac", sigma_frac, "Gaussian std as a fraction of the axis range")
                      ->check(CLI::Range(1e-12, 1.0));
    }
    void add_training(CLI::App& app) {
        o_layers = app.add_option("--layers", layers, "Hidden layer widths, e.g. 15,50,15")->delimiter(',');
        o_epochs = app.add_option("--epochs", epochs, "Training epochs")->check(CLI::PositiveNumber);
        o_batch = app.add_option("--batch-size", batch_size, "Mini-batch size")->check(CLI::PositiveNumber);
        o_lr = app.add_option("--lr", learning_rate, "Adam learning rate")->check(CLI::PositiveNumber);
    }
    void add_optimizer_budget(CLI::App& app) {
        o_iterations = app.add_option("--iterations", iterations, "PSO iterations / GA generations (>= 1)")
                           ->check(CLI::PositiveNumber);
        o_swarm = app.add_option("--swarm-size", swarm_size, "PSO swarm size")->check(CLI::Range(2, 1 << 20));
        o_population = app.add_option("--population", population, "GA population size (even)")
                           ->check(CLI::Range(2, 1 << 20));
        o_per_dim = app.add_flag("--per-dimension-random", per_dimension_random, "Draw PSO r1, r2 per coordinate");
    }

    template <typename Config>
    void load_file(Config& cfg) const {
        if (o_config && o_config->count() > 0) update_from_json(cfg, read_json_file(config_file));
    }

    void apply(ExperimentConfig& c) const {
        if (o_function && o_function->count()) c.function = parse_benchmark(function);
        if (o_dim && o_dim->count()) c.dim = dim;
        if (o_landscape && o_landscape->count()) c.landscape = parse_landscape(landscape);
        if (o_optimizer && o_optimizer->count()) c.optimizer = parse_optimizer(optimizer);
        if (o_seeds && o_seeds->count()) c.n_seeds = seeds;
        if (o_n && o_n->count()) c.n_samples = n;
        if (o_sigma && o_sigma->count()) c.sigma_frac = sigma_frac;
        if (o_half_width && o_half_width->count()) c.half_width = half_width;
        if (o_layers && o_layers->count()) c.hidden_layers = layers;
        if (o_epochs && o_epochs->count()) c.epochs = epochs;
        if (o_batch && o_batch->count()) c.batch_size = batch_size;
        if (o_lr && o_lr->count()) c.learning_rate = learning_rate;
        if (o_iterations && o_iterations->count()) {
            c.pso.iterations = iterations;
            c.ga.generations = iterations;
        }
        if (o_swarm && o_swarm->count()) c.pso.swarm_size = swarm_size;
        if (o_population && o_population->count()) c.ga.population_size = population;
        if (o_per_dim && o_per_dim->count()) c.pso.per_dimension_random = per_dimension_random;
        apply_seed(c.master_seed, o_seed, seed);
    }

    bool has_function(const json& file_config) const {
        return (o_function && o_function->count()) || file_config.contains("function");
    }

    std::optional<std::string> config_path() const {
        if (o_config && o_config->count()) return config_file;
        return std::nullopt;
    }
};

json file_config(const ExperimentFlags& f) {
    if (f.o_config && f.o_config->count()) return read_json_file(f.config_file);
    return json::object();
}

void require_function(const ExperimentFlags& f) {
    if (!f.has_function(file_config(f))) throw CLI::RequiredError("--function");
}

// --- sample -----------------------------------------------------------------

int cmd_sample(ExperimentFlags& f, const std::string& scheme_name, const std::string& out) {
    require_function(f);
    ExperimentConfig cfg;
    f.load_file(cfg);
    f.apply(cfg);
    const SamplingScheme scheme = parse_scheme(scheme_name);
    const BenchmarkSpec spec = experiment_spec(cfg.function, cfg.dim, cfg.half_width);

    SampleSet samples;
    switch (scheme) {
        case SamplingScheme::Dense: samples = sample_dense(spec, cfg.n_samples); break;
        case SamplingScheme::Sparse: samples = sample_sparse(spec, cfg.n_samples); break;
        case SamplingScheme::Gaussian: samples = sample_gaussian(spec, cfg.n_samples, cfg.sigma_frac, cfg.master_seed); break;
    }
    write_file(out, [&](std::ostream& os) { write_samples_csv(os, samples); });

    cfg = materialize(cfg);
    json resolved{{"function", to_string(cfg.function)}, {"dim", cfg.dim},
                  {"scheme", to_string(scheme)},         {"n", cfg.n_samples},
                  {"sigma_frac", cfg.sigma_frac},        {"half_width", *cfg.half_width},
                  {"master_seed", cfg.master_seed}};
    Manifest{"sample", f.config_path(), resolved, cfg.master_seed, out}.write(out + ".manifest.json");
    std::cerr << "wrote " << samples.size() << " samples to " << out << "\n";
    return 0;
}

// --- train ------------------------------------------------------------------

int cmd_train(ExperimentFlags& f, const std::string& samples_path, const std::string& out) {
    require_function(f);
    ExperimentConfig cfg;
    f.load_file(cfg);
    const SampleTable table = read_samples_csv(samples_path);
    const int data_dim = static_cast<int>(table.inputs.cols());
    cfg.dim = data_dim;
    f.apply(cfg);
    if (cfg.dim != data_dim) {
        throw Error(ErrorCode::InvalidDimension, "samples have dimension " + std::to_string(data_dim) + " but --dim is " +
                                                     std::to_string(cfg.dim));
    }
    cfg = materialize(cfg);
    const BenchmarkSpec spec = experiment_spec(cfg.function, cfg.dim, cfg.half_width);
    for (Eigen::Index r = 0; r < table.inputs.rows(); ++r) {
        if (!spec.contains(table.inputs.row(r).transpose())) {
            throw Error(ErrorCode::OutOfDomain, "sample line " + std::to_string(r + 2) + " lies outside the " +
                                                    to_string(cfg.function) + " domain");
        }
    }

    TrainConfig tc;
    tc.epochs = *cfg.epochs;
    tc.batch_size = cfg.batch_size;
    tc.learning_rate = cfg.learning_rate;
    tc.seed = cfg.master_seed;
    const auto sizes = layer_sizes(cfg.dim, *cfg.hidden_layers);
    auto result = train<double>(build_mlp(sizes, cfg.master_seed), table.inputs, table.targets, spec.lower, spec.upper, tc);

    save_model(out, result.model);
    write_file(out + ".loss.csv", [&](std::ostream& os) {
        os << "epoch,loss\n";
        for (std::size_t e = 0; e < result.loss_history.size(); ++e) {
            os << e << ',' << format_double(result.loss_history[e]) << '\n';
        }
    });

    json resolved = to_json(cfg);
    for (const char* key : {"landscape", "optimizer", "seeds", "n", "sigma_frac", "pso", "ga"}) resolved.erase(key);
    resolved["samples"] = samples_path;
    Manifest{"train", f.config_path(), resolved, cfg.master_seed, out}.write(out + ".manifest.json");

    std::cerr << "architecture";
    for (int s : sizes) std::cerr << ' ' << s;
    std::cerr << ", " << tc.epochs << " epochs, loss " << result.initial_loss << " -> " << result.final_loss << "\n"
              << "wrote " << out << "\n";
    return 0;
}

// --- optimize ---------------------------------------------------------------

int cmd_optimize(ExperimentFlags& f, bool ground_truth, const std::string& model_path, const std::string& out) {
    require_function(f);
    if (ground_truth == !model_path.empty()) throw UsageError("pass exactly one of --ground-truth or --model");

    ExperimentConfig cfg;
    f.load_file(cfg);
    std::shared_ptr<const MlpModel> model;
    if (!model_path.empty()) {
        model = std::make_shared<const MlpModel>(load_model(model_path));
        if (!(f.o_dim->count() > 0)) cfg.dim = model->input_dim();
    }
    f.apply(cfg);
    if (model && model->input_dim() != cfg.dim) {
        throw Error(ErrorCode::InvalidDimension, "model has input dimension " + std::to_string(model->input_dim()) +
                                                     " but --dim is " + std::to_string(cfg.dim));
    }
    cfg.landscape = ground_truth ? Landscape::GroundTruth : Landscape::Dense;
    cfg = materialize(cfg);
    cfg.validate();

    BenchmarkSpec spec = experiment_spec(cfg.function, cfg.dim, cfg.half_width);
    if (model) {
        // The proxy is only meaningful on the box it was trained on.
        spec.lower = model->norm.input_center - model->norm.input_halfrange;
        spec.upper = model->norm.input_center + model->norm.input_halfrange;
        if (!spec.contains(spec.global_min_point)) {
            throw Error(ErrorCode::OutOfDomain, "the model's training box does not contain the global minimizer");
        }
    }
    const Objective objective = model ? Objective::proxy(model, spec) : Objective::true_function(spec);
    const OptResult r = run_optimizer(cfg.optimizer, cfg, objective, cfg.master_seed);

    json result{{"function", to_string(cfg.function)},
                {"dim", cfg.dim},
                {"objective", ground_truth ? "ground-truth" : "proxy"},
                {"optimizer", to_string(cfg.optimizer)},
                {"seed", cfg.master_seed},
                {"best_point", std::vector<double>(r.best_point.data(), r.best_point.data() + r.best_point.size())},
                {"best_value", r.best_value},
                {"true_value_at_best", spec(r.best_point)},
                {"distance", euclidean_distance(r.best_point, spec.global_min_point)},
                {"evaluations", r.evaluations},
                {"trajectory", r.trajectory}};
    const std::string text = result.dump(2) + "\n";
    std::cout << text;
    if (!out.empty()) {
        write_text(out, text);
        json resolved = to_json(cfg);
        for (const char* key : {"landscape", "seeds", "n", "sigma_frac", "layers", "epochs", "batch_size", "learning_rate"}) {
            resolved.erase(key);
        }
        resolved["objective"] = ground_truth ? "ground-truth" : "proxy";
        resolved["model"] = model_path.empty() ? json(nullptr) : json(model_path);
        Manifest{"optimize", f.config_path(), resolved, cfg.master_seed, out}.write(out + ".manifest.json");
    }
    return 0;
}

// --- table ------------------------------------------------------------------

int cmd_table(ExperimentFlags& f, const std::vector<std::string>& functions, const std::vector<std::string>& landscapes,
              const std::vector<std::string>& optimizers, int jobs, bool jobs_given, bool custom, bool quiet,
              const std::string& out_dir) {
    TableConfig cfg;
    cfg.jobs = default_jobs();
    f.load_file(cfg);
    if (f.o_dim->count()) cfg.dim = f.dim;
    f.apply(cfg.base);
    cfg.base.dim = cfg.dim;
    if (!functions.empty()) {
        cfg.functions.clear();
        for (const auto& s : functions) cfg.functions.push_back(parse_benchmark(s));
    }
    if (!landscapes.empty()) {
        cfg.landscapes.clear();
        for (const auto& s : landscapes) cfg.landscapes.push_back(parse_landscape(s));
    }
    if (!optimizers.empty()) {
        cfg.optimizers.clear();
        for (const auto& s : optimizers) cfg.optimizers.push_back(parse_optimizer(s));
    }
    if (jobs_given) cfg.jobs = jobs;
    if (!custom && cfg.dim != 2 && cfg.dim != 4 && cfg.dim != 10) {
        throw UsageError("table --dim must be 2, 4 or 10 (pass --custom for other dimensions)");
    }

    const Manifest manifest{"table", f.config_path(), to_json(cfg), cfg.base.master_seed, out_dir};
    const ProgressFn progress = quiet ? ProgressFn{} : ProgressFn([](const std::string& m) { std::cerr << m << "\n"; });
    const TableResult result = run_table(cfg, progress);

    const fs::path dir(out_dir);
    write_file(dir / "trials.csv", [&](std::ostream& os) { write_trials_csv(os, result.trials); });
    write_file(dir / "summary.csv", [&](std::ostream& os) { write_summary_csv(os, result.rows); });
    write_file(dir / "table.csv", [&](std::ostream& os) { write_table_layout_csv(os, result.rows); });
    write_file(dir / "proxies.csv", [&](std::ostream& os) { write_proxies_csv(os, result.proxies); });
    json resolved = manifest.config;
    json arch = json::object();
    for (const Benchmark b : cfg.functions) {
        const Architecture a = default_architecture(b, cfg.dim);
        arch[to_string(b)] = {{"layers", cfg.base.hidden_layers.value_or(a.hidden)},
                              {"epochs", cfg.base.epochs.value_or(a.epochs)},
                              {"half_width", cfg.base.half_width.value_or(experiment_half_width(b))}};
    }
    Manifest full = manifest;
    full.config["resolved_architectures"] = arch;
    full.write(dir / "metadata.json");

    print_table(std::cout, result.rows);
    bool any_error = false;
    for (const auto& r : result.rows) any_error |= !r.error.empty();
    if (any_error) std::cerr << "some rows have failed seeds; see summary.csv\n";
    return 0;
}

// --- figure-data ------------------------------------------------------------

int cmd_figure_data(ExperimentFlags& f, const std::string& out_dir) {
    require_function(f);
    ExperimentConfig cfg;
    cfg.landscape = Landscape::Dense;
    f.load_file(cfg);
    f.apply(cfg);
    if (cfg.dim != 2) throw UsageError("figure-data is unsupported for dim " + std::to_string(cfg.dim) + " (2D only)");
    const Manifest manifest{"figure-data", f.config_path(), to_json(materialize(cfg)), cfg.master_seed, out_dir};

    const FigureData data = export_figure_data(cfg, [](const std::string& m) { std::cerr << m << "\n"; });
    const fs::path dir(out_dir);
    write_file(dir / "raster.csv", [&](std::ostream& os) { write_raster_csv(os, data); });
    write_file(dir / "points.csv", [&](std::ostream& os) { write_points_csv(os, data); });
    manifest.write(dir / "manifest.json");
    std::cerr << "wrote " << data.raster.rows() << " raster rows and " << data.points.size() << " points to " << out_dir
              << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Benchmark harness for neural-network proxies inside PSO and GA optimization"};
    app.require_subcommand(1);

    // sample
    ExperimentFlags sample_flags;
    std::string scheme = "dense";
    std::string sample_out = "samples.csv";
    auto* sample = app.add_subcommand("sample", "Generate a labeled training set");
    sample_flags.add_config(*sample);
    sample_flags.add_problem(*sample);
    sample_flags.add_sampling(*sample);
    sample->add_option("--scheme", scheme, "dense | sparse | gaussian")
        ->check(CLI::IsMember({"dense", "sparse", "gaussian"}));
    sample->add_option("--out", sample_out, "Output CSV");

    // train
    ExperimentFlags train_flags;
    std::string samples_path;
    std::string model_out = "model.txt";
    auto* train_cmd = app.add_subcommand("train", "Train an MLP proxy on a samples CSV");
    train_flags.add_config(*train_cmd);
    train_flags.add_problem(*train_cmd);
    train_flags.add_training(*train_cmd);
    train_cmd->add_option("--samples", samples_path, "Samples CSV from `sample`")->required()->check(CLI::ExistingFile);
    train_cmd->add_option("--out", model_out, "Output model file");

    // optimize
    ExperimentFlags opt_flags;
    bool ground_truth = false;
    std::string model_path;
    std::string opt_out;
    auto* optimize = app.add_subcommand("optimize", "Run PSO or GA on the true function or a trained proxy");
    opt_flags.add_config(*optimize);
    opt_flags.add_problem(*optimize);
    opt_flags.add_optimizer_budget(*optimize);
    opt_flags.o_optimizer =
        optimize->add_option("--opt", opt_flags.optimizer, "pso | ga")->check(CLI::IsMember({"pso", "ga"}));
    optimize->add_flag("--ground-truth", ground_truth, "Optimize the true function");
    optimize->add_option("--model", model_path, "Optimize this trained proxy")->check(CLI::ExistingFile);
    optimize->add_option("--out", opt_out, "Also write the result JSON here (plus a manifest)");

    // table
    ExperimentFlags table_flags;
    std::vector<std::string> t_functions, t_landscapes, t_optimizers;
    int jobs = default_jobs();
    bool custom = false;
    bool quiet = false;
    std::string table_out = "results";
    auto* table = app.add_subcommand("table", "Run the full experiment grid for one dimension");
    table_flags.add_config(*table);
    table_flags.add_sampling(*table);
    table_flags.add_training(*table);
    table_flags.add_optimizer_budget(*table);
    table_flags.o_dim = table->add_option("--dim", table_flags.dim, "Dimension (2, 4 or 10)")->check(CLI::PositiveNumber);
    table_flags.o_seeds = table->add_option("--seeds", table_flags.seeds, "Seeds per cell")->check(CLI::PositiveNumber);
    table_flags.o_half_width =
        table->add_option("--half-width", table_flags.half_width, "Override every function's domain half-width")
            ->check(CLI::PositiveNumber);
    table->add_option("--function", t_functions, "Restrict to these functions")->delimiter(',');
    table->add_option("--landscape", t_landscapes, "Restrict to these landscapes")->delimiter(',');
    table->add_option("--opt", t_optimizers, "Restrict to these optimizers")->delimiter(',');
    auto* jobs_opt = table->add_option("--jobs", jobs, "Concurrent trials")->check(CLI::PositiveNumber);
    table->add_flag("--custom", custom, "Allow dimensions other than 2, 4 and 10");
    table->add_flag("--quiet", quiet, "No progress log");
    table->add_option("--out-dir", table_out, "Output directory");

    // figure-data
    ExperimentFlags fig_flags;
    std::string fig_out = "figure";
    auto* figure = app.add_subcommand("figure-data", "Export landscape rasters and per-seed solutions (2D)");
    fig_flags.add_config(*figure);
    fig_flags.add_problem(*figure);
    fig_flags.add_sampling(*figure);
    fig_flags.add_training(*figure);
    fig_flags.add_optimizer_budget(*figure);
    fig_flags.o_landscape =
        figure->add_option("--landscape", fig_flags.landscape, "dense | sparse | gaussian | ground-truth");
    fig_flags.o_seeds = figure->add_option("--seeds", fig_flags.seeds, "Seeds")->check(CLI::PositiveNumber);
    figure->add_option("--out-dir", fig_out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) return code;
        std::cerr << "\n" << app.help();
        return kExitUsage;
    }

    try {
        if (*sample) return cmd_sample(sample_flags, scheme, sample_out);
        if (*train_cmd) return cmd_train(train_flags, samples_path, model_out);
        if (*optimize) return cmd_optimize(opt_flags, ground_truth, model_path, opt_out);
        if (*table) {
            return cmd_table(table_flags, t_functions, t_landscapes, t_optimizers, jobs, jobs_opt->count() > 0, custom,
                             quiet, table_out);
        }
        if (*figure) return cmd_figure_data(fig_flags, fig_out);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n\n";
        std::cerr << app.help();
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}
