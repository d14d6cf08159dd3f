#include "proxyopt/config_json.hpp"

#include <set>

namespace proxyopt {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
    if (!j.is_object()) throw Error(ErrorCode::Parse, where + ": expected a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (!known.count(key)) throw Error(ErrorCode::Parse, where + ": unknown key '" + key + "'");
    }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
    if (j.contains(key)) {
        try {
            out = j.at(key).get<T>();
        } catch (const json::exception& e) {
            throw Error(ErrorCode::Parse, std::string("config key '") + key + "': " + e.what());
        }
    }
}

template <typename T>
void read_optional(const json& j, const char* key, std::optional<T>& out) {
    if (!j.contains(key)) return;
    if (j.at(key).is_null()) {
        out.reset();
        return;
    }
    T value{};
    read(j, key, value);
    out = value;
}

template <typename T>
json optional_json(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

}  // namespace

json to_json(const PsoConfig& c) {
    return {{"swarm_size", c.swarm_size}, {"iterations", c.iterations}, {"inertia", c.inertia},
            {"cognitive", c.cognitive},   {"social", c.social},         {"per_dimension_random", c.per_dimension_random}};
}

json to_json(const GaConfig& c) {
    return {{"population_size", c.population_size},
            {"generations", c.generations},
            {"tournament_size", c.tournament_size},
            {"crossover_prob", c.crossover_prob},
            {"mutation_prob", optional_json(c.mutation_prob)},
            {"mutation_sigma_frac", c.mutation_sigma_frac},
            {"blend_alpha", c.blend_alpha},
            {"elitism_count", c.elitism_count}};
}

json to_json(const ExperimentConfig& c) {
    return {{"function", to_string(c.function)},
            {"dim", c.dim},
            {"landscape", to_string(c.landscape)},
            {"optimizer", to_string(c.optimizer)},
            {"seeds", c.n_seeds},
            {"n", c.n_samples},
            {"sigma_frac", c.sigma_frac},
            {"half_width", optional_json(c.half_width)},
            {"layers", optional_json(c.hidden_layers)},
            {"epochs", optional_json(c.epochs)},
            {"batch_size", c.batch_size},
            {"learning_rate", c.learning_rate},
            {"master_seed", c.master_seed},
            {"pso", to_json(c.pso)},
            {"ga", to_json(c.ga)}};
}

json to_json(const TableConfig& c) {
    json j = to_json(c.base);
    j["dim"] = c.dim;
    j.erase("function");
    j.erase("landscape");
    j.erase("optimizer");
    json functions = json::array(), landscapes = json::array(), optimizers = json::array();
    for (auto f : c.functions) functions.push_back(to_string(f));
    for (auto l : c.landscapes) landscapes.push_back(to_string(l));
    for (auto o : c.optimizers) optimizers.push_back(to_string(o));
    j["functions"] = functions;
    j["landscapes"] = landscapes;
    j["optimizers"] = optimizers;
    j["jobs"] = c.jobs;
    return j;
}

void update_from_json(PsoConfig& c, const json& j) {
    reject_unknown(j, {"swarm_size", "iterations", "inertia", "cognitive", "social", "per_dimension_random", "seed"},
                   "pso");
    read(j, "swarm_size", c.swarm_size);
    read(j, "iterations", c.iterations);
    read(j, "inertia", c.inertia);
    read(j, "cognitive", c.cognitive);
    read(j, "social", c.social);
    read(j, "per_dimension_random", c.per_dimension_random);
    read(j, "seed", c.seed);
}

void update_from_json(GaConfig& c, const json& j) {
    reject_unknown(j,
                   {"population_size", "generations", "tournament_size", "crossover_prob", "mutation_prob",
                    "mutation_sigma_frac", "blend_alpha", "elitism_count", "seed"},
                   "ga");
    read(j, "population_size", c.population_size);
    read(j, "generations", c.generations);
    read(j, "tournament_size", c.tournament_size);
    read(j, "crossover_prob", c.crossover_prob);
    read_optional(j, "mutation_prob", c.mutation_prob);
    read(j, "mutation_sigma_frac", c.mutation_sigma_frac);
    read(j, "blend_alpha", c.blend_alpha);
    read(j, "elitism_count", c.elitism_count);
    read(j, "seed", c.seed);
}

namespace {

const std::set<std::string> kExperimentKeys{"function", "dim",          "landscape",     "optimizer", "seeds",
                                            "n",        "sigma_frac",   "half_width",    "layers",    "epochs",
                                            "batch_size", "learning_rate", "master_seed", "pso",       "ga"};

void read_experiment_fields(ExperimentConfig& c, const json& j) {
    std::string name;
    if (j.contains("function")) {
        read(j, "function", name);
        c.function = parse_benchmark(name);
    }
    if (j.contains("landscape")) {
        read(j, "landscape", name);
        c.landscape = parse_landscape(name);
    }
    if (j.contains("optimizer")) {
        read(j, "optimizer", name);
        c.optimizer = parse_optimizer(name);
    }
    read(j, "dim", c.dim);
    read(j, "seeds", c.n_seeds);
    read(j, "n", c.n_samples);
    read(j, "sigma_frac", c.sigma_frac);
    read_optional(j, "half_width", c.half_width);
    read_optional(j, "layers", c.hidden_layers);
    read_optional(j, "epochs", c.epochs);
    read(j, "batch_size", c.batch_size);
    read(j, "learning_rate", c.learning_rate);
    read(j, "master_seed", c.master_seed);
    if (j.contains("pso")) update_from_json(c.pso, j.at("pso"));
    if (j.contains("ga")) update_from_json(c.ga, j.at("ga"));
}

}  // namespace

void update_from_json(ExperimentConfig& c, const json& j) {
    reject_unknown(j, kExperimentKeys, "config");
    read_experiment_fields(c, j);
}

void update_from_json(TableConfig& c, const json& j) {
    auto known = kExperimentKeys;
    known.insert({"functions", "landscapes", "optimizers", "jobs"});
    reject_unknown(j, known, "config");
    read_experiment_fields(c.base, j);
    read(j, "dim", c.dim);
    c.base.dim = c.dim;
    std::vector<std::string> names;
    if (j.contains("functions")) {
        read(j, "functions", names);
        c.functions.clear();
        for (const auto& n : names) c.functions.push_back(parse_benchmark(n));
    }
    if (j.contains("landscapes")) {
        read(j, "landscapes", names);
        c.landscapes.clear();
        for (const auto& n : names) c.landscapes.push_back(parse_landscape(n));
    }
    if (j.contains("optimizers")) {
        read(j, "optimizers", names);
        c.optimizers.clear();
        for (const auto& n : names) c.optimizers.push_back(parse_optimizer(n));
    }
    read(j, "jobs", c.jobs);
}

ExperimentConfig materialize(ExperimentConfig c) {
    const Architecture arch = default_architecture(c.function, c.dim);
    if (!c.half_width) c.half_width = experiment_half_width(c.function);
    if (!c.hidden_layers) c.hidden_layers = arch.hidden;
    if (!c.epochs) c.epochs = arch.epochs;
    if (!c.ga.mutation_prob) c.ga.mutation_prob = c.ga.resolved_mutation_prob(c.dim);
    return c;
}

}  // namespace proxyopt
