#include <doctest.h>

#include <cmath>
#include <memory>

#include "proxyopt/ga.hpp"
#include "proxyopt/objective.hpp"
#include "proxyopt/pso.hpp"
#include "proxyopt/sampling.hpp"
#include "proxyopt/train.hpp"

using namespace proxyopt;

namespace {

/// Forwards to a benchmark while counting calls and recording box violations.
struct Recorder {
    BenchmarkSpec spec;
    std::shared_ptr<std::size_t> calls = std::make_shared<std::size_t>(0);
    std::shared_ptr<std::size_t> outside = std::make_shared<std::size_t>(0);

    double operator()(const Eigen::VectorXd& x) const {
        ++*calls;
        if (!spec.contains(x)) ++*outside;
        return spec(x);
    }
    const Eigen::VectorXd& lower() const { return spec.lower; }
    const Eigen::VectorXd& upper() const { return spec.upper; }
};

struct Flat {
    Eigen::VectorXd lo = Eigen::VectorXd::Constant(3, -1.0);
    Eigen::VectorXd hi = Eigen::VectorXd::Constant(3, 1.0);
    double operator()(const Eigen::VectorXd&) const { return 7.0; }
    const Eigen::VectorXd& lower() const { return lo; }
    const Eigen::VectorXd& upper() const { return hi; }
};

bool non_increasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i] > v[i - 1]) return false;
    }
    return true;
}

std::shared_ptr<const MlpModel> small_proxy(const BenchmarkSpec& spec) {
    const auto s = sample_dense(spec, 400);
    TrainConfig cfg;
    cfg.epochs = 2;
    return std::make_shared<const MlpModel>(train(build_mlp({spec.dim, 8, 8, 1}, 3), s, cfg).model);
}

}  // namespace

TEST_CASE("PSO velocity update by hand") {
    const Eigen::VectorXd v = Eigen::VectorXd::Constant(1, 1.0);
    const Eigen::VectorXd x = Eigen::VectorXd::Constant(1, 2.0);
    const Eigen::VectorXd p = Eigen::VectorXd::Constant(1, 1.0);
    const Eigen::VectorXd g = Eigen::VectorXd::Constant(1, 0.0);
    const Eigen::VectorXd vn = pso_velocity(v, x, p, g, 0.5, 1.0, 1.0, 0.3, 0.6);
    CHECK(vn(0) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(x(0) + vn(0) == doctest::Approx(1.0).epsilon(1e-15));

    const Eigen::Array2d r1(0.3, 0.0);
    const Eigen::Array2d r2(0.6, 0.0);
    const Eigen::VectorXd v2 = pso_velocity(Eigen::Vector2d(1.0, 1.0), Eigen::Vector2d(2.0, 2.0),
                                            Eigen::Vector2d(1.0, 1.0), Eigen::Vector2d(0.0, 0.0), 0.5, 1.0, 1.0, r1, r2);
    CHECK(v2(0) == doctest::Approx(-1.0));
    CHECK(v2(1) == doctest::Approx(0.5));
}

TEST_CASE("PSO with unit inertia and no attraction drifts") {
    const auto spec = make_spec(Benchmark::Rastrigin, 2);
    const auto f = Objective::true_function(spec);
    PsoConfig cfg;
    cfg.inertia = 1.0;
    cfg.cognitive = 0.0;
    cfg.social = 0.0;
    std::mt19937_64 rng(1);
    PsoState s = pso_init(cfg, f, rng);
    for (int step = 0; step < 3; ++step) {
        const Eigen::MatrixXd x0 = s.positions;
        const Eigen::MatrixXd v0 = s.velocities;
        pso_step(s, cfg, f, rng);
        for (Eigen::Index i = 0; i < x0.rows(); ++i) {
            for (Eigen::Index j = 0; j < x0.cols(); ++j) {
                const double free = x0(i, j) + v0(i, j);
                if (free > spec.lower(j) && free < spec.upper(j)) {
                    CHECK(s.positions(i, j) == doctest::Approx(free).epsilon(1e-14));
                    CHECK(s.velocities(i, j) == v0(i, j));
                } else {
                    CHECK(s.velocities(i, j) == 0.0);
                }
            }
        }
    }
}

TEST_CASE("PSO invariants") {
    for (const Benchmark b : {Benchmark::Rosenbrock, Benchmark::Rastrigin, Benchmark::Ackley}) {
        for (const bool per_dim : {false, true}) {
            Recorder f{make_spec(b, 4)};
            PsoConfig cfg;
            cfg.iterations = 60;
            cfg.per_dimension_random = per_dim;
            cfg.seed = 17;
            std::mt19937_64 rng(cfg.seed);
            PsoState s = pso_init(cfg, f, rng);
            Eigen::VectorXd history_min(cfg.swarm_size);
            for (int i = 0; i < cfg.swarm_size; ++i) history_min(i) = f.spec(s.positions.row(i).transpose());
            double last_gbest = s.gbest_value;
            while (s.iteration < cfg.iterations) {
                pso_step(s, cfg, f, rng);
                for (int i = 0; i < cfg.swarm_size; ++i) {
                    history_min(i) = std::min(history_min(i), f.spec(s.positions.row(i).transpose()));
                }
                CHECK(s.gbest_value <= s.pbest_values.minCoeff());
                CHECK(s.gbest_value <= last_gbest);
                CHECK((s.pbest_values.array() <= history_min.array()).all());
                CHECK((s.positions.rowwise() - f.spec.lower.transpose()).minCoeff() >= 0.0);
                CHECK((f.spec.upper.transpose().replicate(cfg.swarm_size, 1) - s.positions).minCoeff() >= 0.0);
                last_gbest = s.gbest_value;
            }
            CHECK(*f.outside == 0);
            CHECK(*f.calls == s.evaluations);

            Recorder g{make_spec(b, 4)};
            const OptResult r = pso_run(cfg, g);
            CHECK(*g.outside == 0);
            CHECK(r.trajectory.size() == 60);
            CHECK(non_increasing(r.trajectory));
            CHECK(r.best_value == r.trajectory.back());
            CHECK(r.best_value == g.spec(r.best_point));
            CHECK(r.evaluations == 40 * 60);
            CHECK(r.best_value == s.gbest_value);
        }
    }
}

TEST_CASE("GA operators") {
    std::mt19937_64 rng(3);
    const Eigen::Vector3d a(0.0, 1.0, -2.0);
    const Eigen::Vector3d b(1.0, 1.0, 2.0);
    for (int k = 0; k < 200; ++k) {
        const auto [c1, c2] = blend_crossover(a, b, 0.5, rng);
        for (int j = 0; j < 3; ++j) {
            const double lo = std::min(a(j), b(j));
            const double hi = std::max(a(j), b(j));
            const double ext = 0.5 * (hi - lo);
            CHECK(c1(j) >= lo - ext);
            CHECK(c1(j) <= hi + ext);
            CHECK(c2(j) >= lo - ext);
            CHECK(c2(j) <= hi + ext);
        }
        CHECK(c1(1) == 1.0);
    }
    Eigen::VectorXd values(5);
    values << 3.0, 1.0, 4.0, 0.5, 9.0;
    // Entrants are drawn with replacement: the best wins with probability 1 - (4/5)^3.
    int best_wins = 0;
    for (int k = 0; k < 4000; ++k) best_wins += detail::tournament(values, 3, rng) == 3;
    CHECK(best_wins / 4000.0 == doctest::Approx(0.488).epsilon(0.08));
    for (int k = 0; k < 50; ++k) CHECK(detail::tournament(values, 1000, rng) == 3);
}

TEST_CASE("GA invariants") {
    for (const Benchmark b : {Benchmark::Rosenbrock, Benchmark::Rastrigin, Benchmark::Ackley}) {
        Recorder f{make_spec(b, 4)};
        GaConfig cfg;
        cfg.generations = 60;
        cfg.seed = 5;
        std::mt19937_64 rng(cfg.seed);
        GaState s = ga_init(cfg, f, rng);
        double last = s.best_value;
        while (s.generation < cfg.generations) {
            const Eigen::VectorXd prev_best = s.best_point;
            ga_step(s, cfg, f, rng);
            CHECK(s.population.rows() == cfg.population_size);
            CHECK(s.values.size() == cfg.population_size);
            CHECK(s.best_value <= last);
            CHECK(s.best_value == s.values.minCoeff());
            bool elite_kept = false;
            for (Eigen::Index i = 0; i < s.population.rows(); ++i) {
                elite_kept = elite_kept || s.population.row(i).transpose() == prev_best;
            }
            CHECK(elite_kept);
            last = s.best_value;
        }
        CHECK(*f.outside == 0);
        CHECK(*f.calls == s.evaluations);
        CHECK(s.evaluations == 50 + 59 * 49);

        const OptResult r = ga_run(cfg, f);
        CHECK(r.trajectory.size() == 60);
        CHECK(non_increasing(r.trajectory));
        CHECK(r.best_value == f.spec(r.best_point));
        CHECK(r.best_value == s.best_value);
    }
}

TEST_CASE("GA with maximal elitism evaluates one child per generation") {
    Recorder f{make_spec(Benchmark::Ackley, 2)};
    GaConfig cfg;
    cfg.elitism_count = cfg.population_size - 1;
    cfg.generations = 20;
    const OptResult r = ga_run(cfg, f);
    CHECK(r.evaluations == 50 + 19);
    CHECK(non_increasing(r.trajectory));
}

TEST_CASE("optimizer configuration errors") {
    const auto f = Objective::true_function(make_spec(Benchmark::Ackley, 2));
    PsoConfig p;
    p.iterations = 0;
    CHECK_THROWS_AS(pso_run(p, f), Error);
    p = {};
    p.swarm_size = 1;
    CHECK_THROWS_AS(pso_run(p, f), Error);
    GaConfig g;
    g.population_size = 51;
    CHECK_THROWS_AS(ga_run(g, f), Error);
    g = {};
    g.tournament_size = 51;
    CHECK_THROWS_AS(ga_run(g, f), Error);
    g = {};
    g.elitism_count = 50;
    CHECK_THROWS_AS(ga_run(g, f), Error);
    g = {};
    g.generations = 0;
    CHECK_THROWS_AS(ga_run(g, f), Error);
}

TEST_CASE("runs are reproducible per seed") {
    const auto f = Objective::true_function(make_spec(Benchmark::Rastrigin, 4));
    PsoConfig p;
    p.iterations = 30;
    p.seed = 99;
    const OptResult a = pso_run(p, f);
    const OptResult b = pso_run(p, f);
    CHECK(a.best_point == b.best_point);
    CHECK(a.trajectory == b.trajectory);
    p.seed = 100;
    CHECK(pso_run(p, f).best_point != a.best_point);

    GaConfig g;
    g.generations = 30;
    g.seed = 99;
    const OptResult c = ga_run(g, f);
    const OptResult d = ga_run(g, f);
    CHECK(c.best_point == d.best_point);
    CHECK(c.trajectory == d.trajectory);
    CHECK(c.seed == 99);
}

TEST_CASE("true and proxy objectives get the same budget") {
    const auto spec = make_spec(Benchmark::Rosenbrock, 2);
    const auto truth = Objective::true_function(spec);
    const auto proxy = Objective::proxy(small_proxy(spec), spec);
    CHECK(proxy.kind() == Objective::Kind::Proxy);
    const PsoConfig p;
    CHECK(pso_run(p, truth).evaluations == 8000);
    CHECK(pso_run(p, proxy).evaluations == 8000);
    const GaConfig g;
    CHECK(ga_run(g, truth).evaluations == 9801);
    CHECK(ga_run(g, proxy).evaluations == 9801);
}

TEST_CASE("objective checks dimension and domain") {
    const auto spec = make_spec(Benchmark::Rosenbrock, 2);
    CHECK_THROWS_AS(Objective::proxy(small_proxy(make_spec(Benchmark::Rosenbrock, 3)), spec), Error);
    const auto truth = Objective::true_function(spec);
    CHECK(evaluate(truth, Eigen::Vector2d(1.0, 1.0)) == 0.0);
    try {
        truth(Eigen::Vector2d(3.0, 0.0));
        FAIL("expected out-of-domain");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::OutOfDomain);
    }
}

TEST_CASE("constant objective") {
    const Flat f;
    const OptResult p = pso_run(PsoConfig{}, f);
    CHECK(p.best_value == 7.0);
    CHECK(p.best_point.size() == 3);
    CHECK(p.best_point.cwiseAbs().maxCoeff() <= 1.0);
    CHECK(non_increasing(p.trajectory));
    const OptResult g = ga_run(GaConfig{}, f);
    CHECK(g.best_value == 7.0);
    CHECK(g.best_point.cwiseAbs().maxCoeff() <= 1.0);
}

TEST_CASE("ground truth PSO reaches each 2D minimizer") {
    for (const Benchmark b : {Benchmark::Rosenbrock, Benchmark::Rastrigin, Benchmark::Ackley}) {
        const auto spec = make_spec(b, 2);
        PsoConfig p;
        p.seed = 1;
        const OptResult r = pso_run(p, Objective::true_function(spec));
        CAPTURE(to_string(b));
        CHECK((r.best_point - spec.global_min_point).norm() < 0.05);
    }
}
