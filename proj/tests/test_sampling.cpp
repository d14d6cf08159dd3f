#include <doctest.h>

#include <cmath>
#include <sstream>

#include "proxyopt/sampling.hpp"

using namespace proxyopt;

namespace {

bool rows_in_domain(const SampleSet& s) {
    for (Eigen::Index r = 0; r < s.size(); ++r) {
        if (!s.spec.contains(s.inputs.row(r).transpose())) return false;
    }
    return true;
}

double max_nearest_neighbor_gap(const Eigen::MatrixXd& pts) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < pts.rows(); ++j) {
            if (i != j) best = std::min(best, (pts.row(i) - pts.row(j)).squaredNorm());
        }
        worst = std::max(worst, best);
    }
    return std::sqrt(worst);
}

}  // namespace

TEST_CASE("grid_points_per_axis is an exact integer root") {
    CHECK(grid_points_per_axis(10000, 2) == 100);
    CHECK(grid_points_per_axis(2500, 2) == 50);
    CHECK(grid_points_per_axis(9999, 2) == 99);
    CHECK(grid_points_per_axis(10000, 4) == 10);
    CHECK(grid_points_per_axis(1000, 3) == 10);
    CHECK(grid_points_per_axis(1, 2) == 1);
    CHECK(grid_points_per_axis(0, 2) == 0);
}

TEST_CASE("dense 2D is a 100x100 grid") {
    const auto spec = make_spec(Benchmark::Rosenbrock, 2);
    const auto s = sample_dense(spec, 10000);
    CHECK(s.size() == 10000);
    CHECK(s.scheme == SamplingScheme::Dense);
    CHECK(rows_in_domain(s));
    CHECK(s.inputs(0, 0) == -2.048);
    CHECK(s.inputs(0, 1) == -2.048);
    CHECK(s.inputs(9999, 0) == 2.048);
    CHECK(s.inputs(9999, 1) == 2.048);
    for (Eigen::Index r = 0; r < s.size(); ++r) {
        CHECK(s.targets(r) == s.spec(s.inputs.row(r).transpose()));
    }
}

TEST_CASE("dense grid step") {
    const auto s = sample_dense(make_spec(Benchmark::Rastrigin, 2), 10000);
    // Adjacent rows differ in the last coordinate by one step.
    CHECK(s.inputs(1, 1) - s.inputs(0, 1) == doctest::Approx(10.24 / 99.0).epsilon(1e-12));
    CHECK(10.24 / 99.0 == doctest::Approx(0.10343).epsilon(1e-4));
}

TEST_CASE("dense rejects budgets too small for a grid") {
    CHECK_THROWS_AS(sample_dense(make_spec(Benchmark::Rastrigin, 2), 3), Error);
    try {
        sample_dense(make_spec(Benchmark::Rastrigin, 2), 3);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InsufficientSamples);
    }
}

TEST_CASE("dense in higher dimension uses exactly n Sobol points") {
    for (const int d : {4, 10}) {
        const auto s = sample_dense(make_spec(Benchmark::Ackley, d), 10000);
        CHECK(s.size() == 10000);
        CHECK(s.dim() == d);
        CHECK(rows_in_domain(s));
    }
}

TEST_CASE("Sobol points match unscrambled reference values") {
    // scipy.stats.qmc.Sobol(10, scramble=False).random(8)[1:8]
    const double expected[7][10] = {
        {0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5},
        {0.75, 0.25, 0.25, 0.25, 0.75, 0.75, 0.25, 0.75, 0.75, 0.75},
        {0.25, 0.75, 0.75, 0.75, 0.25, 0.25, 0.75, 0.25, 0.25, 0.25},
        {0.375, 0.375, 0.625, 0.875, 0.375, 0.125, 0.375, 0.875, 0.875, 0.625},
        {0.875, 0.875, 0.125, 0.375, 0.875, 0.625, 0.875, 0.375, 0.375, 0.125},
        {0.625, 0.125, 0.875, 0.625, 0.625, 0.875, 0.125, 0.125, 0.125, 0.375},
        {0.125, 0.625, 0.375, 0.125, 0.125, 0.375, 0.625, 0.625, 0.625, 0.875},
    };
    // Box [-0.5, 0.5]^10, so the unit-cube coordinate is x + 0.5.
    const Eigen::MatrixXd pts = space_filling_points(make_spec(Benchmark::Ackley, 10, 0.5), 7);
    for (int r = 0; r < 7; ++r) {
        for (int c = 0; c < 10; ++c) CHECK(pts(r, c) + 0.5 == expected[r][c]);
    }
}

TEST_CASE("sparse uses a quarter of the dense budget") {
    const auto s = sample_sparse(make_spec(Benchmark::Rosenbrock, 2), 10000);
    CHECK(s.size() == 2500);
    CHECK(s.scheme == SamplingScheme::Sparse);
    CHECK(s.inputs(1, 1) - s.inputs(0, 1) == doctest::Approx(4.096 / 49.0));
    CHECK(sample_sparse(make_spec(Benchmark::Rosenbrock, 2), 4).size() == 1);
    const auto high = sample_sparse(make_spec(Benchmark::Ackley, 10), 10000);
    CHECK(high.size() == 2500);
    CHECK(rows_in_domain(high));
    CHECK_THROWS_AS(sample_sparse(make_spec(Benchmark::Ackley, 2), 3), Error);
}

TEST_CASE("dense grid covers the box more tightly than sparse") {
    const auto spec = make_spec(Benchmark::Rastrigin, 2);
    CHECK(max_nearest_neighbor_gap(sample_dense(spec, 10000).inputs) <
          max_nearest_neighbor_gap(sample_sparse(spec, 10000).inputs));
}

TEST_CASE("gaussian sampling statistics") {
    SUBCASE("mean near the minimizer") {
        const auto s = sample_gaussian(make_spec(Benchmark::Rastrigin, 2), 10000, 0.1, 42);
        CHECK(rows_in_domain(s));
        const Eigen::VectorXd mean = s.inputs.colwise().mean().transpose();
        CHECK(mean.cwiseAbs().maxCoeff() < 0.05);
    }
    SUBCASE("per-axis std on the full Ackley box") {
        const auto s = sample_gaussian(make_spec(Benchmark::Ackley, 2), 10000, 0.1, 43);
        CHECK(rows_in_domain(s));
        for (int j = 0; j < 2; ++j) {
            const Eigen::ArrayXd col = s.inputs.col(j).array();
            const double sd = std::sqrt((col - col.mean()).square().mean());
            CHECK(std::abs(sd - 6.5536) / 6.5536 < 0.05);
        }
    }
    SUBCASE("two-sigma concentration") {
        for (const Benchmark b : {Benchmark::Rastrigin, Benchmark::Ackley}) {
            const auto spec = make_spec(b, 2);
            const auto s = sample_gaussian(spec, 10000, 0.1, 44);
            for (int j = 0; j < 2; ++j) {
                const double sigma = 0.1 * (spec.upper(j) - spec.lower(j));
                const double frac =
                    ((s.inputs.col(j).array() - spec.global_min_point(j)).abs() <= 2.0 * sigma).cast<double>().mean();
                CHECK(frac >= 0.93);
                CHECK(frac <= 0.97);
            }
        }
    }
    SUBCASE("rejection keeps every point in the box") {
        const auto s = sample_gaussian(make_spec(Benchmark::Rosenbrock, 4), 5000, 1.0, 45);
        CHECK(rows_in_domain(s));
    }
    SUBCASE("invalid sigma") {
        CHECK_THROWS_AS(sample_gaussian(make_spec(Benchmark::Ackley, 2), 10, 0.0, 1), Error);
        CHECK_THROWS_AS(sample_gaussian(make_spec(Benchmark::Ackley, 2), 10, -0.1, 1), Error);
        CHECK_THROWS_AS(sample_gaussian(make_spec(Benchmark::Ackley, 2), 10, 1.5, 1), Error);
    }
}

TEST_CASE("sampling is deterministic") {
    const auto spec = make_spec(Benchmark::Ackley, 4);
    const auto a = sample_gaussian(spec, 1000, 0.1, 9);
    const auto b = sample_gaussian(spec, 1000, 0.1, 9);
    CHECK(a.inputs == b.inputs);
    CHECK(a.targets == b.targets);
    CHECK(sample_gaussian(spec, 1000, 0.1, 10).inputs != a.inputs);
    CHECK(sample_dense(spec, 3000).inputs == sample_dense(spec, 3000).inputs);
}

TEST_CASE("label_samples") {
    const auto spec = make_spec(Benchmark::Rastrigin, 2);
    Eigen::MatrixXd rows(3, 2);
    rows << 0.0, 0.0, 0.5, 0.5, 1.0, 1.0;
    const auto y = label_samples(spec, rows);
    CHECK(y(0) == 0.0);
    CHECK(std::abs(y(1) - 40.5) < 1e-12);
    CHECK(label_samples(make_spec(Benchmark::Rosenbrock, 2), rows)(2) == 0.0);
    CHECK(std::abs(label_samples(make_spec(Benchmark::Ackley, 2), rows)(0)) < 1e-12);

    rows(2, 1) = 6.0;
    try {
        label_samples(spec, rows);
        FAIL("expected out-of-domain");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::OutOfDomain);
        CHECK(e.index() == std::optional<std::size_t>(2));
    }
}

TEST_CASE("samples CSV round trip is exact") {
    const auto s = sample_gaussian(make_spec(Benchmark::Ackley, 3), 200, 0.1, 3);
    std::stringstream ss;
    write_samples_csv(ss, s);
    const std::string text = ss.str();
    CHECK(text.rfind("x0,x1,x2,f\n", 0) == 0);
    const auto table = read_samples_csv(ss);
    CHECK(table.inputs == s.inputs);
    CHECK(table.targets == s.targets);
}

TEST_CASE("samples CSV errors name the line") {
    std::istringstream bad("x0,x1,f\n1,2,3\n1,oops,3\n");
    try {
        read_samples_csv(bad);
        FAIL("expected parse error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Parse);
        CHECK(e.index() == std::optional<std::size_t>(3));
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    std::istringstream short_row("x0,x1,f\n1,2\n");
    CHECK_THROWS_AS(read_samples_csv(short_row), Error);
    std::istringstream no_header("a,b\n");
    CHECK_THROWS_AS(read_samples_csv(no_header), Error);
}
