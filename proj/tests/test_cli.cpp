#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

const fs::path& workdir() {
    static const fs::path dir = [] {
        const fs::path d = fs::current_path() / "cli_work";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Run run(const std::string& args, const std::string& env = "") {
    const fs::path err = workdir() / "stderr.txt";
    const std::string cmd = "cd '" + workdir().string() + "' && " + env + " '" PROXYOPT_CLI_PATH "' " + args + " 2> '" +
                            err.string() + "'";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.err = slurp(err);
    return r;
}

std::size_t lines(const fs::path& p) {
    const std::string s = slurp(p);
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST_CASE("sample writes the requested scheme") {
    Run r = run("sample --function rosenbrock --dim 2 --scheme dense --n 10000 --out dense.csv");
    CHECK(r.code == 0);
    CHECK(lines(workdir() / "dense.csv") == 10001);
    CHECK(slurp(workdir() / "dense.csv").rfind("x0,x1,f\n", 0) == 0);

    r = run("sample --function rosenbrock --dim 2 --scheme sparse --n 10000 --out sparse.csv");
    CHECK(r.code == 0);
    CHECK(lines(workdir() / "sparse.csv") == 2501);

    const auto manifest = nlohmann::json::parse(slurp(workdir() / "sparse.csv.manifest.json"));
    CHECK(manifest["command"] == "sample");
    CHECK(manifest["version"] == "1.0.0");
    CHECK(manifest["config"]["function"] == "rosenbrock");
    CHECK(manifest.contains("master_seed"));
    CHECK(manifest.contains("started_at"));
    CHECK(manifest.contains("std_convention"));

    r = run("sample --function ackley --dim 10 --scheme gaussian --n 500 --seed 4 --out g.csv");
    CHECK(r.code == 0);
    CHECK(lines(workdir() / "g.csv") == 501);
}

TEST_CASE("usage errors exit with 2") {
    Run r = run("sample --dim 2");
    CHECK(r.code == 2);
    CHECK(r.err.find("--function") != std::string::npos);
    CHECK(r.err.find("Usage") != std::string::npos);

    CHECK(run("optimize --function ackley --ground-truth --iterations 0").code == 2);
    CHECK(run("optimize --function ackley").code == 2);
    CHECK(run("figure-data --function ackley --dim 4").code == 2);
    CHECK(run("table --dim 3").code == 2);
    CHECK(run("sample --function ackley --scheme lattice").code == 2);
    CHECK(run("").code == 2);
    CHECK(run("--help").code == 0);
}

TEST_CASE("domain errors exit with 1") {
    Run r = run("sample --function everest --dim 2");
    CHECK(r.code == 1);
    CHECK(r.err.find("everest") != std::string::npos);
    CHECK(run("sample --function rosenbrock --dim 1").code == 1);
    CHECK(run("sample --function rosenbrock --dim 2 --n 3").code == 1);
}

TEST_CASE("train with the default architecture") {
    REQUIRE(run("sample --function rosenbrock --dim 2 --scheme dense --n 400 --out small.csv").code == 0);
    const Run r = run("train --function rosenbrock --samples small.csv --epochs 1 --out m.txt");
    CHECK(r.code == 0);
    CHECK(slurp(workdir() / "m.txt").find("layer_sizes 5 2 15 50 15 1\n") != std::string::npos);
    CHECK(lines(workdir() / "m.txt.loss.csv") == 2);
    const auto manifest = nlohmann::json::parse(slurp(workdir() / "m.txt.manifest.json"));
    CHECK(manifest["command"] == "train");
    CHECK(manifest["config"]["epochs"] == 1);

    const Run custom = run("train --function rosenbrock --samples small.csv --layers 4,3 --epochs 3 --out m2.txt");
    CHECK(custom.code == 0);
    CHECK(slurp(workdir() / "m2.txt").find("layer_sizes 4 2 4 3 1\n") != std::string::npos);
    CHECK(lines(workdir() / "m2.txt.loss.csv") == 4);

    CHECK(run("train --function rastrigin --samples small.csv --dim 3 --epochs 1 --out bad.txt").code == 1);
}

TEST_CASE("corrupt samples are reported with their line") {
    std::ofstream(workdir() / "corrupt.csv") << "x0,x1,f\n0.1,0.2,1\n0.1,zzz,1\n";
    const Run r = run("train --function rosenbrock --samples corrupt.csv --epochs 1 --out c.txt");
    CHECK(r.code == 1);
    CHECK(r.err.find("line 3") != std::string::npos);
}

TEST_CASE("optimize is deterministic and honours seed precedence") {
    const std::string base = "optimize --function rastrigin --ground-truth --opt pso --iterations 20";
    const Run a = run(base + " --seed 5");
    const Run b = run(base + " --seed 5");
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    const auto j = nlohmann::json::parse(a.out);
    CHECK(j["evaluations"] == 800);
    CHECK(j["trajectory"].size() == 20);
    CHECK(j["objective"] == "ground-truth");

    CHECK(run(base, "PROXYOPT_SEED=5").out == a.out);
    CHECK(run(base + " --seed 5", "PROXYOPT_SEED=6").out == a.out);
    CHECK(run(base, "PROXYOPT_SEED=6").out != a.out);
    CHECK(run(base, "PROXYOPT_SEED=banana").code == 2);

    const Run ga = run("optimize --function ackley --ground-truth --opt ga --iterations 10 --population 20 --out ga.json");
    REQUIRE(ga.code == 0);
    CHECK(nlohmann::json::parse(ga.out)["evaluations"] == 20 + 9 * 19);
    CHECK(slurp(workdir() / "ga.json") == ga.out);
    // Feeding the manifest back reproduces the run.
    CHECK(run("optimize --config ga.json.manifest.json --ground-truth").out == ga.out);
}

TEST_CASE("optimize a trained proxy") {
    REQUIRE(run("sample --function ackley --dim 2 --scheme gaussian --n 400 --out a.csv").code == 0);
    REQUIRE(run("train --function ackley --samples a.csv --layers 8,8 --epochs 2 --out a.txt").code == 0);
    const Run r = run("optimize --function ackley --model a.txt --opt ga --iterations 5");
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["objective"] == "proxy");
    CHECK(j["dim"] == 2);
    for (const double x : j["best_point"]) CHECK(std::abs(x) <= 5.0);
    CHECK(run("optimize --function ackley --model a.txt --dim 3").code == 1);
}

TEST_CASE("table writes its artifacts") {
    const std::string args =
        "table --dim 2 --seeds 1 --n 100 --layers 4,4 --epochs 1 --iterations 3 --quiet --out-dir ";
    REQUIRE(run(args + "t1 --jobs 2").code == 0);
    for (const char* f : {"trials.csv", "summary.csv", "table.csv", "proxies.csv", "metadata.json"}) {
        CHECK(fs::exists(workdir() / "t1" / f));
    }
    CHECK(lines(workdir() / "t1" / "trials.csv") == 1 + 24);
    CHECK(lines(workdir() / "t1" / "summary.csv") == 1 + 24);
    CHECK(lines(workdir() / "t1" / "table.csv") == 1 + 4);
    CHECK(lines(workdir() / "t1" / "proxies.csv") == 1 + 9);
    const auto meta = nlohmann::json::parse(slurp(workdir() / "t1" / "metadata.json"));
    CHECK(meta["command"] == "table");
    CHECK(meta.contains("std_convention"));

    REQUIRE(run(args + "t2 --jobs 1").code == 0);
    CHECK(slurp(workdir() / "t1" / "trials.csv") == slurp(workdir() / "t2" / "trials.csv"));
    REQUIRE(run("table --config t1/metadata.json --quiet --out-dir t4").code == 0);
    CHECK(slurp(workdir() / "t1" / "trials.csv") == slurp(workdir() / "t4" / "trials.csv"));

    const Run sub = run("table --dim 2 --seeds 2 --n 100 --layers 4,4 --epochs 1 --iterations 3 --quiet "
                        "--function ackley --landscape ground-truth,dense --opt ga --out-dir t3");
    CHECK(sub.code == 0);
    CHECK(lines(workdir() / "t3" / "trials.csv") == 1 + 4);
    CHECK(sub.out.find("±") != std::string::npos);
}

TEST_CASE("figure-data writes raster and points") {
    const Run r = run("figure-data --function rastrigin --landscape sparse --seeds 2 --n 100 --layers 4,4 --epochs 1 "
                      "--iterations 3 --out-dir fig");
    REQUIRE(r.code == 0);
    CHECK(lines(workdir() / "fig" / "raster.csv") == 1 + 200 * 200);
    CHECK(slurp(workdir() / "fig" / "raster.csv").rfind("x0,x1,true,proxy_seed0,proxy_seed1\n", 0) == 0);
    CHECK(slurp(workdir() / "fig" / "points.csv").rfind("landscape,optimizer,seed,x0,x1,value,true_value,distance\n", 0) ==
          0);
    CHECK(lines(workdir() / "fig" / "points.csv") == 1 + 8);
    CHECK(fs::exists(workdir() / "fig" / "manifest.json"));
}
