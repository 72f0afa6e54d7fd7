#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <doctest.h>
#include <json.hpp>

#include "cli.hpp"
#include "oracles.hpp"
#include "synth.hpp"

namespace fs = std::filesystem;
using oracle::rel_err;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::initializer_list<const char*> args) {
    std::vector<const char*> argv{"gyule"};
    argv.insert(argv.end(), args.begin(), args.end());
    std::ostringstream out, err;
    const int code = gyule::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> tsv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, '\t')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("gyule_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const char* name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("pmf rows") {
    // beta = lambda: 1/(n(n+1)).
    auto r = run({"pmf", "--beta", "1", "--lambda", "1", "--mu", "0", "--n-max", "3"});
    REQUIRE(r.code == 0);
    CHECK(r.out == "n\tprobability\n0\t0\n1\t0.5\n2\t0.1666666667\n3\t0.08333333333\n");

    // lambda = 0.5: rho = 2, P(n) = 2 B(n, 3).
    r = run({"pmf", "--beta", "1", "--lambda", "0.5", "--mu", "0", "--n-max", "3"});
    REQUIRE(r.code == 0);
    const auto rows = tsv(r.out);
    REQUIRE(rows.size() == 5);
    CHECK(std::stod(rows[2][1]) == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
    CHECK(std::stod(rows[3][1]) == doctest::Approx(1.0 / 6.0).epsilon(1e-9));
    CHECK(std::stod(rows[4][1]) == doctest::Approx(1.0 / 15.0).epsilon(1e-9));

    r = run({"pmf", "--beta", "1", "--lambda", "1", "--mu", "0", "--n-min", "2", "--n-max", "3"});
    CHECK(tsv(r.out).size() == 3);
}

TEST_CASE("critical pmf at zero") {
    auto r = run({"pmf", "--beta", "1", "--lambda", "0.5", "--mu", "0.5", "--n-max", "0", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["command"] == "pmf");
    REQUIRE(doc["records"].size() == 1);
    CHECK(doc["records"][0]["n"] == 0);
    CHECK(rel_err(doc["records"][0]["probability"].get<double>(), oracle::hyp_u(1, 0, 2)) < 1e-9);
}

TEST_CASE("json documents parse") {
    for (auto args : {std::vector<const char*>{"moments", "--beta", "1", "--lambda", "0.5", "--mu", "0.25"},
                      {"moments", "--beta", "0.5", "--lambda", "1", "--mu", "0"},
                      {"pgf", "--beta", "1", "--lambda", "1", "--mu", "0.5", "--u", "0.5", "--u", "-1"},
                      {"tail", "--beta", "2", "--lambda", "4", "--mu", "3"},
                      {"compare-yule", "--beta", "2", "--lambda", "4", "--mu", "3", "--n-max", "50"},
                      {"sample", "--beta", "1", "--lambda", "1", "--mu", "0.5", "--count", "1000"}}) {
        std::vector<const char*> argv{"gyule"};
        argv.insert(argv.end(), args.begin(), args.end());
        argv.push_back("--format");
        argv.push_back("json");
        std::ostringstream out, err;
        REQUIRE(gyule::cli::run(static_cast<int>(argv.size()), argv.data(), out, err) == 0);
        CAPTURE(args[0]);
        CHECK(nlohmann::json::accept(out.str()));
        CHECK(nlohmann::json::parse(out.str())["command"] == args[0]);
    }
}

TEST_CASE("moments output") {
    auto r = run({"moments", "--beta", "1", "--lambda", "0.5", "--mu", "0.25", "--format", "json"});
    auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["regime"] == "supercritical");
    CHECK(doc["mean"].get<double>() == doctest::Approx(4.0 / 3.0).epsilon(1e-9));

    // beta <= delta: infinite mean, null in JSON.
    r = run({"moments", "--beta", "0.5", "--lambda", "1", "--mu", "0", "--format", "json"});
    doc = nlohmann::json::parse(r.out);
    CHECK(doc["mean"].is_null());
    CHECK(doc["mean_infinite"] == true);
    r = run({"moments", "--beta", "0.5", "--lambda", "1", "--mu", "0"});
    CHECK(tsv(r.out)[1][2] == "inf");
}

TEST_CASE("tail and compare-yule") {
    auto r = run({"tail", "--beta", "2", "--lambda", "4", "--mu", "3", "--format", "json"});
    auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["slope"].get<double>() == -3.0);
    CHECK(doc["beta_over_delta"].get<double>() == 2.0);

    r = run({"compare-yule", "--beta", "2", "--lambda", "4", "--mu", "3", "--n-min", "9000", "--n-max", "10000"});
    const auto rows = tsv(r.out);
    CHECK(rows[0] == std::vector<std::string>{"n", "pmf", "yule_pmf", "ratio", "ratio_asymptotic"});
    REQUIRE(rows.size() == 1002);
    const double exact = std::stod(rows.back()[3]);
    const double approx = std::stod(rows.back()[4]);
    CHECK(rel_err(approx, exact) < 0.005);

    // The tail needs delta > 0.
    CHECK(run({"tail", "--beta", "1", "--lambda", "0.5", "--mu", "1"}).code == gyule::cli::kExitFailure);
}

TEST_CASE("usage errors") {
    CHECK(run({}).code == gyule::cli::kExitUsage);
    CHECK(run({"bogus"}).code == gyule::cli::kExitUsage);
    auto r = run({"pmf", "--beta", "1", "--lambda", "1", "--n-max", "3"});
    CHECK(r.code == gyule::cli::kExitUsage);
    CHECK(r.err.find("--mu") != std::string::npos);
    CHECK(r.out.empty());
    CHECK(run({"pmf", "--beta", "1", "--lambda", "1", "--mu", "0", "--n-max", "3", "--format", "xml"}).code ==
          gyule::cli::kExitUsage);
    CHECK(run({"pmf", "--beta", "x", "--lambda", "1", "--mu", "0", "--n-max", "3"}).code == gyule::cli::kExitUsage);
    CHECK(run({"simulate", "--beta", "1", "--lambda", "1", "--mu", "0"}).code == gyule::cli::kExitUsage);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("failure messages are distinct") {
    TempDir dir;
    const auto bad = dir.file("bad.csv");
    std::ofstream(bad) << "n,count\n1,5\n2,x\n";

    const auto params = run({"pmf", "--beta", "-1", "--lambda", "1", "--mu", "0", "--n-max", "2"});
    const auto missing = run({"fit", "--input", dir.file("none.csv").c_str()});
    const auto malformed = run({"fit", "--input", bad.c_str()});
    const auto unwritable =
        run({"pmf", "--beta", "1", "--lambda", "1", "--mu", "0", "--n-max", "2", "--output", "/nonexistent/dir/x"});
    for (const auto* r : {&params, &missing, &malformed, &unwritable}) {
        CHECK(r->code == gyule::cli::kExitFailure);
        CHECK(r->out.empty());
        CHECK_FALSE(r->err.empty());
    }
    CHECK(params.err != missing.err);
    CHECK(missing.err != malformed.err);
    CHECK(malformed.err.find("line 3") != std::string::npos);
    CHECK(unwritable.err != missing.err);
}

TEST_CASE("fit round trip through a file") {
    TempDir dir;
    const auto path = dir.file("hist.csv");
    {
        std::ofstream f(path);
        gyule::write_histogram_csv(f, synth::multinomial(gyule::ModelParams(1, 0.5, 0.25), 1000000, 9));
    }
    auto r = run({"fit", "--input", path.c_str(), "--method", "mle", "--format", "json"});
    REQUIRE(r.code == 0);
    auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["method"] == "mle");
    CHECK(rel_err(doc["beta_over_lambda"].get<double>(), 2.0) < 0.15);
    CHECK(rel_err(doc["mu_over_lambda"].get<double>(), 0.5) < 0.15);
    CHECK(doc["lambda"].get<double>() == 1.0);

    r = run({"fit", "--input", path.c_str(), "--method", "mle", "--lambda-scale", "4", "--format", "json"});
    CHECK(nlohmann::json::parse(r.out)["lambda"].get<double>() == 4.0);

    // Degenerate input is a fit failure.
    const auto one = dir.file("one.csv");
    std::ofstream(one) << "n,count\n3,100\n";
    CHECK(run({"fit", "--input", one.c_str()}).code == gyule::cli::kExitFailure);

    // Regression over a Yule-Simon histogram.
    const auto ys = dir.file("ys.csv");
    {
        std::ofstream f(ys);
        gyule::write_histogram_csv(f, synth::rounded(gyule::ModelParams(1, 1, 0), 1e12, 3000));
    }
    r = run({"fit", "--input", ys.c_str(), "--method", "regression", "--n-min", "100", "--n-max", "2000",
             "--format", "json"});
    REQUIRE(r.code == 0);
    doc = nlohmann::json::parse(r.out);
    CHECK(rel_err(doc["slope"].get<double>(), -2.0) < 0.01);
    CHECK(doc["mu_identifiable"] == false);
}

TEST_CASE("gof subcommand") {
    TempDir dir;
    const auto path = dir.file("hist.csv");
    {
        std::ofstream f(path);
        gyule::write_histogram_csv(f, synth::multinomial(gyule::ModelParams(1, 0.3, 0.8), 100000, 10));
    }
    auto r = run({"gof", "--beta", "1", "--lambda", "0.3", "--mu", "0.8", "--input", path.c_str(), "--include-zero",
                  "--format", "json"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["p_value"].get<double>() > 0.0);
    CHECK(doc["dof"].get<int>() > 3);
}

TEST_CASE("simulate writes files and is byte stable") {
    TempDir dir;
    const auto ev1 = dir.file("ev1.csv"), sn1 = dir.file("sn1.csv");
    const auto ev2 = dir.file("ev2.csv"), sn2 = dir.file("sn2.csv");
    auto a = run({"simulate", "--beta", "0.1", "--lambda", "1.1", "--mu", "1", "--t-max", "30", "--seed", "5",
                  "--events", ev1.c_str(), "--snapshot", sn1.c_str()});
    auto b = run({"simulate", "--beta", "0.1", "--lambda", "1.1", "--mu", "1", "--t-max", "30", "--seed", "5",
                  "--events", ev2.c_str(), "--snapshot", sn2.c_str(), "--workers", "2"});
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    CHECK(a.out == b.out);
    CHECK(slurp(ev1) == slurp(ev2));
    CHECK(slurp(sn1) == slurp(sn2));
    CHECK(slurp(ev1).rfind("time,page_id,kind\n", 0) == 0);
    CHECK(slurp(sn1).rfind("page_id,birth_time,inlink_count\n", 0) == 0);

    const auto rows = tsv(a.out);
    REQUIRE(rows.size() == 2);
    // One line per page in the snapshot, plus the header.
    const auto snap = slurp(sn1);
    CHECK(std::count(snap.begin(), snap.end(), '\n') == std::stol(rows[1][2]) + 1);

    auto c = run({"simulate", "--beta", "1", "--lambda", "1.1", "--mu", "1", "--t-max", "3", "--replicates", "4",
                  "--workers", "3", "--format", "json"});
    auto d = run({"simulate", "--beta", "1", "--lambda", "1.1", "--mu", "1", "--t-max", "3", "--replicates", "4",
                  "--format", "json"});
    CHECK(c.out == d.out);
    CHECK(nlohmann::json::parse(c.out)["records"].size() == 4);

    auto capped = run({"simulate", "--beta", "1", "--lambda", "1", "--mu", "0", "--t-max", "50", "--max-events", "100"});
    CHECK(capped.code == gyule::cli::kExitFailure);
}

TEST_CASE("output file and determinism") {
    TempDir dir;
    const auto out = dir.file("pmf.tsv");
    auto r = run({"pmf", "--beta", "0.25", "--lambda", "1", "--mu", "0.5", "--n-max", "40", "--output", out.c_str()});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    const auto again = run({"pmf", "--beta", "0.25", "--lambda", "1", "--mu", "0.5", "--n-max", "40"});
    CHECK(slurp(out) == again.out);

    const auto s1 = run({"sample", "--beta", "1", "--lambda", "1.1", "--mu", "1", "--count", "5000", "--seed", "3"});
    const auto s2 = run({"sample", "--beta", "1", "--lambda", "1.1", "--mu", "1", "--count", "5000", "--seed", "3",
                         "--workers", "2"});
    CHECK(s1.out == s2.out);
    const auto s3 = run({"sample", "--beta", "1", "--lambda", "1.1", "--mu", "1", "--count", "5000", "--seed", "4"});
    CHECK(s1.out != s3.out);
}
