#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "cli.hpp"
#include "ellipcmr/error.hpp"
#include "ellipcmr/kernels.hpp"

using namespace ellipcmr;
using nlohmann::ordered_json;

namespace {

struct Run {
    int rc;
    std::string out;
    std::string err;
};

Run run(std::vector<const char*> args)
{
    args.insert(args.begin(), "ellipcmr");
    std::ostringstream out, err;
    const int rc = cli::run_cli(int(args.size()), args.data(), out, err);
    return {rc, out.str(), err.str()};
}

std::vector<std::vector<double>> parse_csv(const std::string& s, std::string& header)
{
    std::istringstream in(s);
    std::getline(in, header);
    std::vector<std::vector<double>> rows;
    for (std::string line; std::getline(in, line);) {
        std::vector<double> r;
        std::istringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');)
            r.push_back(std::strtod(cell.c_str(), nullptr));
        rows.push_back(r);
    }
    return rows;
}

} // namespace

TEST_CASE("eval rows")
{
    const auto r = run({"eval", "--fn", "wp1", "--p", "0", "--ell", "3.14159", "--grid", "16"});
    REQUIRE(r.rc == 0);
    std::string header;
    const auto rows = parse_csv(r.out, header);
    CHECK(header == "x_re,x_im,f_re,f_im");
    REQUIRE(rows.size() == 16);
    const double l = 3.14159, pi = std::numbers::pi;
    for (const auto& row : rows) {
        const double s = std::sin(pi * row[0] / (2 * l));
        const double ref = std::pow(pi / (2 * l), 2) / (s * s);
        CHECK(std::abs(row[2] - ref) <= 1e-12 * ref);
        CHECK(row[3] == 0.0);
    }

    const auto t = run({"eval", "--fn", "theta", "--p", "0.1", "--grid", "32"});
    REQUIRE(t.rc == 0);
    const auto trows = parse_csv(t.out, header);
    CHECK(trows.size() == 32);
    for (const auto& row : trows)
        CHECK(row.size() == 4);
}

TEST_CASE("eval JSON round trip is bit exact")
{
    const auto r = run({"eval", "--fn", "theta1", "--p", "0.2", "--grid", "24", "--im", "0.1", "--format", "json"});
    REQUIRE(r.rc == 0);
    const auto j = ordered_json::parse(r.out);
    CHECK(j["schema"] == 1);
    const auto dom = EllipticDomain::from_nome(1.0, 0.2);
    REQUIRE(j["rows"].size() == 24);
    for (const auto& row : j["rows"]) {
        const cplx f = theta1({row[0].get<double>(), row[1].get<double>()}, dom);
        CHECK(row[2].get<double>() == f.real());
        CHECK(row[3].get<double>() == f.imag());
    }
    CHECK(ordered_json::parse(j.dump()) == j);
}

TEST_CASE("output is identical for any thread count")
{
    std::vector<const char*> args{"eval", "--fn", "gamma", "--p", "0.1", "--q", "0.3", "--grid", "40", "--im", "0.05"};
    setenv("ELLIPCMR_THREADS", "1", 1);
    CHECK(cli::thread_count() == 1);
    const auto a = run(args);
    setenv("ELLIPCMR_THREADS", "5", 1);
    CHECK(cli::thread_count() == 5);
    const auto b = run(args);
    unsetenv("ELLIPCMR_THREADS");
    CHECK(a.rc == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("verify suites")
{
    const auto h = run({"verify", "--suite", "heat", "--p", "0.1"});
    CHECK(h.rc == 0);
    const auto j = ordered_json::parse(h.out);
    CHECK(j["pass"] == true);
    CHECK(j["suites"][0]["max_residual"].get<double>() <= 1e-8);

    const auto k = run({"verify", "--suite", "kernel-identity", "--N", "2", "--M", "1"});
    CHECK(k.rc == 0);
    const auto kj = ordered_json::parse(k.out);
    REQUIRE(kj["suites"][0]["checks"].size() == 1);
    CHECK(kj["suites"][0]["checks"][0]["value"].get<double>() <= 1e-8);

    const auto all = run({"verify", "--suite", "all", "--format", "csv"});
    CHECK(all.rc == 0);
    CHECK(all.out.find(",false\n") == std::string::npos);

    // a tolerance nothing meets fails with exit code 1
    CHECK(run({"verify", "--suite", "heat", "--tol", "1e-20"}).rc == 1);

    const auto bad = run({"verify", "--suite", "nope"});
    CHECK(bad.rc == 2);
    CHECK(bad.out.empty());
}

TEST_CASE("bethe artifact")
{
    const auto r = run({"bethe", "--n", "2", "--p", "0.05"});
    REQUIRE(r.rc == 0);
    const auto j = ordered_json::parse(r.out);
    for (const char* c : {"bethe_residual", "ode_residual", "xi_residual", "energy_spread", "saddle_gradient"}) {
        REQUIRE(j["certificates"].contains(c));
        CHECK(j["certificates"][c]["pass"] == true);
    }
    CHECK(j["t"].size() == 2);
    CHECK(std::abs(j["constant"][0].get<double>() + 3.87973818094) < 1e-9);
    CHECK(run({"bethe", "--n", "2", "--p", "0.05"}).out == r.out);
}

TEST_CASE("perturb table re-loads with its invariants")
{
    const auto r = run({"perturb", "--s", "0.3,-0.2", "--gamma", "2", "--K", "6", "--variant", "I"});
    REQUIRE(r.rc == 0);
    const auto j = ordered_json::parse(r.out);
    const auto t = cli::table_from_json(j);
    const auto ref = solve_variant_I(0.3, -0.2, 2.0, 6);
    for (int k = 0; k <= 6; ++k) {
        CHECK(t.eps[k] == ref.eps[k]);
        CHECK(t.at(-k - 1, k) == 0.0);
        if (k > 0)
            CHECK(t.at(0, k) == 0.0);
        for (int n = -k; n <= t.n_max(k); ++n)
            CHECK(t.at(n, k) == ref.at(n, k));
    }
    CHECK(t.at(0, 0) == 1.0);
    CHECK(series_residual(t) <= 1e-10);
    CHECK(cli::table_to_json(t) == cli::table_to_json(ref));

    // Variant II with kappa
    const auto u = run({"perturb", "--s", "0.3,-0.2", "--gamma", "2", "--variant", "II", "--kappa", "0,0.25"});
    REQUIRE(u.rc == 0);
    const auto tu = cli::table_from_json(ordered_json::parse(u.out));
    CHECK(tu.variant == Variant::II);
    CHECK(tu.kappa == cplx(0.0, 0.25));
    CHECK(series_residual(tu) <= 1e-10);

    // an entry below the support is rejected
    auto bad = j;
    bad["entries"].push_back({-3, 1, 1.0, 0.0});
    CHECK_THROWS_AS(cli::table_from_json(bad), Error);
}

TEST_CASE("transform artifact and file output")
{
    const auto r = run({"transform", "--lambda", "1,0", "--p", "0.05", "--g", "1"});
    REQUIRE(r.rc == 0);
    const auto j = ordered_json::parse(r.out);
    CHECK(j["node_delta"].get<double>() <= 1e-10);
    CHECK(j["lambda"] == ordered_json::array({1, 0}));

    const auto path = (std::filesystem::temp_directory_path() / "ellipcmr_cli_test.json").string();
    const auto f = run({"transform", "--lambda", "1,0", "--p", "0.05", "--g", "1", "--output", path.c_str()});
    CHECK(f.rc == 0);
    CHECK(f.out.empty());
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == r.out);
    std::filesystem::remove(path);
}

TEST_CASE("exit codes for usage and module errors")
{
    CHECK(run({}).rc == 2);
    CHECK(run({"bethe", "--n", "2"}).rc == 2);                                 // neither p nor delta
    CHECK(run({"bethe", "--n", "2", "--p", "0.1", "--delta", "1"}).rc == 2); // both
    CHECK(run({"transform", "--lambda", "0,1", "--p", "0.05"}).rc == 2);
    CHECK(run({"--help"}).rc == 0);

    const auto r = run({"perturb", "--s", "0,1", "--gamma", "2", "--K", "2"});
    CHECK(r.rc == 3);
    CHECK(r.out.empty());
    const auto e = ordered_json::parse(r.err);
    CHECK(e["error"] == "resonance");

    const auto d = run({"eval", "--fn", "theta1", "--p", "1.5"});
    CHECK(d.rc == 3);
    CHECK(ordered_json::parse(d.err)["error"] == "domain");
}
