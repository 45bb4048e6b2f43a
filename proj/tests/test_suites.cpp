#include <doctest.h>

#include "ellipcmr/error.hpp"
#include "ellipcmr/suites.hpp"

using namespace ellipcmr;

TEST_CASE("every suite passes at default settings")
{
    for (const auto& name : suite_names()) {
        const auto r = run_suite(name, SuiteConfig{});
        CHECK(r.suite == name);
        CHECK_FALSE(r.lines.empty());
        CHECK(r.pass());
    }
}

TEST_CASE("suite configuration")
{
    SuiteConfig cfg;
    cfg.n = 2;
    cfg.m = 1;
    const auto r = run_suite("kernel-identity", cfg);
    REQUIRE(r.lines.size() == 1);
    CHECK(r.lines[0].value <= 1e-8);

    cfg.p = 0.0;
    // the 2i delta relation has no trigonometric counterpart
    CHECK(run_suite("quasi-periodicity", cfg).lines.size() == 2);

    cfg.tol = 1e-30;
    CHECK_FALSE(run_suite("heat", SuiteConfig{.p = 0.1, .tol = 1e-30}).pass());
    CHECK_THROWS_AS(run_suite("bogus", cfg), Error);
}
