#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "fracfluid/errors.hpp"
#include "fracfluid/experiments.hpp"

using namespace fracfluid;
using doctest::Approx;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("fracfluid_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int tool(const std::string& args) {
    const std::string cmd = std::string(FRACFLUID_TOOL) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("list parsing") {
    const auto taus = parse_real_list("1/40, 1/80,0.5");
    REQUIRE(taus.size() == 3);
    CHECK(taus[0] == 1.0 / 40);
    CHECK(taus[1] == 1.0 / 80);
    CHECK(taus[2] == 0.5);
    CHECK_THROWS_AS(parse_real_list("1/0"), UsageError);
    CHECK_THROWS_AS(parse_real_list("abc"), UsageError);

    const auto sizes = parse_size_list("1-3,7");
    CHECK(sizes == std::vector<Index>{1, 2, 3, 7});
    CHECK_THROWS_AS(parse_size_list("5-2"), UsageError);

    const auto terms = parse_terms("1:1.5,0.3:1.8");
    REQUIRE(terms.size() == 2);
    CHECK(terms[1].weight == 0.3);
    CHECK(terms[1].order == 1.8);

    const auto blocks = parse_blocks("0.7:0.6:1.5;0.5:0.3:1.6");
    REQUIRE(blocks.size() == 2);
    CHECK(blocks[1] == OrderBlock{0.5, 0.3, 1.6});

    CHECK(parse_scheme_choice("both").size() == 2);
    CHECK_THROWS_AS(parse_scheme_choice("III"), UsageError);

    const auto sweep = SweepSpec::parse("K=0,2,5");
    CHECK(sweep.parameter == "K");
    CHECK(sweep.values.size() == 3);
    CHECK_THROWS_AS(SweepSpec::parse("viscosity=1,2"), UsageError);
    CHECK_THROWS_AS(SweepSpec::parse("K="), UsageError);
}

TEST_CASE("INI configuration") {
    const auto dir = scratch_dir("ini");
    {
        std::ofstream f(dir / "run.ini");
        f << "[run]\nscheme = II\nseed = 7\n[grid]\nM = 50\ntau_list = 1/10,1/20\n"
             "[oldroyd]\nK = 5\n[sweep]\nparameter = p\nvalues = 0.5,1\n[lemma5]\nsizes = 1-4\n";
    }
    const auto c = load_config(dir / "run.ini");
    CHECK(c.schemes == std::vector<Scheme>{Scheme::II});
    CHECK(c.seed == 7);
    CHECK(*c.M == 50);
    CHECK(c.taus.size() == 2);
    CHECK(c.oldroyd.K == 5.0);
    CHECK(c.oldroyd.lambda_relax == 3.0);
    REQUIRE(c.sweep.has_value());
    CHECK(c.sweep->parameter == "p");
    CHECK(c.sizes.size() == 4);

    {
        std::ofstream f(dir / "typo.ini");
        f << "[grid]\nMM = 50\n";
    }
    CHECK_THROWS_AS(load_config(dir / "typo.ini"), UsageError);
    {
        std::ofstream f(dir / "section.ini");
        f << "[solver]\nM = 50\n";
    }
    CHECK_THROWS_AS(load_config(dir / "section.ini"), UsageError);
    CHECK_THROWS_AS(load_config(dir / "missing.ini"), UsageError);
}

TEST_CASE("fixtures") {
    const auto rows = load_expected_table(expected_table_path(Scheme::I));
    CHECK(rows.size() == 15);
    CHECK(rows.front().tau_inv == 40);
    CHECK_FALSE(rows.front().l2_order.has_value());
    CHECK(rows[1].l2_order.has_value());
    CHECK(load_expected_table(expected_table_path(Scheme::II)).size() == 15);
}

TEST_CASE("converge with one step size") {
    RunConfig c;
    c.command = "converge";
    c.schemes = {Scheme::II};
    c.M = 100;
    c.taus = {1.0 / 40};
    c.blocks = {{0.7, 0.6, 1.5}};
    c.out = scratch_dir("converge");
    std::ostringstream log;
    const auto r = run_converge(c, log);
    REQUIRE(r.blocks.size() == 1);
    REQUIRE(r.blocks[0].report.rows.size() == 1);
    CHECK_FALSE(r.blocks[0].report.rows[0].order_l2.has_value());
    CHECK(fs::exists(r.blocks[0].file));
    CHECK(fs::exists(c.out / "manifest.json"));
}

TEST_CASE("couette sweep") {
    RunConfig c;
    c.command = "couette";
    c.couette_h = 0.02;
    c.couette_tau = 0.02;
    c.sweep = SweepSpec::parse("K=0,2,5");
    c.out = scratch_dir("couette");
    std::ostringstream log;
    const auto r = run_couette(c, log);
    REQUIRE(r.profiles.size() == 3);
    for (const auto& p : r.profiles) {
        CHECK(p.u[0] == 0.0);
        CHECK(p.u[p.u.size() - 1] == Approx(4.0));
        CHECK(fs::exists(p.file));
    }
    CHECK(monotone_direction(r.profiles, 0.5) == -1);
    CHECK(r.profiles[0].at(0.5) == Approx(0.5 * (r.profiles[0].at(0.48) + r.profiles[0].at(0.52))).epsilon(0.05));

    // results do not depend on the random seed or the worker count
    c.seed = 999;
    c.workers = 2;
    c.out = scratch_dir("couette2");
    const auto again = run_couette(c, log);
    for (std::size_t k = 0; k < 3; ++k) CHECK(again.profiles[k].u == r.profiles[k].u);
}

TEST_CASE("oracle check on random instances") {
    RunConfig c;
    c.command = "oracle-check";
    c.out = scratch_dir("oracle");
    std::ostringstream log;
    const auto r = run_oracle_check(c, log);
    CHECK(r.instances == 8);
    CHECK(r.nonhomogeneous >= 1);
    CHECK(r.max_difference < kOracleTolerance);
    CHECK(r.pass);
}

TEST_CASE("tool exit codes") {
    const auto out = scratch_dir("tool");
    CHECK(tool("converge --scheme III") == 2);
    CHECK(tool("couette --sweep viscosity=1,2") == 2);
    CHECK(tool("converge --tau-list 1/40,1/70") == 2);
    CHECK(tool("frobnicate") == 2);
    CHECK(tool("oracle-check --out " + out.string()) == 0);
    CHECK(tool("lemma5 --beta-list 0.5 --sizes 1-20 --out " + out.string()) == 0);
    CHECK(fs::exists(out / "toeplitz_report.csv"));
}
