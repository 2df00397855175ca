#include <sstream>

#include "doctest.h"
#include "scandict/config.hpp"
#include "scandict/experiments.hpp"
#include "scandict/grid.hpp"

using namespace scandict;

TEST_SUITE("cli_support") {

TEST_CASE("config parsing")
{
    std::istringstream in("# comment\n\nn = 32\n--seed=7   # trailing\nloss=squared\n");
    const ConfigEntries e = parse_config(in);
    REQUIRE(e.size() == 3);
    CHECK(e[0] == std::pair<std::string, std::string>{"n", "32"});
    CHECK(e[1] == std::pair<std::string, std::string>{"seed", "7"});
    CHECK(config_as_flags(e) == std::vector<std::string>{"--n=32", "--seed=7", "--loss=squared"});
    std::istringstream bad("just a line\n");
    CHECK_THROWS_AS(parse_config(bad), ParseError);
    std::istringstream empty_key(" = 3\n");
    CHECK_THROWS_AS(parse_config(empty_key), ParseError);
    CHECK_THROWS_AS(load_config("/nonexistent/scandict.cfg"), ParseError);
}

TEST_CASE("CSV header names the claim, bound and verdict")
{
    CsvTable t;
    t.claim = "c";
    t.bound = "b";
    t.pass = true;
    t.columns = {"x", "y"};
    t.add({"1", "2"});
    CHECK_THROWS(t.add({"1"}));
    std::ostringstream out;
    t.write(out);
    CHECK(out.str() == "# claim: c; bound: b; verdict: PASS\nx,y\n1,2\n");
    CHECK(t.number(0, "y") == 2.0);
}

TEST_CASE("experiments are deterministic")
{
    MarkovExampleParams p;
    p.length = 5000;
    std::ostringstream a, b;
    run_markov_example(p).write(a);
    run_markov_example(p).write(b);
    CHECK(a.str() == b.str());

    RegretParams r;
    r.arrays = 8;
    r.seeds = 5;
    std::ostringstream c, d;
    run_regret(r).write(c);
    run_regret(r).write(d);
    CHECK(c.str() == d.str());
}

TEST_CASE("small experiment runs pass")
{
    CHECK(run_fmg_curve({}).pass);
    Lemma1Params l;
    l.n = 16;
    l.replicas = 300;
    CHECK(run_lemma1(l).rows.size() == 6);
    FullPoolParams f;
    f.n = 16;
    CHECK(run_theorem3_m2(f).pass);
}

}
