#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "core/learner.hpp"
#include "test_support.hpp"

using namespace fscd;

namespace {

// four-node controller over the running example's observations with a mix of
// concrete, don't-know and don't-care outputs on b
Fsc mixedFsc(const Pomdp& p) {
    Fsc f;
    f.numObservations = p.numObservations();
    f.initial = 0;
    f.gamma.assign(4, std::vector<OutputSymbol>(p.numObservations(), OutputSymbol::dontCare()));
    f.delta.assign(4, std::vector<int>(p.numObservations(), 0));
    int b = p.observationIndex("b");
    f.gamma[0][b] = OutputSymbol::diracAction(p.actionIndex("r"));
    f.gamma[1][b] = OutputSymbol::diracAction(p.actionIndex("r"));
    f.gamma[2][b] = OutputSymbol::diracAction(p.actionIndex("d"));
    f.gamma[3][b] = OutputSymbol::dontKnow(0);
    for (int n = 0; n < 4; ++n) f.delta[n][b] = (n + 1) % 4;
    return f;
}

}  // namespace

TEST_CASE("running a controller follows delta and reads gamma at the end") {
    Pomdp p = testing::runningExample();
    Fsc f = mixedFsc(p);
    int b = p.observationIndex("b");
    CHECK(f.run({b}).equals(OutputSymbol::diracAction(p.actionIndex("r"))));
    CHECK(f.run({b, b, b}).equals(OutputSymbol::diracAction(p.actionIndex("d"))));
    CHECK(f.run({b, b, b, b}).isChi());
    CHECK_THROWS_AS(f.run({}), ValidationError);
    CHECK_FALSE(f.isApplicable());
}

TEST_CASE("H1 replaces don't-know by the empirical action distribution") {
    Pomdp p = testing::runningExample();
    Fsc f = mixedFsc(p);
    int b = p.observationIndex("b");
    Fsc h1 = applyH1(f);

    // 3 concrete outputs on b: r, r, d -> chi becomes {r: 2/3, d: 1/3}
    REQUIRE(h1.gamma[3][b].isAction());
    const Distribution& dist = h1.gamma[3][b].dist;
    REQUIRE(dist.support().size() == 2);
    CHECK(dist.probabilityOf(p.actionIndex("d")) == doctest::Approx(1.0 / 3));
    CHECK(dist.probabilityOf(p.actionIndex("r")) == doctest::Approx(2.0 / 3));

    SUBCASE("nodes, transitions and concrete outputs are untouched") {
        CHECK(h1.numNodes() == f.numNodes());
        CHECK(h1.delta == f.delta);
        for (int n = 0; n < 3; ++n) CHECK(h1.gamma[n][b].equals(f.gamma[n][b]));
    }
    SUBCASE("don't-know survives when the observation has no concrete output") {
        int y = p.observationIndex("y");
        f.gamma[2][y] = OutputSymbol::dontKnow(0);
        Fsc h = applyH1(f);
        CHECK(h.gamma[2][y].isChi());
    }
    SUBCASE("distribution outputs contribute their probability mass") {
        f.gamma[0][b] = OutputSymbol::action(Distribution(
            {{p.actionIndex("r"), 0.5}, {p.actionIndex("d"), 0.5}}));
        Fsc h = applyH1(f);
        // mass on b: r = 0.5 + 1, d = 0.5 + 1, over 3 concrete outputs
        CHECK(h.gamma[3][b].dist.probabilityOf(p.actionIndex("r")) == doctest::Approx(0.5));
        CHECK(h.gamma[3][b].dist.probabilityOf(p.actionIndex("d")) == doctest::Approx(0.5));
    }
}

TEST_CASE("H2 drops don't-know outputs and merges") {
    Pomdp p = testing::runningExample();
    Fsc f = mixedFsc(p);
    Fsc h2 = applyH2(f);

    // concrete outputs must survive the merge
    int b = p.observationIndex("b");
    CHECK(h2.run({b}).equals(OutputSymbol::diracAction(p.actionIndex("r"))));
    CHECK(h2.run({b, b, b}).equals(OutputSymbol::diracAction(p.actionIndex("d"))));
    for (const auto& row : h2.gamma)
        for (const auto& out : row) CHECK_FALSE(out.isChi());
    CHECK(h2.numNodes() <= f.numNodes());

    SUBCASE("an all-don't-know controller collapses to one node") {
        Fsc allChi = f;
        for (auto& row : allChi.gamma)
            for (auto& out : row) out = OutputSymbol::dontKnow(0);
        CHECK(applyH2(allChi).numNodes() == 1);
    }
}

TEST_CASE("base composition adds one absorbing node per referenced strategy") {
    Pomdp p = testing::runningExample();
    auto cutoffs = cutoffStrategies(p);
    Fsc f = mixedFsc(p);
    int b = p.observationIndex("b");
    Fsc based = applyBase(f, cutoffs, p);

    REQUIRE(based.numNodes() == 5);
    // the chi transition now plays the cut-off policy and enters the new node
    REQUIRE(based.gamma[3][b].isAction());
    CHECK(based.gamma[3][b].dist.equals(cutoffs[0].policyByObservation[b]));
    CHECK(based.delta[3][b] == 4);
    // the absorbing node loops on itself with the policy everywhere
    for (int z = 0; z < p.numObservations(); ++z) {
        CHECK(based.delta[4][z] == 4);
        CHECK(based.gamma[4][z].dist.equals(cutoffs[0].policyByObservation[z]));
    }

    SUBCASE("a controller without don't-know is unchanged") {
        f.gamma[3][b] = OutputSymbol::diracAction(p.actionIndex("r"));
        Fsc same = applyBase(f, cutoffs, p);
        CHECK(same.numNodes() == f.numNodes());
        CHECK(same.delta == f.delta);
    }
    SUBCASE("a dangling strategy reference is rejected") {
        f.gamma[3][b] = OutputSymbol::dontKnow(5);
        CHECK_THROWS_AS(applyBase(f, cutoffs, p), ValidationError);
    }
}

TEST_CASE("don't-care resolves to the first enabled action by name") {
    Pomdp p = testing::runningExample();
    Fsc f = mixedFsc(p);
    f.gamma[3][p.observationIndex("b")] = OutputSymbol::diracAction(p.actionIndex("r"));
    Fsc resolved = resolveDontCare(f, p);
    // only s is enabled on i; d is the alphabetically first cell action
    CHECK(resolved.gamma[0][p.observationIndex("i")]
              .equals(OutputSymbol::diracAction(p.actionIndex("s"))));
    CHECK(resolved.gamma[0][p.observationIndex("y")]
              .equals(OutputSymbol::diracAction(p.actionIndex("d"))));
    CHECK(resolved.isApplicable());
}

TEST_CASE("output text forms parse and render consistently") {
    Pomdp p = testing::runningExample();
    CHECK(parseOutput("-", p).isDontCare());
    CHECK(parseOutput("chi:2", p).equals(OutputSymbol::dontKnow(2)));
    CHECK(parseOutput("s", p).equals(OutputSymbol::diracAction(p.actionIndex("s"))));
    OutputSymbol dist = parseOutput("u:0.25;r:0.75", p);
    REQUIRE(dist.isAction());
    CHECK(dist.dist.probabilityOf(p.actionIndex("u")) == doctest::Approx(0.25));
    CHECK(dist.dist.probabilityOf(p.actionIndex("r")) == doctest::Approx(0.75));
    CHECK_THROWS_AS(parseOutput("u:0.25;r", p), ParseError);

    for (const char* text : {"-", "chi:2", "s", "u:0.25;r:0.75"})
        CHECK(renderOutput(parseOutput(text, p), p) == text);
}

TEST_CASE("DOT export is deterministic and names every edge") {
    Pomdp p = testing::runningExample();
    Fsc f = mixedFsc(p);
    std::string dot = exportDot(f, p);
    CHECK(dot == exportDot(f, p));
    CHECK(dot.find("digraph fsc") != std::string::npos);
    CHECK(dot.find("__start -> n0") != std::string::npos);
    CHECK(dot.find("b / r") != std::string::npos);
    CHECK(dot.find("chi_0") != std::string::npos);
    CHECK(dot.find("chi:") == std::string::npos);
}

TEST_CASE("JSON serialization round-trips a controller") {
    Pomdp p = testing::runningExample();
    Fsc f = mixedFsc(p);
    Fsc again = fscFromJson(fscToJson(f, p), p);
    REQUIRE(again.numNodes() == f.numNodes());
    CHECK(again.initial == f.initial);
    CHECK(again.delta == f.delta);
    for (int n = 0; n < f.numNodes(); ++n)
        for (int z = 0; z < p.numObservations(); ++z)
            CHECK(again.gamma[n][z].equals(f.gamma[n][z]));

    CHECK_THROWS_AS(fscFromJson("not json", p), ParseError);
}
