#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "core/belief.hpp"
#include "core/teacher.hpp"
#include "test_support.hpp"

using namespace fscd;

namespace {

// the two-node controller of the worked example: start node plays s on i and
// hands over to a node that plays r on b and d on y
Fsc exampleFsc(const Pomdp& p) {
    Fsc f;
    f.numObservations = p.numObservations();
    f.initial = 0;
    f.gamma.assign(2, std::vector<OutputSymbol>(p.numObservations(), OutputSymbol::dontCare()));
    f.delta.assign(2, std::vector<int>(p.numObservations(), 1));
    f.gamma[0][p.observationIndex("i")] = OutputSymbol::diracAction(p.actionIndex("s"));
    f.gamma[1][p.observationIndex("b")] = OutputSymbol::diracAction(p.actionIndex("r"));
    f.gamma[1][p.observationIndex("y")] = OutputSymbol::diracAction(p.actionIndex("d"));
    return f;
}

ObservationSequence seqOf(const Pomdp& p, std::initializer_list<const char*> names) {
    ObservationSequence seq;
    for (const char* n : names) seq.push_back(p.observationIndex(n));
    return seq;
}

}  // namespace

TEST_CASE("strategy table CSV parsing") {
    Pomdp p = testing::runningExample();
    StrategyTable table = parseStrategyTableFile(testing::modelsDir() + "/table1.csv", p);
    REQUIRE(table.rows.size() == 3);
    const OutputSymbol* out = table.find(seqOf(p, {"i", "b"}));
    REQUIRE(out != nullptr);
    CHECK(out->equals(OutputSymbol::diracAction(p.actionIndex("r"))));
    CHECK(table.find(seqOf(p, {"b"})) == nullptr);

    SUBCASE("serialization round-trips") {
        StrategyTable again = parseStrategyTable(serializeStrategyTable(table, p), p);
        REQUIRE(again.rows.size() == table.rows.size());
        for (size_t i = 0; i < table.rows.size(); ++i) {
            CHECK(again.rows[i].first == table.rows[i].first);
            CHECK(again.rows[i].second.equals(table.rows[i].second));
        }
    }
    SUBCASE("chi and distribution outputs parse") {
        StrategyTable t = parseStrategyTable("i,chi:2\ni b,u:0.25;r:0.75\n", p);
        CHECK(t.rows[0].second.isChi());
        CHECK(t.rows[0].second.chi == 2);
        REQUIRE(t.rows[1].second.isAction());
        CHECK(t.rows[1].second.dist.support().size() == 2);
    }
    SUBCASE("inconsistent tables are rejected") {
        CHECK_THROWS_WITH_AS(parseStrategyTable("i b,r\ni b,d\n", p),
                             doctest::Contains("consistency"), ValidationError);
    }
    SUBCASE("exact duplicates are tolerated") {
        StrategyTable t = parseStrategyTable("i,s\ni,s\n", p);
        CHECK(t.rows.size() == 1);
    }
    SUBCASE("unknown observation names are parse errors") {
        CHECK_THROWS_AS(parseStrategyTable("q,s\n", p), ParseError);
    }
    SUBCASE("disabled actions are validation errors") {
        CHECK_THROWS_AS(parseStrategyTable("i,u\n", p), ValidationError);
    }
    SUBCASE("don't-care rows are not allowed") {
        CHECK_THROWS_AS(parseStrategyTable("i,-\n", p), ValidationError);
    }
    SUBCASE("missing file is an io error") {
        CHECK_THROWS_AS(parseStrategyTableFile("/nonexistent.csv", p), IoError);
    }
}

TEST_CASE("table output query answers rows and defaults to don't-care") {
    Pomdp p = testing::runningExample();
    TableTeacher teacher(p, parseStrategyTableFile(testing::modelsDir() + "/table1.csv", p));
    CHECK(teacher.outputQuery(seqOf(p, {"i", "b"}))
              .equals(OutputSymbol::diracAction(p.actionIndex("r"))));
    CHECK(teacher.outputQuery(seqOf(p, {"b"})).isDontCare());
    CHECK(teacher.outputQuery({}).isDontCare());

    TableTeacher empty(p, StrategyTable{});
    CHECK(empty.outputQuery(seqOf(p, {"i"})).isDontCare());

    // purity: repeated queries agree
    CHECK(teacher.outputQuery(seqOf(p, {"i"})).equals(teacher.outputQuery(seqOf(p, {"i"}))));
}

TEST_CASE("realizability via subset construction") {
    Pomdp p = testing::runningExample();
    TableTeacher teacher(p, StrategyTable{});
    CHECK(teacher.isRealizable(seqOf(p, {"i"})));
    CHECK(teacher.isRealizable(seqOf(p, {"i", "b"})));
    CHECK(teacher.isRealizable(seqOf(p, {"i", "b", "y", "g"})));
    CHECK_FALSE(teacher.isRealizable(seqOf(p, {"i", "i"})));  // i only at the root
    CHECK_FALSE(teacher.isRealizable(seqOf(p, {"b"})));
    CHECK_FALSE(teacher.isRealizable({}));
}

TEST_CASE("table equivalence query") {
    Pomdp p = testing::runningExample();
    StrategyTable table = parseStrategyTableFile(testing::modelsDir() + "/table1.csv", p);
    TableTeacher teacher(p, table);

    SUBCASE("the example controller is accepted") {
        CHECK_FALSE(teacher.equivalenceQuery(exampleFsc(p)).has_value());
    }
    SUBCASE("an all-s one-node controller fails on the shortest lex-least row") {
        Fsc f;
        f.numObservations = p.numObservations();
        f.initial = 0;
        f.gamma.assign(1, std::vector<OutputSymbol>(
                              p.numObservations(),
                              OutputSymbol::diracAction(p.actionIndex("s"))));
        f.delta.assign(1, std::vector<int>(p.numObservations(), 0));
        auto ce = teacher.equivalenceQuery(f);
        REQUIRE(ce.has_value());
        CHECK(*ce == seqOf(p, {"i", "b"}));  // b before y in observation order
    }
    SUBCASE("empty table accepts anything") {
        TableTeacher empty(p, StrategyTable{});
        CHECK_FALSE(empty.equivalenceQuery(exampleFsc(p)).has_value());
    }
    SUBCASE("unrealizable rows are skipped") {
        StrategyTable t = table;
        t.rows.emplace_back(seqOf(p, {"i", "i"}),
                            OutputSymbol::diracAction(p.actionIndex("s")));
        TableTeacher withGhost(p, t);
        CHECK_FALSE(withGhost.equivalenceQuery(exampleFsc(p)).has_value());
    }
    SUBCASE("chi rows: required in base policy, skipped otherwise") {
        StrategyTable t = table;
        t.rows.emplace_back(seqOf(p, {"i", "g"}), OutputSymbol::dontKnow(0));
        TableTeacher require(p, t, ChiPolicy::Require);
        auto ce = require.equivalenceQuery(exampleFsc(p));
        REQUIRE(ce.has_value());
        CHECK(*ce == seqOf(p, {"i", "g"}));
        TableTeacher skip(p, t, ChiPolicy::Skip);
        CHECK_FALSE(skip.equivalenceQuery(exampleFsc(p)).has_value());
    }
}

TEST_CASE("belief teacher output query") {
    Pomdp p = testing::runningExample();
    BeliefMdp bmdp = explore(p, 100, 100);
    auto cutoffs = cutoffStrategies(p);
    BeliefStrategy strat = solve(bmdp, p, parseObjective(p, "maxprob:g"), cutoffs);
    BeliefTeacher teacher(p, bmdp, strat);

    CHECK(teacher.outputQuery(seqOf(p, {"i"}))
              .equals(OutputSymbol::diracAction(p.actionIndex("s"))));
    CHECK(teacher.outputQuery(seqOf(p, {"i", "b"}))
              .equals(OutputSymbol::diracAction(p.actionIndex("r"))));
    CHECK(teacher.outputQuery(seqOf(p, {"i", "y"}))
              .equals(OutputSymbol::diracAction(p.actionIndex("d"))));
    CHECK(teacher.outputQuery(seqOf(p, {"i", "i"})).isDontCare());
    CHECK(teacher.outputQuery(seqOf(p, {"b"})).isDontCare());

    SUBCASE("cut-off beliefs answer don't-know") {
        BeliefMdp tiny = explore(p, 1, 100);
        BeliefStrategy tinyStrat = solve(tiny, p, parseObjective(p, "maxprob:g"), cutoffs);
        BeliefTeacher tinyTeacher(p, tiny, tinyStrat);
        OutputSymbol out = tinyTeacher.outputQuery(seqOf(p, {"i"}));
        CHECK(out.isChi());
        CHECK(out.chi == 0);
    }
}

TEST_CASE("belief teacher equivalence query") {
    Pomdp p = testing::runningExample();
    BeliefMdp bmdp = explore(p, 100, 100);
    auto cutoffs = cutoffStrategies(p);
    BeliefStrategy strat = solve(bmdp, p, parseObjective(p, "maxprob:g"), cutoffs);
    BeliefTeacher teacher(p, bmdp, strat);

    CHECK_FALSE(teacher.equivalenceQuery(exampleFsc(p)).has_value());

    Fsc wrong = exampleFsc(p);
    wrong.gamma[1][p.observationIndex("b")] = OutputSymbol::diracAction(p.actionIndex("u"));
    auto ce = teacher.equivalenceQuery(wrong);
    REQUIRE(ce.has_value());
    CHECK(!teacher.outputQuery(*ce).equals(wrong.run(*ce)));
}

TEST_CASE("belief teacher and its materialized table agree on realizable sequences") {
    Pomdp p = testing::runningExample();
    BeliefMdp bmdp = explore(p, 100, 100);
    auto cutoffs = cutoffStrategies(p);
    BeliefStrategy strat = solve(bmdp, p, parseObjective(p, "maxprob:g"), cutoffs);
    BeliefTeacher teacher(p, bmdp, strat);

    StrategyTable table = materializeTable(teacher, p, 6);
    TableTeacher tableTeacher(p, table);
    for (const auto& seq : testing::realizableSequences(p, 6))
        CHECK(tableTeacher.outputQuery(seq).equals(teacher.outputQuery(seq)));
}
