#include <doctest.h>

#include "fixtures.hpp"

using namespace fixtures;

namespace {

Schema abc(const AttrSet& marked) { return Schema({"A", "B", "C"}, marked); }

Verdict v(Complexity c, Theorem t) { return {c, t}; }

}  // namespace

TEST_CASE("normalize splits, deduplicates and drops trivial FDs") {
    const Schema s = abc({});
    const FdSet f(s, {Fd{{"A"}, {"B", "C"}}, Fd{{"A"}, {"B"}}, Fd{{"A", "B"}, {"A"}}});
    const FdSet n = normalize(f);
    CHECK(n.fds() == std::vector<Fd>{Fd{{"A"}, {"B"}}, Fd{{"A"}, {"C"}}});
    CHECK(normalize(FdSet(s, {Fd{{"A"}, {"A", "B"}}})).fds() == std::vector<Fd>{Fd{{"A"}, {"B"}}});
}

TEST_CASE("closure, sinks and equivalence") {
    const Schema s = abc({});
    const FdSet f(s, {Fd{{"A"}, {"B"}}, Fd{{"B"}, {"C"}}});
    CHECK(closure({"A"}, f) == AttrSet{"A", "B", "C"});
    CHECK(closure({"B"}, f) == AttrSet{"B", "C"});
    CHECK(closure({}, f).empty());
    CHECK(is_sink("C", f));
    CHECK_FALSE(is_sink("B", f));
    CHECK_FALSE(equivalent("A", "B", f));
    const FdSet g(s, {Fd{{"A"}, {"B"}}, Fd{{"B"}, {"A"}}});
    CHECK(equivalent("A", "B", g));
    // Consensus FDs put the right side into every closure.
    CHECK(closure({}, FdSet(s, {Fd{{}, {"C"}}})) == AttrSet{"C"});
}

TEST_CASE("decomposition joins FDs through shared uncertain attributes only") {
    const Schema s({"A", "B", "C", "D"}, {"B", "D"});
    const FdSet f(s, {Fd{{"A"}, {"B"}}, Fd{{"A"}, {"D"}}, Fd{{"B"}, {"C"}}});
    const Decomposition d = decompose(normalize(f));
    REQUIRE(d.components.size() == 2);
    CHECK(d.components[0].fds() == std::vector<Fd>{Fd{{"A"}, {"B"}}, Fd{{"B"}, {"C"}}});
    CHECK(d.components[1].fds() == std::vector<Fd>{Fd{{"A"}, {"D"}}});
    CHECK(d.free_attributes.empty());
    CHECK(decompose(FdSet(s, {Fd{{"A"}, {"B"}}})).free_attributes == AttrSet{"C", "D"});
}

TEST_CASE("binary schema reproduces the four-row table") {
    struct Row {
        const char* fds;
        AttrSet marked;
        Complexity possibility, mpd, probability;
    };
    const std::vector<Row> rows{
        {"A -> B?", {"B"}, Complexity::PolyTime, Complexity::PolyTime, Complexity::PolyTime},
        {"A? -> B", {"A"}, Complexity::NPHard, Complexity::NPHard, Complexity::SharpPHard},
        {"A <-> B?", {"B"}, Complexity::PolyTime, Complexity::PolyTime, Complexity::SharpPHard},
        {"A? <-> B?", {"A", "B"}, Complexity::NPHard, Complexity::NPHard, Complexity::SharpPHard},
    };
    for (const auto& row : rows) {
        CAPTURE(row.fds);
        const Classification c = classify(parse_fds(row.fds, Schema({"A", "B"}, row.marked)));
        CHECK(c.possibility == v(row.possibility, Theorem::BinaryTable));
        CHECK(c.mpd == v(row.mpd, Theorem::BinaryTable));
        CHECK(c.probability == v(row.probability, Theorem::BinaryTable));
    }
}

TEST_CASE("worked specialist examples") {
    const Classification c1 = classify(f1());
    CHECK(c1.mpd == v(Complexity::NPHard, Theorem::SingletonDichotomy));
    CHECK(c1.probability == v(Complexity::SharpPHard, Theorem::SingletonDichotomy));
    CHECK(c1.components.front().kind == PlanKind::Exact);

    const Classification c2 = classify(f2());
    CHECK(c2.possibility == v(Complexity::PolyTime, Theorem::MatchingDichotomy));
    CHECK(c2.mpd == v(Complexity::PolyTime, Theorem::MatchingDichotomy));
    CHECK(c2.probability == v(Complexity::SharpPHard, Theorem::MatchingDichotomy));
    REQUIRE(c2.components.size() == 1);
    CHECK(c2.components[0].kind == PlanKind::Matching);
    CHECK(c2.components[0].certain_side == AttrSet{"room", "time"});
    CHECK(c2.components[0].other_side == AttrSet{"specialist", "time"});
}

TEST_CASE("unary trichotomy on a ternary schema") {
    // A -> B -> ?C: ?C is a sink, all tractable.
    const Classification a = classify(parse_fds("A -> B -> C?", abc({"C"})));
    CHECK(a.possibility.complexity == Complexity::PolyTime);
    CHECK(a.mpd.complexity == Complexity::PolyTime);
    CHECK(a.probability.complexity == Complexity::PolyTime);
    // A -> ?B -> C: ?B is neither a sink nor equivalent to a certain attribute.
    const Classification b = classify(parse_fds("A -> B? -> C", abc({"B"})));
    CHECK(b.possibility == v(Complexity::NPHard, Theorem::UnaryTrichotomy));
    CHECK(b.mpd == v(Complexity::NPHard, Theorem::UnaryTrichotomy));
    CHECK(b.probability == v(Complexity::SharpPHard, Theorem::UnaryTrichotomy));
    // A <-> ?B -> ?C: ?B is equivalent to A, ?C is a sink.
    const Classification c = classify(parse_fds("A <-> B? -> C?", abc({"B", "C"})));
    CHECK(c.mpd == v(Complexity::PolyTime, Theorem::UnaryTrichotomy));
    CHECK(c.probability == v(Complexity::SharpPHard, Theorem::UnaryTrichotomy));
    CHECK(c.certain_partner.at("B") == "A");
    CHECK(c.components.front().kind == PlanKind::UnaryTractable);
}

TEST_CASE("unary trichotomy on the business schema") {
    const Schema s = u2().schema();
    const Classification a = classify(parse_fds("business -> spokesperson? location?", s));
    CHECK(a.mpd.complexity == Complexity::PolyTime);
    CHECK(a.probability.complexity == Complexity::PolyTime);
    const Classification b = classify(parse_fds("spokesperson? -> location?", s));
    CHECK(b.possibility.complexity == Complexity::NPHard);
    CHECK(b.mpd.complexity == Complexity::NPHard);
    CHECK(b.probability.complexity == Complexity::SharpPHard);
    const Classification c = classify(parse_fds("business <-> spokesperson? -> location?", s));
    CHECK(c.mpd.complexity == Complexity::PolyTime);
    CHECK(c.probability.complexity == Complexity::SharpPHard);
}

TEST_CASE("all-uncertain, consensus and empty sets") {
    const Schema s({"A", "B", "C"}, {"A", "B", "C"});
    const Classification hard = classify(parse_fds("A? B? -> C?; C? -> A?", s));
    CHECK(hard.mpd == v(Complexity::NPHard, Theorem::AllUncertain));
    CHECK(hard.probability == v(Complexity::NPHard, Theorem::AllUncertain));

    const Classification consensus = classify(parse_fds("{} -> A?", s));
    CHECK(consensus.mpd == v(Complexity::PolyTime, Theorem::LhsCertain));

    const Classification empty = classify(FdSet(s, {}));
    CHECK(empty.mpd == v(Complexity::PolyTime, Theorem::LhsCertain));
    CHECK(empty.free_attributes == AttrSet{"A", "B", "C"});
}

TEST_CASE("verdicts combine over components, worst first") {
    const Schema s({"A", "B", "C", "D"}, {"B", "D"});
    const Classification both_poly = classify(parse_fds("A -> B?; C -> D?", s));
    CHECK(both_poly.components.size() == 2);
    CHECK(both_poly.mpd == v(Complexity::PolyTime, Theorem::Decomposition));

    const Classification mixed = classify(parse_fds("A -> B?; D? -> C", s));
    CHECK(mixed.components.size() == 2);
    CHECK(mixed.mpd.complexity == Complexity::NPHard);
    CHECK(mixed.components[0].kind == PlanKind::LeftCertain);
    CHECK(mixed.components[1].kind == PlanKind::Exact);
}

TEST_CASE("partners use closures over the whole set") {
    // ?A -> B, B -> C, C -> ?A: ?A is equivalent to C through the full set
    // even though B -> C lands in its own component.
    const Schema s({"A", "B", "C"}, {"A"});
    const Classification c = classify(parse_fds("A? -> B; B -> C; C -> A?", s));
    CHECK(c.certain_partner.at("A") == "B");
    CHECK(c.mpd.complexity == Complexity::PolyTime);
}

TEST_CASE("matching detection") {
    const Schema s({"A", "B", "C"}, {"C"});
    AttrSet x, y;
    CHECK(as_matching(parse_fds("A B -> C?; C? -> A B", s), x, y));
    CHECK(x == AttrSet{"A", "B"});
    CHECK(y == AttrSet{"C"});
    CHECK_FALSE(as_matching(parse_fds("A -> B; B -> C?", s), x, y));
}
