#include <doctest.h>

#include "cirsolve/engine.hpp"
#include "cirsolve/errors.hpp"
#include "cirsolve/exact_solvers.hpp"
#include "fixtures.hpp"

using namespace fixtures;

namespace {

SolveOptions with(SolverChoice s) {
    SolveOptions o;
    o.solver = s;
    return o;
}

}  // namespace

TEST_CASE("solver names round-trip") {
    for (auto s : {SolverChoice::Auto, SolverChoice::Poly, SolverChoice::Exact, SolverChoice::Oracle})
        CHECK(parse_solver(name(s)) == s);
    CHECK_FALSE(parse_solver("fast").has_value());
}

TEST_CASE("auto uses the matching plan on F2") {
    const MpdResult r = solve_mpd(u1(), f2());
    CHECK(r.feasible);
    CHECK(r.probability == q("3/100"));
    CHECK(r.solver == "auto[Matching]");
    CHECK(*r.sample == u1_specialists("Bart", "Lisa", "Bart"));
    CHECK(solve_mpd(u1(), f2(), with(SolverChoice::Poly)).probability == q("3/100"));
}

TEST_CASE("poly refuses hard components") {
    CHECK_THROWS_AS(solve_mpd(u1(), f1(), with(SolverChoice::Poly)), MisuseError);
    CHECK_THROWS_AS(solve_probability(u1(), f2(), with(SolverChoice::Poly)), MisuseError);
    // Auto falls back to exact search.
    CHECK(solve_mpd(u1(), f1()).probability == q("7/25"));
    CHECK(solve_probability(u1(), f1()).probability == q("43/100"));
}

TEST_CASE("every solver agrees on the worked examples") {
    for (auto s : {SolverChoice::Auto, SolverChoice::Exact, SolverChoice::Oracle}) {
        CAPTURE(name(s));
        CHECK(solve_probability(u1(), f1(), with(s)).probability == q("43/100"));
        CHECK(solve_probability(u1(), f2(), with(s)).probability == q("3/100"));
        CHECK(solve_mpd(u1(), f1(), with(s)).probability == q("7/25"));
        CHECK(possibly_consistent(u1(), f2(), with(s)));
    }
}

TEST_CASE("world budget is enforced for exponential solvers") {
    SolveOptions tight = with(SolverChoice::Oracle);
    tight.world_budget = 4;
    CHECK_THROWS_AS(solve_probability(u1(), f1(), tight), ResourceError);
    tight.solver = SolverChoice::Auto;
    CHECK_THROWS_AS(solve_mpd(u1(), f1(), tight), ResourceError);
    // Polynomial plans ignore the budget.
    CHECK_NOTHROW(solve_mpd(u1(), f2(), tight));
}

TEST_CASE("decomposed probability multiplies component probabilities") {
    // A -> ?B and C -> ?D on independent cells.
    const Schema s({"A", "B", "C", "D"}, {"B", "D"});
    std::map<TupleId, Cir::Row> rows;
    rows.emplace("1", Cir::Row{Value("a"), dist({{"x", "1/2"}, {"y", "1/2"}}), Value("c"),
                               dist({{"x", "1/3"}, {"y", "2/3"}})});
    rows.emplace("2", Cir::Row{Value("a"), dist({{"x", "1/2"}, {"y", "1/2"}}), Value("c"),
                               dist({{"x", "1/3"}, {"y", "2/3"}})});
    const Cir c(s, rows);
    // B agrees with 1/2; D agrees with 1/9 + 4/9 = 5/9; product 5/18.
    const FdSet f = parse_fds("A -> B?; C -> D?", s);
    CHECK(solve_probability(c, f).probability == q("5/18"));
    CHECK(oracle_enumerate(c, f).total == q("5/18"));
    // MPD: B 1/4 times D 4/9.
    CHECK(solve_mpd(c, f).probability == q("1/9"));
}

TEST_CASE("auto agrees with the oracle on random instances") {
    Generator gen(99);
    for (int i = 0; i < 140; ++i) {
        const auto& stratum = Generator::strata()[static_cast<std::size_t>(i) % Generator::strata().size()];
        const Instance inst = gen.make(stratum, 5, 1u << 11);
        CAPTURE(stratum);
        const OracleResult o = oracle_enumerate(inst.cir, inst.fds);
        const MpdResult m = solve_mpd(inst.cir, inst.fds);
        REQUIRE(m.feasible == o.best.has_value());
        if (m.feasible) {
            CHECK(m.probability == o.best->second);
            CHECK(satisfies(*m.sample, inst.fds));
            CHECK(sample_probability(inst.cir, *m.sample) == m.probability);
        }
        CHECK(solve_probability(inst.cir, inst.fds).probability == o.total);
    }
}
