#include <doctest.h>

#include <fstream>
#include <sstream>

#include "cirsolve/errors.hpp"
#include "fixtures.hpp"

using namespace fixtures;

namespace {

std::string read(const std::string& name) {
    std::ifstream in(std::string(CIRSOLVE_DATA_DIR) + "/" + name);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string location_of(const std::string& text) {
    try {
        parse_document(text);
    } catch (const ParseError& e) {
        return e.location();
    }
    return "(no error)";
}

const char* kHeader = R"("attributes": [{"name": "A"}, {"name": "B", "uncertain": true}])";

std::string doc(const std::string& tuples) { return std::string("{") + kHeader + ", \"tuples\": [" + tuples + "]}"; }

}  // namespace

TEST_CASE("example corpus parses to the fixtures") {
    const CirDocument d1 = parse_document(read("u1.json"));
    CHECK(d1.cir == u1());
    CHECK(*d1.fds == "specialist? time -> room");
    CHECK(parse_fds(*d1.fds, d1.cir.schema()) == f1());
    CHECK(parse_cir(read("u1_f2.json")) == u1());
    CHECK(parse_cir(read("u2.json")) == u2());
}

TEST_CASE("document errors carry locations") {
    CHECK(location_of(doc(R"({"id": "1", "cells": {"A": "a", "B": {"x": "0.5", "y": "0.4"}}})")) ==
          "tuples[0].cells.B");
    CHECK(location_of(doc(R"({"id": "1", "cells": {"A": "a", "B": "b"}}, {"id": "1", "cells": {"A": "a", "B": "b"}})")) ==
          "tuples[1].id");
    CHECK(location_of(doc(R"({"id": "1", "cells": {"A": "a", "B": "b", "Z": "z"}})")) == "tuples[0].cells.Z");
    CHECK(location_of(doc(R"({"id": "1", "cells": {"A": "a"}})")) == "tuples[0].cells.B");
    CHECK(location_of(doc(R"({"id": "1", "cells": {"A": {"a": "1"}, "B": "b"}})")) == "tuples[0].cells.A");
    CHECK(location_of(doc(R"({"id": "1", "cells": {"A": "a", "B": {"x": "half"}}})")) == "tuples[0].cells.B.x");
    CHECK(location_of("{\n\"attributes\": [\n,]}") == "line 3");
    CHECK(location_of(R"({"tuples": []})") == "document");
    CHECK(location_of(R"({"attributes": [{"name": "A"}, {"name": "A"}], "tuples": []})") == "attributes[1].name");
}

TEST_CASE("documents accept decimals, numbers and empty tuple lists") {
    const Cir c = parse_cir(doc(R"({"id": "1", "cells": {"A": "a", "B": {"x": 0.1, "y": "0.9"}}})"));
    CHECK(c.distribution("1", "B").probability(Value("x")) == q("1/10"));
    CHECK(parse_cir(doc("")).size() == 0);
}

TEST_CASE("serialization round-trips") {
    CHECK(parse_cir(serialize_cir(u1())) == u1());
    CHECK(parse_cir(serialize_cir(u2(), true)) == u2());
    Generator gen(3);
    for (int i = 0; i < 50; ++i) {
        const Cir c = gen.bounded_cir(gen.schema(4, gen.random_subset({"A", "B", "C", "D"})), 6, UINT64_MAX);
        CHECK(parse_cir(serialize_cir(c)) == c);
        CHECK(parse_cir(serialize_cir(c, true)) == c);
    }
    CirDocument d{u1(), std::string("specialist? time -> room"), R"({"note":"x"})"};
    const CirDocument back = parse_document(serialize_document(d));
    CHECK(back.fds == d.fds);
    CHECK(back.meta == d.meta);
}

TEST_CASE("FD text") {
    const Schema s = u1().schema();
    CHECK(parse_fds("specialist? time -> room", s).fds() == std::vector<Fd>{Fd{{"specialist", "time"}, {"room"}}});
    CHECK(parse_fds("specialist? time -> room; room time -> specialist?", s).size() == 2);

    const Schema ab({"A", "B"}, {});
    CHECK(parse_fds("A <-> B", ab).fds() == std::vector<Fd>{Fd{{"A"}, {"B"}}, Fd{{"B"}, {"A"}}});
    CHECK(parse_fds("A <- B", ab).fds() == std::vector<Fd>{Fd{{"B"}, {"A"}}});
    CHECK(parse_fds("A->B;", ab).fds() == std::vector<Fd>{Fd{{"A"}, {"B"}}});
    CHECK(parse_fds("{} -> A", ab).fds() == std::vector<Fd>{Fd{{}, {"A"}}});
    CHECK(parse_fds("", ab).empty());

    const Schema abc({"A", "B", "C"}, {"B", "C"});
    // Chain shorthand: A <-> ?B -> ?C.
    CHECK(parse_fds("A <-> B? -> C?", abc).fds() ==
          std::vector<Fd>{Fd{{"A"}, {"B"}}, Fd{{"B"}, {"A"}}, Fd{{"B"}, {"C"}}});

    CHECK_THROWS_AS(parse_fds("A -> Z", ab), ParseError);
    CHECK_THROWS_AS(parse_fds("A? -> B", ab), ParseError);   // A is certain
    CHECK_THROWS_AS(parse_fds("A -> B", abc), ParseError);   // B is uncertain
    CHECK_THROWS_AS(parse_fds("A B", ab), ParseError);
    CHECK_THROWS_AS(parse_fds("-> A", ab), ParseError);
    CHECK_THROWS_AS(parse_fds("A ->", ab), ParseError);
    CHECK_THROWS_AS(parse_fds("{} A -> B", ab), ParseError);
    try {
        parse_fds("A -> B; A -> Q", ab);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.location() == "rule 2");
    }
}

TEST_CASE("formatted FDs parse back") {
    const Schema s({"A", "B", "C"}, {"B"});
    const FdSet f = parse_fds("A -> B? C; {} -> A; B? C -> A", s);
    CHECK(format_fds(f) == "{} -> A; A -> B?; A -> C; B? C -> A");
    CHECK(parse_fds(format_fds(f), s) == f);
}
