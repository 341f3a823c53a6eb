#include <doctest.h>

#include <random>

#include "cirsolve/assignment.hpp"

using cirsolve::max_product_assignment;
using cirsolve::max_product_assignment_exhaustive;
using cirsolve::Rational;

namespace {

Rational product(const std::vector<std::vector<Rational>>& w, const std::vector<std::size_t>& cols) {
    Rational p(1);
    for (std::size_t r = 0; r < cols.size(); ++r) p *= w[r][cols[r]];
    return p;
}

}  // namespace

TEST_CASE("small hand-checked assignments") {
    // Rows pick columns; best is (0->1, 1->0) with 0.9 * 0.8 = 0.72 over 0.5 * 0.6 = 0.3.
    std::vector<std::vector<Rational>> w{{Rational(1, 2), Rational(9, 10)}, {Rational(8, 10), Rational(6, 10)}};
    CHECK(*max_product_assignment(w) == std::vector<std::size_t>{1, 0});

    // Surplus columns stay unmatched.
    std::vector<std::vector<Rational>> wide{{Rational(1, 4), Rational(0), Rational(3, 4)}};
    CHECK(*max_product_assignment(wide) == std::vector<std::size_t>{2});

    // Both rows can only use column 0.
    std::vector<std::vector<Rational>> blocked{{Rational(1), Rational(0)}, {Rational(1), Rational(0)}};
    CHECK_FALSE(max_product_assignment(blocked).has_value());

    CHECK(max_product_assignment({})->empty());
}

TEST_CASE("ties resolve to the lexicographically smallest column vector") {
    std::vector<std::vector<Rational>> w(3, std::vector<Rational>(3, Rational(1, 3)));
    CHECK(*max_product_assignment(w) == std::vector<std::size_t>{0, 1, 2});
    // Two optima with product 1/4: (0,1) and (1,0); the first wins.
    std::vector<std::vector<Rational>> two{{Rational(1, 2), Rational(1, 2)}, {Rational(1, 2), Rational(1, 2)}};
    CHECK(*max_product_assignment(two) == std::vector<std::size_t>{0, 1});
}

TEST_CASE("near-ties beyond floating point precision are settled exactly") {
    // Products differ by a relative 1e-30, far below long double resolution.
    const Rational eps(cirsolve::BigInt(1), cirsolve::BigInt("1000000000000000000000000000000"));
    std::vector<std::vector<Rational>> w{{Rational(1, 2), Rational(1, 2) + eps}, {Rational(1, 2), Rational(1, 2)}};
    CHECK(*max_product_assignment(w) == std::vector<std::size_t>{1, 0});
}

TEST_CASE("agrees with exhaustive search on random matrices") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 300; ++trial) {
        const int rows = std::uniform_int_distribution<int>(1, 5)(rng);
        const int cols = std::uniform_int_distribution<int>(rows, 6)(rng);
        std::vector<std::vector<Rational>> w(rows, std::vector<Rational>(cols));
        for (auto& row : w)
            for (auto& x : row) {
                const int k = std::uniform_int_distribution<int>(0, 4)(rng);  // small range forces ties
                x = Rational(k, 4);
            }
        const auto fast = max_product_assignment(w);
        const auto slow = max_product_assignment_exhaustive(w);
        REQUIRE(fast.has_value() == slow.has_value());
        if (!fast) continue;
        CHECK(product(w, *fast) == product(w, *slow));
        CHECK(*fast == *slow);
    }
}
