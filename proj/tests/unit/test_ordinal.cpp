#include <doctest.h>

#include <cmath>
#include <nlohmann/json.hpp>
#include <random>

#include "transquad/ordinal.hpp"

using namespace transquad;

TEST_CASE("addresses canonicalize and order lexicographically") {
    CHECK(Address({2, 0}) == Address({2}));
    CHECK(Address({2, 0, 0}) == Address({2}));
    CHECK(Address({0}) == Address::first());
    CHECK(Address({0, 5}) < Address({1, 0}));
    CHECK(Address({2}) == Address({2}));
    CHECK(Address({1}) < Address({1, 1}));
    CHECK(Address({1, 7}) < Address({2}));
    CHECK(Address::parse("3.1.4").digits() == std::vector<std::uint64_t>{3, 1, 4});
    CHECK(Address({3, 1, 4}).str() == "3.1.4");
}

TEST_CASE("dyadic knots of [0,1): values and successors") {
    auto L0 = WellOrderedSet::dyadic(0.0, 1.0, 1);
    CHECK(L0.value(Address({3})) == doctest::Approx(7.0 / 8).epsilon(1e-15));
    CHECK(L0.successor(Address({3})) == Address({4}));
    CHECK(L0.value(Address({4})) == doctest::Approx(15.0 / 16).epsilon(1e-15));
    CHECK(L0.min() == 0.0);
    CHECK(L0.sup_value() == 1.0);
    CHECK_FALSE(L0.contains_sup());
}

TEST_CASE("depth-2 set: block structure matches the closed form") {
    auto L1 = WellOrderedSet::dyadic(0.0, 1.0, 2);
    // value(n0, n1) = 1 - 2^-(n0+1) - 2^-(n0+n1+1)
    for (std::uint64_t n0 = 0; n0 < 6; ++n0)
        for (std::uint64_t n1 = 1; n1 < 8; ++n1) {
            double expect = 1.0 - std::ldexp(1.0, -static_cast<int>(n0) - 1) -
                            std::ldexp(1.0, -static_cast<int>(n0 + n1) - 1);
            CHECK(L1.value(Address({n0, n1})) == doctest::Approx(expect).epsilon(1e-15));
        }
    CHECK(L1.successor(Address({0, 2})) == Address({0, 3}));
    // Successor of a limit point steps into its refining block.
    CHECK(L1.successor(Address({1})) == Address({1, 1}));
    CHECK(L1.value(Address({1})) == doctest::Approx(0.5));
    CHECK(L1.is_limit(Address({1})));
    CHECK(L1.is_limit(Address({2})));
    CHECK_FALSE(L1.is_limit(Address({0, 3})));
    CHECK_FALSE(L1.is_limit(Address::first()));
}

TEST_CASE("finite chains contain their maximum") {
    auto F = WellOrderedSet::finite_chain({0.0, 0.5, 0.9});
    CHECK(F.successor(Address({1})) == Address({2}));
    CHECK(F.value(Address({2})) == 0.9);
    CHECK(F.contains_sup());
    CHECK(F.sup_value() == 0.9);
    CHECK_THROWS_AS(F.successor(Address({2})), AddressAtSup);
    CHECK(F.enumerate(5).size() == 3);
}

TEST_CASE("enumerate returns the first elements in increasing order") {
    auto L0 = WellOrderedSet::dyadic(0.0, 1.0, 1);
    auto e = L0.enumerate(3);
    REQUIRE(e.size() == 3);
    CHECK(e[0].value == 0.0);
    CHECK(e[1].value == 0.5);
    CHECK(e[2].value == 0.75);

    auto L1 = WellOrderedSet::dyadic(0.0, 1.0, 2);
    auto e1 = L1.enumerate(2);
    REQUIRE(e1.size() == 2);
    CHECK(e1[0].value == 0.0);
    CHECK(e1[1].value == doctest::Approx(0.25));
}

TEST_CASE("strict monotonicity along enumeration prefixes") {
    for (std::size_t depth : {1u, 2u, 3u}) {
        auto L = WellOrderedSet::dyadic(0.0, 1.0, depth);
        auto e = L.enumerate(40); // stays above fp resolution of the sup
        for (std::size_t i = 1; i < e.size(); ++i) {
            CHECK(e[i - 1].value < e[i].value);
            CHECK(e[i - 1].addr < e[i].addr);
        }
    }
}

TEST_CASE("compare agrees with the embedding on sampled pairs") {
    auto L1 = WellOrderedSet::dyadic(0.0, 1.0, 2);
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::uint64_t> d(0, 9);
    for (int it = 0; it < 500; ++it) {
        Address a({d(rng), d(rng)});
        Address b({d(rng), d(rng)});
        double va = L1.value(a), vb = L1.value(b);
        if (a < b) CHECK(va < vb);
        if (a == b) CHECK(va == vb);
        if (b < a) CHECK(vb < va);
    }
    // A padded spelling denotes the same element, not a different one.
    CHECK(Address({1, 0}) == Address({1}));
    CHECK(L1.value(Address({1, 0})) == L1.value(Address({1})));
}

TEST_CASE("no set element lies strictly between a point and its successor") {
    auto L1 = WellOrderedSet::dyadic(0.0, 1.0, 2);
    auto e = L1.enumerate(64);
    for (std::size_t i = 1; i < e.size(); ++i) {
        // consecutive enumeration = successor steps
        CHECK(L1.successor(e[i - 1].addr) == e[i].addr);
    }
}

TEST_CASE("step intervals partition [min, sup): sampled points land in one step") {
    auto L1 = WellOrderedSet::dyadic(0.0, 1.0, 2);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (int it = 0; it < 2000; ++it) {
        double t = dist(rng);
        if (t >= 1.0) continue;
        Address a = L1.locate(t);
        auto [lo, hi] = L1.step_interval(a);
        CHECK(lo <= t);
        CHECK(t < hi);
    }
}

TEST_CASE("limit coherence: deeper elements converge to the limit from below") {
    auto L1 = WellOrderedSet::dyadic(0.0, 1.0, 2);
    Address gamma({3});
    double target = L1.value(gamma);
    double prev = -1.0;
    for (std::uint64_t m = 1; m < 40; ++m) {
        double v = L1.value(Address({2, m}));
        CHECK(v < target);
        CHECK(v > prev);
        prev = v;
    }
    CHECK(target - prev < 1e-9);
}

TEST_CASE("restrict_below keeps exactly the strictly smaller elements") {
    auto L0 = WellOrderedSet::dyadic(0.0, 1.0, 1);
    auto all = L0.restrict_below(Position::sup());
    CHECK(all.enumerate(5).size() == 5);

    auto empty = L0.restrict_below(Position(Address::first()));
    CHECK(empty.enumerate(5).empty());

    auto L1 = WellOrderedSet::dyadic(0.0, 1.0, 2);
    auto below_half = L1.restrict_below(Position(Address({1}))); // cut at value 1/2
    auto e = below_half.enumerate(200);
    CHECK(e.size() == 200); // the first block is infinite
    for (const auto& c : e) {
        CHECK(c.addr < Address({1}));
        CHECK(c.value <= 0.5); // embedded values saturate at fp resolution
    }
    for (std::size_t i = 0; i < 48; ++i) CHECK(e[i].value < 0.5);
    CHECK(below_half.sup_value() == doctest::Approx(0.5));
    CHECK_FALSE(below_half.contains_sup());

    // Restriction below a successor has a maximum.
    auto upto = L1.restrict_below(Position(Address({0, 3})));
    CHECK(upto.contains_sup());
    REQUIRE(upto.max_element());
    CHECK(*upto.max_element() == Address({0, 2}));
    CHECK_THROWS_AS(upto.successor(Address({0, 2})), AddressAtSup);
}

TEST_CASE("arithmetic top layer reaches an infinite supremum") {
    auto N = WellOrderedSet::custom(0.0, std::numeric_limits<double>::infinity(),
                                    {LayerGen{LayerGen::Kind::arith, 1.0}});
    CHECK(N.value(Address({7})) == 7.0);
    CHECK(std::isinf(N.sup_value()));
    CHECK(N.locate(3.5) == Address({3}));

    auto T = WellOrderedSet::custom(0.0, std::numeric_limits<double>::infinity(),
                                    {LayerGen{LayerGen::Kind::arith, 1.0},
                                     LayerGen{LayerGen::Kind::dyadic, 1.0}});
    CHECK(T.value(Address({2, 3})) == doctest::Approx(3.0 - 0.125));
    CHECK(T.is_limit(Address({2})));
    auto eu = T.enumerate_until(2.5, 16);
    REQUIRE(!eu.empty());
    for (std::size_t i = 1; i < eu.size(); ++i) CHECK(eu[i - 1].value < eu[i].value);
    bool saw_block_1 = false;
    for (const auto& c : eu) saw_block_1 = saw_block_1 || c.addr == Address({1});
    CHECK(saw_block_1); // enumerate_until crosses limit points
}

TEST_CASE("config round trip") {
    auto L = WellOrderedSet::dyadic(0.25, 2.0, 2);
    auto back = WellOrderedSet::from_config(L.to_config());
    CHECK(back.same_structure(L));

    auto F = WellOrderedSet::finite_chain({0.0, 1.0});
    CHECK(WellOrderedSet::from_config(F.to_config()).same_structure(F));

    nlohmann::json j = {{"kind", "custom"},
                        {"min", 0.0},
                        {"sup", "inf"},
                        {"layers", {{{"type", "arith"}, {"step", 1.0}}, {{"type", "dyadic"}}}}};
    auto C = WellOrderedSet::from_config(j);
    CHECK(C.depth() == 2);
    CHECK(std::isinf(C.sup_value()));

    CHECK_THROWS_AS(WellOrderedSet::from_config(nlohmann::json{{"kind", "nope"}}), BadSpec);
}

TEST_CASE("successor positions are never reported as limits") {
    auto L1 = WellOrderedSet::dyadic(0.0, 1.0, 2);
    CHECK(is_successor_position(L1, Position(Address({0, 3}))));
    CHECK_FALSE(is_successor_position(L1, Position(Address({2}))));
    CHECK_FALSE(is_successor_position(L1, Position::sup()));
    CHECK_FALSE(is_successor_position(L1, Position(Address::first())));
}
