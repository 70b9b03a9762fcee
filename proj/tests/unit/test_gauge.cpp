#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "transquad/gallery.hpp"
#include "transquad/gauge.hpp"

using namespace transquad;

TEST_CASE("a unit gauge covers [0,1] with one cell") {
    auto p = cousin_partition([](double) { return 1.0; }, 0.0, 1.0);
    CHECK(p.cells.size() == 1);
    CHECK(is_fine([](double) { return 1.0; }, p));
}

TEST_CASE("a constant gauge of 0.3 needs at least two fine cells") {
    Gauge delta = [](double) { return 0.3; };
    auto p = cousin_partition(delta, 0.0, 1.0);
    CHECK(p.cells.size() >= 2);
    CHECK(is_fine(delta, p));
    double cover = 0.0;
    for (const auto& c : p.cells) cover += c.right - c.left;
    CHECK(cover == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("a gauge vanishing toward the midpoint forces a tag there") {
    Gauge delta = [](double t) { return std::abs(t - 0.5) / 2 + std::ldexp(1.0, -20); };
    auto p = cousin_partition(delta, 0.0, 1.0);
    CHECK(is_fine(delta, p));
    bool tagged_half = false;
    for (const auto& c : p.cells) tagged_half = tagged_half || c.tag == 0.5;
    CHECK(tagged_half);
}

TEST_CASE("pathologically small gauges exceed the bisection depth") {
    Gauge delta = [](double) { return 1e-18; };
    CHECK_THROWS_AS(cousin_partition(delta, 0.0, 1.0, 12), DepthExceeded);
}

TEST_CASE("an exact linear primitive has zero defect") {
    auto g = [](double) { return VectorValue::real(std::exp(1.0)); };
    auto f = [](double t) { return VectorValue::real(t * std::exp(1.0)); };
    auto p = cousin_partition([](double) { return 0.2; }, 0.0, 1.0);
    DefectPair d = riemann_defect(g, f, p);
    CHECK(d.hl <= 1e-14);
    CHECK(d.hk <= d.hl + 1e-18);
}

TEST_CASE("one-jump step mapping: defects shrink monotonically with the gauge scale") {
    StepMapping jump;
    jump.steps.index = WellOrderedSet::finite_chain({0.0, 0.5, 1.0});
    jump.steps.kind = SpaceKind::real;
    jump.steps.dim = 1;
    jump.steps.value = [](const Address& a) {
        return VectorValue::real(a.digits()[0] == 0 ? 1.0 : 3.0);
    };
    jump.terminal = VectorValue::real(3.0);
    PrimitiveTrace f = primitive(jump, {});

    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 10; ++k) {
        Gauge delta = canonical_step_gauge(jump, 1e-4, std::ldexp(1.0, -k));
        auto p = cousin_partition(delta, 0.0, 1.0);
        REQUIRE(is_fine(delta, p));
        DefectPair d = riemann_defect([&](double t) { return jump.eval(t); },
                                      [&](double t) { return f.eval(t).first; }, p);
        CHECK(d.hk <= d.hl + 1e-15);
        CHECK(d.hl <= prev + 1e-15);
        prev = d.hl;
    }
    CHECK(prev < 1e-6);
}

TEST_CASE("weak defect never exceeds the strong one on random partitions") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> dist(0.05, 0.45);
    StepMapping g = truncate_step_mapping(gallery::step_alt_harmonic(), 6);
    PrimitiveTrace f = primitive(g, {});
    for (int it = 0; it < 50; ++it) {
        double scale_v = dist(rng);
        Gauge delta = [scale_v](double) { return scale_v; };
        auto p = cousin_partition(delta, 0.0, 1.0);
        DefectPair d = riemann_defect([&](double t) { return g.eval(t); },
                                      [&](double t) { return f.eval(t).first; }, p);
        CHECK(d.hk <= d.hl + 1e-13);
    }
}
