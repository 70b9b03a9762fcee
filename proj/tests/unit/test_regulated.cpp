#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "transquad/gallery.hpp"
#include "transquad/regulated.hpp"

using namespace transquad;
using namespace tq_test;

namespace {

RegulatedMapping constant_map(double value) {
    RegulatedMapping g;
    g.eval = [value](double) { return VectorValue::real(value); };
    g.right_limit = g.eval;
    g.osc = [](double, double) { return 0.0; };
    g.a = 0.0;
    g.b = 1.0;
    g.sup_bound = std::abs(value);
    return g;
}

const gallery::OscParams small_params{8, 96};

} // namespace

TEST_CASE("oscillation step: constant mappings reach the right end at once") {
    RegulatedMapping g = constant_map(2.0);
    StepEstimate s = g_epsilon_step(g, 0.0, 0.5);
    CHECK(s.y == 1.0);
    CHECK(s.certified);
}

TEST_CASE("oscillation step stops at a jump larger than eps") {
    StepMapping jump;
    jump.steps.index = WellOrderedSet::finite_chain({0.0, 0.5, 1.0});
    jump.steps.kind = SpaceKind::real;
    jump.steps.dim = 1;
    jump.steps.value = [](const Address& a) {
        return VectorValue::real(a.digits()[0] == 0 ? 0.0 : 1.0);
    };
    jump.terminal = VectorValue::real(1.0);
    RegulatedMapping g = as_regulated(jump);
    StepEstimate s = g_epsilon_step(g, 0.0, 0.25);
    CHECK(s.y == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(s.y <= 0.5);
    // and with eps above the jump size the step runs through
    CHECK(g_epsilon_step(g, 0.0, 2.0).y == 1.0);
}

TEST_CASE("oscillation step on the oscillatory mapping: certified and sampled-sound") {
    RegulatedMapping g = gallery::osc_base(small_params);
    StepEstimate s = g_epsilon_step(g, 0.0, 0.5, {});
    CHECK(s.certified);
    CHECK(s.y > 0.0);
    CHECK(s.y < 1.0);
    std::mt19937_64 rng(23);
    double sampled = sampled_osc(g.eval, 0.0, s.y, 3000, rng);
    CHECK(sampled <= 0.5 + 1e-9);
}

TEST_CASE("oscillation step grows with eps") {
    RegulatedMapping g = gallery::osc_base(small_params);
    double prev = 0.0;
    for (double eps : {0.1, 0.2, 0.4, 0.8}) {
        double y = g_epsilon_step(g, 0.05, eps).y;
        CHECK(y >= prev - 1e-12);
        prev = y;
    }
}

TEST_CASE("partition of a constant mapping is one certified cell") {
    RegulatedMapping g = constant_map(1.0);
    OscPartition p = build_partition(g, 0.0, 1.0, 0.5, 100);
    CHECK(p.complete);
    REQUIRE(p.cells.size() == 1);
    CHECK(p.cells[0].left == 0.0);
    CHECK(p.cells[0].right == 1.0);
    CHECK(p.cells[0].certified);
    CHECK_FALSE(p.cells[0].limit_gap);
}

TEST_CASE("partition of a transfinite step mapping finds the jump knots") {
    StepMapping g = truncate_step_mapping(gallery::step_alt_harmonic(), 12);
    RegulatedMapping r = as_regulated(g);
    OscPartition p = build_partition(r, 0.0, 1.0, 0.25, 4000);
    CHECK(p.complete);
    auto knots = p.knots();
    // every dyadic jump point below the truncation must be represented
    for (std::uint64_t k = 1; k <= 8; ++k) {
        double jump_t = 1.0 - std::ldexp(1.0, -static_cast<int>(k));
        double best = 1e9;
        for (double kn : knots) best = std::min(best, std::abs(kn - jump_t));
        CHECK(best <= 1e-6);
    }
    // cells tile [0, 1) exactly
    CHECK(p.cells.front().left == 0.0);
    CHECK(p.cells.back().right == 1.0);
    for (std::size_t i = 1; i < p.cells.size(); ++i)
        CHECK(p.cells[i - 1].right == p.cells[i].left);
}

TEST_CASE("partition soundness for the oscillatory mapping") {
    RegulatedMapping g = gallery::osc_base(small_params);
    const double eps = 0.25;
    OscPartition p = build_partition(g, 0.0, 1.0, eps, 100000);
    CHECK(p.complete);
    CHECK(p.cells.front().left == 0.0);
    CHECK(p.cells.back().right == 1.0);
    std::mt19937_64 rng(29);
    std::size_t checked = 0;
    for (const auto& c : p.cells) {
        CHECK(p.cells[checked].left < p.cells[checked].right);
        if (checked + 1 < p.cells.size()) CHECK(c.right >= c.left);
        if (!c.limit_gap) {
            double sampled = sampled_osc(g.eval, c.left, c.right, 60, rng);
            CHECK(sampled <= eps + 1e-3);
        }
        ++checked;
    }
    // limited, narrow truncation gaps only
    CHECK(p.limit_gap_measure() < 0.1);
}

TEST_CASE("step approximation stays within eps off the knots") {
    RegulatedMapping g = gallery::osc_base(small_params);
    const double eps = 0.5;
    OscPartition p = build_partition(g, 0.0, 1.0, eps, 100000);
    StepMapping s = step_approximation(g, p);
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    int tested = 0;
    for (int it = 0; it < 400 && tested < 200; ++it) {
        double t = dist(rng);
        // skip points inside truncation gaps
        bool in_gap = false;
        for (const auto& c : p.cells)
            if (c.limit_gap && t > c.left && t < c.right) in_gap = true;
        if (in_gap || t >= 1.0) continue;
        ++tested;
        CHECK(sup_diff_tracked(s.eval(t), g.eval(t)) <= eps + 1e-9);
    }
    CHECK(tested >= 100);
}

TEST_CASE("adaptive integral matches the analytic primitive of the oscillatory mapping") {
    RegulatedMapping g = gallery::osc_base({16, 128});
    auto prim = gallery::osc_base_primitive({16, 128});
    for (double t : {0.31, 0.7, 1.0}) {
        AdaptiveResult r = integrate_adaptive(g, 0.0, t, 1e-3);
        CHECK(r.certified);
        CHECK(r.residual <= 1e-3);
        double expect = prim(t).coords()[0]; // primitive vanishes at 0
        CHECK(std::abs(r.value.coords()[0] - expect) <= r.residual + 1e-9);
    }
}

TEST_CASE("adaptive integral of a plain continuous function needs no hooks") {
    RegulatedMapping g;
    g.eval = [](double t) { return VectorValue::real(std::sin(3 * t)); };
    g.right_limit = g.eval;
    g.a = 0.0;
    g.b = 2.0;
    g.sup_bound = 1.0;
    // Lipschitz oscillation oracle
    g.osc = [](double x, double y) { return 3 * (y - x); };
    AdaptiveResult r = integrate_adaptive(g, 0.0, 2.0, 1e-4);
    CHECK(r.certified);
    double expect = (1 - std::cos(6.0)) / 3;
    CHECK(std::abs(r.value.scalar() - expect) <= r.residual + 1e-12);
    CHECK(r.residual <= 1e-4);
}

TEST_CASE("verdicts for the three oscillatory gallery mappings") {
    RegConfig cfg;
    cfg.cell_budget = 60000;
    SUBCASE("bounded base mapping: everything holds locally") {
        IntegrabilityVerdict v =
            integrate_regulated(gallery::osc_base(small_params), 0.0, 1.0, IntegralMode::riemann,
                                1e-2, cfg);
        CHECK(v.riemann.verdict == Tri::yes);
        CHECK(v.bochner.verdict == Tri::yes);
        CHECK(v.hl.verdict == Tri::yes);
        CHECK(v.hk.verdict == Tri::yes);
    }
    SUBCASE("conditional mapping: gauge integrable only") {
        IntegrabilityVerdict v = integrate_regulated(gallery::osc_conditional(1, small_params),
                                                     0.5, 1.25, IntegralMode::hl, 1e-2, cfg);
        CHECK(v.hl.verdict == Tri::yes);
        CHECK(v.hk.verdict == Tri::yes);
        CHECK(v.bochner.verdict == Tri::no);
        CHECK(v.riemann.verdict == Tri::no);
    }
    SUBCASE("root-singular mapping: absolutely integrable, not Riemann") {
        IntegrabilityVerdict v = integrate_regulated(gallery::osc_root_singular(2, small_params),
                                                     0.3, 1.2, IntegralMode::bochner, 1e-2, cfg);
        CHECK(v.bochner.verdict == Tri::yes);
        CHECK(v.riemann.verdict == Tri::no);
        CHECK(v.hl.verdict == Tri::yes);
    }
}

TEST_CASE("integral error bound: step integrals at eps and eps/2 stay close") {
    RegulatedMapping g = gallery::osc_base(small_params);
    const double span = 1.0;
    double prev_value = 0.0;
    bool have_prev = false;
    double prev_eps = 0.0;
    for (double eps : {0.5, 0.25, 0.125}) {
        OscPartition p = build_partition(g, 0.0, 1.0, eps, 200000);
        REQUIRE(p.complete);
        StepMapping s = step_approximation(g, p);
        Family w = weighted_family(s);
        SumConfig scfg;
        scfg.layer_budget = 400'000;
        auto [total, res] = family_sum(w, scfg);
        CHECK(res == 0.0); // finite partition: exact sum
        if (have_prev)
            CHECK(std::abs(total.coords()[0] - prev_value) <= 1.5 * prev_eps * span);
        prev_value = total.coords()[0];
        prev_eps = eps;
        have_prev = true;
    }
}

TEST_CASE("cached primitive reproduces adaptive prefix integrals") {
    RegulatedMapping g = gallery::osc_base({16, 128});
    RegPrimitive f = cd_primitive(g, 0.0, 1.0, 1e-3);
    auto prim = gallery::osc_base_primitive({16, 128});
    CHECK(f.eval(0.0).first.coords()[0] == 0.0);
    for (double t : {0.2, 0.5, 0.77, 1.0}) {
        auto [val, res] = f.eval(t);
        CHECK(std::abs(val.coords()[0] - prim(t).coords()[0]) <= res + 1e-9);
        CHECK(res <= 2e-3);
    }
    // difference of primitive values equals the integral over the piece
    AdaptiveResult mid = integrate_adaptive(g, 0.2, 0.5, 1e-4);
    auto d = sub(f.eval(0.5).first, f.eval(0.2).first);
    CHECK(std::abs(d.coords()[0] - mid.value.coords()[0]) <=
          f.eval(0.5).second + f.eval(0.2).second + mid.residual + 1e-12);
}

TEST_CASE("discontinuity scan finds the jump points of a step mapping") {
    StepMapping g = truncate_step_mapping(gallery::step_alt_harmonic(), 8);
    RegulatedMapping r = as_regulated(g);
    auto pts = discontinuities(r, 0.0, 1.0, 3, 4000);
    for (std::uint64_t k = 1; k <= 5; ++k) {
        double jump_t = 1.0 - std::ldexp(1.0, -static_cast<int>(k));
        bool found = false;
        for (const auto& p : pts)
            if (std::abs(p.t - jump_t) < 1e-6 && p.jump_estimate > 0.5) found = true;
        CHECK(found);
    }

    // continuous mapping: no certified jumps
    RegulatedMapping c;
    c.eval = [](double t) { return VectorValue::real(t * t); };
    c.right_limit = c.eval;
    c.osc = [](double x, double y) { return 2.2 * (y - x); };
    c.a = 0.0;
    c.b = 1.0;
    c.sup_bound = 1.0;
    auto cpts = discontinuities(c, 0.0, 1.0, 3, 4000);
    for (const auto& p : cpts) CHECK(p.jump_estimate < 1e-6);
}

TEST_CASE("rational oscillation points are detected for the oscillatory mapping") {
    RegulatedMapping g = gallery::osc_base(small_params);
    auto pts = discontinuities(g, 0.05, 0.95, 3, 100000);
    // the heavy rationals inside (0, 1) must show up among the knots
    for (double r : {0.5, 1.0 / 3, 2.0 / 3}) {
        double best = 1e9;
        for (const auto& p : pts) best = std::min(best, std::abs(p.t - r));
        CHECK(best < 1e-2);
    }
}

TEST_CASE("norm mapping keeps certified oscillation control") {
    RegulatedMapping g = gallery::osc_base(small_params);
    RegulatedMapping n = norm_mapping(g);
    CHECK(n.kind == SpaceKind::real);
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> dist(0.0, 0.9);
    for (int it = 0; it < 50; ++it) {
        double x = dist(rng);
        double y = x + 0.05;
        double no = n.osc ? n.osc(x, y) : -1;
        double sampled = sampled_osc(n.eval, x, y, 300, rng);
        CHECK(sampled <= no + 1e-9);
    }
}
