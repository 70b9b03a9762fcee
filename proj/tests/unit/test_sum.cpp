#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "transquad/gallery.hpp"
#include "transquad/transfinite_sum.hpp"

using namespace transquad;
using namespace tq_test;

namespace {
const VectorValue e1 = VectorValue::real(1.0);
}

TEST_CASE("partial sums start at zero and follow the successor recursion exactly") {
    Family f = gallery::geometric_family(e1);
    SumConfig cfg;
    CHECK(partial_sum(f, Position(Address::first()), cfg).first.scalar() == 0.0);

    Address beta({5});
    auto s_beta = partial_sum(f, Position(beta), cfg);
    auto s_next = partial_sum(f, Position(f.index.successor(beta)), cfg);
    CHECK(s_next.first.scalar() - s_beta.first.scalar() ==
          doctest::Approx(f.value(beta).scalar()).epsilon(1e-15));
    CHECK(s_beta.second == 0.0); // finite prefix: exact
}

TEST_CASE("geometric family sums to 2 with certified residual") {
    Family f = gallery::geometric_family(e1);
    SumConfig cfg;
    cfg.tol = 1e-9;
    auto [total, res] = family_sum(f, cfg);
    CHECK(res <= 1e-9);
    CHECK(std::abs(total.scalar() - 2.0) <= res + 1e-12);
}

TEST_CASE("a finite chain adds its maximum to the total") {
    Family f;
    f.index = WellOrderedSet::finite_chain({0.0, 1.0});
    f.kind = SpaceKind::real;
    f.dim = 1;
    f.value = [](const Address&) { return VectorValue::real(1.0); };
    auto [total, res] = family_sum(f, {});
    CHECK(total.scalar() == 2.0);
    CHECK(res == 0.0);
}

TEST_CASE("alternating harmonic family: certified value against brute force") {
    Family f = gallery::alt_harmonic_family(e1);
    SumConfig cfg;
    cfg.tol = 1e-6;
    cfg.layer_budget = 4'000'000;
    auto [total, res] = family_sum(f, cfg);
    CHECK(res <= 1e-6);

    // Oracle: direct partial sums with the alternating remainder bound.
    double oracle = 0.0;
    std::uint64_t N = 2'000'001;
    for (std::uint64_t n = 0; n < N; ++n)
        oracle += (n % 2 == 0 ? 1.0 : -1.0) / static_cast<double>(n + 1);
    double oracle_rem = 1.0 / static_cast<double>(N + 1);
    CHECK(std::abs(total.scalar() - oracle) <= res + oracle_rem);
    CHECK(std::abs(total.scalar() - std::log(2.0)) <= res + 1e-12);
}

TEST_CASE("depth-2 alternating family: nested brute force agrees") {
    Family f = gallery::nested_alt_geometric_family(e1);
    SumConfig cfg;
    cfg.tol = 1e-4;
    cfg.layer_budget = 200'000;
    auto [total, res] = family_sum(f, cfg);
    CHECK(res <= 1e-4);

    // Oracle: brute-force nested partial sums, inner alternating remainder
    // 2^-n0/(K+1), outer geometric remainder 2^-M+1.
    double oracle = 0.0;
    const std::uint64_t M = 40, K = 100'000;
    for (std::uint64_t n0 = 0; n0 < M; ++n0) {
        double inner = 0.0;
        for (std::uint64_t n1 = 0; n1 < K; ++n1)
            inner += (n1 % 2 == 0 ? 1.0 : -1.0) / static_cast<double>(n1 + 1);
        oracle += std::ldexp(inner, -static_cast<int>(n0));
    }
    double oracle_rem = 2.0 / K + std::ldexp(2.0, -static_cast<int>(M));
    CHECK(std::abs(total.scalar() - oracle) <= res + oracle_rem);
    CHECK(std::abs(total.scalar() - 2 * std::log(2.0)) <= res + 1e-4);
}

TEST_CASE("regrouping: block-by-block equals bijective-order summation") {
    Family f = gallery::nested_geometric_family(e1);
    SumConfig cfg;
    cfg.tol = 1e-9;
    auto [total, res] = family_sum(f, cfg);
    CHECK(res <= 1e-9);
    // Diagonal (bijective) traversal with its own geometric remainder.
    VectorValue diag = diagonal_sum_oracle(f, 64, 64);
    double diag_rem = 4 * std::ldexp(1.0, -64) + 64 * std::ldexp(2.0, -64);
    CHECK(std::abs(total.scalar() - diag.scalar()) <= res + diag_rem + 1e-12);
    CHECK(std::abs(total.scalar() - 4.0) <= res + 1e-12);
}

TEST_CASE("monotone partial sums for nonnegative families") {
    Family f = gallery::nested_geometric_family(e1);
    SumConfig cfg;
    double prev = -1.0;
    auto e = f.index.enumerate(48);
    for (const auto& c : e) {
        double s = partial_sum(f, Position(c.addr), cfg).first.scalar();
        CHECK(s >= prev);
        prev = s;
    }
}

TEST_CASE("classification trichotomy over the three dyadic families") {
    const std::uint64_t budget = 10'000;
    const double tol = 1e-6;

    SUBCASE("constant terms: bounded, not summable, cutoff at the closing limit") {
        auto rep = classify(gallery::constant_family(e1), budget, tol);
        CHECK(rep.bounded_verdict == Tri::yes);
        CHECK(rep.bounded_certified);
        CHECK(rep.verdict == Tri::no);
        CHECK(rep.verdict_certified);
        REQUIRE(rep.c3);
        CHECK(rep.c3->at_sup());
        CHECK_FALSE(is_successor_position(gallery::constant_family(e1).index, *rep.c3));
    }
    SUBCASE("alternating harmonic: summable, not absolutely") {
        auto rep = classify(gallery::alt_harmonic_family(e1), 4'000'000, tol);
        CHECK(rep.verdict == Tri::yes);
        CHECK(rep.verdict_certified);
        CHECK(rep.absolute_verdict == Tri::no);
        REQUIRE(rep.c2);
        CHECK_FALSE(is_successor_position(gallery::alt_harmonic_family(e1).index, *rep.c2));
    }
    SUBCASE("doubling terms: unbounded with a located cutoff") {
        auto rep = classify(gallery::doubling_family(e1), budget, tol);
        CHECK(rep.bounded_verdict == Tri::no);
        CHECK(rep.bounded_certified);
        CHECK(rep.verdict == Tri::no);
        REQUIRE(rep.c1);
        CHECK_FALSE(is_successor_position(gallery::doubling_family(e1).index, *rep.c1));
    }
}

TEST_CASE("absolutely summable implies summable in every report") {
    for (const char* id : {"geo-lambda0", "altharm-lambda0", "const-lambda0", "geo2-lambda1"}) {
        auto entry = gallery::get(id);
        auto rep = classify(*entry.family, 100'000, 1e-4);
        if (rep.absolute_verdict == Tri::yes) CHECK(rep.verdict == Tri::yes);
        if (rep.verdict == Tri::no) CHECK(rep.absolute_verdict == Tri::no);
    }
}

TEST_CASE("partial sum table: exact prefix rows plus certified total") {
    Family f = gallery::geometric_family(e1);
    SumConfig cfg;
    cfg.tol = 1e-9;
    auto table = partial_sum_table(f, 4, cfg);
    REQUIRE(table.entries.size() == 5);
    CHECK(table.entries[0].sigma.scalar() == 0.0);
    CHECK(table.entries[1].sigma.scalar() == 1.0);   // after the first term 2^0
    CHECK(table.entries[2].sigma.scalar() == 1.5);
    CHECK(table.entries[0].status == EntryStatus::exact);
    CHECK(table.entries.back().status == EntryStatus::limit_estimated);
    CHECK(table.entries.back().gamma.at_sup());
    CHECK(std::abs(table.entries.back().sigma.scalar() - 2.0) <= 1e-9);
}

TEST_CASE("budget exhaustion without certificates raises the documented errors") {
    Family f;
    f.index = WellOrderedSet::dyadic(0.0, 1.0, 1);
    f.kind = SpaceKind::real;
    f.dim = 1;
    f.value = [](const Address& a) {
        return VectorValue::real(1.0 / static_cast<double>(a.digits()[0] + 1));
    };
    SumConfig cfg;
    cfg.tol = 1e-9;
    cfg.layer_budget = 2'000;
    CHECK_THROWS_AS(family_sum(f, cfg), NotConvergent);

    // With a hook whose bound cannot meet the tolerance at the budget the
    // failure is a tolerance problem, not a convergence one.
    f.tail_bound = [](const std::vector<std::uint64_t>&, std::uint64_t k) {
        return std::optional<double>(1.0 / static_cast<double>(k + 1));
    };
    CHECK_THROWS_AS(family_sum(f, cfg), ToleranceUnachievable);
}

TEST_CASE("divergence past the blow-up threshold is reported with a cutoff") {
    SumConfig cfg;
    cfg.tol = 1e-6;
    SumResult r = try_family_sum(gallery::doubling_family(e1), cfg);
    CHECK(r.status == SumStatus::diverged);
    REQUIRE(r.trouble);
    CHECK(r.trouble->at_sup());
}
