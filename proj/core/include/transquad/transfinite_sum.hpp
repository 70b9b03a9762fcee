#ifndef TRANSQUAD_TRANSFINITE_SUM_HPP
#define TRANSQUAD_TRANSFINITE_SUM_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "transquad/family.hpp"

namespace transquad {

struct SumConfig {
    double tol = 1e-9;
    std::uint64_t layer_budget = 10000; // terms per refinement layer
    int cauchy_window = 8;              // consecutive small steps to accept a limit
    double blowup_threshold = 1e12;     // partial-sum norm treated as divergence
};

enum class SumStatus { converged, budget_exhausted, diverged };

/// Outcome of a partial-sum evaluation. `residual` bounds the distance to the
/// true value when `certified`; otherwise it is the heuristic estimate from
/// the convergence window. `trouble` names the limit position where summation
/// failed (for diverged / budget_exhausted).
struct SumResult {
    VectorValue value;
    double residual = 0.0;
    bool certified = true;
    SumStatus status = SumStatus::converged;
    std::optional<Position> trouble;
    double max_term_norm = 0.0;
    std::optional<Position> blowup_at;
};

/// sigma(gamma): sum over all elements strictly below `gamma`. Non-throwing.
SumResult try_partial_sum(const Family& f, const Position& gamma, const SumConfig& cfg);

/// Throwing wrapper: NotConvergent when no convergence window closed within
/// the budget, ToleranceUnachievable when a certified bound exists but stays
/// above cfg.tol. Returns (value, residual).
std::pair<VectorValue, double> partial_sum(const Family& f, const Position& gamma,
                                           const SumConfig& cfg);

/// Sum of the whole family: sigma(sup), plus the value at the maximum when
/// the set contains its supremum.
std::pair<VectorValue, double> family_sum(const Family& f, const SumConfig& cfg);
SumResult try_family_sum(const Family& f, const SumConfig& cfg);

enum class EntryStatus { exact, limit_estimated };

struct PartialSumEntry {
    Position gamma;
    VectorValue sigma;
    EntryStatus status = EntryStatus::exact;
    double residual = 0.0;
};

/// sigma along the first `budget` elements (exact successor recursion),
/// optionally closed by the certified total at the supremum.
struct PartialSumTable {
    std::vector<PartialSumEntry> entries;
};

PartialSumTable partial_sum_table(const Family& f, std::uint64_t budget, const SumConfig& cfg,
                                  bool include_total = true);

struct SummabilityReport {
    Tri verdict = Tri::unknown;          // summable
    Tri absolute_verdict = Tri::unknown; // absolutely summable
    Tri bounded_verdict = Tri::unknown;  // term norms bounded
    bool verdict_certified = false;
    bool absolute_certified = false;
    bool bounded_certified = false;
    std::optional<Position> c1; // boundedness cutoff
    std::optional<Position> c2; // absolute summability cutoff
    std::optional<Position> c3; // summability cutoff
    std::optional<std::pair<VectorValue, double>> total;
};

/// Tri-state verdicts for boundedness / absolute summability / summability,
/// with cutoff positions where a negative verdict is locatable. Negative
/// verdicts are only asserted from divergence past the blow-up threshold,
/// a declared term-norm floor, or a declared absolute divergence (validated
/// against the computed partial sums); everything else stays `unknown`.
SummabilityReport classify(const Family& f, std::uint64_t budget, double tol);

} // namespace transquad

#endif
