#ifndef TRANSQUAD_STEP_INTEGRAL_HPP
#define TRANSQUAD_STEP_INTEGRAL_HPP

#include <optional>
#include <utility>

#include "transquad/transfinite_sum.hpp"

namespace transquad {

/// Piecewise-constant mapping whose steps are the intervals [alpha, S(alpha))
/// of a well-ordered knot set: g(t) = z_alpha on the step owned by alpha.
/// `terminal` is the value at the top of the domain when the knot set
/// contains its supremum (that point owns no step).
struct StepMapping {
    Family steps;
    std::optional<VectorValue> terminal;

    // Optional certified declarations for the width-weighted family
    // ((S(a)-a) z_a); attached by constructors that know them analytically.
    // `weighted_value` overrides the width*value product where an exact
    // closed form avoids floating-point saturation at extreme depths.
    std::function<VectorValue(const Address&)> weighted_value;
    TailHook weighted_tail_bound;
    TailHook weighted_abs_tail_bound;
    std::optional<double> weighted_term_floor;
    bool weighted_abs_divergent = false;

    double domain_min() const { return steps.index.min(); }
    double domain_sup() const { return steps.index.sup_value(); }

    VectorValue eval(double t) const;
};

/// The family alpha -> (S(alpha)-alpha) z_alpha over the elements that own a
/// step (everything strictly below the maximum, when there is one).
Family weighted_family(const StepMapping& g);

enum class IntegralMode { hl, hk, bochner, riemann };

struct ModeVerdict {
    Tri verdict = Tri::unknown;
    bool certified = false;
    std::optional<Position> cutoff;
};

struct IntegrabilityVerdict {
    ModeVerdict hl;
    ModeVerdict hk;
    ModeVerdict bochner;
    ModeVerdict riemann;
    std::optional<std::pair<VectorValue, double>> integral;
};

/// Integrability of a step mapping, decided through the weighted family:
/// summable vs absolutely summable vs bounded values, combined per mode.
/// The integral value is the sum of the weighted family when it exists.
IntegrabilityVerdict integrate_step(const StepMapping& g, IntegralMode mode, double tol,
                                    const SumConfig& cfg = {});

/// Piecewise-linear primitive: f(t) = sigma(gamma) + (t-gamma) z_gamma on the
/// step owned by gamma, f(min) = 0. Evaluations report the summation residual
/// of the knot sum they stand on.
class PrimitiveTrace {
public:
    PrimitiveTrace(StepMapping g, SumConfig cfg);

    /// f(t) for domain_min <= t <= domain_sup (the top end evaluates the
    /// improper limit). Throws NotLocallySummable when the knot sum below t
    /// does not exist.
    std::pair<VectorValue, double> eval(double t) const;

    const StepMapping& mapping() const { return g_; }

private:
    StepMapping g_;
    Family weighted_;
    SumConfig cfg_;
};

PrimitiveTrace primitive(const StepMapping& g, const SumConfig& cfg = {});

/// Improper limit of the primitive along the enumeration; absent when it
/// cannot be certified or fails.
std::optional<std::pair<VectorValue, double>> improper_limit(const StepMapping& g, double tol,
                                                             const SumConfig& cfg = {});

/// Finite truncation helper: the first `knots` elements as an explicit chain
/// (plus the original top end), constant beyond the last kept knot.
StepMapping truncate_step_mapping(const StepMapping& g, std::uint64_t knots);

} // namespace transquad

#endif
