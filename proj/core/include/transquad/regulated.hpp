#ifndef TRANSQUAD_REGULATED_HPP
#define TRANSQUAD_REGULATED_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "transquad/step_integral.hpp"

namespace transquad {

/// A right-regulated mapping given by evaluation plus optional oracles.
/// `osc(x, y)` must be a certified upper bound on the oscillation
/// sup ||g(s) - g(t)|| over the OPEN interval (x, y); without it a sampling
/// fallback is used and results are flagged uncertified. The remaining hooks
/// carry analytic facts the numerics cannot recover from point values:
/// a sup bound, a certified bound on the integral of ||g|| over a cell
/// (usable across oscillation tips), an analytic primitive, and a certified
/// bound on the integral error of a truncated series evaluation.
struct RegulatedMapping {
    std::function<VectorValue(double)> eval;
    std::function<VectorValue(double)> right_limit;
    std::function<double(double, double)> osc;
    double a = 0.0;
    double b = 1.0; // may be +inf; compact operations take explicit bounds
    SpaceKind kind = SpaceKind::real;
    std::size_t dim = 1;
    std::string name;

    std::optional<double> sup_bound;
    std::function<double(double, double)> abs_cell_mass;
    std::function<VectorValue(double)> declared_primitive;
    std::function<double(double, double)> truncation_residual;
    bool declared_unbounded = false;
    bool declared_abs_divergent = false;

    VectorValue zero() const { return VectorValue::zero(kind, dim); }
};

struct RegConfig {
    std::uint64_t knot_budget = 200000;
    double stall_gap = 2e-5;        // relative gap that triggers limit insertion
    int stall_runs = 3;             // consecutive tiny gaps before extrapolating
    std::uint64_t cell_budget = 400000;
    std::uint64_t assisted_cell_budget = 100000; // cap when a primitive can close the rest
    double tip_width_floor = 4e-9; // relative; tightened automatically if needed
    int osc_samples = 128;
    int osc_rounds = 3;
    std::uint64_t seed = 0;
    double right_limit_h0 = 1e-3;
    int right_limit_steps = 40;
    double right_limit_tol = 1e-9;
};

/// Certified right-limit / oscillation access with sampling fallbacks.
VectorValue right_limit_or_sample(const RegulatedMapping& g, double t, const RegConfig& cfg,
                                  bool* certified = nullptr);
double osc_or_sample(const RegulatedMapping& g, double x, double y, const RegConfig& cfg,
                     bool* certified = nullptr);

struct StepEstimate {
    double y = 0.0;
    bool certified = true;
};

/// Certified lower estimate of the largest y with oscillation <= eps on
/// (x, y): exponential search outward, then bisection against the oracle.
/// Throws NoProgress when not even one float of progress can be certified.
StepEstimate g_epsilon_step(const RegulatedMapping& g, double x, double eps,
                            const RegConfig& cfg = {});

struct OscCell {
    double left;
    double right;
    double bound = 0.0;   // certified oscillation bound (certified cells)
    bool certified = true;
    bool limit_gap = false; // truncated accumulation of knots, not a real cell
};

/// Knot set tiling [a, b): certified cells have oscillation <= eps on their
/// open interior; limit gaps mark where knots accumulated and the iteration
/// jumped to the extrapolated limit point.
struct OscPartition {
    double eps = 0.0;
    std::vector<OscCell> cells;
    bool complete = false; // reached b within the knot budget
    std::vector<double> knots() const;
    std::size_t limit_gap_count() const;
    double limit_gap_measure() const;
};

OscPartition build_partition(const RegulatedMapping& g, double a, double b, double eps,
                             std::uint64_t budget, const RegConfig& cfg = {});

/// Step mapping over the partition knots with values g(knot+).
StepMapping step_approximation(const RegulatedMapping& g, const OscPartition& p,
                               const RegConfig& cfg = {});

struct AdaptiveResult {
    VectorValue value;
    double residual = 0.0;
    bool certified = true;
    std::uint64_t cells = 0;
};

/// Certified adaptive integral driven by the oscillation oracle; oscillation
/// tips are crossed with the declared mass bound or analytic primitive.
AdaptiveResult integrate_adaptive(const RegulatedMapping& g, double x0, double x1, double tol,
                                  const RegConfig& cfg = {});

/// Integrability verdicts on [a, b] per the step-approximation equivalences,
/// with the integral enclosure from the adaptive integrator.
IntegrabilityVerdict integrate_regulated(const RegulatedMapping& g, double a, double b,
                                         IntegralMode mode, double tol,
                                         const RegConfig& cfg = {});

/// Continuous primitive with f(a) = 0 and uniform certified error <= tol,
/// realized through cached adaptive prefix integrals.
class RegPrimitive {
public:
    RegPrimitive(const RegulatedMapping& g, double a, double b, double tol, RegConfig cfg);
    std::pair<VectorValue, double> eval(double t) const;
    double domain_min() const { return a_; }
    double domain_sup() const { return b_; }

private:
    RegulatedMapping g_;
    double a_, b_, tol_;
    RegConfig cfg_;
    mutable std::map<double, std::pair<VectorValue, double>> cache_;
};

RegPrimitive cd_primitive(const RegulatedMapping& g, double a, double b, double tol,
                          const RegConfig& cfg = {});

struct DetectedPoint {
    double t;
    double jump_estimate; // ||g(t+) - g(t-)|| from one-sided sampling
};

/// Union of partition knot sets for eps = 1, 1/2, ..., 1/n_max; contains
/// every oscillation point detected within the budget.
std::vector<DetectedPoint> discontinuities(const RegulatedMapping& g, double a, double b,
                                           int n_max, std::uint64_t budget,
                                           const RegConfig& cfg = {});

/// The norm mapping t -> ||g(t)|| with the oracles carried over.
RegulatedMapping norm_mapping(const RegulatedMapping& g);

/// Step mapping (finite truncation) viewed as a regulated mapping with exact
/// right limits and a knot-aware oscillation oracle.
RegulatedMapping as_regulated(const StepMapping& finite_step);

} // namespace transquad

#endif
