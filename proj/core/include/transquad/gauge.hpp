#ifndef TRANSQUAD_GAUGE_HPP
#define TRANSQUAD_GAUGE_HPP

#include <functional>
#include <vector>

#include "transquad/step_integral.hpp"

namespace transquad {

/// A gauge: strictly positive cell-size control delta(t) over [a, b].
using Gauge = std::function<double(double)>;

struct TaggedCell {
    double left;
    double right;
    double tag; // in [left, right], with [left, right] inside (tag +/- delta(tag))
};

struct TaggedPartition {
    std::vector<TaggedCell> cells; // left-to-right, cells tile [a, b]
};

/// Fine tagged partition by recursive bisection: a subinterval becomes a cell
/// as soon as one of its endpoints or midpoint works as a tag; otherwise it is
/// split at the midpoint. Throws DepthExceeded past `max_depth` levels.
TaggedPartition cousin_partition(const Gauge& delta, double a, double b, int max_depth = 48);

/// Independent fineness re-check.
bool is_fine(const Gauge& delta, const TaggedPartition& p);

struct DefectPair {
    double hl = 0.0; // sum of per-cell norms
    double hk = 0.0; // norm of the summed defects (hk <= hl always)
};

/// Riemann-sum defects of a candidate primitive f against g over a partition:
/// per-cell ||f(t_i) - f(t_{i-1}) - g(xi_i)(t_i - t_{i-1})||, summed either
/// outside (hl) or inside (hk) the norm.
DefectPair riemann_defect(const std::function<VectorValue(double)>& g,
                          const std::function<VectorValue(double)>& f,
                          const TaggedPartition& p);

/// Gauge tailored to a finite step mapping: off the knots, half the distance
/// to the nearest knot; at a knot, scale * eps_target / (2 max(jump,1) m) so
/// the defect contributed by the m knot cells stays below scale * eps_target.
Gauge canonical_step_gauge(const StepMapping& finite_step, double eps_target, double scale,
                           double min_gauge = 1e-13);

} // namespace transquad

#endif
