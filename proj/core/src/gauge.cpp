#include "transquad/gauge.hpp"

#include <algorithm>
#include <cmath>

namespace transquad {

namespace {

bool tag_works(const Gauge& delta, double u, double v, double xi) {
    double d = delta(xi);
    if (!(d > 0.0)) throw Error("gauge must be strictly positive");
    return xi - d < u && v < xi + d;
}

void build_cells(const Gauge& delta, double u, double v, int depth, int max_depth,
                 std::vector<TaggedCell>& out) {
    // Left-endpoint tags are preferred: bisection then walks into any point
    // where the gauge collapses and eventually tags it from the right side.
    // Other tags are tried only when the left endpoint provably cannot cover
    // this cell (its gauge is at most half the width, so splitting keeps the
    // bottleneck), at the root, and near the recursion floor.
    if (tag_works(delta, u, v, u)) {
        out.push_back({u, v, u});
        return;
    }
    if (depth == 0 || depth >= max_depth - 8) {
        for (double xi : {0.5 * (u + v), v}) {
            if (tag_works(delta, u, v, xi)) {
                out.push_back({u, v, xi});
                return;
            }
        }
    } else if (delta(u) <= 0.5 * (v - u) * (1 + 1e-9) && tag_works(delta, u, v, v)) {
        // The left endpoint can never cover this cell; the collapse point is
        // being approached from the left and the right endpoint tags it.
        out.push_back({u, v, v});
        return;
    }
    if (depth >= max_depth)
        throw DepthExceeded("bisection depth exceeded; gauge too small on [" +
                            std::to_string(u) + ", " + std::to_string(v) + "]");
    double mid = 0.5 * (u + v);
    if (!(u < mid && mid < v))
        throw DepthExceeded("interval collapsed at floating-point resolution");
    build_cells(delta, u, mid, depth + 1, max_depth, out);
    build_cells(delta, mid, v, depth + 1, max_depth, out);
}

} // namespace

TaggedPartition cousin_partition(const Gauge& delta, double a, double b, int max_depth) {
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
        throw Error("cousin_partition needs a finite interval");
    TaggedPartition p;
    build_cells(delta, a, b, 0, max_depth, p.cells);
    return p;
}

bool is_fine(const Gauge& delta, const TaggedPartition& p) {
    for (std::size_t i = 0; i < p.cells.size(); ++i) {
        const auto& c = p.cells[i];
        if (!(c.left <= c.tag && c.tag <= c.right)) return false;
        if (!tag_works(delta, c.left, c.right, c.tag)) return false;
        if (i > 0 && p.cells[i - 1].right != c.left) return false;
    }
    return true;
}

DefectPair riemann_defect(const std::function<VectorValue(double)>& g,
                          const std::function<VectorValue(double)>& f,
                          const TaggedPartition& p) {
    DefectPair d;
    if (p.cells.empty()) return d;
    VectorValue total = scale(0.0, g(p.cells.front().tag));
    for (const auto& c : p.cells) {
        VectorValue cell =
            sub(sub(f(c.right), f(c.left)), scale(c.right - c.left, g(c.tag)));
        d.hl += norm(cell).hi;
        total = add(total, cell);
    }
    d.hk = norm(total).hi;
    return d;
}

Gauge canonical_step_gauge(const StepMapping& finite_step, double eps_target, double scale,
                           double min_gauge) {
    if (!finite_step.steps.index.is_finite())
        throw Error("canonical gauge requires a finite truncation of the step mapping");
    const WellOrderedSet idx = finite_step.steps.index;
    std::size_t m = idx.finite_size();
    std::vector<double> knots(m);
    std::vector<double> jump(m, 1.0);
    VectorValue prev = finite_step.steps.value(Address({0}));
    for (std::size_t i = 0; i < m; ++i) {
        Address a({i});
        knots[i] = idx.value(a);
        VectorValue z = i + 1 < m ? finite_step.steps.value(a)
                                  : (finite_step.terminal ? *finite_step.terminal
                                                          : finite_step.steps.value(a));
        jump[i] = std::max(1.0, norm(sub(z, prev)).hi + norm(z).hi);
        prev = z;
    }
    double count = static_cast<double>(m);
    return [knots, jump, eps_target, scale, min_gauge, count](double t) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < knots.size(); ++i) {
            double dist = std::abs(t - knots[i]);
            if (dist < 16 * std::numeric_limits<double>::epsilon() * (1 + std::abs(t))) {
                return std::max(min_gauge, scale * eps_target / (2.0 * jump[i] * count));
            }
            best = std::min(best, dist / 2.0);
        }
        if (!std::isfinite(best)) best = 1.0;
        return std::max(min_gauge, best);
    };
}

} // namespace transquad
