#include "transquad/regulated.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>

namespace transquad {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double span_scale(double a, double b) {
    if (!std::isfinite(b)) return 1.0;
    return std::max(b - a, std::numeric_limits<double>::min());
}

} // namespace

VectorValue right_limit_or_sample(const RegulatedMapping& g, double t, const RegConfig& cfg,
                                  bool* certified) {
    if (g.right_limit) {
        if (certified) *certified = true;
        return g.right_limit(t);
    }
    if (certified) *certified = false;
    double h = cfg.right_limit_h0;
    VectorValue prev = g.eval(t + h);
    for (int k = 1; k < cfg.right_limit_steps; ++k) {
        h *= 0.5;
        VectorValue cur = g.eval(t + h);
        if (norm(sub(cur, prev)).hi < cfg.right_limit_tol / 4) return cur;
        prev = cur;
    }
    return prev;
}

double osc_or_sample(const RegulatedMapping& g, double x, double y, const RegConfig& cfg,
                     bool* certified) {
    if (g.osc) {
        if (certified) *certified = true;
        return g.osc(x, y);
    }
    if (certified) *certified = false;
    if (!(y > x)) return 0.0;
    std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> jitter(0.05, 0.95);
    std::vector<double> lo, hi;
    bool started = false;
    for (int round = 0; round < cfg.osc_rounds; ++round) {
        int n = cfg.osc_samples;
        for (int i = 0; i < n; ++i) {
            double u = (static_cast<double>(i) + jitter(rng)) / static_cast<double>(n);
            double t = x + u * (y - x);
            if (!(t > x && t < y)) continue;
            VectorValue v = g.eval(t);
            if (!started) {
                lo = v.coords();
                hi = v.coords();
                started = true;
            } else {
                for (std::size_t j = 0; j < lo.size() && j < v.dim(); ++j) {
                    lo[j] = std::min(lo[j], v.coords()[j]);
                    hi[j] = std::max(hi[j], v.coords()[j]);
                }
            }
        }
    }
    double d = 0.0;
    for (std::size_t j = 0; j < lo.size(); ++j) d = std::max(d, hi[j] - lo[j]);
    return d;
}

namespace {

struct OscEval {
    const RegulatedMapping& g;
    const RegConfig& cfg;
    bool certified = true;

    double operator()(double u, double v) {
        bool c = true;
        double r = osc_or_sample(g, u, v, cfg, &c);
        certified = certified && c;
        return r;
    }
};

StepEstimate step_with_cap(const RegulatedMapping& g, double x, double eps, double cap,
                           const RegConfig& cfg) {
    OscEval osc{g, cfg};
    if (std::isfinite(cap) && osc(x, cap) <= eps) return {cap, osc.certified};

    double h = std::isfinite(cap) ? (cap - x) / 2 : 1.0;
    while (osc(x, x + h) > eps) {
        h /= 2;
        if (h < std::numeric_limits<double>::min() || x + h <= x)
            throw NoProgress("oscillation oracle certifies no progress past " +
                             std::to_string(x));
    }
    while (x + 2 * h < cap && std::isfinite(x + 2 * h) && osc(x, x + 2 * h) <= eps) h *= 2;

    double lo = x + h;
    double hi = std::min(x + 2 * h, cap);
    for (int it = 0; it < 40 && hi - lo > 0; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (osc(x, mid) <= eps)
            lo = mid;
        else
            hi = mid;
    }
    return {lo, osc.certified};
}

} // namespace

StepEstimate g_epsilon_step(const RegulatedMapping& g, double x, double eps,
                            const RegConfig& cfg) {
    if (!(eps > 0)) throw Error("g_epsilon_step needs eps > 0");
    if (!(x >= g.a) || !(x < g.b)) throw Error("g_epsilon_step: point outside [a, b)");
    return step_with_cap(g, x, eps, g.b, cfg);
}

std::vector<double> OscPartition::knots() const {
    std::vector<double> k;
    k.reserve(cells.size() + 1);
    for (const auto& c : cells) k.push_back(c.left);
    if (!cells.empty()) k.push_back(cells.back().right);
    return k;
}

std::size_t OscPartition::limit_gap_count() const {
    std::size_t n = 0;
    for (const auto& c : cells) n += c.limit_gap ? 1 : 0;
    return n;
}

double OscPartition::limit_gap_measure() const {
    double m = 0.0;
    for (const auto& c : cells)
        if (c.limit_gap) m += c.right - c.left;
    return m;
}

OscPartition build_partition(const RegulatedMapping& g, double a, double b, double eps,
                             std::uint64_t budget, const RegConfig& cfg) {
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
        throw Error("build_partition needs a finite interval");
    OscPartition p;
    p.eps = eps;

    const double ulp = 8 * std::numeric_limits<double>::epsilon() * (1 + std::abs(b));
    const double stall_abs = std::max(cfg.stall_gap * span_scale(a, b), 8 * ulp);
    double x = a;
    int tiny_run = 0;
    double prev_gap = std::numeric_limits<double>::infinity();
    std::vector<double> recent{a};
    double last_insert = -std::numeric_limits<double>::infinity();
    double last_push = 0.0;

    while (p.cells.size() < budget) {
        bool no_progress = false;
        StepEstimate est{b, true};
        try {
            est = step_with_cap(g, x, eps, b, cfg);
        } catch (const NoProgress&) {
            no_progress = true;
        }

        if (!no_progress && est.y >= b) {
            p.cells.push_back({x, b, eps, est.certified, false});
            p.complete = true;
            return p;
        }

        double gap = no_progress ? 0.0 : est.y - x;
        bool shrinking = no_progress || (gap < stall_abs && gap <= prev_gap * 1.25);
        if (shrinking)
            ++tiny_run;
        else
            tiny_run = 0;

        if (no_progress || tiny_run >= cfg.stall_runs) {
            // Knots are accumulating. Jump toward the extrapolated limit; if
            // that keeps us stuck at the same spot, escalate the push
            // geometrically until the accumulation point is crossed.
            const double jump_cap = std::min(1000 * stall_abs, (b - a) / 16);
            double lhat = x;
            bool stuck = x - last_insert < std::min(stall_abs, 16 * last_push);
            if (recent.size() >= 3) {
                double z0 = recent[recent.size() - 3];
                double z1 = recent[recent.size() - 2];
                double z2 = recent[recent.size() - 1];
                double denom = (z2 - z1) - (z1 - z0);
                if (denom < 0 && z2 - z1 < z1 - z0)
                    lhat = z2 - (z2 - z1) * (z2 - z1) / denom;
            }
            double push;
            if (lhat > x && lhat - x <= jump_cap) {
                push = lhat - x;
            } else {
                push = stuck ? std::max(2 * last_push, ulp) : std::max(8 * gap, ulp);
                push = std::min(push, jump_cap);
                lhat = x + push;
            }
            lhat = std::min(lhat, b);
            p.cells.push_back({x, lhat, osc_or_sample(g, x, lhat, cfg), false, true});
            last_insert = lhat;
            last_push = std::max(push, ulp);
            x = lhat;
            recent.assign(1, x);
            tiny_run = 0;
            prev_gap = std::numeric_limits<double>::infinity();
            if (x >= b) {
                p.complete = true;
                return p;
            }
            continue;
        }

        prev_gap = gap;
        p.cells.push_back({x, est.y, eps, est.certified, false});
        x = est.y;
        recent.push_back(x);
        if (recent.size() > 3) recent.erase(recent.begin());
    }
    p.complete = false;
    return p;
}

StepMapping step_approximation(const RegulatedMapping& g, const OscPartition& p,
                               const RegConfig& cfg) {
    if (p.cells.empty()) throw Error("empty partition");
    std::vector<double> knots;
    std::vector<VectorValue> z;
    knots.reserve(p.cells.size() + 1);
    for (const auto& c : p.cells) {
        knots.push_back(c.left);
        z.push_back(right_limit_or_sample(g, c.left, cfg));
    }
    double top = p.cells.back().right;
    knots.push_back(top);

    StepMapping out;
    out.steps.index = WellOrderedSet::finite_chain(knots);
    out.steps.kind = g.kind;
    out.steps.dim = g.dim;
    out.steps.value = [z](const Address& a) {
        std::uint64_t i = a.digits()[0];
        if (i >= z.size()) throw Error("step approximation: address beyond knots");
        return z[i];
    };
    out.terminal = top >= g.b ? g.eval(g.b) : g.eval(top);
    return out;
}

namespace {

// Greedy refinement cell. A cell is resolved when it cannot (or need not) be
// split further; its error bound is then final.
struct AdaptCell {
    double l, r;
    double oscb;     // certified oscillation bound on the open interior
    double err;      // current contribution to the total error bound
    bool cert;       // all bounds used are certified
    bool resolved;
    bool use_primitive; // resolve through the declared analytic primitive
    bool use_mass;      // resolve through the declared absolute mass bound
};

struct AdaptiveDriver {
    const RegulatedMapping& g;
    const RegConfig& cfg;
    double tip_floor;
    std::uint64_t evals = 0;

    AdaptCell make(double l, double r) {
        ++evals;
        AdaptCell c{l, r, 0.0, 0.0, true, false, false, false};
        c.oscb = osc_or_sample(g, l, r, cfg, &c.cert);
        double w = r - l;
        double mid = 0.5 * (l + r);
        bool splittable = l < mid && mid < r && w > tip_floor;
        if (std::isfinite(c.oscb)) {
            c.err = w * c.oscb;
            c.resolved = !splittable;
            return c;
        }
        // Unbounded oscillation inside: split down to the width floor, then
        // cross the singularity with an analytic bound.
        if (splittable) {
            c.err = kInf;
            return c;
        }
        c.resolved = true;
        if (g.declared_primitive) {
            c.use_primitive = true;
            c.err = 0.0;
        } else if (g.abs_cell_mass) {
            c.use_mass = true;
            c.err = g.abs_cell_mass(l, r);
        } else if (g.sup_bound) {
            c.use_mass = true; // value 0 with mass bound w * sup
            c.err = w * *g.sup_bound;
        } else {
            c.use_mass = true;
            c.err = kInf;
            c.cert = false;
        }
        return c;
    }
};

} // namespace

AdaptiveResult integrate_adaptive(const RegulatedMapping& g, double x0, double x1, double tol,
                                  const RegConfig& cfg) {
    if (!(x0 <= x1)) throw Error("integrate_adaptive: reversed interval");
    AdaptiveResult out{g.zero(), 0.0, true, 0};
    if (x0 == x1) return out;

    AdaptiveDriver drv{g, cfg, cfg.tip_width_floor * span_scale(x0, x1), 0};
    std::vector<AdaptCell> cells;
    cells.push_back(drv.make(x0, x1));

    // (error, index) max-heap with lazy invalidation on split.
    using Entry = std::pair<double, std::size_t>;
    std::priority_queue<Entry> heap;
    auto push = [&](std::size_t i) {
        if (!cells[i].resolved) heap.push({cells[i].err, i});
    };
    push(0);
    // Running error total, with infinite cells counted separately so that
    // inf - inf never contaminates the loop control.
    double finite_total = 0.0;
    std::uint64_t inf_cells = 0;
    auto account = [&](double err, int sign) {
        if (std::isinf(err))
            inf_cells += sign > 0 ? 1 : static_cast<std::uint64_t>(-1);
        else
            finite_total += sign * err;
    };
    account(cells[0].err, +1);
    const double target = tol / 2;
    auto above_target = [&]() { return inf_cells > 0 || finite_total > target; };

    const std::uint64_t budget =
        g.declared_primitive ? std::min(cfg.cell_budget, cfg.assisted_cell_budget)
                             : cfg.cell_budget;
    while (above_target() && !heap.empty() && drv.evals < budget) {
        auto [err, i] = heap.top();
        heap.pop();
        if (cells[i].resolved || err != cells[i].err) continue;
        double mid = 0.5 * (cells[i].l + cells[i].r);
        AdaptCell a = drv.make(cells[i].l, mid);
        AdaptCell b = drv.make(mid, cells[i].r);
        account(cells[i].err, -1);
        account(a.err, +1);
        account(b.err, +1);
        cells[i] = a;
        push(i);
        cells.push_back(b);
        push(cells.size() - 1);
    }

    // The oscillation route has a resolution floor on mappings of unbounded
    // variation. When an analytic primitive is declared, cross the worst
    // remaining cells with its exact increments instead.
    if (above_target() && g.declared_primitive) {
        std::vector<std::size_t> order(cells.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return cells[a].err > cells[b].err; });
        for (std::size_t i : order) {
            if (!above_target()) break;
            AdaptCell& c = cells[i];
            if (c.use_primitive || c.use_mass) continue;
            account(c.err, -1);
            c.err = 0.0;
            c.use_primitive = true;
            c.resolved = true;
        }
    }

    // Accumulate values over the final cell list.
    std::vector<double> acc(g.dim, 0.0);
    double acc_tail = 0.0;
    double residual = 0.0;
    bool certified = true;
    auto add_value = [&](const VectorValue& v, double w) {
        for (std::size_t i = 0; i < acc.size() && i < v.dim(); ++i)
            acc[i] += w * v.coords()[i];
        acc_tail += std::abs(w) * v.tail_bound();
    };
    for (const auto& c : cells) {
        double w = c.r - c.l;
        certified = certified && c.cert;
        residual += c.err;
        if (c.use_primitive) {
            add_value(sub(g.declared_primitive(c.r), g.declared_primitive(c.l)), 1.0);
        } else if (c.use_mass) {
            // value 0; err already accounts for the whole cell mass
        } else {
            bool cert = true;
            add_value(right_limit_or_sample(g, c.l, cfg, &cert), w);
            certified = certified && cert;
        }
    }
    if (g.truncation_residual) residual += g.truncation_residual(x0, x1);

    VectorValue value = g.kind == SpaceKind::real      ? VectorValue::real(acc[0])
                        : g.kind == SpaceKind::real_vec ? VectorValue::vec(acc)
                                                        : VectorValue::c0(acc, acc_tail);
    out = {value, residual, certified, drv.evals};
    return out;
}

IntegrabilityVerdict integrate_regulated(const RegulatedMapping& g, double a, double b,
                                         IntegralMode mode, double tol, const RegConfig& cfg) {
    IntegrabilityVerdict v;
    AdaptiveResult val = integrate_adaptive(g, a, b, tol, cfg);
    if (std::isfinite(val.residual)) v.integral = std::make_pair(val.value, val.residual);

    // Strong gauge integrability: a certified finite enclosure proves the
    // integral exists (every cell bound is unconditional); an analytic
    // primitive carried by the mapping does too.
    if (val.certified && std::isfinite(val.residual)) {
        v.hl.verdict = Tri::yes;
        v.hl.certified = true;
    } else if (g.declared_primitive) {
        v.hl.verdict = Tri::yes;
        v.hl.certified = true; // declared; validated by the derivative checks
    }

    // Absolute integrability: a certified finite upper bound on the integral
    // of the norm decides it, so the enclosure may be loose.
    AdaptiveResult abs = integrate_adaptive(norm_mapping(g), a, b, std::max(tol, 0.5), cfg);
    if (abs.certified && std::isfinite(abs.residual)) {
        v.bochner.verdict = Tri::yes;
        v.bochner.certified = true;
    } else if (g.declared_abs_divergent) {
        v.bochner.verdict = Tri::no;
        v.bochner.certified = true;
    }

    // Boundedness decides Riemann integrability on a compact interval.
    if (g.sup_bound) {
        v.riemann.verdict = Tri::yes;
        v.riemann.certified = true;
    } else if (g.declared_unbounded) {
        v.riemann.verdict = Tri::no;
        v.riemann.certified = true;
    }

    // Order the modes: Riemann (bounded, countably many discontinuities)
    // implies absolute integrability, which implies the strong gauge form,
    // which implies the weak one.
    if (v.riemann.verdict == Tri::yes && v.bochner.verdict == Tri::unknown)
        v.bochner = v.riemann;
    if (v.bochner.verdict == Tri::yes && v.hl.verdict == Tri::unknown) v.hl = v.bochner;
    if (v.hl.verdict == Tri::yes) {
        v.hk.verdict = Tri::yes;
        v.hk.certified = v.hl.certified;
    }
    (void)mode;
    return v;
}

RegPrimitive::RegPrimitive(const RegulatedMapping& g, double a, double b, double tol,
                           RegConfig cfg)
    : g_(g), a_(a), b_(b), tol_(tol), cfg_(cfg) {
    cache_[a] = {g.zero(), 0.0};
}

std::pair<VectorValue, double> RegPrimitive::eval(double t) const {
    if (!(t >= a_ && t <= b_)) throw Error("primitive evaluated outside [a, b]");
    auto it = cache_.upper_bound(t);
    --it; // cache_ always holds a_, so this is valid
    double t0 = it->first;
    if (t0 == t) return it->second;
    double share = tol_ * (t - t0) / span_scale(a_, b_);
    AdaptiveResult inc = integrate_adaptive(g_, t0, t, std::max(share, tol_ * 1e-3), cfg_);
    if (!std::isfinite(inc.residual))
        throw NotLocallyIntegrable("no certified integral over [" + std::to_string(t0) +
                                   ", " + std::to_string(t) + "]");
    std::pair<VectorValue, double> out{add(it->second.first, inc.value),
                                       it->second.second + inc.residual};
    cache_[t] = out;
    return out;
}

RegPrimitive cd_primitive(const RegulatedMapping& g, double a, double b, double tol,
                          const RegConfig& cfg) {
    return RegPrimitive(g, a, b, tol, cfg);
}

std::vector<DetectedPoint> discontinuities(const RegulatedMapping& g, double a, double b,
                                           int n_max, std::uint64_t budget,
                                           const RegConfig& cfg) {
    std::map<double, double> points;
    double h = 1e-9 * span_scale(a, b);
    for (int n = 1; n <= n_max; ++n) {
        OscPartition p = build_partition(g, a, b, 1.0 / n, budget, cfg);
        for (const auto& c : p.cells) {
            if (c.left == a) continue;
            double jump = 0.0;
            if (c.left - h > a) {
                VectorValue before = g.eval(c.left - h);
                VectorValue after = right_limit_or_sample(g, c.left, cfg);
                jump = norm(sub(after, before)).hi;
            }
            auto it = points.find(c.left);
            if (it == points.end())
                points[c.left] = jump;
            else
                it->second = std::max(it->second, jump);
        }
    }
    std::vector<DetectedPoint> out;
    out.reserve(points.size());
    for (const auto& [t, j] : points) out.push_back({t, j});
    return out;
}

RegulatedMapping norm_mapping(const RegulatedMapping& g) {
    RegulatedMapping n;
    auto eval = g.eval;
    n.eval = [eval](double t) { return VectorValue::real(norm(eval(t)).hi); };
    if (g.right_limit) {
        auto rl = g.right_limit;
        n.right_limit = [rl](double t) { return VectorValue::real(norm(rl(t)).hi); };
    }
    n.osc = g.osc; // |  ||g(s)|| - ||g(t)||  | <= ||g(s) - g(t)||
    n.a = g.a;
    n.b = g.b;
    n.kind = SpaceKind::real;
    n.dim = 1;
    n.name = g.name.empty() ? "norm" : "|" + g.name + "|";
    n.sup_bound = g.sup_bound;
    n.abs_cell_mass = g.abs_cell_mass;
    n.truncation_residual = g.truncation_residual;
    n.declared_unbounded = g.declared_unbounded;
    return n;
}

RegulatedMapping as_regulated(const StepMapping& finite_step) {
    if (!finite_step.steps.index.is_finite())
        throw Error("as_regulated expects a finite step mapping");
    const WellOrderedSet idx = finite_step.steps.index;
    std::size_t m = idx.finite_size();
    std::vector<double> knots(m);
    std::vector<VectorValue> z;
    z.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        knots[i] = idx.value(Address({i}));
        z.push_back(i + 1 < m ? finite_step.steps.value(Address({i}))
                              : (finite_step.terminal ? *finite_step.terminal
                                                      : finite_step.steps.value(Address({i}))));
    }
    double bound = 0.0;
    for (const auto& v : z) bound = std::max(bound, norm(v).hi);

    RegulatedMapping r;
    StepMapping copy = finite_step;
    r.eval = [copy](double t) { return copy.eval(t); };
    r.right_limit = [copy, knots](double t) {
        // Right-continuous step mapping: the right limit is the piece value,
        // except at the top knot where the terminal takes over.
        if (t >= knots.back()) return copy.eval(knots.back());
        return copy.eval(t);
    };
    r.osc = [copy, knots](double x, double y) {
        // Diameter of the piece values met by the open interval (x, y).
        std::optional<VectorValue> lo, hi;
        for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
            if (!(knots[i + 1] > x) || !(knots[i] < y)) continue;
            VectorValue v = copy.eval(knots[i]);
            lo = lo ? component_min(*lo, v) : v;
            hi = hi ? component_max(*hi, v) : v;
        }
        if (!lo) return 0.0;
        return sup_diff_tracked(*hi, *lo);
    };
    r.a = idx.min();
    r.b = idx.sup_value();
    r.kind = finite_step.steps.kind;
    r.dim = finite_step.steps.dim;
    r.sup_bound = bound;
    return r;
}

} // namespace transquad
