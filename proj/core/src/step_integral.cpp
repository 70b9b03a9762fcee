#include "transquad/step_integral.hpp"

#include <algorithm>
#include <cmath>

namespace transquad {

namespace {

Tri tri_and(Tri a, Tri b) {
    if (a == Tri::no || b == Tri::no) return Tri::no;
    if (a == Tri::yes && b == Tri::yes) return Tri::yes;
    return Tri::unknown;
}

} // namespace

VectorValue StepMapping::eval(double t) const {
    const WellOrderedSet& idx = steps.index;
    double sup = idx.sup_value();
    if (t == sup) {
        if (terminal) return *terminal;
        if (auto m = idx.max_element()) return steps.value(*m);
        throw Error("step mapping has no value at its supremum");
    }
    if (!(t >= idx.min()) || !(t < sup))
        throw Error("step mapping evaluated outside its domain");
    return steps.value(idx.locate(t));
}

Family weighted_family(const StepMapping& g) {
    Family w;
    const Family& steps = g.steps;
    w.index = steps.index;
    if (auto m = steps.index.max_element())
        w.index = steps.index.restrict_below(Position(*m));
    w.kind = steps.kind;
    w.dim = steps.dim;
    if (g.weighted_value) {
        w.value = g.weighted_value;
    } else {
        WellOrderedSet idx = steps.index; // widths come from the unrestricted set
        auto value = steps.value;
        w.value = [idx, value](const Address& a) {
            return scale(idx.step_width(a), value(a));
        };
    }
    w.tail_bound = g.weighted_tail_bound;
    w.abs_tail_bound = g.weighted_abs_tail_bound;
    w.term_norm_floor = g.weighted_term_floor;
    w.abs_divergent_declared = g.weighted_abs_divergent;
    if (steps.sup_norm_bound && std::isfinite(steps.index.sup_value()))
        w.sup_norm_bound = *steps.sup_norm_bound * (steps.index.sup_value() - steps.index.min());
    return w;
}

IntegrabilityVerdict integrate_step(const StepMapping& g, IntegralMode mode, double tol,
                                    const SumConfig& cfg_in) {
    SumConfig cfg = cfg_in;
    cfg.tol = tol;

    Family w = weighted_family(g);
    SummabilityReport wrep = classify(w, cfg.layer_budget, tol);
    // Step values live strictly below the top of the chain; the maximum
    // carries the terminal value, not a step.
    Family zfam = g.steps;
    if (auto m = g.steps.index.max_element())
        zfam.index = g.steps.index.restrict_below(Position(*m));
    SummabilityReport zrep = classify(zfam, cfg.layer_budget, tol);

    const bool bounded_domain = std::isfinite(g.domain_sup());

    IntegrabilityVerdict v;
    // Summable weighted family <-> HL on a bounded domain, HK up to the top.
    if (bounded_domain) {
        v.hl.verdict = wrep.verdict;
        v.hl.certified = wrep.verdict_certified;
        v.hl.cutoff = wrep.c3;
        v.hk = v.hl;
        if (v.hk.verdict == Tri::no && g.steps.kind != SpaceKind::real &&
            g.steps.kind != SpaceKind::real_vec) {
            // Strong and weak forms only coincide in finite dimension.
            v.hk.verdict = Tri::unknown;
            v.hk.certified = false;
        }
    } else {
        v.hk.verdict = wrep.verdict;
        v.hk.certified = wrep.verdict_certified;
        v.hk.cutoff = wrep.c3;
        v.hl.verdict = wrep.absolute_verdict == Tri::yes ? Tri::yes : Tri::unknown;
        v.hl.certified = v.hl.verdict == Tri::yes && wrep.absolute_certified;
    }

    v.bochner.verdict = wrep.absolute_verdict;
    v.bochner.certified = wrep.absolute_certified;
    v.bochner.cutoff = wrep.c2;

    if (bounded_domain) {
        v.riemann.verdict = zrep.bounded_verdict;
        v.riemann.certified = zrep.bounded_certified;
        v.riemann.cutoff = zrep.c1;
    } else {
        // Improper case: bounded values and a summable weighted family.
        v.riemann.verdict = tri_and(zrep.bounded_verdict, wrep.verdict);
        v.riemann.certified = zrep.bounded_certified && wrep.verdict_certified;
        v.riemann.cutoff = zrep.c1 ? zrep.c1 : wrep.c3;
    }

    if (wrep.total) v.integral = *wrep.total;
    (void)mode;
    return v;
}

PrimitiveTrace::PrimitiveTrace(StepMapping g, SumConfig cfg)
    : g_(std::move(g)), weighted_(weighted_family(g_)), cfg_(cfg) {}

std::pair<VectorValue, double> PrimitiveTrace::eval(double t) const {
    const WellOrderedSet& idx = g_.steps.index;
    double a = idx.min();
    double b = idx.sup_value();
    if (t == a) return {weighted_.zero(), 0.0};
    if (!(t >= a) || !(t <= b)) throw Error("primitive evaluated outside [min, sup]");

    try {
        if (t == b) {
            SumResult r = try_family_sum(weighted_, cfg_);
            if (r.status != SumStatus::converged)
                throw NotLocallySummable("knot sum fails near " +
                                         (r.trouble ? r.trouble->str() : std::string("sup")));
            return {r.value, r.residual};
        }
        Address gamma = idx.locate(t);
        SumResult r = try_partial_sum(weighted_, Position(gamma), cfg_);
        if (r.status != SumStatus::converged)
            throw NotLocallySummable("knot sum fails near " +
                                     (r.trouble ? r.trouble->str() : std::string("?")));
        VectorValue f = add(r.value, scale(t - idx.value(gamma), g_.steps.value(gamma)));
        return {f, r.residual};
    } catch (const NotConvergent& e) {
        throw NotLocallySummable(e.what());
    } catch (const ToleranceUnachievable& e) {
        throw NotLocallySummable(e.what());
    }
}

PrimitiveTrace primitive(const StepMapping& g, const SumConfig& cfg) {
    return PrimitiveTrace(g, cfg);
}

std::optional<std::pair<VectorValue, double>> improper_limit(const StepMapping& g, double tol,
                                                             const SumConfig& cfg_in) {
    SumConfig cfg = cfg_in;
    cfg.tol = tol;
    Family w = weighted_family(g);
    SumResult r = try_family_sum(w, cfg);
    if (r.status != SumStatus::converged || !r.certified) return std::nullopt;
    return std::make_pair(r.value, r.residual);
}

StepMapping truncate_step_mapping(const StepMapping& g, std::uint64_t knots) {
    auto cursors = g.steps.index.enumerate(knots);
    if (cursors.empty()) throw Error("cannot truncate an empty step mapping");
    std::vector<double> values;
    values.reserve(cursors.size() + 1);
    std::vector<VectorValue> z;
    z.reserve(cursors.size());
    for (const auto& c : cursors) {
        values.push_back(c.value);
        z.push_back(g.steps.value(c.addr));
    }
    double top = g.domain_sup();
    if (!std::isfinite(top)) top = values.back() + 1.0;
    if (top <= values.back()) throw Error("truncation has no room for a terminal knot");
    values.push_back(top);

    StepMapping out;
    out.steps.index = WellOrderedSet::finite_chain(values);
    out.steps.kind = g.steps.kind;
    out.steps.dim = g.steps.dim;
    out.steps.value = [z](const Address& a) {
        std::uint64_t i = a.digits()[0];
        if (i >= z.size()) throw Error("truncated step mapping: address beyond knots");
        return z[i];
    };
    out.terminal = g.terminal ? g.terminal : std::optional<VectorValue>(z.back());
    return out;
}

} // namespace transquad
