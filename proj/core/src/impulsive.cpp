#include "transquad/impulsive.hpp"

#include <algorithm>
#include <cmath>
#include <future>

namespace transquad {

std::pair<VectorValue, double> staircase_at(const Family& z, double t, const SumConfig& cfg) {
    const WellOrderedSet& idx = z.index;
    if (!(t > idx.min())) return {z.zero(), 0.0};
    Position upto = Position::sup();
    if (t <= idx.sup_value()) {
        if (t == idx.sup_value() && !idx.contains_sup()) {
            upto = Position::sup();
        } else {
            Address at = idx.locate(t);
            upto = idx.value(at) == t ? Position(at) : Position(idx.successor(at));
        }
    }
    return partial_sum(z, upto, cfg);
}

std::pair<VectorValue, double> solve_fixed(const RegulatedMapping& g, const Family& z,
                                           double t, double tol, const SumConfig& scfg_in,
                                           const RegConfig& rcfg) {
    SumConfig scfg = scfg_in;
    scfg.tol = tol / 2;
    auto [stair, res_s] = staircase_at(z, t, scfg);
    VectorValue total = stair;
    double res = res_s;
    if (g.eval) {
        AdaptiveResult base = integrate_adaptive(g, g.a, t, tol / 2, rcfg);
        if (!std::isfinite(base.residual))
            throw NotLocallyIntegrable("state-independent part has no certified integral");
        total = add(total, base.value);
        res += base.residual;
    }
    return {total, res};
}

VectorValue Trajectory::eval(double t) const {
    if (grid_.empty()) throw Error("empty trajectory");
    if (!(t >= grid_.front()) || !(t <= grid_.back()))
        throw Error("trajectory evaluated outside its grid span");
    auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
    std::size_t k = static_cast<std::size_t>(it - grid_.begin());
    if (k > 0) --k;
    if (grid_[k] == t) return u_[k];

    // Inside cell k: start from the post-jump value at the left grid point.
    VectorValue v = add(u_[k], jump_[k]);
    if (base_prim_) {
        VectorValue fl = base_prim_->eval(grid_[k]).first;
        VectorValue ft = base_prim_->eval(t).first;
        v = add(v, sub(ft, fl));
    }
    double h = grid_[k + 1] - grid_[k];
    if (h > 0 && k < dq_.size())
        v = add(v, scale((t - grid_[k]) / h, dq_[k]));
    return v;
}

VectorValue jump_check(const Trajectory& u, double lambda, double eta) {
    return sub(u.eval(lambda + eta), u.eval(lambda));
}

namespace {

struct ImpulseKnot {
    double t;
    Address addr;
};

} // namespace

struct TrajectoryBuilder {
    const ImpulsiveProblem& p;
    const ImpulsiveConfig& cfg;
    double T;
    std::vector<double> grid;
    std::vector<std::optional<Address>> impulse_at; // aligned with grid
    std::shared_ptr<RegPrimitive> base_prim;
    double base_residual = 0.0;
    double impulse_tail_residual = 0.0;

    TrajectoryBuilder(const ImpulsiveProblem& prob, double horizon, const ImpulsiveConfig& c)
        : p(prob), cfg(c), T(horizon) {
        std::vector<ImpulseKnot> knots;
        for (const auto& cur : p.impulses.enumerate_until(T, cfg.impulse_per_layer))
            knots.push_back({cur.value, cur.addr});

        std::vector<double> pts;
        std::uint64_t n = static_cast<std::uint64_t>(
            std::ceil((T - p.a) * static_cast<double>(cfg.grid_per_unit)));
        pts.reserve(n + knots.size() + 2);
        for (std::uint64_t k = 0; k <= n; ++k)
            pts.push_back(p.a + (T - p.a) * static_cast<double>(k) / static_cast<double>(n));
        for (const auto& kn : knots) pts.push_back(kn.t);
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

        grid = std::move(pts);
        impulse_at.assign(grid.size(), std::nullopt);
        for (const auto& kn : knots) {
            auto it = std::lower_bound(grid.begin(), grid.end(), kn.t);
            impulse_at[static_cast<std::size_t>(it - grid.begin())] = kn.addr;
        }

        if (p.base.eval) {
            // Per-segment increments are small; lean on the analytic
            // primitive early instead of deep numeric refinement.
            RegConfig rc = cfg.reg;
            rc.assisted_cell_budget = std::min<std::uint64_t>(rc.assisted_cell_budget, 2048);
            base_prim = std::make_shared<RegPrimitive>(p.base, p.a, T, cfg.tol / 4, rc);
            base_residual = base_prim->eval(T).second;
        }

        // Impulses beyond the per-layer enumeration horizon are bounded by
        // the envelope tails.
        SumConfig scfg = cfg.sum;
        scfg.tol = cfg.tol / 4;
        auto tail_of = [&](const Family& z) {
            if (!z.tail_bound) return 0.0;
            double r = 0.0;
            for (const auto& kn : knots) {
                auto digits = kn.addr.digits();
                if (digits.size() < p.impulses.depth()) {
                    if (auto b = z.tail_bound(digits, cfg.impulse_per_layer)) r += *b;
                }
            }
            if (auto b = z.tail_bound({}, cfg.impulse_per_layer)) r += *b;
            return r;
        };
        impulse_tail_residual = std::max(tail_of(p.z_lower), tail_of(p.z_upper));
    }

    // One pass of the integral operator: trajectory determined by the
    // impulse values and coupling integrand taken from `prev` (empty for the
    // envelope seeds, where constant coupling bounds are used instead).
    Trajectory apply(const Trajectory* prev, bool use_upper_envelope) const {
        Trajectory out;
        out.grid_ = grid;
        out.base_prim_ = base_prim;
        std::size_t n = grid.size();
        out.u_.reserve(n);
        out.jump_.reserve(n);
        out.dq_.reserve(n > 0 ? n - 1 : 0);

        VectorValue zero = p.base.eval ? p.base.zero() : p.z_upper.zero();
        VectorValue acc = zero;

        auto coupling_at = [&](double t, std::size_t k, bool post_jump) -> VectorValue {
            if (!p.coupling) return use_upper_envelope ? p.coupling_upper : p.coupling_lower;
            if (!prev) return use_upper_envelope ? p.coupling_upper : p.coupling_lower;
            VectorValue u = prev->grid_values()[k];
            if (post_jump) u = add(u, prev->grid_jumps()[k]);
            return p.coupling(t, u);
        };

        for (std::size_t k = 0; k < n; ++k) {
            out.u_.push_back(acc);
            VectorValue jump = zero;
            if (impulse_at[k]) {
                if (p.impulse && prev) {
                    jump = p.impulse(*impulse_at[k], prev->grid_values()[k]);
                } else {
                    const Family& env = use_upper_envelope ? p.z_upper : p.z_lower;
                    jump = env.value(*impulse_at[k]);
                }
            }
            out.jump_.push_back(jump);
            if (k + 1 == n) break;

            double h = grid[k + 1] - grid[k];
            VectorValue ql = coupling_at(grid[k], k, true);
            VectorValue qr = coupling_at(grid[k + 1], k + 1, false);
            VectorValue dq = scale(h / 2, add(ql, qr));
            out.dq_.push_back(dq);

            VectorValue base_inc = zero;
            if (base_prim)
                base_inc = sub(base_prim->eval(grid[k + 1]).first, base_prim->eval(grid[k]).first);
            acc = add(add(add(acc, jump), dq), base_inc);
        }
        out.residual_ = base_residual + impulse_tail_residual;
        return out;
    }
};

namespace {

double grid_sup_distance(const Trajectory& a, const Trajectory& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.grid_values().size(); ++k)
        m = std::max(m, sup_diff_tracked(a.grid_values()[k], b.grid_values()[k]));
    return m;
}

bool definitely_violates(const Trajectory& lo, const Trajectory& hi, double slack) {
    for (std::size_t k = 0; k < lo.grid_values().size(); ++k)
        if (leq(lo.grid_values()[k], hi.grid_values()[k], slack) == Tri::no) return true;
    return false;
}

} // namespace

ExtremalOutcome extremal_solutions(const ImpulsiveProblem& p, double T,
                                   const ImpulsiveConfig& cfg) {
    TrajectoryBuilder builder(p, T, cfg);

    auto run_chain = [&](bool upper) {
        Trajectory cur = builder.apply(nullptr, upper);
        int iter = 0;
        double delta = std::numeric_limits<double>::infinity();
        bool violated = false;
        while (iter < cfg.max_iter) {
            Trajectory next = builder.apply(&cur, upper);
            ++iter;
            delta = grid_sup_distance(next, cur);
            // Ascending chains must not decrease, descending must not increase.
            bool bad = upper ? definitely_violates(next, cur, cfg.order_slack)
                             : definitely_violates(cur, next, cfg.order_slack);
            cur = std::move(next);
            if (bad) {
                violated = true;
                break;
            }
            if (delta <= cfg.tol) break;
        }
        return std::tuple<Trajectory, int, double, bool>(std::move(cur), iter, delta, violated);
    };

    std::tuple<Trajectory, int, double, bool> lo_res, hi_res;
    if (cfg.threads >= 2) {
        auto fut = std::async(std::launch::async, run_chain, true);
        lo_res = run_chain(false);
        hi_res = fut.get();
    } else {
        lo_res = run_chain(false);
        hi_res = run_chain(true);
    }

    ExtremalOutcome out{std::move(std::get<0>(lo_res)), std::move(std::get<0>(hi_res)), 0, 0.0,
                        0.0, IterationStatus::converged};
    out.iterations = std::max(std::get<1>(lo_res), std::get<1>(hi_res));
    out.fixed_point_residual = std::max(std::get<2>(lo_res), std::get<2>(hi_res));
    out.bracket_gap = grid_sup_distance(out.lower, out.upper);
    if (std::get<3>(lo_res) || std::get<3>(hi_res))
        out.status = IterationStatus::monotonicity_violation;
    else if (out.fixed_point_residual > cfg.tol)
        out.status = IterationStatus::max_iter_exceeded;
    if (out.status == IterationStatus::converged &&
        definitely_violates(out.lower, out.upper, cfg.order_slack))
        out.status = IterationStatus::monotonicity_violation;
    return out;
}

} // namespace transquad
