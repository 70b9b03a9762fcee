#include "transquad/transfinite_sum.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace transquad {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Allocation-free accumulator for the inner summation loops.
struct Accum {
    SpaceKind kind;
    std::vector<double> coords;
    double tail = 0.0;

    explicit Accum(const VectorValue& zero)
        : kind(zero.kind()), coords(zero.coords()), tail(zero.tail_bound()) {}

    void add(const VectorValue& x) {
        std::size_t len = std::min(coords.size(), x.dim());
        if (x.kind() != kind)
            throw SpaceMismatch("family produced a value from a different space");
        if (kind == SpaceKind::trunc_c0) {
            double extra = x.tail_bound();
            for (std::size_t i = len; i < x.dim(); ++i)
                extra = std::max(extra, std::abs(x.coords()[i]));
            if (coords.size() > len) {
                double mine = tail;
                for (std::size_t i = len; i < coords.size(); ++i)
                    mine = std::max(mine, std::abs(coords[i]));
                coords.resize(len);
                tail = mine;
            }
            tail += extra;
        } else if (x.dim() != coords.size()) {
            throw SpaceMismatch("family produced a value of different dimension");
        }
        for (std::size_t i = 0; i < len; ++i) coords[i] += x.coords()[i];
    }

    double norm_hi() const {
        double m = 0.0;
        for (double v : coords) m = std::max(m, std::abs(v));
        if (kind == SpaceKind::trunc_c0) m = std::max(m, tail);
        return m;
    }

    VectorValue value() const {
        switch (kind) {
        case SpaceKind::real: return VectorValue::real(coords[0]);
        case SpaceKind::real_vec: return VectorValue::vec(coords);
        case SpaceKind::trunc_c0: return VectorValue::c0(coords, tail);
        }
        return VectorValue::real(0.0);
    }
};

class Summer {
public:
    Summer(const Family& f, const SumConfig& cfg)
        : f_(f), cfg_(cfg), depth_(f.index.depth()) {}

    SumResult sum_children(std::vector<std::uint64_t>& prefix,
                           std::optional<std::uint64_t> upto, double tol_share) {
        const std::size_t level = prefix.size();
        const bool leaf = level + 1 == depth_;

        if (auto cnt = f_.index.child_count(prefix)) {
            if (!upto || *upto > *cnt) upto = *cnt;
        }

        SumResult out{f_.zero(), 0.0, true, SumStatus::converged, std::nullopt, 0.0,
                      std::nullopt};
        Accum acc(out.value);
        std::deque<double> window;
        std::optional<double> last_tail_bound;

        for (std::uint64_t m = 0;; ++m) {
            if (upto && m == *upto) break;

            if (!upto && f_.tail_bound) {
                // Certified stop: remaining tail of this block is small enough.
                if (auto b = f_.tail_bound(prefix, m)) {
                    last_tail_bound = *b;
                    if (*b <= tol_share / 2) {
                        out.residual += *b;
                        break;
                    }
                }
            }
            if (m >= cfg_.layer_budget) {
                out.status = SumStatus::budget_exhausted;
                out.certified = false;
                out.trouble = closing_limit(prefix);
                out.residual += last_tail_bound.value_or(kInf);
                break;
            }

            double step_norm = 0.0;
            prefix.push_back(m);
            if (leaf) {
                VectorValue x = f_.value(Address(prefix));
                prefix.pop_back();
                step_norm = norm(x).hi;
                acc.add(x);
                out.max_term_norm = std::max(out.max_term_norm, step_norm);
            } else {
                double child_share =
                    tol_share *
                    std::ldexp(1.0, -static_cast<int>(std::min<std::uint64_t>(m, 60)) - 2);
                SumResult child = sum_children(prefix, std::nullopt, child_share);
                prefix.pop_back();
                out.residual += child.residual;
                out.certified = out.certified && child.certified;
                out.max_term_norm = std::max(out.max_term_norm, child.max_term_norm);
                acc.add(child.value);
                if (child.status != SumStatus::converged) {
                    out.status = child.status;
                    out.trouble = child.trouble;
                    out.blowup_at = child.blowup_at ? child.blowup_at : out.blowup_at;
                    out.certified = false;
                    out.value = acc.value();
                    return out;
                }
                step_norm = norm(child.value).hi;
            }

            if (acc.norm_hi() > cfg_.blowup_threshold) {
                out.status = SumStatus::diverged;
                out.trouble = closing_limit(prefix);
                out.blowup_at = out.trouble;
                out.certified = false;
                out.value = acc.value();
                return out;
            }

            if (!upto) {
                // Heuristic limit detection: a run of small increments. With a
                // certified hook present, keep going until the hook signs off.
                window.push_back(step_norm);
                if (window.size() > static_cast<std::size_t>(cfg_.cauchy_window))
                    window.pop_front();
                if (window.size() == static_cast<std::size_t>(cfg_.cauchy_window) &&
                    !f_.tail_bound) {
                    double w = *std::max_element(window.begin(), window.end());
                    if (w < tol_share / 2) {
                        out.residual += w;
                        out.certified = false;
                        break;
                    }
                }
            }
        }
        out.value = acc.value();
        return out;
    }

    Position closing_limit(const std::vector<std::uint64_t>& prefix) const {
        if (prefix.empty()) return Position::sup();
        auto digits = prefix;
        digits.back() += 1;
        return Position(Address(digits));
    }

private:
    const Family& f_;
    SumConfig cfg_;
    std::size_t depth_;
};

} // namespace

Family norms_family(const Family& f) {
    Family g;
    g.index = f.index;
    g.kind = SpaceKind::real;
    g.dim = 1;
    auto value = f.value;
    g.value = [value](const Address& a) { return VectorValue::real(norm(value(a)).hi); };
    g.tail_bound = f.abs_tail_bound;
    g.abs_tail_bound = f.abs_tail_bound;
    g.term_norm_floor = f.term_norm_floor;
    g.sup_norm_bound = f.sup_norm_bound;
    return g;
}

SumResult try_partial_sum(const Family& f, const Position& gamma, const SumConfig& cfg) {
    Summer s(f, cfg);
    std::vector<std::uint64_t> prefix;
    if (gamma.at_sup()) {
        // When the set contains its maximum, everything strictly below the
        // supremum is everything strictly below that maximum.
        if (auto m = f.index.max_element()) return try_partial_sum(f, Position(*m), cfg);
        return s.sum_children(prefix, std::nullopt, cfg.tol);
    }

    const std::size_t depth = f.index.depth();
    auto digits = gamma.address().padded(depth);
    double share = cfg.tol / (2.0 * static_cast<double>(depth));

    SumResult out{f.zero(), 0.0, true, SumStatus::converged, std::nullopt, 0.0, std::nullopt};
    Accum acc(out.value);
    for (std::size_t level = 0; level < depth; ++level) {
        if (digits[level] > 0) {
            SumResult part = s.sum_children(prefix, digits[level], share);
            acc.add(part.value);
            out.residual += part.residual;
            out.certified = out.certified && part.certified;
            out.max_term_norm = std::max(out.max_term_norm, part.max_term_norm);
            if (part.status != SumStatus::converged) {
                out.status = part.status;
                out.trouble = part.trouble;
                out.blowup_at = part.blowup_at;
                out.certified = false;
                break;
            }
        }
        prefix.push_back(digits[level]);
    }
    out.value = acc.value();
    return out;
}

std::pair<VectorValue, double> partial_sum(const Family& f, const Position& gamma,
                                           const SumConfig& cfg) {
    SumResult r = try_partial_sum(f, gamma, cfg);
    if (r.status == SumStatus::diverged)
        throw NotConvergent("partial sums exceed the blow-up threshold near " +
                            (r.trouble ? r.trouble->str() : std::string("?")));
    if (r.status == SumStatus::budget_exhausted) {
        if (std::isfinite(r.residual))
            throw ToleranceUnachievable("certified remainder " + std::to_string(r.residual) +
                                        " exceeds tolerance at the layer budget");
        throw NotConvergent("no convergence window closed within the layer budget near " +
                            (r.trouble ? r.trouble->str() : std::string("?")));
    }
    if (r.certified && r.residual > cfg.tol)
        throw ToleranceUnachievable("certified residual exceeds the requested tolerance");
    return {r.value, r.residual};
}

SumResult try_family_sum(const Family& f, const SumConfig& cfg) {
    SumResult r = try_partial_sum(f, Position::sup(), cfg);
    if (r.status == SumStatus::converged && f.index.contains_sup()) {
        if (auto m = f.index.max_element()) {
            VectorValue x = f.value(*m);
            r.value = add(r.value, x);
            r.max_term_norm = std::max(r.max_term_norm, norm(x).hi);
        }
    }
    return r;
}

std::pair<VectorValue, double> family_sum(const Family& f, const SumConfig& cfg) {
    SumResult r = try_family_sum(f, cfg);
    if (r.status == SumStatus::diverged)
        throw NotConvergent("partial sums exceed the blow-up threshold");
    if (r.status == SumStatus::budget_exhausted) {
        if (std::isfinite(r.residual))
            throw ToleranceUnachievable("certified remainder exceeds tolerance at the budget");
        throw NotConvergent("no convergence window closed within the layer budget");
    }
    return {r.value, r.residual};
}

PartialSumTable partial_sum_table(const Family& f, std::uint64_t budget, const SumConfig& cfg,
                                  bool include_total) {
    PartialSumTable table;
    VectorValue acc = f.zero();
    auto c = f.index.first();
    std::uint64_t n = 0;
    bool exhausted = false;
    while (n < budget) {
        if (!c) {
            exhausted = true;
            break;
        }
        table.entries.push_back({Position(c->addr), acc, EntryStatus::exact, 0.0});
        acc = add(acc, f.value(c->addr));
        c = f.index.next(*c);
        ++n;
    }
    if (include_total) {
        if (exhausted) {
            table.entries.push_back({Position::sup(), acc, EntryStatus::exact, 0.0});
        } else {
            SumResult total = try_family_sum(f, cfg);
            if (total.status == SumStatus::converged)
                table.entries.push_back(
                    {Position::sup(), total.value, EntryStatus::limit_estimated, total.residual});
        }
    }
    return table;
}

SummabilityReport classify(const Family& f, std::uint64_t budget, double tol) {
    SumConfig cfg;
    cfg.tol = tol;
    cfg.layer_budget = budget;
    SummabilityReport rep;

    SumResult plain = try_family_sum(f, cfg);
    switch (plain.status) {
    case SumStatus::converged:
        rep.verdict = Tri::yes;
        rep.verdict_certified = plain.certified;
        rep.total = std::make_pair(plain.value, plain.residual);
        break;
    case SumStatus::diverged:
        rep.verdict = Tri::no;
        rep.verdict_certified = true;
        rep.c3 = plain.trouble;
        break;
    case SumStatus::budget_exhausted:
        if (f.term_norm_floor && *f.term_norm_floor > 0.0) {
            // Increments can never satisfy the limit condition.
            rep.verdict = Tri::no;
            rep.verdict_certified = true;
            rep.c3 = plain.trouble;
        } else {
            rep.verdict = Tri::unknown;
        }
        break;
    }

    Family abs = norms_family(f);
    if (f.abs_divergent_declared) {
        SumResult check = try_family_sum(abs, cfg);
        if (check.status == SumStatus::converged && check.certified)
            throw Error("declared absolute divergence contradicts a certified absolute sum");
        rep.absolute_verdict = Tri::no;
        rep.absolute_certified = true;
        rep.c2 = check.trouble ? check.trouble : std::optional<Position>(Position::sup());
    } else {
        SumResult absr = try_family_sum(abs, cfg);
        switch (absr.status) {
        case SumStatus::converged:
            rep.absolute_verdict = Tri::yes;
            rep.absolute_certified = absr.certified;
            break;
        case SumStatus::diverged:
            rep.absolute_verdict = Tri::no;
            rep.absolute_certified = true;
            rep.c2 = absr.trouble;
            break;
        case SumStatus::budget_exhausted:
            if (f.term_norm_floor && *f.term_norm_floor > 0.0) {
                rep.absolute_verdict = Tri::no;
                rep.absolute_certified = true;
                rep.c2 = absr.trouble;
            } else {
                rep.absolute_verdict = Tri::unknown;
            }
            break;
        }
    }

    if (f.sup_norm_bound) {
        rep.bounded_verdict = Tri::yes;
        rep.bounded_certified = true;
    } else {
        // Scan term norms along the leading enumeration as well: partial sums
        // can blow up a step before the terms themselves cross the threshold.
        double max_seen = plain.max_term_norm;
        std::optional<Position> where = plain.blowup_at ? plain.blowup_at : plain.trouble;
        auto cursors = f.index.enumerate(std::min<std::uint64_t>(budget, 20000));
        for (const auto& c : cursors) {
            max_seen = std::max(max_seen, norm(f.value(c.addr)).hi);
            if (max_seen > cfg.blowup_threshold) {
                auto digits = c.addr.padded(f.index.depth());
                digits.pop_back();
                if (digits.empty())
                    where = Position::sup();
                else {
                    digits.back() += 1;
                    where = Position(Address(digits));
                }
                break;
            }
        }
        if (max_seen > cfg.blowup_threshold) {
            rep.bounded_verdict = Tri::no;
            rep.bounded_certified = true;
            rep.c1 = where ? where : std::optional<Position>(Position::sup());
        } else {
            rep.bounded_verdict = Tri::yes; // sampled over the traversal only
            rep.bounded_certified = false;
        }
    }

    // Order the verdicts: absolutely summable implies summable, and a failed
    // sum rules out absolute summability.
    if (rep.absolute_verdict == Tri::yes && rep.verdict == Tri::unknown) {
        rep.verdict = Tri::yes;
        rep.verdict_certified = rep.absolute_certified;
    }
    if (rep.verdict == Tri::no && rep.absolute_verdict == Tri::unknown) {
        rep.absolute_verdict = Tri::no;
        rep.absolute_certified = rep.verdict_certified;
        if (!rep.c2) rep.c2 = rep.c3;
    }
    return rep;
}

} // namespace transquad
