#include "transquad/gallery.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

namespace transquad::gallery {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kZeta2 = kPi * kPi / 6.0;
constexpr double kPsiDiam = 4.0 + kPi;    // diameter bound of the bounded oscillator
constexpr double kPsiSup = 2.0 + kPi / 2; // sup bound of one oscillator term
constexpr double kInf = std::numeric_limits<double>::infinity();

double ldexp1(std::uint64_t n) { return std::ldexp(1.0, -static_cast<int>(std::min<std::uint64_t>(n, 4000))); }

VectorValue pattern_c0(double s, std::size_t coords) {
    std::vector<double> c(coords);
    for (std::size_t i = 0; i < coords; ++i) c[i] = s / static_cast<double>(i + 1);
    return VectorValue::c0(std::move(c), std::abs(s) / static_cast<double>(coords + 1));
}

} // namespace

double upper_floor(double x) { return std::ceil(x); }

// ----- families ---------------------------------------------------------------

namespace {

WellOrderedSet lambda_depth(std::size_t d) { return WellOrderedSet::dyadic(0.0, 1.0, d); }

} // namespace

Family geometric_family(const VectorValue& e) {
    Family f;
    f.index = lambda_depth(1);
    f.kind = e.kind();
    f.dim = e.dim();
    double en = norm(e).hi;
    f.value = [e](const Address& a) { return scale(ldexp1(a.digits()[0]), e); };
    f.tail_bound = [en](const std::vector<std::uint64_t>&, std::uint64_t k) {
        return std::optional<double>(2.0 * ldexp1(k) * en);
    };
    f.abs_tail_bound = f.tail_bound;
    f.sup_norm_bound = en;
    return f;
}

Family alt_harmonic_family(const VectorValue& e) {
    Family f;
    f.index = lambda_depth(1);
    f.kind = e.kind();
    f.dim = e.dim();
    double en = norm(e).hi;
    f.value = [e](const Address& a) {
        std::uint64_t n = a.digits()[0];
        double c = (n % 2 == 0 ? 1.0 : -1.0) / static_cast<double>(n + 1);
        return scale(c, e);
    };
    // Alternating series: the tail is bounded by its first term.
    f.tail_bound = [en](const std::vector<std::uint64_t>&, std::uint64_t k) {
        return std::optional<double>(en / static_cast<double>(k + 1));
    };
    f.abs_divergent_declared = true;
    f.sup_norm_bound = en;
    return f;
}

Family constant_family(const VectorValue& e) {
    Family f;
    f.index = lambda_depth(1);
    f.kind = e.kind();
    f.dim = e.dim();
    f.value = [e](const Address&) { return e; };
    f.term_norm_floor = norm(e).lo;
    f.sup_norm_bound = norm(e).hi;
    return f;
}

Family doubling_family(const VectorValue& e) {
    Family f;
    f.index = lambda_depth(1);
    f.kind = e.kind();
    f.dim = e.dim();
    f.value = [e](const Address& a) {
        return scale(std::ldexp(1.0, static_cast<int>(std::min<std::uint64_t>(a.digits()[0], 1020))), e);
    };
    f.term_norm_floor = norm(e).lo;
    return f;
}

Family nested_geometric_family(const VectorValue& e) {
    Family f;
    f.index = lambda_depth(2);
    f.kind = e.kind();
    f.dim = e.dim();
    double en = norm(e).hi;
    f.value = [e](const Address& a) {
        auto d = a.padded(2);
        return scale(ldexp1(d[0] + d[1]), e);
    };
    f.tail_bound = [en](const std::vector<std::uint64_t>& block, std::uint64_t k) {
        if (block.empty()) // remaining whole blocks m >= k, each summing to 2^{1-m}
            return std::optional<double>(4.0 * ldexp1(k) * en);
        return std::optional<double>(2.0 * ldexp1(block[0] + k) * en);
    };
    f.abs_tail_bound = f.tail_bound;
    f.sup_norm_bound = en;
    return f;
}

Family nested_alt_geometric_family(const VectorValue& e) {
    Family f;
    f.index = lambda_depth(2);
    f.kind = e.kind();
    f.dim = e.dim();
    double en = norm(e).hi;
    f.value = [e](const Address& a) {
        auto d = a.padded(2);
        double c = (d[1] % 2 == 0 ? 1.0 : -1.0) * ldexp1(d[0]) / static_cast<double>(d[1] + 1);
        return scale(c, e);
    };
    f.tail_bound = [en](const std::vector<std::uint64_t>& block, std::uint64_t k) {
        if (block.empty()) // blocks sum to 2^-m log 2 with alternating-tail slack <= 2^-m
            return std::optional<double>(4.0 * ldexp1(k) * en);
        return std::optional<double>(ldexp1(block[0]) * en / static_cast<double>(k + 1));
    };
    f.abs_divergent_declared = true;
    f.sup_norm_bound = en;
    return f;
}

// ----- step mappings -----------------------------------------------------------

StepMapping unit_step_mapping(std::function<VectorValue(std::uint64_t)> y, SpaceKind kind,
                              std::size_t dim) {
    StepMapping s;
    s.steps.index = WellOrderedSet::custom(0.0, kInf, {LayerGen{LayerGen::Kind::arith, 1.0}});
    s.steps.kind = kind;
    s.steps.dim = dim;
    s.steps.value = [y](const Address& a) { return y(a.digits()[0]); };
    s.terminal = VectorValue::zero(kind, dim);
    return s;
}

StepMapping dyadic_step_mapping(std::function<VectorValue(std::uint64_t)> y, SpaceKind kind,
                                std::size_t dim) {
    StepMapping s;
    s.steps.index = WellOrderedSet::dyadic(0.0, 1.0, 1);
    s.steps.kind = kind;
    s.steps.dim = dim;
    s.steps.value = [y](const Address& a) { return y(a.digits()[0]); };
    s.terminal = VectorValue::zero(kind, dim);
    return s;
}

StepMapping nested_constant_step(const VectorValue& e, std::size_t depth) {
    StepMapping s;
    s.steps.index = lambda_depth(depth);
    s.steps.kind = e.kind();
    s.steps.dim = e.dim();
    s.steps.value = [e](const Address&) { return e; };
    s.steps.sup_norm_bound = norm(e).hi;
    s.terminal = VectorValue::zero(e.kind(), e.dim());

    double en = norm(e).hi;
    WellOrderedSet idx = s.steps.index;
    // Tail of the weighted family below a block is the unfilled measure.
    s.weighted_tail_bound = [idx, en](const std::vector<std::uint64_t>& block,
                                      std::uint64_t k) -> std::optional<double> {
        std::vector<std::uint64_t> lo = block;
        lo.push_back(k);
        double left = idx.value(Address(lo));
        double right;
        if (block.empty()) {
            right = idx.sup_value();
        } else {
            std::vector<std::uint64_t> up = block;
            up.back() += 1;
            right = idx.value(Address(up));
        }
        return (right - left) * en;
    };
    s.weighted_abs_tail_bound = s.weighted_tail_bound;
    return s;
}

StepMapping step_geometric_tail() {
    StepMapping s = unit_step_mapping(
        [](std::uint64_t n) { return VectorValue::real(ldexp1(n)); }, SpaceKind::real, 1);
    s.steps.sup_norm_bound = 1.0;
    s.weighted_tail_bound = [](const std::vector<std::uint64_t>&, std::uint64_t k) {
        return std::optional<double>(2.0 * ldexp1(k));
    };
    s.weighted_abs_tail_bound = s.weighted_tail_bound;
    return s;
}

StepMapping step_alt_harmonic() {
    // Values (-2)^n e/(n+1) for n >= 1 on the dyadic steps: the k-th step
    // carries n = k+1, so the weighted terms are (-1)^(k+1)/(k+2). The
    // weighted form is supplied in closed form: the raw values overflow
    // where the step widths underflow.
    StepMapping s = dyadic_step_mapping(
        [](std::uint64_t k) {
            std::uint64_t n = k + 1;
            double v = std::ldexp(1.0, static_cast<int>(std::min<std::uint64_t>(n, 1020))) /
                       static_cast<double>(n + 1);
            return VectorValue::real(n % 2 == 0 ? v : -v);
        },
        SpaceKind::real, 1);
    s.weighted_value = [](const Address& a) {
        std::uint64_t k = a.digits()[0];
        double v = 1.0 / static_cast<double>(k + 2);
        return VectorValue::real(k % 2 == 0 ? -v : v);
    };
    s.weighted_tail_bound = [](const std::vector<std::uint64_t>&, std::uint64_t k) {
        return std::optional<double>(1.0 / static_cast<double>(k + 2));
    };
    s.weighted_abs_divergent = true;
    return s;
}

StepMapping step_bounded_alt() {
    StepMapping s = dyadic_step_mapping(
        [](std::uint64_t k) { return VectorValue::real(k % 2 == 0 ? 1.0 : -1.0); },
        SpaceKind::real, 1);
    s.steps.sup_norm_bound = 1.0;
    s.weighted_tail_bound = [](const std::vector<std::uint64_t>&, std::uint64_t k) {
        return std::optional<double>(ldexp1(k));
    };
    s.weighted_abs_tail_bound = [](const std::vector<std::uint64_t>&, std::uint64_t k) {
        return std::optional<double>(2.0 * ldexp1(k));
    };
    return s;
}

// ----- oscillatory mappings -----------------------------------------------------

namespace {

// u(t) = n t - upper_floor(n t), always in (-1, 0].
double phase(double nt) { return nt - std::ceil(nt); }

// Bounded oscillator: 2u cos(pi/2u) + (pi/2) sin(pi/2u), extended by 0 at 0.
double psi(double u) {
    if (u == 0.0) return 0.0;
    double A = kPi / (2 * u);
    return 2 * u * std::cos(A) + (kPi / 2) * std::sin(A);
}

// Its antiderivative factor: u^2 cos(pi/2u), extended by 0.
double psi_prim(double u) {
    if (u == 0.0) return 0.0;
    return u * u * std::cos(kPi / (2 * u));
}

// Conditional oscillator cos A + A sin A with A = pi/(2u): amplitude ~ 1/|u|.
double chi(double u) {
    if (u == 0.0) return 0.0;
    double A = kPi / (2 * u);
    return std::cos(A) + A * std::sin(A);
}

double chi_prim(double u) { // u cos(pi/2u), derivative chi w.r.t. u
    if (u == 0.0) return 0.0;
    return u * std::cos(kPi / (2 * u));
}

// Inverse-square-root spike 1/(2 sqrt(-u)) for u in (-1, 0].
double spike(double u) {
    double s = -u;
    if (s < 1e-300) return 5e149;
    return 0.5 / std::sqrt(s);
}

// Continuous antiderivative of v -> 1/(2 sqrt(ceil(v)-v)).
double spike_prim_v(double v) { return std::ceil(v) - std::sqrt(std::ceil(v) - v); }

// Phase window of (lo, hi) relative to the next reset: valid only when no
// reset lies strictly inside, i.e. no integer in (lo, hi).
struct PhaseWindow {
    bool crossed;
    double u1, u2; // -1 <= u1 < u2 <= 0
};

PhaseWindow phase_window(double lo, double hi) {
    double k1 = std::floor(lo) + 1; // least integer strictly above lo
    if (k1 < hi) return {true, 0, 0};
    double m = k1; // ceil of every point of (lo, hi)
    return {false, lo - m, hi - m};
}

// Oscillation bound of psi(phase(v)) over the open interval (lo, hi).
double psi_osc(double lo, double hi) {
    PhaseWindow w = phase_window(lo, hi);
    if (w.crossed) return kPsiDiam;
    double delta = -w.u2, delta1 = -w.u1, du = w.u2 - w.u1;
    if (!(delta > 0)) return kPsiDiam; // window reaches the reset itself
    double a_part = (2 + kPi / delta) * du;
    double b_part = std::min(kPi, (kPi * kPi / 4) * du / (delta * delta1));
    return std::min(kPsiDiam, a_part + b_part);
}

// Oscillation bound of chi(phase(v)) over (lo, hi); infinite across resets.
double chi_osc(double lo, double hi) {
    PhaseWindow w = phase_window(lo, hi);
    if (w.crossed) return kInf;
    double delta = -w.u2, du = w.u2 - w.u1;
    if (!(delta > 0)) return kInf;
    double diam = 2 * (1 + kPi / (2 * delta));
    double lip = (kPi * kPi / (4 * delta * delta * delta)) * du;
    return std::min(diam, lip);
}

// Exact oscillation of the monotone spike term over (lo, hi); infinite
// across resets.
double spike_osc(double lo, double hi) {
    PhaseWindow w = phase_window(lo, hi);
    if (w.crossed || !(-w.u2 > 0)) return kInf;
    return spike(w.u2) - spike(w.u1);
}

struct OscSeries {
    std::size_t coords;
    int terms;

    double base_value(double t) const {
        double s = 0.0;
        for (int n = 1; n <= terms; ++n) s += psi(phase(n * t)) / (static_cast<double>(n) * n);
        return s;
    }

    double base_value_right(double t) const {
        double s = 0.0;
        for (int n = 1; n <= terms; ++n) {
            double nt = n * t;
            double u = std::ceil(nt) == nt ? -1.0 : phase(nt);
            s += psi(u) / (static_cast<double>(n) * n);
        }
        return s;
    }

    double base_prim(double t) const {
        double s = 0.0;
        for (int n = 1; n <= terms; ++n)
            s += psi_prim(phase(n * t)) / (static_cast<double>(n) * n * n);
        return s;
    }

    double base_osc(double x, double y) const {
        double s = 0.0;
        for (int n = 1; n <= terms; ++n)
            s += psi_osc(n * x, n * y) / (static_cast<double>(n) * n);
        return s;
    }

    double truncation(double x, double y) const {
        double n = static_cast<double>(terms);
        return std::min(1.0 / (n * n), (y - x) * kPsiSup / n);
    }
};

} // namespace

double osc_base_coord1(double t, int terms) { return OscSeries{1, terms}.base_value(t); }

double osc_base_primitive_coord1(double t, int terms) {
    return OscSeries{1, terms}.base_prim(t);
}

RegulatedMapping osc_base(const OscParams& p) {
    OscSeries s{p.coords, p.series_terms};
    RegulatedMapping g;
    g.eval = [s](double t) { return pattern_c0(s.base_value(t), s.coords); };
    g.right_limit = [s](double t) { return pattern_c0(s.base_value_right(t), s.coords); };
    g.osc = [s](double x, double y) { return s.base_osc(x, y); };
    g.a = 0.0;
    g.b = kInf;
    g.kind = SpaceKind::trunc_c0;
    g.dim = p.coords;
    g.name = "osc-base";
    g.sup_bound = kPsiSup * kZeta2;
    auto prim = osc_base_primitive(p);
    g.declared_primitive = prim;
    g.truncation_residual = [s](double x, double y) { return s.truncation(x, y); };
    return g;
}

std::function<VectorValue(double)> osc_base_primitive(const OscParams& p) {
    OscSeries s{p.coords, p.series_terms};
    return [s](double t) { return pattern_c0(s.base_prim(t), s.coords); };
}

namespace {

// Aggregated extra-term values for the conditional / root-singular variants:
// coordinate i carries (1/i) * sum_{n <= min(i, m)} term(phase(n t)).
struct ExtraTerms {
    int m;
    std::size_t coords;
    double (*term)(double);     // value of one oscillator at a phase
    double (*term_osc)(double, double); // oscillation bound over (lo, hi) in v-space

    std::vector<double> prefix(double t, bool right) const {
        std::vector<double> ps(static_cast<std::size_t>(m) + 1, 0.0);
        for (int n = 1; n <= m; ++n) {
            double nt = n * t;
            double u = right && std::ceil(nt) == nt ? -1.0 : phase(nt);
            ps[static_cast<std::size_t>(n)] = ps[static_cast<std::size_t>(n) - 1] + term(u);
        }
        return ps;
    }

    void add_to(std::vector<double>& coords_out, double& tail, double t, bool right) const {
        auto ps = prefix(t, right);
        for (std::size_t i = 0; i < coords_out.size(); ++i) {
            std::size_t top = std::min<std::size_t>(i + 1, static_cast<std::size_t>(m));
            coords_out[i] += ps[top] / static_cast<double>(i + 1);
        }
        tail += std::abs(ps[static_cast<std::size_t>(m)]) / static_cast<double>(coords_out.size() + 1);
    }

    double osc(double x, double y) const {
        // sup over coordinates of (1/i) sum_{n <= min(i,m)} per-term bounds
        double best = 0.0, cum = 0.0;
        for (int n = 1; n <= m; ++n) {
            cum += term_osc(n * x, n * y);
            best = std::max(best, cum / n);
        }
        return best;
    }
};

VectorValue assemble(const OscSeries& s, const ExtraTerms& ex, double t, bool right) {
    double base = right ? s.base_value_right(t) : s.base_value(t);
    std::vector<double> c(s.coords);
    for (std::size_t i = 0; i < s.coords; ++i) c[i] = base / static_cast<double>(i + 1);
    double tail = std::abs(base) / static_cast<double>(s.coords + 1);
    ex.add_to(c, tail, t, right);
    return VectorValue::c0(std::move(c), tail);
}

} // namespace

RegulatedMapping osc_conditional(int m, const OscParams& p) {
    OscSeries s{p.coords, p.series_terms};
    ExtraTerms ex{m, p.coords, &chi, &chi_osc};
    RegulatedMapping g;
    g.eval = [s, ex](double t) { return assemble(s, ex, t, false); };
    g.right_limit = [s, ex](double t) { return assemble(s, ex, t, true); };
    g.osc = [s, ex](double x, double y) { return s.base_osc(x, y) + ex.osc(x, y); };
    g.a = 0.0;
    g.b = kInf;
    g.kind = SpaceKind::trunc_c0;
    g.dim = p.coords;
    g.name = "osc-conditional-" + std::to_string(m);
    g.declared_primitive = osc_conditional_primitive(m, p);
    g.truncation_residual = [s](double x, double y) { return s.truncation(x, y); };
    g.declared_unbounded = true;
    g.declared_abs_divergent = true;
    return g;
}

std::function<VectorValue(double)> osc_conditional_primitive(int m, const OscParams& p) {
    OscSeries s{p.coords, p.series_terms};
    std::size_t coords = p.coords;
    return [s, m, coords](double t) {
        double base = s.base_prim(t);
        std::vector<double> c(coords);
        double tail_nom = std::abs(base);
        for (std::size_t i = 0; i < coords; ++i) {
            double extra = 0.0;
            for (int n = 1; n <= std::min<int>(static_cast<int>(i) + 1, m); ++n)
                extra += chi_prim(phase(n * t)) / n;
            c[i] = (base + extra) / static_cast<double>(i + 1);
        }
        double extra_full = 0.0;
        for (int n = 1; n <= m; ++n) extra_full += std::abs(chi_prim(phase(n * t))) / n;
        return VectorValue::c0(std::move(c),
                               (tail_nom + extra_full) / static_cast<double>(coords + 1));
    };
}

RegulatedMapping osc_root_singular(int m, const OscParams& p) {
    OscSeries s{p.coords, p.series_terms};
    ExtraTerms ex{m, p.coords, &spike, &spike_osc};
    RegulatedMapping g;
    g.eval = [s, ex](double t) { return assemble(s, ex, t, false); };
    g.right_limit = [s, ex](double t) { return assemble(s, ex, t, true); };
    g.osc = [s, ex](double x, double y) { return s.base_osc(x, y) + ex.osc(x, y); };
    g.a = 0.0;
    g.b = kInf;
    g.kind = SpaceKind::trunc_c0;
    g.dim = p.coords;
    g.name = "osc-root-singular-" + std::to_string(m);
    g.declared_primitive = osc_root_singular_primitive(m, p);
    g.truncation_residual = [s](double x, double y) { return s.truncation(x, y); };
    g.declared_unbounded = true;
    double sup0 = kPsiSup * kZeta2;
    g.abs_cell_mass = [m, sup0](double l, double r) {
        double mass = sup0 * (r - l);
        for (int n = 1; n <= m; ++n)
            mass += (spike_prim_v(n * r) - spike_prim_v(n * l)) / n;
        return mass;
    };
    return g;
}

std::function<VectorValue(double)> osc_root_singular_primitive(int m, const OscParams& p) {
    OscSeries s{p.coords, p.series_terms};
    std::size_t coords = p.coords;
    return [s, m, coords](double t) {
        double base = s.base_prim(t);
        std::vector<double> c(coords);
        for (std::size_t i = 0; i < coords; ++i) {
            double extra = 0.0;
            for (int n = 1; n <= std::min<int>(static_cast<int>(i) + 1, m); ++n)
                extra += spike_prim_v(n * t) / n;
            c[i] = (base + extra) / static_cast<double>(i + 1);
        }
        double extra_full = 0.0;
        for (int n = 1; n <= m; ++n) extra_full += std::abs(spike_prim_v(n * t)) / n;
        return VectorValue::c0(std::move(c),
                               (std::abs(base) + extra_full) / static_cast<double>(coords + 1));
    };
}

RegulatedMapping exp_weighted(const RegulatedMapping& g) {
    RegulatedMapping w = g;
    auto eval = g.eval;
    w.eval = [eval](double t) { return scale(std::exp(-t), eval(t)); };
    if (g.right_limit) {
        auto rl = g.right_limit;
        w.right_limit = [rl](double t) { return scale(std::exp(-t), rl(t)); };
    }
    if (g.osc) {
        auto osc = g.osc;
        auto rl = g.right_limit;
        auto bound = g.sup_bound;
        w.osc = [osc, rl, bound](double x, double y) {
            double o = osc(x, y);
            // Local size of g on the cell: value at the left limit plus the
            // oscillation, or the global bound when available.
            double local = bound ? *bound : (rl ? norm(rl(x)).hi + o : kInf);
            return std::exp(-x) * o + (std::exp(-x) - std::exp(-y)) * local;
        };
    }
    if (g.sup_bound) w.sup_bound = *g.sup_bound;
    w.declared_primitive = nullptr;
    w.truncation_residual = nullptr; // conservative: recompute when needed
    w.name = "exp*" + g.name;
    return w;
}

// ----- impulsive example --------------------------------------------------------

namespace {

// Monotone tables of S_m(s) = sum_k (pi/2 + atan(k^{1/m} s)) / k^2 for s >= 0;
// negative arguments use S_m(-s) = pi zeta(2) - S_m(s).
class CouplingTables {
public:
    static const CouplingTables& instance(std::size_t max_m) {
        static CouplingTables tables(48);
        if (max_m > 48) throw Error("coupling tables support at most 48 coordinates");
        return tables;
    }

    double S(std::size_t m, double s) const {
        if (m == 0 || m > values_.size()) throw Error("coupling table index out of range");
        if (s < 0) return kPi * kZeta2 - S(m, -s);
        const auto& v = values_[m - 1];
        double rel = std::sqrt(std::min(s, s_max_) / s_max_) * static_cast<double>(v.size() - 1);
        std::size_t j = std::min<std::size_t>(static_cast<std::size_t>(rel), v.size() - 2);
        double s0 = node(j), s1 = node(j + 1);
        if (s >= s_max_) return v.back();
        double w = s1 > s0 ? (s - s0) / (s1 - s0) : 0.0;
        w = std::clamp(w, 0.0, 1.0);
        return v[j] + w * (v[j + 1] - v[j]);
    }

private:
    explicit CouplingTables(std::size_t max_m) {
        const int K = 1500;
        const std::size_t J = 2048;
        values_.resize(max_m);
        std::vector<double> root(static_cast<std::size_t>(K) + 1);
        for (std::size_t m = 1; m <= max_m; ++m) {
            for (int k = 1; k <= K; ++k)
                root[static_cast<std::size_t>(k)] =
                    std::exp(std::log(static_cast<double>(k)) / static_cast<double>(m));
            auto& v = values_[m - 1];
            v.resize(J + 1);
            for (std::size_t j = 0; j <= J; ++j) {
                double s = node(j);
                double sum = 0.0;
                for (int k = 1; k <= K; ++k)
                    sum += (kPi / 2 + std::atan(root[static_cast<std::size_t>(k)] * s)) /
                           (static_cast<double>(k) * k);
                sum += tail_integral(m, s, K);
                v[j] = sum;
            }
        }
    }

    static double node_for(std::size_t j, std::size_t J, double s_max) {
        double r = static_cast<double>(j) / static_cast<double>(J);
        return s_max * r * r;
    }

    double node(std::size_t j) const { return node_for(j, values_[0].size() - 1, s_max_); }

    // Integral of (pi/2 + atan(x^{1/m} s))/x^2 over [K+1/2, inf), via x = 1/u.
    static double tail_integral(std::size_t m, double s, int K) {
        double hi = 1.0 / (static_cast<double>(K) + 0.5);
        const int steps = 64;
        double h = hi / steps, sum = 0.0;
        for (int i = 0; i < steps; ++i) {
            double u = (i + 0.5) * h;
            double arg = s * std::exp(-std::log(u) / static_cast<double>(m));
            sum += kPi / 2 + std::atan(arg);
        }
        return sum * h;
    }

    double s_max_ = 64.0;
    std::vector<std::vector<double>> values_;
};

} // namespace

double coupling_coordinate(std::size_t i, double s) {
    const auto& tab = CouplingTables::instance(i);
    double sum = 0.0;
    for (std::size_t m = 1; m <= i; ++m) sum += tab.S(m, s) / (static_cast<double>(m) * m);
    return std::ldexp(sum, -static_cast<int>(std::min<std::size_t>(i, 1000)));
}

double coupling_coordinate_max(std::size_t i) {
    double sum = 0.0;
    for (std::size_t m = 1; m <= i; ++m) sum += kPi * kZeta2 / (static_cast<double>(m) * m);
    return std::ldexp(sum, -static_cast<int>(std::min<std::size_t>(i, 1000)));
}

ImpulsiveProblem impulsive_example(std::size_t coords, double z_scale) {
    if (coords > 48) throw Error("impulsive example supports at most 48 coordinates");
    CouplingTables::instance(coords); // build tables eagerly

    ImpulsiveProblem p;
    p.a = 0.0;
    p.c = kInf;
    p.base = osc_base({coords, 512});

    p.coupling = [coords](double, const VectorValue& u) {
        std::vector<double> c(coords);
        double run = 0.0;
        for (std::size_t i = 0; i < coords; ++i) {
            run += i < u.dim() ? u.coords()[i] : 0.0;
            c[i] = coupling_coordinate(i + 1, run);
        }
        return VectorValue::c0(std::move(c), coupling_coordinate_max(coords + 1));
    };
    {
        std::vector<double> lo(coords, 0.0), hi(coords);
        for (std::size_t i = 0; i < coords; ++i) hi[i] = coupling_coordinate_max(i + 1);
        p.coupling_lower = VectorValue::c0(std::move(lo), 0.0);
        p.coupling_upper = VectorValue::c0(std::move(hi), coupling_coordinate_max(coords + 1));
    }

    p.impulses = WellOrderedSet::custom(
        0.0, kInf, {LayerGen{LayerGen::Kind::arith, 1.0}, LayerGen{LayerGen::Kind::dyadic, 1.0}});

    auto impulse_value = [coords, z_scale](const Address& a) {
        auto d = a.padded(2);
        double z = z_scale * ldexp1(d[0] + d[1]);
        std::vector<double> c(coords);
        for (std::size_t i = 0; i < coords; ++i) c[i] = z * ldexp1(i + 1);
        return VectorValue::c0(std::move(c), z * ldexp1(coords + 1));
    };
    Family z;
    z.index = p.impulses;
    z.kind = SpaceKind::trunc_c0;
    z.dim = coords;
    z.value = impulse_value;
    z.tail_bound = [z_scale](const std::vector<std::uint64_t>& block, std::uint64_t k) {
        if (block.empty()) return std::optional<double>(z_scale * 2.0 * ldexp1(k));
        return std::optional<double>(z_scale * ldexp1(block[0] + k));
    };
    z.abs_tail_bound = z.tail_bound;
    p.z_lower = z;
    p.z_upper = z;
    p.impulse = [impulse_value](const Address& a, const VectorValue&) { return impulse_value(a); };
    return p;
}

// ----- catalog --------------------------------------------------------------------

GalleryEntry get(const std::string& id) {
    GalleryEntry e;
    e.id = id;
    VectorValue one = VectorValue::real(1.0);
    if (id == "geo-lambda0") {
        e.kind = "family";
        e.family = geometric_family(one);
        return e;
    }
    if (id == "altharm-lambda0") {
        e.kind = "family";
        e.family = alt_harmonic_family(one);
        return e;
    }
    if (id == "const-lambda0") {
        e.kind = "family";
        e.family = constant_family(one);
        return e;
    }
    if (id == "pow2-lambda0") {
        e.kind = "family";
        e.family = doubling_family(one);
        return e;
    }
    if (id == "geo2-lambda1") {
        e.kind = "family";
        e.family = nested_geometric_family(one);
        return e;
    }
    if (id == "altgeo-lambda1") {
        e.kind = "family";
        e.family = nested_alt_geometric_family(one);
        return e;
    }
    if (id == "ex30.geo") {
        e.kind = "step";
        e.step = step_geometric_tail();
        e.expected = {{"hk", Tri::yes}, {"bochner", Tri::yes}, {"improper-riemann", Tri::yes}};
        return e;
    }
    if (id == "ex32.altharm") {
        e.kind = "step";
        e.step = step_alt_harmonic();
        e.expected = {{"hl", Tri::yes}, {"bochner", Tri::no}, {"riemann", Tri::no}};
        return e;
    }
    if (id == "ex32.bounded") {
        e.kind = "step";
        e.step = step_bounded_alt();
        e.expected = {{"hl", Tri::yes}, {"bochner", Tri::yes}, {"riemann", Tri::yes}};
        return e;
    }
    if (id == "ex33.lambda2") {
        e.kind = "step";
        e.step = nested_constant_step(one, 3);
        e.expected = {{"hl", Tri::yes}, {"bochner", Tri::yes}, {"riemann", Tri::yes}};
        return e;
    }
    if (id == "ex41.g0") {
        e.kind = "regulated";
        e.mapping = osc_base();
        e.primitive = osc_base_primitive();
        e.expected = {{"riemann-local", Tri::yes},
                      {"bochner-local", Tri::yes},
                      {"hl-local", Tri::yes},
                      {"hk-local", Tri::yes}};
        return e;
    }
    if (id == "ex42.g_m") {
        e.kind = "regulated";
        e.mapping = osc_conditional(1);
        e.primitive = osc_conditional_primitive(1);
        e.expected = {{"hl-local", Tri::yes},
                      {"bochner-local", Tri::no},
                      {"riemann-local", Tri::no}};
        return e;
    }
    if (id == "ex43.g^m") {
        e.kind = "regulated";
        e.mapping = osc_root_singular(2);
        e.primitive = osc_root_singular_primitive(2);
        e.expected = {{"bochner-local", Tri::yes},
                      {"riemann-local", Tri::no},
                      {"hl-local", Tri::yes}};
        return e;
    }
    if (id == "rem31.h") {
        // Reflected dyadic step mapping: value y_n on (2^-n, 2^-n+1].
        e.kind = "function";
        e.plain = [](double t) {
            if (t <= 0.0 || t > 1.0) return VectorValue::real(0.0);
            double x = -std::log2(t); // in [n-1, n) on the n-th piece
            std::uint64_t n = static_cast<std::uint64_t>(std::max(0.0, std::floor(x))) + 1;
            double v = std::ldexp(1.0, static_cast<int>(std::min<std::uint64_t>(n, 1020))) /
                       static_cast<double>(n + 1);
            return VectorValue::real(n % 2 == 0 ? v : -v);
        };
        e.expected = {{"hl", Tri::yes}};
        return e;
    }
    throw UnknownId("no gallery entry: " + id);
}

GalleryEntry weighted_variant(const std::string& id, const std::string& weight) {
    if (weight != "exp-decay") throw UnknownId("unknown weight: " + weight);
    GalleryEntry base = get(id);
    if (!base.mapping) throw UnknownId("weighted variants exist only for regulated entries");
    GalleryEntry e;
    e.id = id + ":exp-decay";
    e.kind = "regulated";
    e.mapping = exp_weighted(*base.mapping);
    if (id == "ex41.g0") e.expected = {{"improper-riemann", Tri::yes}};
    if (id == "ex42.g_m") e.expected = {{"improper-hk", Tri::yes}};
    if (id == "ex43.g^m") e.expected = {{"improper-bochner", Tri::yes}};
    return e;
}

std::vector<std::string> ids() {
    return {"geo-lambda0", "altharm-lambda0", "const-lambda0", "pow2-lambda0",
            "geo2-lambda1", "altgeo-lambda1", "ex30.geo",      "ex32.altharm",
            "ex32.bounded", "ex33.lambda2",   "ex41.g0",       "ex42.g_m",
            "ex43.g^m",     "rem31.h"};
}

} // namespace transquad::gallery
