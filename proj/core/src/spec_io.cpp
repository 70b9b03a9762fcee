#include "transquad/spec_io.hpp"

#include <cinttypes>
#include <cstdio>
#include <ostream>

#include <nlohmann/json.hpp>

#include "transquad/expr.hpp"

namespace transquad {

namespace {

std::pair<SpaceKind, std::size_t> space_from_spec(const nlohmann::json& spec) {
    if (!spec.contains("space")) return {SpaceKind::real, 1};
    const auto& s = spec.at("space");
    std::string kind = s.value("kind", std::string("real"));
    std::size_t dim = s.value("dim", std::size_t{1});
    if (kind == "real") return {SpaceKind::real, 1};
    if (kind == "real_vec") return {SpaceKind::real_vec, dim};
    if (kind == "trunc_c0") return {SpaceKind::trunc_c0, dim};
    throw BadSpec("unknown space kind: " + kind);
}

VectorValue eval_coords(const Expr& expr, std::map<std::string, double> env, SpaceKind kind,
                        std::size_t dim) {
    if (kind == SpaceKind::real) {
        env["i"] = 1.0;
        return VectorValue::real(expr.eval(env));
    }
    std::vector<double> c(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        env["i"] = static_cast<double>(i + 1);
        c[i] = expr.eval(env);
    }
    if (kind == SpaceKind::real_vec) return VectorValue::vec(std::move(c));
    return VectorValue::c0(std::move(c), 0.0);
}

} // namespace

Family family_from_spec(const nlohmann::json& spec) {
    Family f;
    f.index = WellOrderedSet::from_config(spec.at("index"));
    auto [kind, dim] = space_from_spec(spec);
    f.kind = kind;
    f.dim = dim;
    Expr expr = Expr::parse(spec.at("values").get<std::string>());
    std::size_t depth = f.index.depth();
    f.value = [expr, kind, dim, depth](const Address& a) {
        std::map<std::string, double> env;
        auto digits = a.padded(depth);
        for (std::size_t l = 0; l < digits.size(); ++l)
            env["n" + std::to_string(l)] = static_cast<double>(digits[l]);
        env["n"] = static_cast<double>(digits.back());
        return eval_coords(expr, std::move(env), kind, dim);
    };
    return f;
}

StepMapping step_from_spec(const nlohmann::json& spec) {
    StepMapping s;
    s.steps = family_from_spec(spec);
    if (spec.contains("terminal"))
        s.terminal = VectorValue::from_json(spec.at("terminal"));
    else
        s.terminal = s.steps.zero();
    return s;
}

RegulatedMapping regulated_from_spec(const nlohmann::json& spec) {
    RegulatedMapping g;
    auto [kind, dim] = space_from_spec(spec);
    g.kind = kind;
    g.dim = dim;
    g.a = spec.value("a", 0.0);
    if (spec.contains("b") && spec.at("b").is_string())
        g.b = std::numeric_limits<double>::infinity();
    else
        g.b = spec.value("b", 1.0);
    Expr expr = Expr::parse(spec.at("eval").get<std::string>());
    g.eval = [expr, kind, dim](double t) {
        std::map<std::string, double> env{{"t", t}};
        return eval_coords(expr, std::move(env), kind, dim);
    };
    if (spec.contains("bound")) g.sup_bound = spec.at("bound").get<double>();
    g.name = spec.value("name", std::string("spec"));
    return g;
}

ImpulsiveProblem impulsive_from_spec(const nlohmann::json& spec) {
    ImpulsiveProblem p;
    p.a = spec.value("a", 0.0);
    p.c = std::numeric_limits<double>::infinity();
    if (spec.contains("base") && !spec.at("base").is_null())
        p.base = regulated_from_spec(spec.at("base"));
    Family z = family_from_spec(spec.at("impulses"));
    p.impulses = z.index;
    p.z_lower = z;
    p.z_upper = z;
    auto value = z.value;
    p.impulse = [value](const Address& a, const VectorValue&) { return value(a); };
    p.coupling_lower = z.zero();
    p.coupling_upper = z.zero();
    return p;
}

const char* tri_name(Tri t) {
    switch (t) {
    case Tri::yes: return "true";
    case Tri::no: return "false";
    case Tri::unknown: return "unknown";
    }
    return "?";
}

nlohmann::json summability_to_json(const SummabilityReport& rep) {
    nlohmann::json j;
    j["summable"] = tri_name(rep.verdict);
    j["summable_certified"] = rep.verdict_certified;
    j["absolutely_summable"] = tri_name(rep.absolute_verdict);
    j["absolutely_summable_certified"] = rep.absolute_certified;
    j["bounded"] = tri_name(rep.bounded_verdict);
    j["bounded_certified"] = rep.bounded_certified;
    if (rep.c1) j["c1"] = rep.c1->str();
    if (rep.c2) j["c2"] = rep.c2->str();
    if (rep.c3) j["c3"] = rep.c3->str();
    if (rep.total) {
        j["total"] = rep.total->first.to_json();
        j["residual"] = rep.total->second;
    }
    return j;
}

nlohmann::json verdict_to_json(const IntegrabilityVerdict& v) {
    auto mode = [](const ModeVerdict& m) {
        nlohmann::json j;
        j["verdict"] = tri_name(m.verdict);
        j["certified"] = m.certified;
        if (m.cutoff) j["cutoff"] = m.cutoff->str();
        return j;
    };
    nlohmann::json j;
    j["hl"] = mode(v.hl);
    j["hk"] = mode(v.hk);
    j["bochner"] = mode(v.bochner);
    j["riemann"] = mode(v.riemann);
    if (v.integral) {
        j["integral"] = v.integral->first.to_json();
        j["residual"] = v.integral->second;
    }
    return j;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_partial_sum_csv(std::ostream& os, const PartialSumTable& table) {
    os << "address,status,residual,value_coords\n";
    for (const auto& e : table.entries) {
        os << e.gamma.str() << ','
           << (e.status == EntryStatus::exact ? "exact" : "limit-estimated") << ','
           << format_double(e.residual) << ',';
        const auto& c = e.sigma.coords();
        for (std::size_t i = 0; i < c.size(); ++i) os << (i ? ";" : "") << format_double(c[i]);
        os << '\n';
    }
}

void write_trajectory_csv(std::ostream& os, const std::vector<double>& ts,
                          const std::vector<VectorValue>& vs,
                          const std::vector<double>& residuals, const std::string& tag) {
    os << "t,residual" << (tag.empty() ? "" : ",chain") << ",coords\n";
    for (std::size_t k = 0; k < ts.size(); ++k) {
        os << format_double(ts[k]) << ','
           << format_double(k < residuals.size() ? residuals[k] : 0.0);
        if (!tag.empty()) os << ',' << tag;
        os << ',';
        const auto& c = vs[k].coords();
        for (std::size_t i = 0; i < c.size(); ++i) os << (i ? ";" : "") << format_double(c[i]);
        os << '\n';
    }
}

void write_knots_csv(std::ostream& os, const OscPartition& p) {
    os << "left,right,kind,bound\n";
    for (const auto& c : p.cells)
        os << format_double(c.left) << ',' << format_double(c.right) << ','
           << (c.limit_gap ? "limit-gap" : (c.certified ? "certified" : "sampled")) << ','
           << format_double(c.bound) << '\n';
}

} // namespace transquad
