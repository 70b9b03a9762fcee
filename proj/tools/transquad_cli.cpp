// transquad: transfinite sums, gauge integrals of step and right-regulated
// mappings, and impulsive initial value problems, from the command line.
//
// Exit codes: 0 certified result, 1 input error, 2 inconclusive/uncertified.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "transquad/gallery.hpp"
#include "transquad/gauge.hpp"
#include "transquad/spec_io.hpp"

using nlohmann::json;
using namespace transquad;

namespace {

constexpr int kSchemaVersion = 1;

int thread_cap() {
    if (const char* env = std::getenv("TRANSQUAD_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return 1;
}

json load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw BadSpec("cannot open spec file: " + path);
    json j;
    in >> j;
    return j;
}

void emit_report(const json& report, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << report.dump(2) << '\n';
        return;
    }
    std::ofstream os(out_path);
    if (!os) throw Error("cannot write report: " + out_path);
    os << report.dump(2) << '\n';
}

void write_file(const std::string& path, const std::function<void(std::ostream&)>& body) {
    if (path.empty()) return;
    std::ofstream os(path);
    if (!os) throw Error("cannot write: " + path);
    body(os);
}

// "gallery:<id>" or a JSON spec file path.
bool is_gallery_ref(const std::string& s) { return s.rfind("gallery:", 0) == 0; }
std::string gallery_id(const std::string& s) { return s.substr(8); }

struct CommonOpts {
    double tol = 1e-6;
    std::uint64_t budget = 100000;
    std::string out;
    std::string format = "json";
};

int run_sum(const std::string& gallery_src, const std::string& spec_src, const CommonOpts& opt,
            std::uint64_t prefix_rows, const std::string& csv_path) {
    if (gallery_src.empty() == spec_src.empty())
        throw BadSpec("sum needs exactly one of --gallery or --spec");
    Family fam = [&]() {
        if (!gallery_src.empty()) {
            std::string id = is_gallery_ref(gallery_src) ? gallery_id(gallery_src) : gallery_src;
            auto entry = gallery::get(id);
            if (!entry.family) throw BadSpec("gallery entry is not a family: " + id);
            return *entry.family;
        }
        return family_from_spec(load_spec(spec_src));
    }();

    SumConfig cfg;
    cfg.tol = opt.tol;
    cfg.layer_budget = opt.budget;

    SummabilityReport rep = classify(fam, cfg.layer_budget, cfg.tol);
    PartialSumTable table = partial_sum_table(fam, prefix_rows, cfg);

    json report;
    report["schema_version"] = kSchemaVersion;
    report["command"] = "sum";
    report["tolerance"] = opt.tol;
    report["budget"] = opt.budget;
    report["classification"] = summability_to_json(rep);
    write_file(csv_path, [&](std::ostream& os) { write_partial_sum_csv(os, table); });
    if (!csv_path.empty()) report["table_csv"] = csv_path;
    emit_report(report, opt.out);

    if (rep.verdict == Tri::unknown) return 2;
    if (rep.total && !rep.verdict_certified) return 2;
    return 0;
}

bool looks_like_file(const std::string& s) {
    return s.size() > 5 && s.rfind(".json") == s.size() - 5;
}

StepMapping step_from_source(const std::string& source) {
    if (is_gallery_ref(source) || !looks_like_file(source)) {
        auto entry = gallery::get(is_gallery_ref(source) ? gallery_id(source) : source);
        if (!entry.step) throw BadSpec("gallery entry is not a step mapping: " + source);
        return *entry.step;
    }
    return step_from_spec(load_spec(source));
}

int run_integrate_step(const std::string& source, const std::string& mode_name,
                       const CommonOpts& opt, double grid_a, double grid_b, std::uint64_t grid_n,
                       const std::string& csv_path) {
    StepMapping g = step_from_source(source);
    IntegralMode mode = IntegralMode::hl;
    if (mode_name == "hk") mode = IntegralMode::hk;
    else if (mode_name == "bochner") mode = IntegralMode::bochner;
    else if (mode_name == "riemann") mode = IntegralMode::riemann;
    else if (mode_name != "hl") throw BadSpec("unknown mode: " + mode_name);

    SumConfig cfg;
    cfg.tol = opt.tol;
    cfg.layer_budget = opt.budget;
    IntegrabilityVerdict v = integrate_step(g, mode, opt.tol, cfg);

    json report;
    report["schema_version"] = kSchemaVersion;
    report["command"] = "integrate-step";
    report["mode"] = mode_name;
    report["verdicts"] = verdict_to_json(v);

    if (!csv_path.empty() && grid_n > 0) {
        PrimitiveTrace f = primitive(g, cfg);
        std::vector<double> ts;
        std::vector<VectorValue> vs;
        std::vector<double> rs;
        for (std::uint64_t k = 0; k <= grid_n; ++k) {
            double t = grid_a + (grid_b - grid_a) * static_cast<double>(k) /
                                    static_cast<double>(grid_n);
            auto [val, res] = f.eval(t);
            ts.push_back(t);
            vs.push_back(val);
            rs.push_back(res);
        }
        write_file(csv_path, [&](std::ostream& os) { write_trajectory_csv(os, ts, vs, rs); });
        report["trajectory_csv"] = csv_path;
    }
    emit_report(report, opt.out);

    const ModeVerdict& m = mode == IntegralMode::hl      ? v.hl
                           : mode == IntegralMode::hk    ? v.hk
                           : mode == IntegralMode::bochner ? v.bochner
                                                           : v.riemann;
    if (m.verdict == Tri::unknown) return 2;
    return m.certified ? 0 : 2;
}

int run_integrate(const std::string& source, const std::string& mode_name, double a, double b,
                  const CommonOpts& opt, double eps, const std::string& knots_csv,
                  const std::string& traj_csv, std::uint64_t traj_n) {
    RegulatedMapping g = [&]() {
        if (is_gallery_ref(source)) {
            std::string id = gallery_id(source);
            auto sep = id.find(':');
            auto entry = sep == std::string::npos
                             ? gallery::get(id)
                             : gallery::weighted_variant(id.substr(0, sep), id.substr(sep + 1));
            if (entry.mapping) return *entry.mapping;
            if (entry.step) return as_regulated(truncate_step_mapping(*entry.step, 64));
            throw BadSpec("gallery entry is not integrable as a mapping: " + source);
        }
        return regulated_from_spec(load_spec(source));
    }();

    IntegralMode mode = IntegralMode::hl;
    if (mode_name == "hk") mode = IntegralMode::hk;
    else if (mode_name == "bochner") mode = IntegralMode::bochner;
    else if (mode_name == "riemann") mode = IntegralMode::riemann;
    else if (mode_name != "hl") throw BadSpec("unknown mode: " + mode_name);

    RegConfig rcfg;
    rcfg.knot_budget = opt.budget;
    IntegrabilityVerdict v = integrate_regulated(g, a, b, mode, opt.tol, rcfg);

    json report;
    report["schema_version"] = kSchemaVersion;
    report["command"] = "integrate";
    report["mode"] = mode_name;
    report["interval"] = {a, b};
    report["verdicts"] = verdict_to_json(v);

    if (!knots_csv.empty()) {
        OscPartition p = build_partition(g, a, b, eps, opt.budget, rcfg);
        write_file(knots_csv, [&](std::ostream& os) { write_knots_csv(os, p); });
        report["knots_csv"] = knots_csv;
        report["partition_eps"] = eps;
        report["partition_complete"] = p.complete;
    }
    if (!traj_csv.empty() && traj_n > 0) {
        RegPrimitive f = cd_primitive(g, a, b, opt.tol, rcfg);
        std::vector<double> ts;
        std::vector<VectorValue> vs;
        std::vector<double> rs;
        for (std::uint64_t k = 0; k <= traj_n; ++k) {
            double t = a + (b - a) * static_cast<double>(k) / static_cast<double>(traj_n);
            auto [val, res] = f.eval(t);
            ts.push_back(t);
            vs.push_back(val);
            rs.push_back(res);
        }
        write_file(traj_csv, [&](std::ostream& os) { write_trajectory_csv(os, ts, vs, rs); });
        report["trajectory_csv"] = traj_csv;
    }
    emit_report(report, opt.out);

    const ModeVerdict& m = mode == IntegralMode::hl      ? v.hl
                           : mode == IntegralMode::hk    ? v.hk
                           : mode == IntegralMode::bochner ? v.bochner
                                                           : v.riemann;
    if (m.verdict == Tri::unknown) return 2;
    return m.certified ? 0 : 2;
}

int run_gauge_check(const std::string& source, std::uint64_t knots, std::vector<int> scales,
                    double eps_target, const CommonOpts& opt, const std::string& csv_path) {
    StepMapping full = step_from_source(source);
    StepMapping g = truncate_step_mapping(full, knots);
    SumConfig cfg;
    cfg.tol = opt.tol;
    PrimitiveTrace f = primitive(g, cfg);

    json rows = json::array();
    std::string csv = "scale,hl_defect,hk_defect,cells\n";
    bool monotone = true;
    double prev = std::numeric_limits<double>::infinity();
    for (int k : scales) {
        double s = std::ldexp(1.0, -k);
        Gauge delta = canonical_step_gauge(g, eps_target, s);
        TaggedPartition p = cousin_partition(delta, g.domain_min(), g.domain_sup());
        if (!is_fine(delta, p)) throw Error("generated partition failed the fineness re-check");
        DefectPair d = riemann_defect([&](double t) { return g.eval(t); },
                                      [&](double t) { return f.eval(t).first; }, p);
        rows.push_back({{"scale", s}, {"hl", d.hl}, {"hk", d.hk}, {"cells", p.cells.size()}});
        csv += format_double(s) + "," + format_double(d.hl) + "," + format_double(d.hk) + "," +
               std::to_string(p.cells.size()) + "\n";
        monotone = monotone && d.hl <= prev + 1e-15;
        prev = d.hl;
    }
    write_file(csv_path, [&](std::ostream& os) { os << csv; });

    json report;
    report["schema_version"] = kSchemaVersion;
    report["command"] = "gauge-check";
    report["eps_target"] = eps_target;
    report["knots"] = knots;
    report["defects"] = rows;
    report["monotone"] = monotone;
    if (!csv_path.empty()) report["defect_csv"] = csv_path;
    emit_report(report, opt.out);
    return 0;
}

int run_impulsive(const std::string& source, double horizon, const CommonOpts& opt,
                  int max_iter, std::uint64_t grid_per_unit, const std::string& traj_csv,
                  const std::string& log_path) {
    ImpulsiveProblem p = [&]() {
        if (is_gallery_ref(source) || source.rfind("ex54", 0) == 0) {
            std::string id = is_gallery_ref(source) ? gallery_id(source) : source;
            if (id.rfind("ex54", 0) == 0) {
                std::size_t coords = 32;
                auto sep = id.find(':');
                if (sep != std::string::npos) coords = std::stoul(id.substr(sep + 1));
                return gallery::impulsive_example(coords);
            }
            throw BadSpec("unknown impulsive gallery id: " + id);
        }
        return impulsive_from_spec(load_spec(source));
    }();

    ImpulsiveConfig cfg;
    cfg.tol = opt.tol;
    cfg.max_iter = max_iter;
    cfg.grid_per_unit = grid_per_unit;
    cfg.threads = thread_cap();

    ExtremalOutcome out = extremal_solutions(p, horizon, cfg);

    json report;
    report["schema_version"] = kSchemaVersion;
    report["command"] = "impulsive-solve";
    report["horizon"] = horizon;
    report["iterations"] = out.iterations;
    report["bracket_gap"] = out.bracket_gap;
    report["fixed_point_residual"] = out.fixed_point_residual;
    report["status"] = out.status == IterationStatus::converged          ? "converged"
                       : out.status == IterationStatus::max_iter_exceeded ? "max-iter-exceeded"
                                                                          : "monotonicity-violation";

    if (!traj_csv.empty()) {
        write_file(traj_csv, [&](std::ostream& os) {
            os << "t,chain,coords\n";
            auto dump = [&](const Trajectory& u, const char* tag) {
                for (std::size_t k = 0; k < u.grid().size(); ++k) {
                    os << format_double(u.grid()[k]) << ',' << tag << ',';
                    const auto& c = u.grid_values()[k].coords();
                    for (std::size_t i = 0; i < c.size(); ++i)
                        os << (i ? ";" : "") << format_double(c[i]);
                    os << '\n';
                }
            };
            dump(out.lower, "lower");
            dump(out.upper, "upper");
        });
        report["trajectory_csv"] = traj_csv;
    }
    write_file(log_path, [&](std::ostream& os) {
        os << "iterations=" << out.iterations << "\nbracket_gap=" << format_double(out.bracket_gap)
           << "\nfixed_point_residual=" << format_double(out.fixed_point_residual)
           << "\nstatus=" << report["status"].get<std::string>() << "\n";
    });
    emit_report(report, opt.out);
    return out.status == IterationStatus::converged ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Transfinite sums and gauge integration of step and right-regulated mappings"};
    app.require_subcommand(1);

    CommonOpts opt;
    std::string source, mode = "hl";
    double a = 0.0, b = 1.0, eps = 0.25, eps_target = 1e-4, horizon = 2.0;
    std::uint64_t prefix_rows = 32, grid_n = 0, knots = 12, grid_per_unit = 512;
    int max_iter = 60;
    std::vector<int> scales{4, 6, 8};
    std::string csv_path, knots_csv, traj_csv, log_path;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--tol", opt.tol, "certified tolerance");
        cmd->add_option("--budget", opt.budget, "enumeration / knot budget");
        cmd->add_option("--out", opt.out, "write the JSON report here (default: stdout)");
        cmd->add_option("--format", opt.format, "report format (json)");
    };

    auto* sum = app.add_subcommand("sum", "sum a family over a well-ordered index set");
    sum->add_option("--gallery", source, "gallery family id")->required(false);
    sum->add_option("--spec", source, "family spec file (JSON)");
    sum->add_option("--prefix-rows", prefix_rows, "rows of the partial-sum table");
    sum->add_option("--csv", csv_path, "partial-sum table CSV path");
    add_common(sum);

    auto* istep = app.add_subcommand("integrate-step", "integrability of a step mapping");
    istep->add_option("--mapping", source, "gallery:<id> or spec file")->required();
    istep->add_option("--mode", mode, "hl|hk|bochner|riemann");
    istep->add_option("--grid-a", a, "trajectory grid start");
    istep->add_option("--grid-b", b, "trajectory grid end");
    istep->add_option("--grid-n", grid_n, "trajectory grid points");
    istep->add_option("--csv", csv_path, "primitive trajectory CSV path");
    add_common(istep);

    auto* integ = app.add_subcommand("integrate", "integrability of a right-regulated mapping");
    integ->add_option("--mapping", source, "gallery:<id> or spec file")->required();
    integ->add_option("--interval", [&a, &b](const std::vector<std::string>& vals) {
        if (vals.size() != 2) return false;
        a = std::stod(vals[0]);
        b = std::stod(vals[1]);
        return true;
    }, "integration interval a b")->expected(2);
    integ->add_option("--mode", mode, "hk|hl|bochner|riemann");
    integ->add_option("--eps", eps, "partition oscillation level for --knots-csv");
    integ->add_option("--knots-csv", knots_csv, "partition knots CSV path");
    integ->add_option("--trajectory-csv", traj_csv, "primitive trajectory CSV path");
    integ->add_option("--trajectory-n", grid_n, "trajectory grid points");
    add_common(integ);

    auto* gauge = app.add_subcommand("gauge-check", "Riemann-sum defects under fine partitions");
    gauge->add_option("--mapping", source, "gallery:<id> or spec file (step mapping)")->required();
    gauge->add_option("--knots", knots, "finite truncation size");
    gauge->add_option("--scales", scales, "gauge scales as exponents k (scale 2^-k)");
    gauge->add_option("--eps-target", eps_target, "defect target of the canonical gauge");
    gauge->add_option("--csv", csv_path, "defect table CSV path");
    add_common(gauge);

    auto* imp = app.add_subcommand("impulsive-solve", "extremal solutions of an impulsive IVP");
    imp->add_option("--problem", source, "ex54[:coords] or spec file")->required();
    imp->add_option("--horizon", horizon, "solve on [a, horizon]");
    imp->add_option("--max-iter", max_iter, "iteration budget");
    imp->add_option("--grid-per-unit", grid_per_unit, "background grid density");
    imp->add_option("--trajectory-csv", traj_csv, "trajectory CSV path");
    imp->add_option("--log", log_path, "iteration log path");
    add_common(imp);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sum->parsed()) {
            if (source.empty()) throw BadSpec("sum needs --gallery or --spec");
            return run_sum(source, opt, prefix_rows, csv_path);
        }
        if (istep->parsed())
            return run_integrate_step(source, mode, opt, a, b, grid_n, csv_path);
        if (integ->parsed())
            return run_integrate(source, mode, a, b, opt, eps, knots_csv, traj_csv, grid_n);
        if (gauge->parsed())
            return run_gauge_check(source, knots, scales, eps_target, opt, csv_path);
        if (imp->parsed())
            return run_impulsive(source, horizon, opt, max_iter, grid_per_unit, traj_csv,
                                 log_path);
    } catch (const BadSpec& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 1;
    } catch (const UnknownId& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
