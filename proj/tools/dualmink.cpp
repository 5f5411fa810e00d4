// Command-line front end: condition checks, solves, verification, John
// ellipsoids, group analysis, and the acceptance selftest, with JSON reports.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dualmink/john.hpp"
#include "dualmink/json_io.hpp"
#include "dualmink/selfcheck.hpp"
#include "dualmink/solver.hpp"

namespace dm = dualmink;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitCondition = 3;
constexpr int kExitNumerical = 4;

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag_seed) {
    if (flag_seed) return *flag_seed;
    if (const char* env = std::getenv("DUALMINK_SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0')
            throw dm::InputError("DUALMINK_SEED is not an unsigned integer");
        return v;
    }
    return 20240901ull;
}

void emit(const dm::JsonValue& v, const std::string& out_path) {
    const std::string text = v.dump() + "\n";
    if (out_path.empty()) {
        std::fputs(text.c_str(), stdout);
    } else {
        dm::write_text_atomic(out_path, text);
    }
}

dm::JsonValue json_of_subspace(const dm::Subspace& s) {
    auto o = dm::JsonValue::object();
    o.set("dim", dm::JsonValue::integer(s.dim()));
    o.set("basis", dm::JsonValue::matrix(s.basis()));
    return o;
}

dm::JsonValue json_of_report(const dm::ConditionReport& rep) {
    auto o = dm::JsonValue::object();
    o.set("satisfied", dm::JsonValue::boolean(rep.satisfied));
    o.set("worst_ratio", dm::JsonValue::number(rep.worst_ratio));
    o.set("bound", dm::JsonValue::number(rep.bound));
    o.set("margin", dm::JsonValue::number(rep.margin));
    o.set("candidates_checked",
          dm::JsonValue::integer(static_cast<long long>(rep.candidates_checked)));
    if (rep.worst_subspace) o.set("worst_subspace", json_of_subspace(*rep.worst_subspace));
    auto eq = dm::JsonValue::array();
    for (const auto& ec : rep.equality_cases) {
        auto e = dm::JsonValue::object();
        e.set("subspace", json_of_subspace(ec.subspace));
        if (ec.complement) e.set("complement", json_of_subspace(*ec.complement));
        eq.push(std::move(e));
    }
    o.set("equality_cases", std::move(eq));
    o.set("detail", dm::JsonValue::string(rep.detail));
    return o;
}

nlohmann::json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw dm::InputError("cannot open " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw dm::InputError(path + ": " + e.what());
    }
}

dm::BodySpec body_of_json(const nlohmann::json& j, const std::string& path) {
    const nlohmann::json& b = j.contains("body") ? j.at("body") : j;
    if (!b.contains("normals") || !b.contains("h"))
        throw dm::InputError(path + ": expected a body object with normals and h");
    std::vector<dm::UnitVector> normals;
    for (const auto& row : b.at("normals")) {
        Eigen::VectorXd v(row.size());
        for (std::size_t i = 0; i < row.size(); ++i) v[static_cast<Eigen::Index>(i)] = row[i];
        normals.emplace_back(std::move(v));
    }
    const auto& hv = b.at("h");
    Eigen::VectorXd h(hv.size());
    for (std::size_t i = 0; i < hv.size(); ++i) h[static_cast<Eigen::Index>(i)] = hv[i];
    return dm::BodySpec(std::move(normals), std::move(h));
}

Eigen::VectorXd parse_vector(const std::string& text) {
    std::vector<double> vals;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            vals.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw dm::InputError("bad probe component: " + tok);
        }
    }
    if (vals.empty()) throw dm::InputError("empty probe vector");
    return Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

// ---------------------------------------------------------------------------

struct CommonArgs {
    std::string out;
    std::optional<std::uint64_t> seed;
};

int cmd_analyze_group(const std::string& group_path, const std::vector<std::string>& probes,
                      const CommonArgs& c) {
    const auto g = dm::load_group(group_path);
    const auto fix = dm::fixed_subspace(g);
    const std::uint64_t seed = resolve_seed(c.seed);
    auto o = dm::JsonValue::object();
    o.set("ambient", dm::JsonValue::integer(g.ambient()));
    o.set("order", dm::JsonValue::integer(static_cast<long long>(g.order())));
    o.set("fix_dim", dm::JsonValue::integer(fix.dim()));
    o.set("fix_basis", dm::JsonValue::matrix(fix.basis()));
    o.set("irreducible", dm::JsonValue::boolean(dm::is_irreducible(g, 8, seed)));
    o.set("irreducibility_seed", dm::JsonValue::integer(static_cast<long long>(seed)));
    auto parr = dm::JsonValue::array();
    for (const auto& p : probes) {
        const dm::UnitVector dir(parse_vector(p));
        if (dir.ambient() != g.ambient())
            throw dm::InputError("probe dimension does not match the group");
        const auto orb = dm::orbit(g, dir);
        auto po = dm::JsonValue::object();
        po.set("direction", dm::JsonValue::vector(dir.coords()));
        po.set("orbit_size", dm::JsonValue::integer(static_cast<long long>(orb.size())));
        auto oa = dm::JsonValue::array();
        for (const auto& u : orb) oa.push(dm::JsonValue::vector(u.coords()));
        po.set("orbit", std::move(oa));
        parr.push(std::move(po));
    }
    o.set("probes", std::move(parr));
    emit(o, c.out);
    return 0;
}

int cmd_check(const std::string& measure_path, const std::string& group_path, double q,
              bool symmetrize_flag, double strict_tol, const CommonArgs& c) {
    auto mu = dm::load_measure(measure_path);
    const auto g = dm::load_group(group_path);
    if (!dm::is_invariant_measure(mu, g)) {
        if (!symmetrize_flag) {
            std::fprintf(stderr,
                         "measure is not invariant under the group (pass --symmetrize to "
                         "average it first)\n");
            return kExitCondition;
        }
        mu = dm::symmetrize(mu, g);
    }
    const int n = g.ambient();
    dm::ConditionReport rep;
    if (std::abs(q - n) <= 1e-9) {
        rep = dm::check_concentration(mu, g);
    } else {
        rep = dm::check_mass_inequality(mu, g, q, strict_tol);
    }
    auto o = json_of_report(rep);
    o.set("q", dm::JsonValue::number(q));
    emit(o, c.out);
    return rep.satisfied ? 0 : kExitCondition;
}

int cmd_solve(const std::string& measure_path, const std::string& group_path,
              const std::string& config_path, CLI::App* sub, double q_flag, int max_iters_flag,
              double grad_tol_flag, double residual_tol_flag, int quad_nodes_flag,
              bool no_conditions, bool symmetrize_flag, const std::string& plot_prefix,
              const CommonArgs& c) {
    auto mu = dm::load_measure(measure_path);
    const auto g = dm::load_group(group_path);
    if (symmetrize_flag && !dm::is_invariant_measure(mu, g)) mu = dm::symmetrize(mu, g);

    dm::SolveConfig cfg;
    cfg.q = 0;
    if (!config_path.empty()) {
        const auto j = parse_file(config_path);
        if (j.contains("q")) cfg.q = j.at("q").get<double>();
        if (j.contains("max_iters")) cfg.max_iters = j.at("max_iters").get<int>();
        if (j.contains("grad_tol")) cfg.grad_tol = j.at("grad_tol").get<double>();
        if (j.contains("residual_tol")) cfg.residual_tol = j.at("residual_tol").get<double>();
        if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("quad") && j.at("quad").contains("nodes"))
            cfg.quad_nodes = j.at("quad").at("nodes").get<int>();
    }
    if (sub->count("--q")) cfg.q = q_flag;
    if (sub->count("--max-iters")) cfg.max_iters = max_iters_flag;
    if (sub->count("--grad-tol")) cfg.grad_tol = grad_tol_flag;
    if (sub->count("--residual-tol")) cfg.residual_tol = residual_tol_flag;
    if (sub->count("--quad-nodes")) cfg.quad_nodes = quad_nodes_flag;
    if (c.seed || std::getenv("DUALMINK_SEED")) cfg.seed = resolve_seed(c.seed);
    if (no_conditions) cfg.enforce_conditions = false;
    if (!(cfg.q > 0)) throw dm::InputError("q must be supplied (flag or config) and positive");

    const bool log_case = std::abs(cfg.q - g.ambient()) <= 1e-9;
    const dm::SolveResult res =
        log_case ? dm::solve_log_with_equality(mu, g, cfg) : dm::solve(mu, g, cfg);

    auto o = dm::JsonValue::object();
    o.set("body", dm::json_of_body(res.body));
    o.set("scale", dm::JsonValue::number(res.scale));
    o.set("residual_tv", dm::JsonValue::number(res.residual_tv));
    o.set("iterations", dm::JsonValue::integer(res.iterations));
    o.set("converged", dm::JsonValue::boolean(res.converged));
    o.set("grad_norm", dm::JsonValue::number(res.grad_norm));
    o.set("notes", dm::JsonValue::string(res.notes));
    auto tr = dm::JsonValue::array();
    for (double v : res.phi_trace) tr.push(dm::JsonValue::number(v));
    o.set("phi_trace", std::move(tr));
    emit(o, c.out);

    if (!plot_prefix.empty()) {
        std::string trace_csv = "iter,phi\n";
        for (std::size_t i = 0; i < res.phi_trace.size(); ++i) {
            char line[64];
            std::snprintf(line, sizeof(line), "%zu,%.17g\n", i, res.phi_trace[i]);
            trace_csv += line;
        }
        dm::write_text_atomic(plot_prefix + "-trace.csv", trace_csv);
        if (res.body.ambient() == 2) {
            std::string outline = "x,y\n";
            const auto verts = dm::polygon_vertices(res.body);
            for (std::size_t i = 0; i <= verts.size(); ++i) {
                const auto& v = verts[i % verts.size()]; // close the loop
                char line[80];
                std::snprintf(line, sizeof(line), "%.17g,%.17g\n", v.x(), v.y());
                outline += line;
            }
            dm::write_text_atomic(plot_prefix + "-outline.csv", outline);
        }
    }
    if (!res.converged) {
        std::fprintf(stderr, "solve did not converge: %s\n", res.notes.c_str());
        return kExitNumerical;
    }
    return 0;
}

int cmd_verify(const std::string& measure_path, const std::string& result_path, double q,
               int quad_nodes, double tol, const CommonArgs& c) {
    const auto mu = dm::load_measure(measure_path);
    auto body = body_of_json(parse_file(result_path), result_path);
    dm::SolveResult sr{std::move(body), 1.0, 0.0, 0, false, {}, 0.0, ""};
    const auto quad =
        dm::SphereQuadrature::for_dimension(mu.ambient(), quad_nodes, resolve_seed(c.seed));
    const double resid = dm::verify(mu, sr, q, quad);
    auto o = dm::JsonValue::object();
    o.set("residual_tv", dm::JsonValue::number(resid));
    o.set("tol", dm::JsonValue::number(tol));
    o.set("ok", dm::JsonValue::boolean(resid < tol));
    emit(o, c.out);
    return resid < tol ? 0 : kExitNumerical;
}

int cmd_john(const std::string& body_path, const std::string& group_path, bool sandwich,
             double tol, const CommonArgs& c) {
    const auto body = dm::load_body(body_path);
    std::optional<dm::BlockEllipsoid> e;
    if (!group_path.empty()) {
        e = dm::john_ellipsoid(body, dm::load_group(group_path));
    } else {
        e = dm::john_ellipsoid(body);
    }
    auto o = dm::JsonValue::object();
    o.set("semi_axes", dm::JsonValue::vector(e->semi_axes()));
    auto blocks = dm::JsonValue::array();
    for (const auto& s : e->blocks()) blocks.push(json_of_subspace(s));
    o.set("blocks", std::move(blocks));
    o.set("shape_matrix", dm::JsonValue::matrix(e->shape_matrix()));
    bool sw_ok = true;
    if (sandwich) {
        sw_ok = dm::john_sandwich_check(body, *e, tol);
        o.set("sandwich", dm::JsonValue::boolean(sw_ok));
    }
    emit(o, c.out);
    return sw_ok ? 0 : kExitNumerical;
}

int cmd_audit(const std::string& measure_path, const std::string& group_path,
              const CommonArgs& c) {
    const auto mu = dm::load_measure(measure_path);
    const auto g = dm::load_group(group_path);
    const auto aud = dm::equivalence_audit(mu, g);
    auto o = dm::JsonValue::object();
    o.set("invariant", json_of_report(aud.invariant_report));
    o.set("classical", json_of_report(aud.classical_report));
    o.set("consistent", dm::JsonValue::boolean(aud.consistent));
    emit(o, c.out);
    return aud.consistent ? 0 : kExitCondition;
}

int cmd_selftest(int index, const CommonArgs& c) {
    std::vector<dm::CheckResult> results;
    if (index > 0) {
        results.push_back(dm::run_acceptance_check(index));
    } else {
        results = dm::run_all_acceptance_checks();
    }
    bool all = true;
    auto arr = dm::JsonValue::array();
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& cr = results[i];
        all = all && cr.pass;
        std::printf("[%2zu/%zu] %s %s (%.1fs) %s\n", index > 0 ? static_cast<std::size_t>(index) : i + 1,
                    static_cast<std::size_t>(dm::acceptance_check_count()),
                    cr.pass ? "PASS" : "FAIL", cr.name.c_str(), cr.seconds, cr.detail.c_str());
        std::fflush(stdout);
        auto o = dm::JsonValue::object();
        o.set("name", dm::JsonValue::string(cr.name));
        o.set("pass", dm::JsonValue::boolean(cr.pass));
        o.set("seconds", dm::JsonValue::number(cr.seconds));
        o.set("detail", dm::JsonValue::string(cr.detail));
        arr.push(std::move(o));
    }
    if (!c.out.empty()) emit(arr, c.out);
    return all ? 0 : kExitCondition;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Solver and analysis toolkit for the G-invariant dual Minkowski problem"};
    app.require_subcommand(1);

    CommonArgs common;
    auto add_common = [&common](CLI::App* sub) {
        sub->add_option("--out", common.out, "Write the JSON report to this path (atomic)");
        sub->add_option("--seed", common.seed, "Seed override (else DUALMINK_SEED, else fixed)");
    };

    // analyze-group
    std::string group_path, measure_path, body_path, result_path, config_path, plot_prefix;
    std::vector<std::string> probes;
    auto* ag = app.add_subcommand("analyze-group", "Group order, fixed subspace, irreducibility");
    ag->add_option("group", group_path, "Group JSON file")->required();
    ag->add_option("--probe", probes, "Comma-separated direction; may repeat");
    add_common(ag);

    // check
    double q = 0, strict_tol = 0;
    bool symmetrize_flag = false;
    auto* ck = app.add_subcommand("check", "Solvability condition for a measure and group");
    ck->add_option("measure", measure_path, "Measure JSON file")->required();
    ck->add_option("group", group_path, "Group JSON file")->required();
    ck->add_option("--q", q, "Exponent")->required();
    ck->add_flag("--symmetrize", symmetrize_flag, "Group-average a non-invariant measure");
    ck->add_option("--strict-tol", strict_tol, "Extra strictness margin");
    add_common(ck);

    // solve
    int max_iters = 2000, quad_nodes = 100000;
    double grad_tol = 1e-6, residual_tol = 1e-3, verify_tol = 1e-3, john_tol = 1e-7;
    bool no_conditions = false, sandwich = false;
    auto* sv = app.add_subcommand("solve", "Construct a body whose curvature measure matches");
    sv->add_option("measure", measure_path, "Measure JSON file")->required();
    sv->add_option("group", group_path, "Group JSON file")->required();
    sv->add_option("--q", q, "Exponent");
    sv->add_option("--config", config_path, "Config JSON (q, max_iters, grad_tol, quad, seed)");
    sv->add_option("--max-iters", max_iters, "Ascent iteration cap");
    sv->add_option("--grad-tol", grad_tol, "Orbit-gradient stopping tolerance");
    sv->add_option("--residual-tol", residual_tol, "Acceptance residual");
    sv->add_option("--quad-nodes", quad_nodes, "Quadrature resolution");
    sv->add_flag("--no-conditions", no_conditions, "Skip the solvability gate");
    sv->add_flag("--symmetrize", symmetrize_flag, "Group-average a non-invariant measure");
    sv->add_option("--emit-plot", plot_prefix, "Write <prefix>-trace.csv and 2-D outline CSV");
    add_common(sv);

    // verify
    auto* vf = app.add_subcommand("verify", "Independent residual of a solve result");
    vf->add_option("measure", measure_path, "Measure JSON file")->required();
    vf->add_option("result", result_path, "Solve result (or body) JSON file")->required();
    vf->add_option("--q", q, "Exponent")->required();
    vf->add_option("--quad-nodes", quad_nodes, "Quadrature resolution");
    vf->add_option("--tol", verify_tol, "Residual acceptance threshold");
    add_common(vf);

    // john
    auto* jn = app.add_subcommand("john", "Maximal origin-centered inscribed ellipsoid");
    jn->add_option("body", body_path, "Body JSON file")->required();
    jn->add_option("--group", group_path, "Assert invariance and average over this group");
    jn->add_flag("--sandwich", sandwich, "Also check E subset K subset nE");
    jn->add_option("--tol", john_tol, "Sandwich tolerance");
    add_common(jn);

    // audit
    auto* au = app.add_subcommand("audit", "Invariant vs classical condition comparison");
    au->add_option("measure", measure_path, "Measure JSON file")->required();
    au->add_option("group", group_path, "Group JSON file")->required();
    add_common(au);

    // selftest
    int check_index = 0;
    auto* st = app.add_subcommand("selftest", "Run the acceptance checks");
    st->add_option("index", check_index, "Run a single check (1-based); default all");
    add_common(st);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (ag->parsed()) return cmd_analyze_group(group_path, probes, common);
        if (ck->parsed()) return cmd_check(measure_path, group_path, q, symmetrize_flag,
                                           strict_tol, common);
        if (sv->parsed())
            return cmd_solve(measure_path, group_path, config_path, sv, q, max_iters, grad_tol,
                             residual_tol, quad_nodes, no_conditions, symmetrize_flag,
                             plot_prefix, common);
        if (vf->parsed())
            return cmd_verify(measure_path, result_path, q, quad_nodes, verify_tol, common);
        if (jn->parsed()) return cmd_john(body_path, group_path, sandwich, john_tol, common);
        if (au->parsed()) return cmd_audit(measure_path, group_path, common);
        if (st->parsed()) return cmd_selftest(check_index, common);
    } catch (const dm::ConditionError& e) {
        std::fprintf(stderr, "condition not satisfied: %s\n", e.what());
        return kExitCondition;
    } catch (const dm::InputError& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return kExitInput;
    } catch (const dm::NumericalError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNumerical;
    }
    return kExitUsage;
}
