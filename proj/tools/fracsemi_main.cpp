// fracsemi: batch front end for the fractional-semigroup laboratory.
//
//   fracsemi <command> --config <path> [--output <dir>]
//
// Commands: kernel | evolve | decay | audit | verify-suite.  Every run
// writes report.json, a manifest, and plot-ready CSV files into the
// output directory.  Exit codes: 0 success, 1 operational error,
// 2 = the math ran but a verified property failed.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "fracsemi/decay.hpp"
#include "fracsemi/engine.hpp"
#include "fracsemi/kernels.hpp"
#include "fracsemi/potential.hpp"
#include "fracsemi/subordinator.hpp"
#include "fracsemi/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;
using namespace fracsemi;

namespace {

constexpr const char* kVersion = "0.1.0";

[[noreturn]] void bad_field(const std::string& field, const std::string& expected) {
    throw config_error("config field '" + field + "': expected " + expected);
}

double get_num(const json& j, const std::string& key, std::optional<double> fallback = {}) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        bad_field(key, "a number (missing)");
    }
    if (!j.at(key).is_number()) bad_field(key, "a number");
    return j.at(key).get<double>();
}

int get_int(const json& j, const std::string& key, std::optional<int> fallback = {}) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        bad_field(key, "an integer (missing)");
    }
    if (!j.at(key).is_number_integer()) bad_field(key, "an integer");
    return j.at(key).get<int>();
}

std::string get_str(const json& j, const std::string& key,
                    std::optional<std::string> fallback = {}) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        bad_field(key, "a string (missing)");
    }
    if (!j.at(key).is_string()) bad_field(key, "a string");
    return j.at(key).get<std::string>();
}

TorusGrid parse_grid(const json& cfg) {
    if (!cfg.contains("grid")) bad_field("grid", "an object {dim, length, points}");
    const json& g = cfg.at("grid");
    const int dim = get_int(g, "dim", 1);
    if (dim != 1 && dim != 2) bad_field("grid.dim", "1 or 2");
    const double L = get_num(g, "length");
    const int n = get_int(g, "points");
    return TorusGrid(dim, L, n);
}

FractionalOrder parse_mu(const json& cfg) {
    const double mu = get_num(cfg, "mu");
    if (!(mu > 0.0 && mu <= 1.0)) bad_field("mu", "a real in (0, 1]");
    return FractionalOrder(mu);
}

Potential parse_potential(const json& cfg, const TorusGrid& grid) {
    if (!cfg.contains("potential"))
        bad_field("potential", "an object {family, ...}");
    const json& p = cfg.at("potential");
    const std::string family = get_str(p, "family");
    const double p0 = get_num(p, "p0", 1.0);
    if (family == "constant")
        return make_constant(grid, get_num(p, "value"), p0);
    if (family == "well")
        return make_well(grid, get_num(p, "depth"), get_num(p, "width"),
                         get_num(p, "center", 0.0), p0);
    if (family == "bump_array")
        return make_bump_array(grid, get_num(p, "height"), get_num(p, "radius"),
                               get_num(p, "spacing"), p0);
    if (family == "counterexample")
        return make_counterexample(grid, p0);
    bad_field("potential.family",
              "one of constant | well | bump_array | counterexample");
}

EvolutionConfig parse_engine(const json& cfg) {
    EvolutionConfig e;
    if (!cfg.contains("engine")) return e;
    const json& j = cfg.at("engine");
    const std::string kind = get_str(j, "kind", "splitting");
    if (kind == "picard") e.engine = EngineKind::picard;
    else if (kind == "splitting") e.engine = EngineKind::splitting;
    else if (kind == "dense_oracle") e.engine = EngineKind::dense_oracle;
    else bad_field("engine.kind", "one of picard | splitting | dense_oracle");
    e.dt = get_num(j, "dt", e.dt);
    e.window = get_num(j, "window", e.window);
    e.picard_tol = get_num(j, "picard_tol", e.picard_tol);
    e.quad_nodes = get_int(j, "quad_nodes", e.quad_nodes);
    e.max_picard_iters = get_int(j, "max_picard_iters", e.max_picard_iters);
    return e;
}

std::vector<double> parse_t_grid(const json& cfg) {
    std::vector<double> t;
    if (cfg.contains("t_grid")) {
        for (const auto& v : cfg.at("t_grid")) {
            if (!v.is_number()) bad_field("t_grid", "an array of numbers");
            t.push_back(v.get<double>());
        }
    }
    return t;
}

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char buf[64];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&tt));
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

void write_json(const fs::path& path, const ordered_json& j) {
    write_text(path, j.dump(2) + "\n");
}

void write_manifest(const fs::path& dir, const std::string& command,
                    const json& cfg) {
    ordered_json m;
    m["command"] = command;
    m["version"] = kVersion;
    m["timestamp"] = iso_timestamp();
    const char* threads = std::getenv("FRACSEMI_THREADS");
    m["fracsemi_threads"] = threads ? json(std::atoi(threads)) : json(nullptr);
    m["config"] = cfg;
    m["tolerances"] = {
        {"density_mass_defect", 1e-6},
        {"density_clamp_mass", 1e-8},
        {"fit_r_squared", 0.999},
        {"chain_tol_rel", 0.05},
        {"chain_tol_abs_small", 1e-3},
        {"certificate_slack", 1e-6},
        {"decay_threshold_default", 1e-4},
    };
    write_json(dir / "manifest.json", m);
}

// ------------------------------------------------------------------ kernel

int run_kernel(const json& cfg, const fs::path& dir) {
    TorusGrid grid = parse_grid(cfg);
    FractionalOrder order = parse_mu(cfg);
    ProfileOptions opt;
    opt.strict = cfg.value("strict", true);
    KernelProfile prof = build_profile(order.mu, grid, opt);
    double mass = 0.0;
    for (double v : prof.values.values) mass += v;
    mass *= grid.cell_volume();

    ordered_json rep;
    rep["schema"] = 1;
    rep["command"] = "kernel";
    rep["mu"] = order.mu;
    rep["grid"] = {{"dim", grid.dim()}, {"length", grid.length()},
                   {"points", grid.points_per_axis()}};
    rep["mass"] = mass;
    if (order.mu < 1.0) {
        auto [c1, c2] = certify_bounds(prof);
        rep["lower_c"] = c1;
        rep["upper_c"] = c2;
        rep["fractional_constant"] = fractional_constant(grid.dim(), order.mu);
        auto d = build_density(order.mu);
        rep["density_mass_defect"] = d.mass_defect;
        std::ofstream dcsv(dir / "density.csv");
        export_csv(d, dcsv);
    }
    rep["timestamp"] = iso_timestamp();
    write_json(dir / "report.json", rep);
    std::ofstream csv(dir / "kernel_profile.csv");
    export_csv(prof, csv);
    return 0;
}

// ------------------------------------------------------------------ evolve

int run_evolve(const json& cfg, const fs::path& dir) {
    TorusGrid grid = parse_grid(cfg);
    FractionalOrder order = parse_mu(cfg);
    Potential V = parse_potential(cfg, grid);
    EvolutionConfig ecfg = parse_engine(cfg);
    const double t_final = get_num(cfg, "t_final");
    const std::string u0kind = get_str(cfg, "initial", "gaussian");
    Field u0(grid, 1.0);
    if (u0kind == "gaussian") {
        for (std::size_t i = 0; i < u0.size(); ++i) u0[i] = 0.0;
        for (int i = 0; i < grid.points_per_axis(); ++i)
            for (int j = 0; j < (grid.dim() == 2 ? grid.points_per_axis() : 1); ++j) {
                const double x = grid.coord(i), y = grid.dim() == 2 ? grid.coord(j) : 0.0;
                u0[grid.index(i, j)] = std::exp(-x * x - y * y);
            }
    } else if (u0kind == "random") {
        u0 = random_field(grid, static_cast<std::uint64_t>(get_int(cfg, "seed", 1)),
                          0.02, true);
    } else if (u0kind != "ones") {
        bad_field("initial", "one of gaussian | ones | random");
    }

    EvolutionResult res = evolve(u0, V, order, t_final, ecfg);

    ordered_json rep;
    rep["schema"] = 1;
    rep["command"] = "evolve";
    rep["mu"] = order.mu;
    rep["grid"] = {{"dim", grid.dim()}, {"length", grid.length()},
                   {"points", grid.points_per_axis()}};
    rep["potential_family"] = family_name(V.family);
    rep["engine"] = engine_name(ecfg.engine);
    rep["t_final"] = t_final;
    rep["final_l1"] = lp_norm(res.final, 1.0);
    rep["final_l2"] = lp_norm(res.final, 2.0);
    rep["final_linf"] = lp_norm(res.final, kInfinity);
    rep["picard_iterations"] = res.picard_iterations;
    rep["windows"] = res.windows;
    rep["steps"] = res.steps;
    rep["boundary_mass"] = res.boundary_mass;
    rep["timestamp"] = iso_timestamp();
    write_json(dir / "report.json", rep);

    std::ofstream trace(dir / "trace.csv");
    export_csv(res, trace);
    std::ofstream pot(dir / "potential.csv");
    export_csv(V, pot);
    return 0;
}

// ------------------------------------------------------------------- decay

int run_decay(const json& cfg, const fs::path& dir) {
    TorusGrid grid = parse_grid(cfg);
    FractionalOrder order = parse_mu(cfg);
    Potential V = parse_potential(cfg, grid);
    EvolutionConfig ecfg = parse_engine(cfg);
    const auto seed = static_cast<std::uint64_t>(get_int(cfg, "seed", 20240901));

    ReportInputs in;
    in.potential = &V;
    in.order = order;
    in.decay_threshold = get_num(cfg, "decay_threshold", 1e-4);
    in.a_star = a_star(V.values, order);

    std::vector<double> t_grid = parse_t_grid(cfg);
    if (t_grid.empty() && in.a_star > in.decay_threshold) {
        // default window: [2, 5] e-foldings of the spectral bound
        for (int i = 0; i <= 24; ++i)
            t_grid.push_back((2.0 + 3.0 * i / 24.0) / in.a_star);
    }
    if (!t_grid.empty()) {
        in.omega_2 = estimate_omega(V.values, order, 2.0, t_grid, ecfg,
                                    OmegaRoute::auto_select, seed);
        in.omega_inf = estimate_omega(V.values, order, kInfinity, t_grid, ecfg,
                                      OmegaRoute::auto_select, seed);
        in.omega_1 = estimate_omega(V.values, order, 1.0, t_grid, ecfg,
                                    OmegaRoute::auto_select, seed);
        in.chain = decay_rate_chain(in.omega_2, in.omega_inf, grid.dim(), order.mu);
    } else {
        in.omega_2 = in.a_star;
    }

    std::vector<double> radii;
    if (cfg.contains("criterion_radii"))
        for (const auto& v : cfg.at("criterion_radii")) radii.push_back(v.get<double>());
    else
        radii = {0.5, 1.0, 2.0};
    for (double r : radii)
        in.ball_criterion_table.emplace_back(r, ball_criterion(V, r).inf_value);

    std::optional<CertificateResult> cert;
    if (cfg.contains("certificate")) {
        const json& c = cfg.at("certificate");
        const double M = get_num(c, "M");
        const double r = get_num(c, "r");
        TruncatedPotential VM = truncate(V, M);
        const double t = get_num(c, "t", 0.5 / VM.sup());
        const double cval = ball_criterion(VM, r).inf_value;
        if (!(cval > 0.0))
            throw config_error("certificate.r gives a vanishing ball criterion; "
                               "choose a larger radius");
        TorusGrid wide(grid.dim(), get_num(c, "profile_length", 8.0 * grid.length()),
                       get_int(c, "profile_points", 4096));
        KernelProfile prof = build_profile(order.mu, wide);
        cert = decay_certificate(VM, order, t, r, cval, prof, ecfg);
        in.certificate = cert;
    }

    DecayReport rep = assemble_report(in);
    ordered_json j = to_json(rep);
    j["timestamp"] = iso_timestamp();
    write_json(dir / "report.json", j);

    std::ofstream crit(dir / "criterion_vs_r.csv");
    crit << "r,inf\n";
    for (const auto& [r, v] : rep.ball_criterion_table) crit << r << "," << v << "\n";
    std::ofstream pot(dir / "potential.csv");
    export_csv(V, pot);

    const bool chain_fail = rep.chain && !rep.chain->ok();
    const bool cert_fail = rep.certificate && !rep.certificate->ok;
    return (chain_fail || cert_fail) ? 2 : 0;
}

// ------------------------------------------------------------------- audit

int run_audit(const json& cfg, const fs::path& dir) {
    TorusGrid grid = parse_grid(cfg);
    Potential V = parse_potential(cfg, grid);
    std::vector<double> ladder;
    if (cfg.contains("M_ladder"))
        for (const auto& v : cfg.at("M_ladder")) ladder.push_back(v.get<double>());
    else
        ladder = {1.0, 2.0, 4.0, 8.0};
    const auto defects = approximability_profile(V, V.p0, ladder);

    std::vector<double> radii;
    if (cfg.contains("criterion_radii"))
        for (const auto& v : cfg.at("criterion_radii")) radii.push_back(v.get<double>());
    else
        radii = {0.5, 1.0, 1.5, 2.0, 3.0};

    ordered_json rep;
    rep["schema"] = 1;
    rep["command"] = "audit";
    rep["grid"] = {{"dim", grid.dim()}, {"length", grid.length()},
                   {"points", grid.points_per_axis()}};
    rep["potential_family"] = family_name(V.family);
    rep["p0"] = V.p0;
    rep["sup"] = V.sup();
    rep["uniform_norm"] = uniform_norm(V, V.p0);
    auto defj = ordered_json::array();
    for (const auto& [M, d] : defects) defj.push_back({{"M", M}, {"defect", d}});
    rep["approximability"] = defj;
    auto critj = ordered_json::array();
    for (double r : radii) {
        critj.push_back({{"r", r}, {"inf", ball_criterion(V, r).inf_value}});
    }
    rep["ball_criterion"] = critj;
    rep["timestamp"] = iso_timestamp();
    write_json(dir / "report.json", rep);

    std::ofstream lad(dir / "defect_ladder.csv");
    lad << "M,defect\n";
    for (const auto& [M, d] : defects) lad << M << "," << d << "\n";
    std::ofstream crit(dir / "criterion_vs_r.csv");
    crit << "r,inf\n";
    for (const auto& e : critj)
        crit << e.at("r").get<double>() << "," << e.at("inf").get<double>() << "\n";
    std::ofstream pot(dir / "potential.csv");
    export_csv(V, pot);
    return 0;
}

// ------------------------------------------------------------ verify-suite

int run_verify(const json& cfg, const fs::path& dir) {
    std::vector<int> ids;
    if (cfg.contains("criteria"))
        for (const auto& v : cfg.at("criteria")) ids.push_back(v.get<int>());
    const auto results = run_battery(ids);
    bool all = true;
    ordered_json rep;
    rep["schema"] = 1;
    rep["command"] = "verify-suite";
    auto arr = ordered_json::array();
    for (const auto& r : results) {
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << " " << r.name
                  << ": " << r.detail << "\n";
        arr.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass},
                       {"detail", r.detail}});
        all = all && r.pass;
    }
    rep["results"] = arr;
    rep["all_pass"] = all;
    rep["timestamp"] = iso_timestamp();
    write_json(dir / "report.json", rep);
    return all ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fracsemi: fractional Schrodinger semigroup laboratory"};
    app.require_subcommand(1);
    std::string config_path, output_dir;

    auto add = [&](const std::string& name, const std::string& desc) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->add_option("--config", config_path, "JSON experiment config");
        sub->add_option("--output", output_dir, "output directory override");
        return sub;
    };
    add("kernel", "build and certify a kernel profile");
    add("evolve", "run one evolution and export traces");
    add("decay", "estimate decay rates and assemble the report");
    add("audit", "potential-class diagnostics (uniform norms, truncation, criterion)");
    add("verify-suite", "run the structural verification battery");

    CLI11_PARSE(app, argc, argv);
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        json cfg = json::object();
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw config_error("cannot open config file " + config_path);
            try {
                in >> cfg;
            } catch (const json::exception& e) {
                throw config_error("config is not valid JSON: " + std::string(e.what()));
            }
        } else if (command != "verify-suite") {
            throw config_error("--config is required for command '" + command + "'");
        }
        fs::path dir = !output_dir.empty() ? fs::path(output_dir)
                     : cfg.contains("output_dir") ? fs::path(cfg.at("output_dir").get<std::string>())
                                                  : fs::path("out");
        fs::create_directories(dir);
        write_manifest(dir, command, cfg);

        if (command == "kernel") return run_kernel(cfg, dir);
        if (command == "evolve") return run_evolve(cfg, dir);
        if (command == "decay") return run_decay(cfg, dir);
        if (command == "audit") return run_audit(cfg, dir);
        return run_verify(cfg, dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
