#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "cmaeig/algebra/sampling.hpp"
#include "cmaeig/analysis.hpp"
#include "cmaeig/derivative_checks.hpp"
#include "cmaeig/error.hpp"
#include "cmaeig/radial.hpp"
#include "cmaeig/solver2d.hpp"

namespace cmaeig::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const char* const kLambdaNote =
    "lambda is the eigenvalue of the equation for u; Lambda = 16 lambda is the constant of the equation for "
    "v = -log(-u/4), where the substitution produces the factor 16";

std::string fmt(const char* format, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, x);
    return buf;
}

std::string g17(double x) { return fmt("%.17g", x); }

json lambda_block(double lambda) { return {{"lambda", lambda}, {"Lambda", 16.0 * lambda}, {"note", kLambdaNote}}; }

struct Report {
    json checks = json::array();
    bool passed = true;

    void add(const std::string& tag, const std::string& description, bool ok, const std::string& detail) {
        checks.push_back({{"tag", tag}, {"description", description}, {"passed", ok}, {"detail", detail}});
        passed = passed && ok;
        std::cout << (ok ? "[pass] " : "[FAIL] ") << tag;
        if (!detail.empty()) std::cout << "  " << detail;
        std::cout << "\n";
    }
};

// The echoed configuration leaves out the output directory so that reports
// of identical runs written to different places are byte-identical.
json config_echo(const RunConfig& cfg, const char* section) {
    json all = to_json(cfg);
    return {{"seed", cfg.seed}, {section, all.at(section)}};
}

fs::path prepare_out(const RunConfig& cfg) {
    fs::path dir(cfg.out);
    fs::create_directories(dir);
    return dir;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + path.string());
    f << text;
    if (!f) throw ConfigError("cannot write " + path.string());
}

void write_json(const fs::path& path, const json& doc) { write_text(path, doc.dump(2) + "\n"); }

json finish(const char* command, const RunConfig& cfg, const char* section, const Report& rep) {
    json doc;
    doc["command"] = command;
    doc["config"] = config_echo(cfg, section);
    doc["passed"] = rep.passed;
    doc["check_count"] = rep.checks.size();
    doc["checks"] = rep.checks;
    return doc;
}

int verdict(const Report& rep, const fs::path& dir) {
    std::cout << (rep.passed ? "all checks passed" : "verification failed") << "; report: "
              << (dir / "report.json").string() << "\n";
    return rep.passed ? kExitOk : kExitFail;
}

json solution_json(const solver2d::Grid2DSolution& sol, const json& spec) {
    const solver2d::Grid2D& g = *sol.grid;
    json doc;
    doc["profile"] = {{"spec", spec}, {"description", g.profile().description()}};
    doc["grid"] = {{"n", g.n()},
                   {"hx", g.hx()},
                   {"hy", g.hy()},
                   {"unknowns", g.unknowns()},
                   {"layout", "row-major; entry j*n + i holds u at (r1, r2) = (i*hx, j*hy); zero off the interior"}};
    doc["eigenvalue"] = lambda_block(sol.lambda);
    doc["residual_inf"] = sol.residual_inf;
    doc["outer_iterations"] = sol.outer_iterations;
    doc["u"] = sol.field();
    return doc;
}

json spectral_json(const analysis::SpectralReport& s, double eps_cells) {
    return {{"eps", s.eps},         {"eps_cells", eps_cells},   {"tau_rank", s.tau_rank},
            {"nodes", s.nodes.size()}, {"skipped", s.skipped},     {"min_eig", s.min_eig},
            {"min_rank", s.min_rank}, {"max_rank", s.max_rank}, {"log_concave", s.log_concave}};
}

void spectrum_rows(std::string& csv, const analysis::SpectralReport& s, const double* t) {
    for (const analysis::NodeSpectrum& ns : s.nodes) {
        if (t) csv += g17(*t) + ",";
        csv += g17(ns.r1) + "," + g17(ns.r2);
        for (double e : ns.eig) csv += "," + g17(e);
        csv += "," + std::to_string(ns.rank) + "," + g17(ns.min_eig) + "\n";
    }
}

void spectral_checks(Report& rep, const std::string& prefix, const analysis::SpectralReport& s, bool strip_ok) {
    rep.add(prefix + "rank", "lifted Hessian of v has rank 4 at every node beyond eps", s.min_rank == 4,
            "rank in [" + std::to_string(s.min_rank) + ", " + std::to_string(s.max_rank) + "] over " +
                std::to_string(s.nodes.size()) + " nodes");
    rep.add(prefix + "positive", "smallest Hessian eigenvalue of v is positive beyond eps", s.log_concave,
            "min eigenvalue " + fmt("%.6g", s.min_eig));
    rep.add(prefix + "strip", "strip nodes within eps of the boundary carry rank 4 and a positive spectrum", strip_ok,
            "");
}

solver2d::SolverOptions solver_options(double tol) {
    solver2d::SolverOptions so;
    so.outer_tol = tol;
    so.inner_tol = std::min(so.inner_tol, tol * 1e-2);
    return so;
}

}  // namespace

int cmd_verify_algebra(const RunConfig& cfg, algebra::Mutation mutation) {
    fs::path dir = prepare_out(cfg);
    Report rep;
    for (const algebra::CheckResult& c : algebra::run_identity_catalog(mutation)) {
        rep.add(c.tag, c.description, c.passed, c.detail);
        json& row = rep.checks.back();
        row["group"] = c.group;
        row["regime"] = c.regime;
    }

    algebra::PositivityReport pos = algebra::positivity_sample_suite(cfg.verify_algebra.samples, cfg.seed);
    rep.add("positivity.sampling", "exact signs of the principal minors on admissible rational samples", pos.ok(),
            std::to_string(pos.accepted) + " samples accepted, " + std::to_string(pos.rejected) + " rejected, " +
                std::to_string(pos.violations.size()) + " violations");

    json doc = finish("verify-algebra", cfg, "verify_algebra", rep);
    if (mutation != algebra::Mutation::none) doc["mutation"] = algebra::mutation_name(mutation);
    json viol = json::array();
    for (std::size_t k = 0; k < pos.violations.size() && k < 50; ++k)
        viol.push_back({{"quantity", pos.violations[k].quantity},
                        {"sample", pos.violations[k].sample},
                        {"value", pos.violations[k].value}});
    doc["positivity"] = {{"requested", pos.requested},     {"accepted", pos.accepted},
                         {"rejected", pos.rejected},       {"accepted_r2", pos.accepted_r2},
                         {"rejected_r2", pos.rejected_r2}, {"quantities", pos.quantities},
                         {"violations", viol}};
    write_json(dir / "report.json", doc);
    return verdict(rep, dir);
}

int cmd_solve_ball(const RunConfig& cfg) {
    const BallConfig& b = cfg.solve_ball;
    fs::path dir = prepare_out(cfg);
    Report rep;
    json doc;
    try {
        radial::RadialSolution sol = radial::solve_lambda(b.radius, b.tol);
        radial::ConvexityCertificate cert = radial::certify_convexity(sol, b.margin * b.radius);
        radial::VProfile vp = radial::v_profile(sol);
        rep.add("radial.convexity", "v'' > 0 and v'/r > 0 on [0, margin R]", cert.certified,
                "min v'' " + fmt("%.6g", cert.min_vpp) + ", min lifted eigenvalue " + fmt("%.6g", cert.min_lift_eig));

        double vform = radial::lambda_vform(b.radius);
        doc = finish("solve-ball", cfg, "solve_ball", rep);
        doc["radius"] = b.radius;
        doc["eigenvalue"] = lambda_block(sol.lambda);
        doc["certificate"] = {{"certified", cert.certified},       {"min_vpp", cert.min_vpp},
                              {"min_lift_eig", cert.min_lift_eig}, {"r_at_min", cert.r_at_min},
                              {"points", cert.points},             {"margin_radius", b.margin * b.radius}};
        // Independent estimate from the v-equation; informational only.
        doc["cross_check"] = {{"lambda_vform", vform},
                              {"relative_difference", std::fabs(vform - sol.lambda) / sol.lambda}};

        std::string csv = "r,u,uprime,v,vp,vpp\n";
        for (std::size_t i = 0; i < sol.grid.size(); ++i)
            csv += g17(sol.grid[i]) + "," + g17(sol.u[i]) + "," + g17(sol.uprime[i]) + "," + g17(vp.v[i]) + "," +
                   g17(vp.vp[i]) + "," + g17(vp.vpp[i]) + "\n";
        write_text(dir / "profile.csv", csv);
    } catch (const ConvergenceError& e) {
        rep.add("radial.solve", "shooting converges", false, e.what());
        doc = finish("solve-ball", cfg, "solve_ball", rep);
    }
    write_json(dir / "report.json", doc);
    return verdict(rep, dir);
}

int cmd_solve_domain(const RunConfig& cfg) {
    const DomainConfig& c = cfg.solve_domain;
    domain::ReinhardtProfile prof = make_profile(c.domain);
    fs::path dir = prepare_out(cfg);
    auto grid = std::make_shared<const solver2d::Grid2D>(prof, c.grid_n);
    Report rep;
    json doc;
    solver2d::Grid2DSolution sol;
    try {
        sol = solver2d::inverse_iteration(grid, solver_options(c.tol));
    } catch (const ConvergenceError& e) {
        rep.add("solver.converged", "inverse iteration converges", false, e.what());
    } catch (const DomainError& e) {
        rep.add("solver.converged", "inverse iteration converges", false, e.what());
    }
    if (rep.passed) {
        rep.add("solver.converged", "inverse iteration converges", true,
                std::to_string(sol.outer_iterations) + " outer iterations, residual " + fmt("%.3g", sol.residual_inf));
        double eps = analysis::eps_from_cells(*grid, c.eps_cells);
        analysis::SpectralReport s = analysis::spectral_scan(sol, eps, c.tau_rank);
        bool strip = analysis::strip_check(sol, eps, c.tau_rank);
        spectral_checks(rep, "spectrum.", s, strip);
        doc = finish("solve-domain", cfg, "solve_domain", rep);
        doc["eigenvalue"] = lambda_block(sol.lambda);
        doc["residual_inf"] = sol.residual_inf;
        doc["outer_iterations"] = sol.outer_iterations;
        doc["spectral"] = spectral_json(s, c.eps_cells);
        doc["strip_ok"] = strip;

        std::string csv = "r1,r2,eig1,eig2,eig3,eig4,rank,min_eig\n";
        spectrum_rows(csv, s, nullptr);
        write_text(dir / "spectrum.csv", csv);
        write_json(dir / "solution.json", solution_json(sol, to_json(c.domain)));
    } else {
        doc = finish("solve-domain", cfg, "solve_domain", rep);
    }
    doc["grid"] = {{"n", grid->n()}, {"hx", grid->hx()}, {"hy", grid->hy()}, {"unknowns", grid->unknowns()}};
    doc["profile"] = prof.description();
    write_json(dir / "report.json", doc);
    return verdict(rep, dir);
}

int cmd_deform(const RunConfig& cfg) {
    const DeformConfig& c = cfg.deform;
    domain::DeformationPath path = domain::deformation_from_ball(make_profile(c.domain));
    fs::path dir = prepare_out(cfg);
    analysis::DeformationOptions opt;
    opt.steps = c.steps;
    opt.grid_n = c.grid_n;
    opt.eps_cells = c.eps_cells;
    opt.tau_rank = c.tau_rank;
    opt.tol = c.tol;
    analysis::DeformationReport dr = analysis::deformation_scan(path, opt);

    Report rep;
    json steps = json::array();
    std::string csv = "t,r1,r2,eig1,eig2,eig3,eig4,rank,min_eig\n";
    for (std::size_t k = 0; k < dr.steps.size(); ++k) {
        const analysis::DeformationStep& st = dr.steps[k];
        std::string detail = "t=" + fmt("%.4g", st.t);
        if (st.converged) {
            detail += ", lambda " + fmt("%.8g", st.lambda) + ", min eigenvalue " + fmt("%.6g", st.spectral.min_eig) +
                      ", rank [" + std::to_string(st.spectral.min_rank) + ", " +
                      std::to_string(st.spectral.max_rank) + "], strip " + (st.strip_ok ? "ok" : "fails");
        }
        if (!st.error.empty()) detail += ", " + st.error;
        rep.add("deform.step" + std::to_string(k),
                "step converges with rank 4, a positive spectrum beyond eps and a passing strip", st.ok, detail);

        json row = {{"index", k},
                    {"t", st.t},
                    {"converged", st.converged},
                    {"ok", st.ok},
                    {"error", st.error}};
        if (st.converged) {
            row["eigenvalue"] = lambda_block(st.lambda);
            row["residual_inf"] = st.residual_inf;
            row["outer_iterations"] = st.outer_iterations;
            row["strip_ok"] = st.strip_ok;
            if (!st.spectral.nodes.empty()) {
                row["spectral"] = spectral_json(st.spectral, c.eps_cells);
                spectrum_rows(csv, st.spectral, &st.t);
            }
            json sj = solution_json(st.solution, to_json(c.domain));
            sj["t"] = st.t;
            write_json(dir / ("solution_step" + std::to_string(k) + ".json"), sj);
        }
        steps.push_back(row);
    }
    json doc = finish("deform", cfg, "deform", rep);
    doc["first_failure"] = dr.first_failure;
    doc["steps"] = steps;
    write_text(dir / "spectrum.csv", csv);
    write_json(dir / "report.json", doc);
    return verdict(rep, dir);
}

int cmd_check_derivatives(const RunConfig& cfg) {
    fs::path dir = prepare_out(cfg);
    checks::DerivativeOptions opt;
    opt.samples = cfg.check_derivatives.samples;
    opt.seed = cfg.seed;
    opt.tolerance = cfg.check_derivatives.tolerance;
    Report rep;
    json extra = json::array();
    for (const checks::DerivativeCheck& c : checks::run_derivative_checks(opt)) {
        std::string detail = "max relative error " + fmt("%.3e", c.max_rel_err) + " (tolerance " +
                             fmt("%.1e", c.tolerance) + ")";
        if (!c.passed && !c.worst.empty()) detail += " at " + c.worst;
        rep.add(c.tag, c.description, c.passed, detail);
        json& row = rep.checks.back();
        row["samples"] = c.samples;
        row["max_rel_err"] = c.max_rel_err;
        row["tolerance"] = c.tolerance;
        row["worst"] = c.worst;
        if (!c.passed) std::cerr << "failed: " << c.tag << "\n";
    }
    write_json(dir / "report.json", finish("check-derivatives", cfg, "check_derivatives", rep));
    return verdict(rep, dir);
}

int run_cli(int argc, char** argv) {
    CLI::App app{"cmaeig: eigenfunctions of the complex Monge-Ampere operator on Reinhardt domains in C^2"};
    app.require_subcommand(1, 1);
    app.fallthrough();
    std::string config_path, out;
    std::uint64_t seed = 0;
    CLI::Option* o_config = app.add_option("--config", config_path, "run configuration (JSON)");
    CLI::Option* o_seed = app.add_option("--seed", seed, "random seed");
    CLI::Option* o_out = app.add_option("--out", out, "output directory");

    // Overrides land in the configuration document before strict parsing.
    json over = json::object();
    auto number = [&](CLI::App* sub, const char* flag, const char* section, const char* key, const char* help) {
        return sub->add_option_function<double>(flag, [&over, section, key](double x) { over[section][key] = x; },
                                                help);
    };
    auto integer = [&](CLI::App* sub, const char* flag, const char* section, const char* key, const char* help) {
        return sub->add_option_function<long long>(
            flag, [&over, section, key](long long x) { over[section][key] = x; }, help);
    };
    std::string domain_text;
    auto domain_opt = [&](CLI::App* sub) { return sub->add_option("--domain", domain_text, "domain spec (JSON)"); };

    CLI::App* va = app.add_subcommand("verify-algebra", "exact identity catalog and positivity sampling");
    integer(va, "--samples", "verify_algebra", "samples", "number of admissible samples");
    std::string mutate;
    va->add_option("--mutate", mutate)->group("");

    CLI::App* sb = app.add_subcommand("solve-ball", "radial eigenpair on a ball and its convexity certificate");
    number(sb, "--radius", "solve_ball", "radius", "ball radius");
    number(sb, "--tol", "solve_ball", "tol", "boundary tolerance of the shooting");
    number(sb, "--margin", "solve_ball", "margin", "certify on [0, margin * radius]");

    CLI::App* sd = app.add_subcommand("solve-domain", "2D eigensolve and spectral scan on one domain");
    domain_opt(sd);
    integer(sd, "--grid-n", "solve_domain", "grid_n", "grid nodes per axis (odd)");
    number(sd, "--tol", "solve_domain", "tol", "outer tolerance");
    number(sd, "--eps-cells", "solve_domain", "eps_cells", "boundary strip width in cells");
    number(sd, "--tau-rank", "solve_domain", "tau_rank", "relative rank threshold");

    CLI::App* df = app.add_subcommand("deform", "deformation scan from the unit ball to a domain");
    domain_opt(df);
    integer(df, "--steps", "deform", "steps", "number of t values in [0, 1]");
    integer(df, "--grid-n", "deform", "grid_n", "grid nodes per axis (odd)");
    number(df, "--tol", "deform", "tol", "outer tolerance");
    number(df, "--eps-cells", "deform", "eps_cells", "boundary strip width in cells");
    number(df, "--tau-rank", "deform", "tau_rank", "relative rank threshold");

    CLI::App* cd = app.add_subcommand("check-derivatives", "finite-difference validation of analytic derivatives");
    integer(cd, "--samples", "check_derivatives", "samples", "random states per check");
    number(cd, "--tolerance", "check_derivatives", "tolerance", "relative error tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        json doc = o_config->count() ? read_document(config_path) : json::object();
        if (!doc.is_object()) throw ConfigError("config: expected an object");
        if (o_seed->count()) doc["seed"] = seed;
        if (o_out->count()) doc["out"] = out;
        for (auto it = over.begin(); it != over.end(); ++it)
            for (auto kv = it.value().begin(); kv != it.value().end(); ++kv) doc[it.key()][kv.key()] = kv.value();
        if (!domain_text.empty()) {
            json d;
            try {
                d = json::parse(domain_text);
            } catch (const json::parse_error& e) {
                throw ConfigError(std::string("malformed --domain: ") + e.what());
            }
            doc[sd->parsed() ? "solve_domain" : "deform"]["domain"] = d;
        }
        RunConfig cfg = parse_config(doc);

        if (va->parsed()) {
            algebra::Mutation m = mutate.empty() ? algebra::Mutation::none : algebra::parse_mutation(mutate);
            return cmd_verify_algebra(cfg, m);
        }
        if (sb->parsed()) return cmd_solve_ball(cfg);
        if (sd->parsed()) return cmd_solve_domain(cfg);
        if (df->parsed()) return cmd_deform(cfg);
        return cmd_check_derivatives(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const InvalidArgument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return kExitUsage;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "output error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    }
}

}  // namespace cmaeig::cli
