#include "cli/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>

#include "cmaeig/error.hpp"

namespace cmaeig::cli {

using nlohmann::json;

namespace {

void require_object(const json& j, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
}

void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || it.key() == a;
        if (!ok) throw ConfigError(where + ": unknown field \"" + it.key() + "\"");
    }
}

void read_number(const json& j, const char* key, const std::string& where, double& out) {
    if (!j.contains(key)) return;
    const json& x = j.at(key);
    if (!x.is_number()) throw ConfigError(where + "." + key + ": expected a number");
    out = x.get<double>();
    if (!std::isfinite(out)) throw ConfigError(where + "." + key + ": must be finite");
}

void read_int(const json& j, const char* key, const std::string& where, int& out) {
    if (!j.contains(key)) return;
    const json& x = j.at(key);
    if (!x.is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
    long long v = x.get<long long>();
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
        throw ConfigError(where + "." + key + ": out of range");
    out = static_cast<int>(v);
}

void read_array(const json& j, const char* key, const std::string& where, std::vector<double>& out) {
    if (!j.contains(key)) return;
    const json& x = j.at(key);
    if (!x.is_array()) throw ConfigError(where + "." + key + ": expected an array of numbers");
    out.clear();
    for (const json& e : x) {
        if (!e.is_number()) throw ConfigError(where + "." + key + ": expected an array of numbers");
        out.push_back(e.get<double>());
    }
}

void positive(double x, const std::string& name) {
    if (!(x > 0.0)) throw ConfigError(name + " must be positive");
}

void check_grid(int n, const std::string& name) {
    if (n < 17 || n % 2 == 0) throw ConfigError(name + " must be odd and at least 17");
}

void check_tau(double tau, const std::string& name) {
    if (!(tau > 0.0 && tau < 1.0)) throw ConfigError(name + " must lie in (0, 1)");
}

void check_domain(const DomainSpec& d) {
    if (d.type == "ball") {
        positive(d.R, "domain.R");
    } else if (d.type == "superellipse") {
        positive(d.R, "domain.R");
        if (!(d.p >= 2.0)) throw ConfigError("domain.p must be at least 2");
        if (!(d.mu >= 0.0)) throw ConfigError("domain.mu must be nonnegative");
    } else if (d.type == "support_samples") {
        if (d.theta.size() != d.h.size() || d.theta.empty())
            throw ConfigError("domain.theta and domain.h must be nonempty and of equal length");
    } else {
        throw ConfigError("domain.type must be ball, superellipse or support_samples");
    }
}

}  // namespace

DomainSpec parse_domain(const json& j) {
    const std::string where = "domain";
    require_object(j, where);
    if (!j.contains("type") || !j.at("type").is_string()) throw ConfigError("domain.type: expected a string");
    DomainSpec d;
    d.type = j.at("type").get<std::string>();
    if (d.type == "ball") {
        only_keys(j, where, {"type", "R"});
    } else if (d.type == "superellipse") {
        only_keys(j, where, {"type", "R", "p", "mu"});
    } else if (d.type == "support_samples") {
        only_keys(j, where, {"type", "theta", "h"});
        if (!j.contains("theta") || !j.contains("h")) throw ConfigError("domain: support_samples needs theta and h");
    }
    read_number(j, "R", where, d.R);
    read_number(j, "p", where, d.p);
    read_number(j, "mu", where, d.mu);
    read_array(j, "theta", where, d.theta);
    read_array(j, "h", where, d.h);
    check_domain(d);
    return d;
}

RunConfig parse_config(const json& doc) {
    require_object(doc, "config");
    only_keys(doc, "config",
              {"seed", "out", "verify_algebra", "solve_ball", "solve_domain", "deform", "check_derivatives"});
    RunConfig c;
    if (doc.contains("seed")) {
        if (!doc.at("seed").is_number_unsigned()) throw ConfigError("seed: expected a nonnegative 64-bit integer");
        c.seed = doc.at("seed").get<std::uint64_t>();
    }
    if (doc.contains("out")) {
        if (!doc.at("out").is_string() || doc.at("out").get<std::string>().empty())
            throw ConfigError("out: expected a nonempty string");
        c.out = doc.at("out").get<std::string>();
    }

    if (doc.contains("verify_algebra")) {
        const json& s = doc.at("verify_algebra");
        require_object(s, "verify_algebra");
        only_keys(s, "verify_algebra", {"samples"});
        read_int(s, "samples", "verify_algebra", c.verify_algebra.samples);
    }
    if (c.verify_algebra.samples < 1) throw ConfigError("verify_algebra.samples must be positive");

    if (doc.contains("solve_ball")) {
        const json& s = doc.at("solve_ball");
        require_object(s, "solve_ball");
        only_keys(s, "solve_ball", {"radius", "tol", "margin"});
        read_number(s, "radius", "solve_ball", c.solve_ball.radius);
        read_number(s, "tol", "solve_ball", c.solve_ball.tol);
        read_number(s, "margin", "solve_ball", c.solve_ball.margin);
    }
    positive(c.solve_ball.radius, "solve_ball.radius");
    positive(c.solve_ball.tol, "solve_ball.tol");
    if (!(c.solve_ball.margin > 0.0 && c.solve_ball.margin < 1.0))
        throw ConfigError("solve_ball.margin must lie in (0, 1)");

    if (doc.contains("solve_domain")) {
        const json& s = doc.at("solve_domain");
        require_object(s, "solve_domain");
        only_keys(s, "solve_domain", {"domain", "grid_n", "tol", "eps_cells", "tau_rank"});
        if (s.contains("domain")) c.solve_domain.domain = parse_domain(s.at("domain"));
        read_int(s, "grid_n", "solve_domain", c.solve_domain.grid_n);
        read_number(s, "tol", "solve_domain", c.solve_domain.tol);
        read_number(s, "eps_cells", "solve_domain", c.solve_domain.eps_cells);
        read_number(s, "tau_rank", "solve_domain", c.solve_domain.tau_rank);
    }
    check_grid(c.solve_domain.grid_n, "solve_domain.grid_n");
    positive(c.solve_domain.tol, "solve_domain.tol");
    positive(c.solve_domain.eps_cells, "solve_domain.eps_cells");
    check_tau(c.solve_domain.tau_rank, "solve_domain.tau_rank");

    if (doc.contains("deform")) {
        const json& s = doc.at("deform");
        require_object(s, "deform");
        only_keys(s, "deform", {"domain", "steps", "grid_n", "tol", "eps_cells", "tau_rank"});
        if (s.contains("domain")) c.deform.domain = parse_domain(s.at("domain"));
        read_int(s, "steps", "deform", c.deform.steps);
        read_int(s, "grid_n", "deform", c.deform.grid_n);
        read_number(s, "tol", "deform", c.deform.tol);
        read_number(s, "eps_cells", "deform", c.deform.eps_cells);
        read_number(s, "tau_rank", "deform", c.deform.tau_rank);
    }
    if (c.deform.steps < 2) throw ConfigError("deform.steps must be at least 2");
    check_grid(c.deform.grid_n, "deform.grid_n");
    positive(c.deform.tol, "deform.tol");
    positive(c.deform.eps_cells, "deform.eps_cells");
    check_tau(c.deform.tau_rank, "deform.tau_rank");

    if (doc.contains("check_derivatives")) {
        const json& s = doc.at("check_derivatives");
        require_object(s, "check_derivatives");
        only_keys(s, "check_derivatives", {"samples", "tolerance"});
        read_int(s, "samples", "check_derivatives", c.check_derivatives.samples);
        read_number(s, "tolerance", "check_derivatives", c.check_derivatives.tolerance);
    }
    if (c.check_derivatives.samples < 1) throw ConfigError("check_derivatives.samples must be positive");
    positive(c.check_derivatives.tolerance, "check_derivatives.tolerance");
    return c;
}

json read_document(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("malformed config " + path + ": " + e.what());
    }
}

RunConfig load_config(const std::string& path) { return parse_config(read_document(path)); }

json to_json(const DomainSpec& d) {
    if (d.type == "ball") return {{"type", d.type}, {"R", d.R}};
    if (d.type == "superellipse") return {{"type", d.type}, {"R", d.R}, {"p", d.p}, {"mu", d.mu}};
    return {{"type", d.type}, {"theta", d.theta}, {"h", d.h}};
}

json to_json(const RunConfig& c) {
    return {
        {"seed", c.seed},
        {"out", c.out},
        {"verify_algebra", {{"samples", c.verify_algebra.samples}}},
        {"solve_ball", {{"radius", c.solve_ball.radius}, {"tol", c.solve_ball.tol}, {"margin", c.solve_ball.margin}}},
        {"solve_domain",
         {{"domain", to_json(c.solve_domain.domain)},
          {"grid_n", c.solve_domain.grid_n},
          {"tol", c.solve_domain.tol},
          {"eps_cells", c.solve_domain.eps_cells},
          {"tau_rank", c.solve_domain.tau_rank}}},
        {"deform",
         {{"domain", to_json(c.deform.domain)},
          {"steps", c.deform.steps},
          {"grid_n", c.deform.grid_n},
          {"tol", c.deform.tol},
          {"eps_cells", c.deform.eps_cells},
          {"tau_rank", c.deform.tau_rank}}},
        {"check_derivatives",
         {{"samples", c.check_derivatives.samples}, {"tolerance", c.check_derivatives.tolerance}}},
    };
}

domain::ReinhardtProfile make_profile(const DomainSpec& d) {
    try {
        if (d.type == "ball") return domain::profile_ball(d.R);
        if (d.type == "superellipse") return domain::profile_superellipse(d.R, d.p, d.mu);
        if (d.type == "support_samples") return domain::profile_from_support_samples(d.theta, d.h);
    } catch (const DomainError& e) {
        throw ConfigError(std::string("invalid domain: ") + e.what());
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("invalid domain: ") + e.what());
    }
    throw ConfigError("unknown domain type " + d.type);
}

}  // namespace cmaeig::cli
