#pragma once

// Run configuration: one JSON document with a section per command. Parsing
// is strict; unknown keys and wrongly typed values are ConfigErrors.

#include <cstdint>
#include <string>
#include <vector>

#include "cmaeig/domain.hpp"
#include "json.hpp"

namespace cmaeig::cli {

struct DomainSpec {
    std::string type = "ball";  // ball | superellipse | support_samples
    double R = 1.0;
    double p = 4.0;
    double mu = 0.1;
    std::vector<double> theta, h;
};

struct AlgebraConfig {
    int samples = 1000;
};

struct BallConfig {
    double radius = 1.0;
    double tol = 1e-10;     // boundary tolerance of the shooting
    double margin = 0.99;   // certify on [0, margin * radius]
};

struct DomainConfig {
    DomainSpec domain;
    int grid_n = 129;
    double tol = 1e-8;
    double eps_cells = 2.0;
    double tau_rank = 1e-6;
};

struct DeformConfig {
    DomainSpec domain{"superellipse", 1.0, 4.0, 0.1, {}, {}};
    int steps = 5;
    int grid_n = 129;
    double tol = 1e-8;
    double eps_cells = 2.0;
    double tau_rank = 1e-6;
};

struct DerivativeConfig {
    int samples = 100;
    double tolerance = 1e-6;
};

struct RunConfig {
    std::uint64_t seed = 42;
    std::string out = "out";
    AlgebraConfig verify_algebra;
    BallConfig solve_ball;
    DomainConfig solve_domain;
    DeformConfig deform;
    DerivativeConfig check_derivatives;
};

RunConfig parse_config(const nlohmann::json& doc);
// Reads a JSON document from a file; ConfigError when unreadable or malformed.
nlohmann::json read_document(const std::string& path);
RunConfig load_config(const std::string& path);
nlohmann::json to_json(const RunConfig& cfg);
nlohmann::json to_json(const DomainSpec& spec);
DomainSpec parse_domain(const nlohmann::json& doc);

// Profile for a spec. Construction failures surface as ConfigError.
domain::ReinhardtProfile make_profile(const DomainSpec& spec);

}  // namespace cmaeig::cli
