#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "famiter/mappings.hpp"
#include "famiter/schedule.hpp"
#include "famiter/solver.hpp"

namespace famiter {

/// A fully resolved experiment: family, schedule, start point and solver
/// options, plus the normalized JSON it was built from. Resolution is
/// deterministic, so one config file maps to byte-identical CSV output.
struct ExperimentConfig {
    std::string name = "inline";
    nlohmann::json spec;  // normalized, seeds made concrete
    FamilyConfig family;
    ScheduleParams schedule;
    Vector x0;
    long horizon = 2000;
    double stop_tol = 1e-7;
    double inner_tol = 1e-12;
    long inner_max = 10000;
    std::uint64_t seed = 1;
    bool allow_noncontractive = false;
    std::string digest;  // FNV-1a of the normalized spec

    RunOptions run_options() const;
};

/// Builds a config from a JSON document. The document either names a shipped
/// scenario ({"scenario": "...", optional scalar overrides}) or describes the
/// experiment inline (family + schedule + x0 + options). Seeded error terms
/// without explicit seeds get theirs derived from the experiment seed.
ExperimentConfig config_from_json(const nlohmann::json& doc);

/// Reads and parses a config file. Throws ConfigError on anything invalid.
ExperimentConfig load_config(const std::string& path);

/// Shipped scenario registry.
std::vector<std::string> scenario_names();
nlohmann::json scenario_spec(const std::string& name);
ExperimentConfig scenario(const std::string& name);

/// FNV-1a / 64 over a string, hex-encoded. Keyed by the normalized config,
/// it ties every trace to the exact inputs that produced it.
std::string fnv1a_hex(const std::string& data);

}  // namespace famiter
