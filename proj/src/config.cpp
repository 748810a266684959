#include "famiter/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "famiter/rng.hpp"

namespace famiter {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw ConfigError(what); }

const json& need(const json& j, const char* key, const char* where) {
    auto it = j.find(key);
    if (it == j.end())
        bad(std::string("config: missing \"") + key + "\" in " + where);
    return *it;
}

AsymptoticRate parse_rate(const json& j) {
    std::string form = need(j, "form", "rate").get<std::string>();
    if (form == "constant_one") return AsymptoticRate::one();
    if (form == "power")
        return AsymptoticRate::power(need(j, "c", "rate").get<double>(),
                                     need(j, "q", "rate").get<double>());
    if (form == "explicit")
        return AsymptoticRate::explicit_values(
            need(j, "values", "rate").get<std::vector<double>>());
    bad("config: unknown rate form \"" + form + "\"");
}

SeqSpec parse_seq(const json& j, SeqRole role) {
    std::string form = need(j, "form", role_name(role).c_str()).get<std::string>();
    if (form == "constant")
        return SeqSpec::constant(need(j, "c", "sequence").get<double>(), role);
    if (form == "power")
        return SeqSpec::power(need(j, "c", "sequence").get<double>(),
                              need(j, "q", "sequence").get<double>(), role);
    if (form == "explicit")
        return SeqSpec::explicit_values(
            need(j, "values", "sequence").get<std::vector<double>>(), role);
    bad("config: unknown sequence form \"" + form + "\"");
}

ErrorTermSpec parse_error_term(const json& j) {
    std::string mode = need(j, "mode", "error term").get<std::string>();
    if (mode == "zero") return ErrorTermSpec::zero();
    if (mode == "seeded") {
        double bound = need(j, "bound", "error term").get<double>();
        if (j.contains("seed"))
            return ErrorTermSpec::seeded(j["seed"].get<std::uint64_t>(), bound);
        return ErrorTermSpec::seeded_deferred(bound);
    }
    if (mode == "explicit")
        return ErrorTermSpec::explicit_vectors(
            need(j, "vectors", "error term").get<std::vector<Vector>>());
    bad("config: unknown error term mode \"" + mode + "\"");
}

FamilyConfig parse_family(const json& j) {
    int d = need(j, "d", "family").get<int>();
    if (d < 1) bad("config: family dimension must be >= 1");

    FamilyConfig family;
    if (j.contains("zoo")) {
        ZooEntry entry = zoo(j["zoo"].get<std::string>(), d);
        if (std::holds_alternative<FamilyConfig>(entry)) {
            family = std::get<FamilyConfig>(std::move(entry));
        } else {
            family.T_family = {std::get<MappingSpec>(std::move(entry))};
            family.I_family = {make_identity(d)};
            family.common_F = {Vector(static_cast<std::size_t>(d), 0.0)};
        }
    } else {
        auto build = [&](const json& names) {
            std::vector<MappingSpec> out;
            for (const auto& name : names) {
                ZooEntry entry = zoo(name.get<std::string>(), d);
                if (!std::holds_alternative<MappingSpec>(entry))
                    bad("config: family member \"" + name.get<std::string>() +
                        "\" is itself a family");
                out.push_back(std::get<MappingSpec>(std::move(entry)));
            }
            return out;
        };
        family.T_family = build(need(j, "T", "family"));
        family.I_family = build(need(j, "I", "family"));
        family.common_F = {Vector(static_cast<std::size_t>(d), 0.0)};
    }

    if (!family.T_family.empty()) {
        family.common_lambda = family_common_rates(family.T_family);
        family.common_mu = family_common_rates(family.I_family);
    }
    if (j.contains("lambda")) family.common_lambda = parse_rate(j["lambda"]);
    if (j.contains("mu")) family.common_mu = parse_rate(j["mu"]);
    if (j.contains("F")) family.common_F = j["F"].get<std::vector<Vector>>();
    if (j.contains("radius")) family.domain_radius = j["radius"].get<double>();
    return family;
}

ScheduleParams parse_schedule(const json& j) {
    ScheduleParams p;
    p.beta = parse_seq(need(j, "beta", "schedule"), SeqRole::Beta);
    p.gamma = parse_seq(need(j, "gamma", "schedule"), SeqRole::Gamma);
    p.beta_hat = parse_seq(need(j, "beta_hat", "schedule"), SeqRole::BetaHat);
    p.gamma_hat = parse_seq(need(j, "gamma_hat", "schedule"), SeqRole::GammaHat);
    p.error_u = parse_error_term(need(j, "error_u", "schedule"));
    p.error_v = parse_error_term(need(j, "error_v", "schedule"));
    return p;
}

// Inserts derived seeds so the normalized spec is fully concrete.
void resolve_error_seed(json& term, std::uint64_t base_seed, std::uint64_t salt) {
    if (!term.is_object()) return;
    auto mode = term.find("mode");
    if (mode != term.end() && *mode == "seeded" && !term.contains("seed"))
        term["seed"] = mix_seed(base_seed, salt);
}

}  // namespace

RunOptions ExperimentConfig::run_options() const {
    RunOptions opts;
    opts.horizon = horizon;
    opts.stop_tol = stop_tol;
    opts.inner.tol = inner_tol;
    opts.inner.max_iters = inner_max;
    opts.inner.allow_noncontractive = allow_noncontractive;
    opts.config_digest = digest;
    return opts;
}

namespace {

ExperimentConfig config_from_json_impl(const json& doc) {
    if (!doc.is_object()) bad("config: top level must be a JSON object");

    json spec;
    std::string name = "inline";
    if (doc.contains("scenario")) {
        name = doc["scenario"].get<std::string>();
        spec = scenario_spec(name);
        // scalar overrides only; the scenario fixes family and schedule
        for (const char* key :
             {"horizon", "stop_tol", "inner_tol", "inner_max", "seed",
              "allow_noncontractive"})
            if (doc.contains(key)) spec[key] = doc[key];
        for (const auto& [key, _] : doc.items())
            if (key != "scenario" && key != "horizon" && key != "stop_tol" &&
                key != "inner_tol" && key != "inner_max" && key != "seed" &&
                key != "allow_noncontractive")
                bad("config: key \"" + key +
                    "\" cannot override a shipped scenario");
    } else {
        spec = doc;
    }

    ExperimentConfig cfg;
    cfg.name = name;
    cfg.seed = spec.value("seed", std::uint64_t{1});
    spec["seed"] = cfg.seed;

    if (!spec.contains("schedule")) bad("config: missing \"schedule\"");
    json& sched = spec["schedule"];
    if (!sched.contains("error_u") || !sched.contains("error_v"))
        bad("config: schedule needs error_u and error_v");
    resolve_error_seed(sched["error_u"], cfg.seed, 101);
    resolve_error_seed(sched["error_v"], cfg.seed, 202);

    cfg.family = parse_family(need(spec, "family", "config"));
    cfg.schedule = parse_schedule(sched);
    cfg.x0 = need(spec, "x0", "config").get<Vector>();
    cfg.horizon = spec.value("horizon", 2000L);
    cfg.stop_tol = spec.value("stop_tol", 1e-7);
    cfg.inner_tol = spec.value("inner_tol", 1e-12);
    cfg.inner_max = spec.value("inner_max", 10000L);
    cfg.allow_noncontractive = spec.value("allow_noncontractive", false);

    spec["horizon"] = cfg.horizon;
    spec["stop_tol"] = cfg.stop_tol;
    spec["inner_tol"] = cfg.inner_tol;
    spec["inner_max"] = cfg.inner_max;
    spec["allow_noncontractive"] = cfg.allow_noncontractive;

    cfg.spec = spec;
    cfg.digest = fnv1a_hex(spec.dump());
    return cfg;
}

}  // namespace

ExperimentConfig config_from_json(const json& doc) {
    try {
        return config_from_json_impl(doc);
    } catch (const json::exception& e) {
        bad(std::string("config: ") + e.what());
    }
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) bad("cannot open config file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        bad("config parse error in " + path + ": " + e.what());
    }
    return config_from_json(doc);
}

namespace {

json identity_scenario() {
    return json{
        {"family",
         {{"d", 4},
          {"T", {"identity"}},
          {"I", {"identity"}},
          {"F", {{0.25, -0.1, 0.3, 0.0}}}}},
        {"schedule",
         {{"beta", {{"form", "constant"}, {"c", 0.5}}},
          {"gamma", {{"form", "constant"}, {"c", 0.0}}},
          {"beta_hat", {{"form", "constant"}, {"c", 0.5}}},
          {"gamma_hat", {{"form", "constant"}, {"c", 0.0}}},
          {"error_u", {{"mode", "zero"}}},
          {"error_v", {{"mode", "zero"}}}}},
        {"x0", {0.25, -0.1, 0.3, 0.0}},
        {"horizon", 50},
        {"stop_tol", 1e-9},
        {"seed", 1},
    };
}

json paper_example_scenario() {
    return json{
        {"family", {{"d", 8}, {"zoo", "paper"}}},
        {"schedule",
         {{"beta", {{"form", "constant"}, {"c", 0.5}}},
          {"gamma", {{"form", "power"}, {"c", 0.25}, {"q", 2.0}}},
          {"beta_hat", {{"form", "constant"}, {"c", 0.5}}},
          {"gamma_hat", {{"form", "power"}, {"c", 0.25}, {"q", 2.0}}},
          {"error_u", {{"mode", "seeded"}, {"bound", 0.1}}},
          {"error_v", {{"mode", "seeded"}, {"bound", 0.1}}}}},
        {"x0", {0.9, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0}},
        {"horizon", 2000},
        {"stop_tol", 1e-7},
        {"seed", 1},
        // the shift-of-powers pair has no uniform Lipschitz constant, so the
        // contraction preflight cannot certify; run relaxed instead
        {"allow_noncontractive", true},
    };
}

json scaled_family_scenario() {
    return json{
        {"family", {{"d", 4}, {"zoo", "scaled_family(3)"}}},
        {"schedule",
         {{"beta", {{"form", "constant"}, {"c", 0.5}}},
          {"gamma", {{"form", "power"}, {"c", 0.25}, {"q", 2.0}}},
          {"beta_hat", {{"form", "constant"}, {"c", 0.5}}},
          {"gamma_hat", {{"form", "power"}, {"c", 0.25}, {"q", 2.0}}},
          {"error_u", {{"mode", "seeded"}, {"bound", 0.1}}},
          {"error_v", {{"mode", "seeded"}, {"bound", 0.1}}}}},
        {"x0", {0.8, 0.2, -0.3, 0.1}},
        {"horizon", 2000},
        {"stop_tol", 1e-7},
        {"seed", 1},
    };
}

}  // namespace

std::vector<std::string> scenario_names() {
    return {"identity-d4", "paper-example-d8", "scaled-family-n3"};
}

json scenario_spec(const std::string& name) {
    if (name == "identity-d4") return identity_scenario();
    if (name == "paper-example-d8") return paper_example_scenario();
    if (name == "scaled-family-n3") return scaled_family_scenario();
    bad("unknown scenario: " + name);
}

ExperimentConfig scenario(const std::string& name) {
    ExperimentConfig cfg = config_from_json(json{{"scenario", name}});
    return cfg;
}

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace famiter
