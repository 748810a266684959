#include "famiter/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include "famiter/config.hpp"
#include "famiter/diagnostics.hpp"
#include "famiter/trace_io.hpp"

namespace famiter {

namespace {

ExperimentConfig load_with_overrides(const std::string& config_path,
                                     const RunOverrides& overrides) {
    std::ifstream in(config_path);
    if (!in) throw ConfigError("cannot open config file: " + config_path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config parse error in " + config_path + ": " + e.what());
    }
    if (overrides.seed) doc["seed"] = *overrides.seed;
    if (overrides.horizon) doc["horizon"] = *overrides.horizon;
    if (overrides.allow_noncontractive) doc["allow_noncontractive"] = true;
    return config_from_json(doc);
}

void print_condition(const ConditionCheck& check) {
    std::cout << "  " << check.label << " " << outcome_name(check.outcome) << " - "
              << check.message << "\n";
}

}  // namespace

int cmd_run(const std::string& config_path, const std::string& out_dir,
            const RunOverrides& overrides) {
    ExperimentConfig cfg;
    IterationTrace trace;
    try {
        cfg = load_with_overrides(config_path, overrides);
        ConditionReport report =
            validate_conditions(cfg.schedule, cfg.family.common_lambda,
                                cfg.family.common_mu, cfg.horizon);
        for (const auto* check : report.items())
            if (check->outcome == CheckOutcome::Indeterminate)
                std::cerr << "warning: condition " << check->label
                          << " is indeterminate (" << check->message << ")\n";
        trace = run_scheme(cfg.family, cfg.schedule, cfg.x0, cfg.run_options());
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    const auto csv_path = std::filesystem::path(out_dir) / "trace.csv";
    const auto summary_path = std::filesystem::path(out_dir) / "summary.json";
    {
        std::ofstream csv(csv_path, std::ios::binary);
        if (!csv) {
            std::cerr << "cannot write " << csv_path << "\n";
            return kExitConfig;
        }
        write_trace_csv(trace, csv);
    }
    {
        std::ofstream summary(summary_path, std::ios::binary);
        summary << summary_json(trace).dump(2) << "\n";
    }

    std::cout << "scenario: " << cfg.name << " (digest " << cfg.digest << ")\n"
              << "terminated: " << trace.terminated.to_string() << " at step "
              << trace.terminated.at_step << "\n"
              << "wrote " << csv_path.string() << ", " << summary_path.string()
              << "\n";

    if (trace.terminated.kind == Terminated::Kind::InnerFailure) {
        std::cerr << "inner solver failure at step " << trace.terminated.at_step
                  << ": " << trace.terminated.detail << "\n";
        return kExitInnerFailure;
    }
    return kExitOk;
}

int cmd_validate(const std::string& config_path) {
    try {
        ExperimentConfig cfg = load_with_overrides(config_path, {});
        ConditionReport report =
            validate_conditions(cfg.schedule, cfg.family.common_lambda,
                                cfg.family.common_mu, kDefaultValidationHorizon);
        std::cout << "B* = " << report.B_star_sup << ", B_* = " << report.B_star_inf
                  << ", B^ = [" << report.B_hat_inf << ", " << report.B_hat_sup
                  << "], Lambda = " << report.Lambda << ", M = " << report.M
                  << (report.sup_inf_exact ? "" : " (scanned)") << "\n";
        for (const auto* check : report.items()) print_condition(*check);
        if (report.any_fail()) {
            std::cerr << "condition " << report.failed_labels() << " failed\n";
            return kExitConfig;
        }
        return kExitOk;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
}

namespace {

struct CheckExpectation {
    std::string title;
    CheckReport report;
    bool expect_holds = true;
};

void print_check(const CheckExpectation& c, bool& falsified) {
    const bool as_declared = c.report.holds == c.expect_holds;
    std::cout << "  " << c.title << ": " << (c.report.holds ? "HOLDS" : "FAILS")
              << " (worst violation " << c.report.worst_violation << " over "
              << c.report.samples_checked << " samples)"
              << (as_declared ? "  -- as declared" : "  ** falsifies declaration")
              << "\n";
    if (!as_declared) falsified = true;
}

bool check_fixed_points(const MappingSpec& m) {
    for (const auto& p : m.fixed_points)
        if (distance(m.apply(p), p) > kFixedPointTol) return false;
    return true;
}

}  // namespace

int cmd_check_mappings(const std::string& zoo_name, int d, long samples,
                       std::uint64_t seed) {
    ZooEntry entry;
    try {
        entry = zoo(zoo_name, d);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    bool falsified = false;
    const long n_max = 5;

    auto check_single = [&](const MappingSpec& m) {
        std::cout << m.label << " (d = " << d << "):\n";
        if (!check_fixed_points(m)) {
            std::cout << "  declared fixed point is not fixed  ** falsifies declaration\n";
            falsified = true;
        }
        print_check({"self-map of the domain ball",
                     check_self_map(m, d, samples, seed), true},
                    falsified);
        if (m.claims_nonexpansive)
            print_check({"nonexpansive (uniform L = 1)",
                         check_uniform_lipschitz(m, 1.0, n_max, samples, seed), true},
                        falsified);
        if (m.lipschitz)
            print_check({"uniformly Lipschitz with declared L = " +
                             std::to_string(*m.lipschitz),
                         check_uniform_lipschitz(m, *m.lipschitz, n_max, samples, seed),
                         true},
                        falsified);
    };

    if (std::holds_alternative<MappingSpec>(entry)) {
        check_single(std::get<MappingSpec>(entry));
    } else {
        const FamilyConfig& family = std::get<FamilyConfig>(entry);
        for (int j = 0; j < family.N(); ++j) {
            const auto& T = family.T_family[static_cast<std::size_t>(j)];
            const auto& I = family.I_family[static_cast<std::size_t>(j)];
            std::cout << "pair " << (j + 1) << ": T = " << T.label
                      << ", I = " << I.label << "\n";
            print_check({"T self-map of the domain ball",
                         check_self_map(T, d, samples, seed), true},
                        falsified);
            print_check({"I self-map of the domain ball",
                         check_self_map(I, d, samples, seed), true},
                        falsified);
            print_check({"T quasi-I-nonexpansive (mu = common rate)",
                         check_quasi_I_nonexpansive(T, I, family.common_F,
                                                    family.common_mu, n_max, samples,
                                                    seed),
                         true},
                        falsified);
            print_check({"I asymptotically quasi-nonexpansive",
                         check_quasi_I_nonexpansive(
                             I, make_identity(d), family.common_F, family.common_mu,
                             n_max, samples, seed),
                         true},
                        falsified);
            if (zoo_name == "paper") {
                // declared: the pair is NOT I-nonexpansive; the canonical
                // boundary pair witnesses the violation
                auto report = check_I_nonexpansive(T, I, samples, seed);
                print_check({"T I-nonexpansive", report, false}, falsified);
                if (!report.holds && report.witness_x && report.witness_y) {
                    double t_gap = distance(T.apply(*report.witness_x),
                                            T.apply(*report.witness_y));
                    double i_gap = distance(I.apply(*report.witness_x),
                                            I.apply(*report.witness_y));
                    std::cout << "    witness: ||Tx-Ty|| = " << t_gap
                              << ", ||Ix-Iy|| = " << i_gap
                              << ", gap = " << (t_gap - i_gap) << "\n";
                }
            }
        }
    }

    if (falsified) {
        std::cerr << "a declared property was falsified\n";
        return kExitFalsified;
    }
    return kExitOk;
}

int cmd_zoo_list() {
    std::cout << "identity                 the identity map\n"
              << "paper_T                  right shift of fourth powers on the unit ball\n"
              << "paper_I                  right shift of squares\n"
              << "linear_contraction(a)    x -> a*x, fixed point 0\n"
              << "rotation(theta)          plane rotation, d = 2\n"
              << "paper                    family pairing paper_T with paper_I (N = 1)\n"
              << "scaled_family(N)         N distinct contractions sharing fixed point 0\n";
    return kExitOk;
}

}  // namespace famiter
