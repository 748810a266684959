#include "famiter/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace famiter {

std::string Terminated::to_string() const {
    switch (kind) {
        case Kind::Horizon: return "horizon";
        case Kind::Converged: return "converged";
        case Kind::InnerFailure: return "inner_failure";
    }
    return "?";
}

namespace {

double min_distance_to(const Vector& x, std::span<const Vector> F,
                       const NormKind& kind) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : F) best = std::min(best, distance(x, p, kind));
    return best;
}

/// Picard iteration on G, warm-started, with optional relaxation.
InnerSolveReport solve_inner(const std::function<Vector(const Vector&)>& G,
                             Vector& x, long n, const NormKind& norm_kind,
                             double omega, const InnerOptions& opts) {
    InnerSolveReport report;
    double prev_step = -1.0;
    for (long it = 0; it <= opts.max_iters; ++it) {
        Vector gx = G(x);
        report.residual = distance(x, gx, norm_kind);
        if (report.residual <= opts.tol) {
            report.converged = true;
            return report;
        }
        if (it == opts.max_iters) break;
        Vector next = omega == 1.0
                          ? std::move(gx)
                          : add(scale(1.0 - omega, x), scale(omega, gx));
        double step = distance(next, x, norm_kind);
        if (prev_step > 0.0)
            report.contraction_estimate =
                std::max(report.contraction_estimate, step / prev_step);
        prev_step = step;
        x = std::move(next);
        ++report.iterations;
    }
    throw SolverStallError(n, report.residual,
                           "inner solver stalled at step " + std::to_string(n) +
                               " (residual " + std::to_string(report.residual) + ")");
}

}  // namespace

StepResult implicit_step(const Vector& x_prev, long n, const FamilyConfig& family,
                         const ScheduleParams& params, const InnerOptions& opts) {
    const auto idx = index_decompose(n, family.N());
    const MappingSpec& T = family.T_family[static_cast<std::size_t>(idx.j - 1)];
    const MappingSpec& I = family.I_family[static_cast<std::size_t>(idx.j - 1)];
    const int d = static_cast<int>(x_prev.size());

    const double beta = params.beta.at(n);
    const double gamma = params.gamma.at(n);
    const double alpha = params.alpha_at(n);
    const double beta_hat = params.beta_hat.at(n);
    const double gamma_hat = params.gamma_hat.at(n);
    const double alpha_hat = params.alpha_hat_at(n);

    const Vector u = generate_error_term(params.error_u, n, d, family.domain_radius);
    const Vector v = generate_error_term(params.error_v, n, d, family.domain_radius);

    auto make_y = [&](const Vector& x) {
        const double w[] = {alpha_hat, beta_hat, gamma_hat};
        const Vector pts[] = {x, power_apply(I, idx.k, x), v};
        return convex_combine(w, pts);
    };

    StepResult result;
    if (beta == 0.0) {
        // the T-term vanishes and the equation is explicit
        const double w[] = {alpha, gamma};
        const Vector pts[] = {x_prev, u};
        result.x = convex_combine(w, pts);
        result.inner.converged = true;
        result.y = make_y(result.x);
        return result;
    }

    auto G = [&](const Vector& x) {
        const double w[] = {alpha, beta, gamma};
        const Vector pts[] = {x_prev, power_apply(T, idx.k, make_y(x)), u};
        return convex_combine(w, pts);
    };

    bool certified = false;
    if (T.lipschitz && I.lipschitz)
        certified = beta * (*T.lipschitz) * (alpha_hat + beta_hat * (*I.lipschitz)) < 1.0;
    if (!certified && !opts.allow_noncontractive)
        throw ConfigError(
            "contraction precondition violated at step " + std::to_string(n) +
            ": beta_n * L1 * (alpha_hat_n + beta_hat_n * L2) < 1 not certified" +
            (T.lipschitz && I.lipschitz ? "" : " (no declared uniform Lipschitz constant)"));
    const double omega = certified ? 1.0 : 0.5;

    result.x = x_prev;  // warm start
    result.inner = solve_inner(G, result.x, n, family.norm, omega, opts);
    result.y = make_y(result.x);
    return result;
}

namespace {

struct RecurrenceConstants {
    double denom = 1.0;  // 1 - B* Lambda^2 M^2
    double B_star = 0.0;
    double Lambda = 1.0;
    double M = 1.0;
};

// Per-step recurrence bookkeeping shared by the main scheme and baselines.
void fill_recurrence(StepRecord& rec, const Vector& x_prev,
                     std::span<const Vector> F, const NormKind& kind,
                     double b_n, const std::function<double(const Vector&)>& c_of_p) {
    rec.recurrence_b = b_n;
    rec.recurrence_c = 0.0;
    rec.recurrence_ok = true;
    for (const auto& p : F) {
        const double c = c_of_p(p);
        rec.recurrence_c = std::max(rec.recurrence_c, c);
        const double lhs = distance(rec.x, p, kind);
        const double rhs = (1.0 + b_n) * distance(x_prev, p, kind) + c;
        if (lhs > rhs + kRecurrenceSlack) rec.recurrence_ok = false;
    }
}

void fill_residuals(StepRecord& rec, const FamilyConfig& family) {
    rec.residuals_T.clear();
    rec.residuals_I.clear();
    for (const auto& T : family.T_family)
        rec.residuals_T.push_back(distance(rec.x, T.apply(rec.x), family.norm));
    for (const auto& I : family.I_family)
        rec.residuals_I.push_back(distance(rec.x, I.apply(rec.x), family.norm));
    rec.dist_F = min_distance_to(rec.x, family.common_F, family.norm);
}

bool below_stop_tol(const StepRecord& rec, double stop_tol) {
    if (stop_tol <= 0.0) return false;
    double worst = rec.dist_F;
    for (double r : rec.residuals_T) worst = std::max(worst, r);
    for (double r : rec.residuals_I) worst = std::max(worst, r);
    return worst < stop_tol;
}

}  // namespace

IterationTrace run_scheme(const FamilyConfig& family, const ScheduleParams& params,
                          const Vector& x0, const RunOptions& opts) {
    validate_family(family);
    if (opts.horizon < 1) throw ConfigError("horizon must be >= 1");
    if (static_cast<int>(x0.size()) != family.dimension())
        throw ConfigError("x0 dimension disagrees with the family");
    if (norm(x0, family.norm) > family.domain_radius + kCheckSlack)
        throw ConfigError("x0 lies outside the feasible ball");

    const ConditionReport report = validate_conditions(
        params, family.common_lambda, family.common_mu, opts.horizon);
    if (report.any_fail())
        throw ConfigError("condition " + report.failed_labels() + " failed");

    RecurrenceConstants rc;
    rc.B_star = report.B_star_sup;
    rc.Lambda = report.Lambda;
    rc.M = report.M;
    rc.denom = 1.0 - rc.B_star * rc.Lambda * rc.Lambda * rc.M * rc.M;

    IterationTrace trace;
    trace.x0 = x0;
    trace.config_digest = opts.config_digest;
    trace.terminated = {Terminated::Kind::Horizon, opts.horizon, opts.stop_tol, ""};

    Vector x_prev = x0;
    const int d = family.dimension();
    for (long n = 1; n <= opts.horizon; ++n) {
        StepRecord rec;
        rec.n = n;
        const auto idx = index_decompose(n, family.N());
        rec.k = idx.k;
        rec.j = idx.j;

        StepResult step;
        try {
            step = implicit_step(x_prev, n, family, params, opts.inner);
        } catch (const SolverStallError& e) {
            trace.terminated = {Terminated::Kind::InnerFailure, n, opts.stop_tol,
                                e.what()};
            return trace;
        }
        rec.x = std::move(step.x);
        rec.y = std::move(step.y);
        rec.inner = step.inner;
        fill_residuals(rec, family);

        const double lam = family.common_lambda.at(idx.k);
        const double mu = family.common_mu.at(idx.k);
        const double beta = params.beta.at(n);
        const double gamma = params.gamma.at(n);
        const double gamma_hat = params.gamma_hat.at(n);
        const Vector u = generate_error_term(params.error_u, n, d, family.domain_radius);
        const Vector v = generate_error_term(params.error_v, n, d, family.domain_radius);

        const double b_n = (lam * lam * mu * mu - 1.0) * beta / rc.denom;
        fill_recurrence(rec, x_prev, family.common_F, family.norm, b_n,
                        [&](const Vector& p) {
                            return (gamma * distance(u, p, family.norm) +
                                    beta * lam * mu * gamma_hat *
                                        distance(v, p, family.norm)) /
                                   rc.denom;
                        });

        x_prev = rec.x;
        trace.steps.push_back(std::move(rec));
        if (below_stop_tol(trace.steps.back(), opts.stop_tol)) {
            trace.terminated = {Terminated::Kind::Converged, n, opts.stop_tol, ""};
            break;
        }
    }
    return trace;
}

namespace {

IterationTrace run_cyclic_baseline(std::span<const MappingSpec> family,
                                   const SeqSpec& alpha, std::span<const Vector> F,
                                   const Vector& x0, long horizon,
                                   const InnerOptions& opts, bool with_powers) {
    if (family.empty()) throw ConfigError("baseline requires a nonempty family");
    if (F.empty()) throw ConfigError("baseline requires a declared fixed-point set");
    if (horizon < 1) throw ConfigError("horizon must be >= 1");
    const int N = static_cast<int>(family.size());
    const NormKind norm_kind = NormKind::l2();

    const AsymptoticRate common = family_common_rates(family);
    const double A_star = alpha.sup_inf(horizon).sup;
    const double M = common.sup();
    double denom = 1.0 - A_star * M;
    if (with_powers && !(denom > 0.0))
        throw ConfigError("sup alpha_n * sup rate must be < 1 for the recurrence constants");

    IterationTrace trace;
    trace.x0 = x0;
    trace.terminated = {Terminated::Kind::Horizon, horizon, 0.0, ""};

    Vector x_prev = x0;
    for (long n = 1; n <= horizon; ++n) {
        const auto idx = index_decompose(n, N);
        const long k = with_powers ? idx.k : 1;
        const MappingSpec& T = family[static_cast<std::size_t>(idx.j - 1)];
        const double a = alpha.at(n);
        if (!(a > 0.0 && a < 1.0))
            throw ConfigError("alpha_n must lie in (0,1), got " + std::to_string(a) +
                              " at n = " + std::to_string(n));

        bool certified = T.lipschitz && a * (*T.lipschitz) < 1.0;
        if (!certified && !opts.allow_noncontractive)
            throw ConfigError("contraction precondition violated at step " +
                              std::to_string(n) + ": alpha_n * L < 1 not certified");
        const double omega = certified ? 1.0 : 0.5;

        auto G = [&](const Vector& x) {
            const double w[] = {1.0 - a, a};
            const Vector pts[] = {x_prev, power_apply(T, k, x)};
            return convex_combine(w, pts);
        };

        StepRecord rec;
        rec.n = n;
        rec.k = k;
        rec.j = idx.j;
        rec.x = x_prev;
        try {
            rec.inner = solve_inner(G, rec.x, n, norm_kind, omega, opts);
        } catch (const SolverStallError& e) {
            trace.terminated = {Terminated::Kind::InnerFailure, n, 0.0, e.what()};
            return trace;
        }
        rec.y = rec.x;  // the baselines have no auxiliary sequence

        for (const auto& m : family)
            rec.residuals_T.push_back(distance(rec.x, m.apply(rec.x), norm_kind));
        rec.dist_F = min_distance_to(rec.x, F, norm_kind);

        const double b_n =
            with_powers ? a * (common.at(k) - 1.0) / denom : 0.0;
        fill_recurrence(rec, x_prev, F, norm_kind, b_n,
                        [](const Vector&) { return 0.0; });

        x_prev = rec.x;
        trace.steps.push_back(std::move(rec));
    }
    return trace;
}

}  // namespace

IterationTrace run_xu_ori(std::span<const MappingSpec> family, const SeqSpec& alpha,
                          std::span<const Vector> F, const Vector& x0, long horizon,
                          const InnerOptions& opts) {
    return run_cyclic_baseline(family, alpha, F, x0, horizon, opts, false);
}

IterationTrace run_sun(std::span<const MappingSpec> family, const SeqSpec& alpha,
                       std::span<const Vector> F, const Vector& x0, long horizon,
                       const InnerOptions& opts) {
    return run_cyclic_baseline(family, alpha, F, x0, horizon, opts, true);
}

}  // namespace famiter
