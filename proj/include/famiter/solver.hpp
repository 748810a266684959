#pragma once

#include <span>
#include <string>
#include <vector>

#include "famiter/mappings.hpp"
#include "famiter/schedule.hpp"
#include "famiter/vecspace.hpp"

namespace famiter {

/// How one inner fixed-point solve went.
struct InnerSolveReport {
    long iterations = 0;             // Picard updates performed
    double residual = 0.0;           // ||x - G(x)|| at exit
    double contraction_estimate = 0.0;  // max observed step ratio
    bool converged = false;
};

struct StepRecord {
    long n = 0;
    long k = 0;
    int j = 0;
    Vector x;
    Vector y;
    InnerSolveReport inner;
    std::vector<double> residuals_T;  // ||x_n - T_j x_n|| per family member
    std::vector<double> residuals_I;
    double dist_F = 0.0;
    double recurrence_b = 0.0;
    /// Worst-case recurrence constant over the declared fixed points (the
    /// constant is fixed-point dependent; the per-point values are used for
    /// recurrence_ok, the maximum is what gets recorded).
    double recurrence_c = 0.0;
    /// ||x_n - p|| <= (1 + b_n) ||x_{n-1} - p|| + c_n(p) + 1e-9 held for
    /// every declared p in F.
    bool recurrence_ok = true;
};

struct Terminated {
    enum class Kind { Horizon, Converged, InnerFailure };
    Kind kind = Kind::Horizon;
    long at_step = 0;
    double tol = 0.0;
    std::string detail;

    std::string to_string() const;
};

struct IterationTrace {
    Vector x0;
    std::vector<StepRecord> steps;  // consecutive from n = 1
    std::string config_digest;
    Terminated terminated;
};

/// Slack for the per-step recurrence and bound assertions.
inline constexpr double kRecurrenceSlack = 1e-9;

struct InnerOptions {
    double tol = 1e-12;  // far below every outer slack
    long max_iters = 10000;
    /// When the declared Lipschitz constants cannot certify the Picard
    /// contraction, refuse unless this is set; then iterate with relaxation
    /// factor 0.5 and fail loudly on non-convergence.
    bool allow_noncontractive = false;
};

struct StepResult {
    Vector x;
    Vector y;
    InnerSolveReport inner;
};

/// Solves the implicit update at step n:
///
///   x = alpha_n x_prev + beta_n T_{j(n)}^{k(n)} y + gamma_n u_n
///   y = alpha_hat_n x + beta_hat_n I_{j(n)}^{k(n)} x + gamma_hat_n v_n
///
/// by Picard iteration on G(x) = alpha_n x_prev + beta_n T^k(y(x)) +
/// gamma_n u_n, warm-started at x_prev. The preflight contraction bound
/// beta_n * L1 * (alpha_hat_n + beta_hat_n * L2) < 1 (with the declared
/// uniform Lipschitz constants) certifies convergence; without it the call
/// throws ConfigError("contraction precondition violated") unless
/// opts.allow_noncontractive is set. Returns x with ||x - G(x)|| <= opts.tol
/// or throws SolverStallError.
StepResult implicit_step(const Vector& x_prev, long n, const FamilyConfig& family,
                         const ScheduleParams& params, const InnerOptions& opts = {});

struct RunOptions {
    long horizon = 2000;
    /// Early-termination tolerance: stop once every T- and I-residual and
    /// dist_F fall below it. Zero disables early termination.
    double stop_tol = 0.0;
    InnerOptions inner;
    std::string config_digest;
};

/// Runs the implicit scheme with errors for n = 1..horizon, filling a
/// StepRecord per step (residuals, dist_F, the recurrence constants b_n and
/// c_n, and the per-step recurrence verdict). Refuses configurations whose
/// condition report contains a failed condition; indeterminate outcomes are
/// tolerated. An inner-solver failure terminates the trace with the step
/// index instead of discarding the prefix.
IterationTrace run_scheme(const FamilyConfig& family, const ScheduleParams& params,
                          const Vector& x0, const RunOptions& opts);

/// Baseline x_n = (1 - alpha_n) x_{n-1} + alpha_n T_{j(n)} x_n (powers fixed
/// at 1, member chosen cyclically). The family is expected nonexpansive;
/// recurrence constants are recorded as zero.
IterationTrace run_xu_ori(std::span<const MappingSpec> family, const SeqSpec& alpha,
                          std::span<const Vector> F, const Vector& x0, long horizon,
                          const InnerOptions& opts = {});

/// Baseline x_n = (1 - alpha_n) x_{n-1} + alpha_n T_{j(n)}^{k(n)} x_n with
/// the cyclic index rule. Members carry their own asymptotic rates; the
/// recurrence constant is b_n = alpha_n (mu_k - 1) / (1 - A* M) with
/// A* = sup alpha_n and M the common-rate sup, so A* M < 1 is required.
IterationTrace run_sun(std::span<const MappingSpec> family, const SeqSpec& alpha,
                       std::span<const Vector> F, const Vector& x0, long horizon,
                       const InnerOptions& opts = {});

}  // namespace famiter
