#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "famiter/mappings.hpp"
#include "famiter/vecspace.hpp"

namespace famiter {

/// The cyclic index rule n = (k-1)*N + j with j in {1..N}, k >= 1.
/// For n > N it also satisfies the shift law k(n-N) = k(n) - 1,
/// j(n-N) = j(n).
struct IndexDecomposition {
    long n = 1;
    long k = 1;  // block number k(n)
    int j = 1;   // family member j(n)
    int N = 1;
};

IndexDecomposition index_decompose(long n, int N);

enum class SeqRole { Alpha, Beta, Gamma, AlphaHat, BetaHat, GammaHat };

std::string role_name(SeqRole role);

/// A coefficient sequence in [0,1].
///
/// constant(c), power(c, q) meaning c * n^-q, or an explicit finite list.
/// Explicit lists have an unknown tail by construction: evaluating past the
/// end throws, and the symbolic classifiers report indeterminate.
class SeqSpec {
public:
    enum class Form { Constant, Power, Explicit };

    static SeqSpec constant(double c, SeqRole role);
    static SeqSpec power(double c, double q, SeqRole role);
    static SeqSpec explicit_values(std::vector<double> values, SeqRole role);

    Form form() const { return form_; }
    double c() const { return c_; }
    double q() const { return q_; }
    SeqRole role() const { return role_; }
    const std::vector<double>& values() const { return values_; }

    /// Value at n >= 1; throws ConfigError when an explicit list is
    /// exhausted ("sequence shorter than run").
    double at(long n) const;

    struct SupInf {
        double sup = 0.0;
        double inf = 0.0;
        bool exact = true;  // false when obtained by scanning an explicit list
    };

    /// Supremum/infimum over all n >= 1. Analytic for constant and power
    /// forms (power: sup attained at n = 1, inf = 0); a scan of up to
    /// scan_horizon entries for explicit lists, flagged exact = false.
    SupInf sup_inf(long scan_horizon) const;

    /// Symbolic classification of the tail (for summability decisions).
    TailDecay decay() const;

private:
    Form form_ = Form::Constant;
    double c_ = 0.0;
    double q_ = 0.0;
    std::vector<double> values_;
    SeqRole role_ = SeqRole::Beta;
};

/// Bounded perturbation terms u_n, v_n living in the feasible ball.
struct ErrorTermSpec {
    enum class Mode { Zero, Seeded, Explicit };

    Mode mode = Mode::Zero;
    /// Seed for Mode::Seeded; unset means "derive from the experiment seed".
    std::optional<std::uint64_t> seed;
    double bound = 0.0;
    std::vector<Vector> vectors;  // Mode::Explicit

    static ErrorTermSpec zero() { return {}; }
    static ErrorTermSpec seeded(std::uint64_t seed, double bound);
    static ErrorTermSpec seeded_deferred(double bound);
    static ErrorTermSpec explicit_vectors(std::vector<Vector> vectors);
};

/// The n-th error vector: deterministic in (seed, n), norm <= radius.
/// Explicit lists shorter than the run throw
/// ConfigError("error-term sequence shorter than run").
Vector generate_error_term(const ErrorTermSpec& spec, long n, int d, double radius);

/// The six coefficient sequences of the scheme. The alpha sequences are
/// derived, never user-specified: alpha_n = 1 - beta_n - gamma_n and
/// alpha_hat_n = 1 - beta_hat_n - gamma_hat_n, so the three-way sums equal 1
/// by construction and only the range [0,1] needs validating.
struct ScheduleParams {
    SeqSpec beta = SeqSpec::constant(0.5, SeqRole::Beta);
    SeqSpec gamma = SeqSpec::constant(0.0, SeqRole::Gamma);
    SeqSpec beta_hat = SeqSpec::constant(0.5, SeqRole::BetaHat);
    SeqSpec gamma_hat = SeqSpec::constant(0.0, SeqRole::GammaHat);
    ErrorTermSpec error_u;
    ErrorTermSpec error_v;

    double alpha_at(long n) const { return 1.0 - beta.at(n) - gamma.at(n); }
    double alpha_hat_at(long n) const {
        return 1.0 - beta_hat.at(n) - gamma_hat.at(n);
    }
};

enum class CheckOutcome { Pass, Fail, Indeterminate };

std::string outcome_name(CheckOutcome o);

struct ConditionCheck {
    std::string label;
    CheckOutcome outcome = CheckOutcome::Indeterminate;
    std::string message;
};

/// Outcome of checking the scheme hypotheses. Labels follow the numbering
/// of the residual-decay statement, whose set is the largest:
///   (i)    alpha_n + beta_n + gamma_n = 1 = alpha_hat + beta_hat + gamma_hat,
///          with the derived alphas in [0,1]
///   (ii)   sum (lambda_n * mu_n - 1) * beta_n < infinity
///   (iii)  B* = sup beta_n < 1 / (Lambda^2 M^2); with the residual-decay
///          extras requested, also 0 < B_* = inf beta_n
///   (iv)   0 < inf beta_hat_n <= sup beta_hat_n < 1
///   (v)    sum gamma_n < infinity and sum gamma_hat_n < infinity
///          (printed as "(iv/v)": the norm-convergence statements number this
///          condition (iv), the residual-decay one numbers it (v))
struct ConditionReport {
    double B_star_sup = 0.0;
    double B_star_inf = 0.0;
    double B_hat_sup = 0.0;
    double B_hat_inf = 0.0;
    double Lambda = 1.0;
    double M = 1.0;
    bool sup_inf_exact = true;

    ConditionCheck cond_i, cond_ii, cond_iii, cond_iv, cond_v;
    bool prop35_extras = false;

    std::array<const ConditionCheck*, 5> items() const {
        return {&cond_i, &cond_ii, &cond_iii, &cond_iv, &cond_v};
    }
    bool any_fail() const;
    /// Labels of all failed conditions, comma separated ("" if none).
    std::string failed_labels() const;
};

/// Default horizon for sup/inf scans on explicit lists.
inline constexpr long kDefaultValidationHorizon = 10000;

/// Classifies conditions (i)-(v) for the given coefficient sequences and
/// common rate sequences. Summability is decided symbolically from the
/// sequence forms (a finite partial sum proves nothing); explicit lists
/// yield indeterminate outcomes wherever a tail would be needed.
/// `prop35_extras` additionally requires 0 < inf beta_n inside (iii).
ConditionReport validate_conditions(const ScheduleParams& params,
                                    const AsymptoticRate& lambda,
                                    const AsymptoticRate& mu,
                                    long horizon = kDefaultValidationHorizon,
                                    bool prop35_extras = false);

}  // namespace famiter
