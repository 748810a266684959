#include "famiter/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "famiter/rng.hpp"

namespace famiter {

IndexDecomposition index_decompose(long n, int N) {
    if (n < 1 || N < 1) throw Error("index_decompose requires n >= 1, N >= 1");
    IndexDecomposition d;
    d.n = n;
    d.N = N;
    d.j = static_cast<int>((n - 1) % N) + 1;
    d.k = (n - 1) / N + 1;
    return d;
}

std::string role_name(SeqRole role) {
    switch (role) {
        case SeqRole::Alpha: return "alpha";
        case SeqRole::Beta: return "beta";
        case SeqRole::Gamma: return "gamma";
        case SeqRole::AlphaHat: return "alpha_hat";
        case SeqRole::BetaHat: return "beta_hat";
        case SeqRole::GammaHat: return "gamma_hat";
    }
    return "?";
}

// --- SeqSpec ---------------------------------------------------------------

namespace {

void require_unit_interval(double v, SeqRole role) {
    if (!(v >= 0.0 && v <= 1.0))
        throw ConfigError(role_name(role) + " values must lie in [0,1], got " +
                          std::to_string(v));
}

}  // namespace

SeqSpec SeqSpec::constant(double c, SeqRole role) {
    require_unit_interval(c, role);
    SeqSpec s;
    s.form_ = Form::Constant;
    s.c_ = c;
    s.role_ = role;
    return s;
}

SeqSpec SeqSpec::power(double c, double q, SeqRole role) {
    require_unit_interval(c, role);
    if (q < 0.0) throw ConfigError("power sequence requires q >= 0");
    SeqSpec s;
    s.form_ = Form::Power;
    s.c_ = c;
    s.q_ = q;
    s.role_ = role;
    return s;
}

SeqSpec SeqSpec::explicit_values(std::vector<double> values, SeqRole role) {
    if (values.empty()) throw ConfigError("explicit sequence needs at least one value");
    for (double v : values) require_unit_interval(v, role);
    SeqSpec s;
    s.form_ = Form::Explicit;
    s.values_ = std::move(values);
    s.role_ = role;
    return s;
}

double SeqSpec::at(long n) const {
    if (n < 1) throw Error("sequence index must be >= 1");
    switch (form_) {
        case Form::Constant: return c_;
        case Form::Power: return c_ * std::pow(static_cast<double>(n), -q_);
        case Form::Explicit: {
            std::size_t i = static_cast<std::size_t>(n) - 1;
            if (i >= values_.size())
                throw ConfigError(role_name(role_) + " sequence shorter than run");
            return values_[i];
        }
    }
    return 0.0;
}

SeqSpec::SupInf SeqSpec::sup_inf(long scan_horizon) const {
    switch (form_) {
        case Form::Constant: return {c_, c_, true};
        case Form::Power:
            if (q_ == 0.0 || c_ == 0.0) return {c_, c_, true};
            return {c_, 0.0, true};  // sup at n = 1, inf is the n->inf limit
        case Form::Explicit: {
            std::size_t limit = std::min(values_.size(),
                                         static_cast<std::size_t>(scan_horizon));
            double lo = values_[0], hi = values_[0];
            for (std::size_t i = 0; i < limit; ++i) {
                lo = std::min(lo, values_[i]);
                hi = std::max(hi, values_[i]);
            }
            return {hi, lo, false};
        }
    }
    return {0.0, 0.0, true};
}

TailDecay SeqSpec::decay() const {
    switch (form_) {
        case Form::Constant:
            if (c_ == 0.0) return {TailDecay::Kind::Zero, 0.0};
            return {TailDecay::Kind::PowerLaw, 0.0};
        case Form::Power:
            if (c_ == 0.0) return {TailDecay::Kind::Zero, 0.0};
            return {TailDecay::Kind::PowerLaw, q_};
        case Form::Explicit:
            if (std::all_of(values_.begin(), values_.end(),
                            [](double v) { return v == 0.0; }))
                return {TailDecay::Kind::Zero, 0.0};
            return {TailDecay::Kind::Unknown, 0.0};
    }
    return {TailDecay::Kind::Unknown, 0.0};
}

// --- error terms -------------------------------------------------------------

ErrorTermSpec ErrorTermSpec::seeded(std::uint64_t seed, double bound) {
    if (bound < 0.0) throw ConfigError("error term bound must be >= 0");
    ErrorTermSpec e;
    e.mode = Mode::Seeded;
    e.seed = seed;
    e.bound = bound;
    return e;
}

ErrorTermSpec ErrorTermSpec::seeded_deferred(double bound) {
    if (bound < 0.0) throw ConfigError("error term bound must be >= 0");
    ErrorTermSpec e;
    e.mode = Mode::Seeded;
    e.bound = bound;
    return e;
}

ErrorTermSpec ErrorTermSpec::explicit_vectors(std::vector<Vector> vectors) {
    if (vectors.empty()) throw ConfigError("explicit error term needs vectors");
    ErrorTermSpec e;
    e.mode = Mode::Explicit;
    e.vectors = std::move(vectors);
    return e;
}

Vector generate_error_term(const ErrorTermSpec& spec, long n, int d, double radius) {
    if (n < 1) throw Error("error term index must be >= 1");
    switch (spec.mode) {
        case ErrorTermSpec::Mode::Zero:
            return Vector(static_cast<std::size_t>(d), 0.0);
        case ErrorTermSpec::Mode::Seeded: {
            if (!spec.seed)
                throw ConfigError("seeded error term has no concrete seed");
            SplitMix64 rng(mix_seed(*spec.seed, static_cast<std::uint64_t>(n)));
            return sample_in_ball(rng, d, std::min(spec.bound, radius));
        }
        case ErrorTermSpec::Mode::Explicit: {
            std::size_t i = static_cast<std::size_t>(n) - 1;
            if (i >= spec.vectors.size())
                throw ConfigError("error-term sequence shorter than run");
            const Vector& v = spec.vectors[i];
            if (static_cast<int>(v.size()) != d)
                throw ConfigError("explicit error term has wrong dimension");
            if (norm(v) > radius + kWeightSumTol)
                throw ConfigError("error term outside the feasible ball");
            return v;
        }
    }
    return Vector(static_cast<std::size_t>(d), 0.0);
}

// --- condition validation ------------------------------------------------------

namespace {

std::string outcome_upper(CheckOutcome o) {
    switch (o) {
        case CheckOutcome::Pass: return "PASS";
        case CheckOutcome::Fail: return "FAIL";
        case CheckOutcome::Indeterminate: return "INDETERMINATE";
    }
    return "?";
}

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

// Summability verdict for a sequence whose tail is classified by `d`:
// power law with exponent > 1 is summable, exponent <= 1 is not.
CheckOutcome summable(const TailDecay& d) {
    switch (d.kind) {
        case TailDecay::Kind::Zero: return CheckOutcome::Pass;
        case TailDecay::Kind::PowerLaw:
            return d.exponent > 1.0 ? CheckOutcome::Pass : CheckOutcome::Fail;
        case TailDecay::Kind::Unknown: return CheckOutcome::Indeterminate;
    }
    return CheckOutcome::Indeterminate;
}

// Classification of (lambda_n * mu_n - 1): zero if both rates are constant
// one, else the slower of the two decays.
TailDecay product_minus_one(const TailDecay& a, const TailDecay& b) {
    if (a.kind == TailDecay::Kind::Zero) return b;
    if (b.kind == TailDecay::Kind::Zero) return a;
    if (a.kind == TailDecay::Kind::Unknown || b.kind == TailDecay::Kind::Unknown)
        return {TailDecay::Kind::Unknown, 0.0};
    return {TailDecay::Kind::PowerLaw, std::min(a.exponent, b.exponent)};
}

// Classification of the product (rate part) * (coefficient part): exponents
// add; an identically-zero factor kills the product.
TailDecay product(const TailDecay& a, const TailDecay& b) {
    if (a.kind == TailDecay::Kind::Zero || b.kind == TailDecay::Kind::Zero)
        return {TailDecay::Kind::Zero, 0.0};
    if (a.kind == TailDecay::Kind::Unknown || b.kind == TailDecay::Kind::Unknown)
        return {TailDecay::Kind::Unknown, 0.0};
    return {TailDecay::Kind::PowerLaw, a.exponent + b.exponent};
}

// Range check for the derived alpha sequence over the scan horizon.
ConditionCheck check_alpha_range(const SeqSpec& beta, const SeqSpec& gamma,
                                 long horizon, const std::string& which) {
    long limit = horizon;
    if (beta.form() == SeqSpec::Form::Explicit)
        limit = std::min<long>(limit, static_cast<long>(beta.values().size()));
    if (gamma.form() == SeqSpec::Form::Explicit)
        limit = std::min<long>(limit, static_cast<long>(gamma.values().size()));
    // constant/power forms are nonincreasing, so the sum peaks at n = 1;
    // scan anyway so explicit lists are covered by the same loop
    for (long n = 1; n <= limit; ++n) {
        double a = 1.0 - beta.at(n) - gamma.at(n);
        if (a < -kWeightSumTol || a > 1.0 + kWeightSumTol) {
            return {"(i)", CheckOutcome::Fail,
                    "derived " + which + " leaves [0,1] at n = " + std::to_string(n) +
                        " (value " + fmt(a) + ")"};
        }
    }
    return {"(i)", CheckOutcome::Pass,
            "sums equal 1 by construction; derived " + which +
                " in [0,1] for n <= " + std::to_string(limit)};
}

ConditionCheck worse(const ConditionCheck& a, const ConditionCheck& b) {
    auto rank = [](CheckOutcome o) {
        return o == CheckOutcome::Fail ? 2 : o == CheckOutcome::Indeterminate ? 1 : 0;
    };
    return rank(a.outcome) >= rank(b.outcome) ? a : b;
}

}  // namespace

std::string outcome_name(CheckOutcome o) { return outcome_upper(o); }

bool ConditionReport::any_fail() const {
    for (const auto* c : items())
        if (c->outcome == CheckOutcome::Fail) return true;
    return false;
}

std::string ConditionReport::failed_labels() const {
    std::string out;
    for (const auto* c : items()) {
        if (c->outcome != CheckOutcome::Fail) continue;
        if (!out.empty()) out += ", ";
        out += c->label;
    }
    return out;
}

ConditionReport validate_conditions(const ScheduleParams& params,
                                    const AsymptoticRate& lambda,
                                    const AsymptoticRate& mu, long horizon,
                                    bool prop35_extras) {
    if (horizon < 1) throw ConfigError("validation horizon must be >= 1");
    ConditionReport r;
    r.prop35_extras = prop35_extras;

    auto beta_si = params.beta.sup_inf(horizon);
    auto beta_hat_si = params.beta_hat.sup_inf(horizon);
    r.B_star_sup = beta_si.sup;
    r.B_star_inf = beta_si.inf;
    r.B_hat_sup = beta_hat_si.sup;
    r.B_hat_inf = beta_hat_si.inf;
    r.Lambda = lambda.sup();
    r.M = mu.sup();
    r.sup_inf_exact = beta_si.exact && beta_hat_si.exact;

    // (i) convexity of both three-way combinations
    r.cond_i = worse(check_alpha_range(params.beta, params.gamma, horizon, "alpha"),
                     check_alpha_range(params.beta_hat, params.gamma_hat, horizon,
                                       "alpha_hat"));

    // (ii) sum (lambda_n mu_n - 1) beta_n < inf
    TailDecay term = product(product_minus_one(lambda.decay(), mu.decay()),
                             params.beta.decay());
    r.cond_ii.label = "(ii)";
    r.cond_ii.outcome = summable(term);
    switch (term.kind) {
        case TailDecay::Kind::Zero:
            r.cond_ii.message = "(lambda_n mu_n - 1) beta_n is identically zero";
            break;
        case TailDecay::Kind::PowerLaw:
            r.cond_ii.message = "(lambda_n mu_n - 1) beta_n ~ n^-" + fmt(term.exponent) +
                                (term.exponent > 1.0 ? " (summable)" : " (not summable)");
            break;
        case TailDecay::Kind::Unknown:
            r.cond_ii.message = "tail unknown by construction (explicit list)";
            break;
    }

    // (iii) B* < 1 / (Lambda^2 M^2), strictly; optionally 0 < B_*
    const double bound = 1.0 / (r.Lambda * r.Lambda * r.M * r.M);
    r.cond_iii.label = "(iii)";
    if (beta_si.exact) {
        if (r.B_star_sup < bound)
            r.cond_iii = {"(iii)", CheckOutcome::Pass,
                          "B* = " + fmt(r.B_star_sup) + " < " + fmt(bound) +
                              " = 1/(Lambda^2 M^2)"};
        else
            r.cond_iii = {"(iii)", CheckOutcome::Fail,
                          "B* = " + fmt(r.B_star_sup) + " >= " + fmt(bound) +
                              " = 1/(Lambda^2 M^2)"};
    } else {
        // a scan only bounds the sup from below: violations are definitive,
        // a clean scan is not
        if (r.B_star_sup >= bound)
            r.cond_iii = {"(iii)", CheckOutcome::Fail,
                          "scanned sup beta_n = " + fmt(r.B_star_sup) + " >= " +
                              fmt(bound) + " = 1/(Lambda^2 M^2)"};
        else
            r.cond_iii = {"(iii)", CheckOutcome::Indeterminate,
                          "scanned sup beta_n = " + fmt(r.B_star_sup) +
                              " < bound, but the tail of an explicit list is unknown"};
    }
    if (prop35_extras && r.cond_iii.outcome == CheckOutcome::Pass) {
        if (beta_si.exact && !(r.B_star_inf > 0.0))
            r.cond_iii = {"(iii)", CheckOutcome::Fail,
                          "residual-decay extras: B_* = " + fmt(r.B_star_inf) +
                              " is not > 0"};
        else if (!beta_si.exact)
            r.cond_iii = {"(iii)", CheckOutcome::Indeterminate,
                          "residual-decay extras: inf beta_n unknown for explicit list"};
    }

    // (iv) 0 < inf beta_hat <= sup beta_hat < 1
    r.cond_iv.label = "(iv)";
    if (beta_hat_si.exact) {
        if (r.B_hat_inf > 0.0 && r.B_hat_sup < 1.0)
            r.cond_iv = {"(iv)", CheckOutcome::Pass,
                         "0 < " + fmt(r.B_hat_inf) + " <= beta_hat_n <= " +
                             fmt(r.B_hat_sup) + " < 1"};
        else
            r.cond_iv = {"(iv)", CheckOutcome::Fail,
                         "beta_hat_n must stay in a closed subinterval of (0,1); "
                         "inf = " + fmt(r.B_hat_inf) + ", sup = " + fmt(r.B_hat_sup)};
    } else {
        if (!(r.B_hat_inf > 0.0) || !(r.B_hat_sup < 1.0))
            r.cond_iv = {"(iv)", CheckOutcome::Fail,
                         "scanned beta_hat_n leaves (0,1): inf = " + fmt(r.B_hat_inf) +
                             ", sup = " + fmt(r.B_hat_sup)};
        else
            r.cond_iv = {"(iv)", CheckOutcome::Indeterminate,
                         "scanned beta_hat_n inside (0,1), tail unknown"};
    }

    // (iv/v) summability of gamma_n and gamma_hat_n
    CheckOutcome g = summable(params.gamma.decay());
    CheckOutcome gh = summable(params.gamma_hat.decay());
    r.cond_v.label = "(iv/v)";
    auto describe = [&](const SeqSpec& s, const char* name) -> std::string {
        TailDecay d = s.decay();
        switch (d.kind) {
            case TailDecay::Kind::Zero: return std::string(name) + " == 0";
            case TailDecay::Kind::PowerLaw:
                return std::string(name) + " ~ n^-" + fmt(d.exponent) +
                       (d.exponent > 1.0 ? " summable" : " not summable (q <= 1)");
            case TailDecay::Kind::Unknown:
                return std::string(name) + " explicit, tail unknown";
        }
        return name;
    };
    r.cond_v.message = describe(params.gamma, "gamma_n") + "; " +
                       describe(params.gamma_hat, "gamma_hat_n");
    if (g == CheckOutcome::Fail || gh == CheckOutcome::Fail)
        r.cond_v.outcome = CheckOutcome::Fail;
    else if (g == CheckOutcome::Indeterminate || gh == CheckOutcome::Indeterminate)
        r.cond_v.outcome = CheckOutcome::Indeterminate;
    else
        r.cond_v.outcome = CheckOutcome::Pass;

    return r;
}

}  // namespace famiter
