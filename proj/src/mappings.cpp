#include "famiter/mappings.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "famiter/rng.hpp"

namespace famiter {

// --- AsymptoticRate ---------------------------------------------------------

AsymptoticRate AsymptoticRate::power(double c, double q) {
    if (c < 0.0) throw ConfigError("rate power form requires c >= 0");
    if (!(q > 0.0)) throw ConfigError("rate power form requires q > 0");
    AsymptoticRate r;
    r.form_ = Form::Power;
    r.c_ = c;
    r.q_ = q;
    return r;
}

AsymptoticRate AsymptoticRate::explicit_values(std::vector<double> values) {
    if (values.empty()) throw ConfigError("explicit rate needs at least one value");
    for (double v : values)
        if (!(v >= 1.0)) throw ConfigError("rate values must be >= 1");
    AsymptoticRate r;
    r.form_ = Form::Explicit;
    r.values_ = std::move(values);
    return r;
}

AsymptoticRate AsymptoticRate::pointwise_max(std::vector<AsymptoticRate> members) {
    if (members.empty()) throw ConfigError("pointwise_max needs at least one member");
    if (members.size() == 1) return members.front();
    AsymptoticRate r;
    r.form_ = Form::PointwiseMax;
    r.members_ = std::move(members);
    return r;
}

double AsymptoticRate::at(long n) const {
    if (n < 1) throw Error("rate index must be >= 1");
    switch (form_) {
        case Form::ConstantOne: return 1.0;
        case Form::Power: return 1.0 + c_ * std::pow(static_cast<double>(n), -q_);
        case Form::Explicit: {
            std::size_t i = static_cast<std::size_t>(n) - 1;
            return i < values_.size() ? values_[i] : values_.back();
        }
        case Form::PointwiseMax: {
            double m = 1.0;
            for (const auto& r : members_) m = std::max(m, r.at(n));
            return m;
        }
    }
    return 1.0;
}

double AsymptoticRate::sup() const {
    switch (form_) {
        case Form::ConstantOne: return 1.0;
        case Form::Power: return 1.0 + c_;  // attained at n = 1
        case Form::Explicit:
            return *std::max_element(values_.begin(), values_.end());
        case Form::PointwiseMax: {
            double m = 1.0;
            for (const auto& r : members_) m = std::max(m, r.sup());
            return m;
        }
    }
    return 1.0;
}

TailDecay AsymptoticRate::decay() const {
    switch (form_) {
        case Form::ConstantOne: return {TailDecay::Kind::Zero, 0.0};
        case Form::Power:
            if (c_ == 0.0) return {TailDecay::Kind::Zero, 0.0};
            return {TailDecay::Kind::PowerLaw, q_};
        case Form::Explicit:
            if (std::all_of(values_.begin(), values_.end(),
                            [](double v) { return v == 1.0; }))
                return {TailDecay::Kind::Zero, 0.0};
            return {TailDecay::Kind::Unknown, 0.0};
        case Form::PointwiseMax: {
            // max(r)-1 decays like the slowest member.
            bool any_power = false;
            double slowest = std::numeric_limits<double>::infinity();
            for (const auto& r : members_) {
                TailDecay d = r.decay();
                if (d.kind == TailDecay::Kind::Unknown) return d;
                if (d.kind == TailDecay::Kind::PowerLaw) {
                    any_power = true;
                    slowest = std::min(slowest, d.exponent);
                }
            }
            if (!any_power) return {TailDecay::Kind::Zero, 0.0};
            return {TailDecay::Kind::PowerLaw, slowest};
        }
    }
    return {TailDecay::Kind::Unknown, 0.0};
}

// --- family validation -------------------------------------------------------

void validate_family(const FamilyConfig& family) {
    if (family.T_family.empty() || family.T_family.size() != family.I_family.size())
        throw ConfigError("family requires equally many T and I mappings, N >= 1");
    if (family.common_F.empty())
        throw ConfigError("common fixed-point set F must be nonempty");
    const std::size_t d = family.common_F.front().size();
    for (const auto& p : family.common_F) {
        if (p.size() != d) throw ConfigError("fixed points disagree on dimension");
        for (int side = 0; side < 2; ++side) {
            const auto& members = side == 0 ? family.T_family : family.I_family;
            for (const auto& m : members) {
                if (distance(m.apply(p), p, family.norm) > kFixedPointTol)
                    throw ConfigError("declared common fixed point is not fixed by " +
                                      m.label);
            }
        }
    }
}

// --- power application --------------------------------------------------------

Vector power_apply(const MappingSpec& m, long k, const Vector& x) {
    if (k < 1) throw Error("power_apply requires k >= 1");
    if (norm(x) > m.domain_radius + kCheckSlack)
        throw Error("domain violation");
    Vector v = x;
    for (long i = 0; i < k; ++i) {
        v = m.apply(v);
        if (norm(v) > m.domain_radius + kCheckSlack)
            throw Error("domain violation");
    }
    return v;
}

// --- sampled checks -----------------------------------------------------------

namespace {

// Deterministic probe points: the boundary and axis points where violations
// of coordinatewise maps concentrate, which random ball samples almost never
// hit in moderate dimension.
std::vector<Vector> probe_points(int d, double radius) {
    auto axis = [&](double t) {
        Vector v(static_cast<std::size_t>(d), 0.0);
        v[0] = t;
        return v;
    };
    std::vector<Vector> out = {Vector(static_cast<std::size_t>(d), 0.0),
                               axis(radius), axis(radius / 2.0), axis(-radius),
                               axis(0.9 * radius)};
    Vector diag(static_cast<std::size_t>(d), radius / std::sqrt(static_cast<double>(d)));
    out.push_back(diag);
    return out;
}

std::vector<std::pair<Vector, Vector>> probe_pairs(int d, double radius) {
    auto axis = [&](double t) {
        Vector v(static_cast<std::size_t>(d), 0.0);
        v[0] = t;
        return v;
    };
    return {
        {axis(radius), axis(radius / 2.0)},
        {axis(radius), axis(-radius)},
        {axis(radius), Vector(static_cast<std::size_t>(d), 0.0)},
        {axis(0.9 * radius), axis(0.8 * radius)},
    };
}

void record_violation(CheckReport& report, double violation, const Vector& x,
                      const Vector* y, long n) {
    if (violation > report.worst_violation || report.samples_checked == 0) {
        report.worst_violation = violation;
        report.witness_x = x;
        if (y) report.witness_y = *y;
        report.witness_power = n;
    }
}

}  // namespace

CheckReport check_quasi_I_nonexpansive(const MappingSpec& T, const MappingSpec& I,
                                       std::span<const Vector> F,
                                       const AsymptoticRate& mu, long n_max,
                                       long samples, std::uint64_t seed) {
    if (F.empty()) throw ConfigError("quasi check requires nonempty F");
    if (samples < 1) throw ConfigError("samples must be >= 1");
    const int d = static_cast<int>(F.front().size());
    CheckReport report;
    report.worst_violation = -std::numeric_limits<double>::infinity();

    SplitMix64 rng(seed);
    std::vector<Vector> points = probe_points(d, T.domain_radius);
    for (long s = 0; s < samples; ++s)
        points.push_back(sample_in_ball(rng, d, T.domain_radius));

    for (const auto& x : points) {
        Vector tn = x, in = x;
        for (long n = 1; n <= n_max; ++n) {
            tn = T.apply(tn);
            in = I.apply(in);
            for (const auto& p : F) {
                double violation = distance(tn, p) - mu.at(n) * distance(in, p);
                record_violation(report, violation, x, nullptr, n);
            }
        }
        ++report.samples_checked;
    }
    report.holds = report.worst_violation <= kCheckSlack;
    return report;
}

CheckReport check_I_nonexpansive(const MappingSpec& T, const MappingSpec& I,
                                 long samples, std::uint64_t seed) {
    if (samples < 1) throw ConfigError("samples must be >= 1");
    // infer the dimension by probing a fixed point or requiring one sample
    const int d = !T.fixed_points.empty()
                      ? static_cast<int>(T.fixed_points.front().size())
                      : static_cast<int>(I.fixed_points.front().size());
    CheckReport report;
    report.worst_violation = -std::numeric_limits<double>::infinity();

    SplitMix64 rng(seed);
    auto pairs = probe_pairs(d, T.domain_radius);
    for (long s = 0; s < samples; ++s)
        pairs.emplace_back(sample_in_ball(rng, d, T.domain_radius),
                           sample_in_ball(rng, d, T.domain_radius));

    for (const auto& [x, y] : pairs) {
        double violation = distance(T.apply(x), T.apply(y)) -
                           distance(I.apply(x), I.apply(y));
        record_violation(report, violation, x, &y, 1);
        ++report.samples_checked;
    }
    report.holds = report.worst_violation <= kCheckSlack;
    return report;
}

CheckReport check_uniform_lipschitz(const MappingSpec& m, double L, long n_max,
                                    long samples, std::uint64_t seed) {
    if (!(L > 0.0)) throw ConfigError("Lipschitz check requires L > 0");
    if (samples < 1) throw ConfigError("samples must be >= 1");
    const int d = !m.fixed_points.empty()
                      ? static_cast<int>(m.fixed_points.front().size())
                      : 2;
    CheckReport report;
    report.worst_violation = -std::numeric_limits<double>::infinity();

    SplitMix64 rng(seed);
    auto pairs = probe_pairs(d, m.domain_radius);
    for (long s = 0; s < samples; ++s)
        pairs.emplace_back(sample_in_ball(rng, d, m.domain_radius),
                           sample_in_ball(rng, d, m.domain_radius));

    for (const auto& [x, y] : pairs) {
        double base = distance(x, y);
        Vector tx = x, ty = y;
        for (long n = 1; n <= n_max; ++n) {
            tx = m.apply(tx);
            ty = m.apply(ty);
            double violation = distance(tx, ty) - L * base;
            record_violation(report, violation, x, &y, n);
        }
        ++report.samples_checked;
    }
    report.holds = report.worst_violation <= kCheckSlack;
    return report;
}

CheckReport check_self_map(const MappingSpec& m, int d, long samples,
                           std::uint64_t seed) {
    if (samples < 1) throw ConfigError("samples must be >= 1");
    CheckReport report;
    report.worst_violation = -std::numeric_limits<double>::infinity();

    SplitMix64 rng(seed);
    std::vector<Vector> points = probe_points(d, m.domain_radius);
    for (long s = 0; s < samples; ++s)
        points.push_back(sample_in_ball(rng, d, m.domain_radius));
    for (const auto& x : points) {
        double violation = norm(m.apply(x)) - m.domain_radius;
        record_violation(report, violation, x, nullptr, 1);
        ++report.samples_checked;
    }
    report.holds = report.worst_violation <= kCheckSlack;
    return report;
}

AsymptoticRate family_common_rates(std::span<const MappingSpec> family) {
    if (family.empty()) throw ConfigError("family_common_rates: empty family");
    std::vector<AsymptoticRate> rates;
    rates.reserve(family.size());
    for (const auto& m : family) rates.push_back(m.rate);
    return AsymptoticRate::pointwise_max(std::move(rates));
}

// --- zoo ------------------------------------------------------------------------

MappingSpec make_identity(int d) {
    MappingSpec m;
    m.apply = [](const Vector& x) { return x; };
    m.domain_radius = 1.0;
    m.lipschitz = 1.0;
    m.claims_nonexpansive = true;
    m.fixed_points = {Vector(static_cast<std::size_t>(d), 0.0)};
    m.label = "identity";
    return m;
}

namespace {

// Right shift with a coordinatewise power; the last input coordinate is
// dropped so the map stays a self-map of the d-ball.
MappingSpec make_shift_power(int d, int exponent, const std::string& label) {
    if (d < 2) throw ConfigError("shift-based zoo entries need d >= 2");
    MappingSpec m;
    m.apply = [exponent](const Vector& x) {
        Vector out(x.size(), 0.0);
        for (std::size_t i = 1; i < x.size(); ++i)
            out[i] = std::pow(x[i - 1], exponent);
        return out;
    };
    m.domain_radius = 1.0;
    m.lipschitz = std::nullopt;  // power ratios grow with n near the boundary
    m.rate = AsymptoticRate::one();
    m.fixed_points = {Vector(static_cast<std::size_t>(d), 0.0)};
    m.label = label;
    return m;
}

}  // namespace

MappingSpec make_quartic_shift(int d) { return make_shift_power(d, 4, "paper_T"); }
MappingSpec make_square_shift(int d) { return make_shift_power(d, 2, "paper_I"); }

MappingSpec make_linear_contraction(int d, double a) {
    if (a < 0.0) throw ConfigError("linear_contraction requires a >= 0");
    MappingSpec m;
    m.apply = [a](const Vector& x) { return scale(a, x); };
    m.domain_radius = 1.0;
    if (a <= 1.0) m.lipschitz = a;  // a^n <= a for every power
    m.claims_nonexpansive = true;   // the class claim; a > 1 falsifies it
    m.fixed_points = {Vector(static_cast<std::size_t>(d), 0.0)};
    m.label = "linear_contraction(" + std::to_string(a) + ")";
    return m;
}

MappingSpec make_rotation(double theta) {
    MappingSpec m;
    const double c = std::cos(theta), s = std::sin(theta);
    m.apply = [c, s](const Vector& x) {
        if (x.size() != 2) throw Error("rotation acts on d = 2");
        return Vector{c * x[0] - s * x[1], s * x[0] + c * x[1]};
    };
    m.domain_radius = 1.0;
    m.lipschitz = 1.0;
    m.claims_nonexpansive = true;
    m.fixed_points = {Vector(2, 0.0)};
    m.label = "rotation(" + std::to_string(theta) + ")";
    return m;
}

FamilyConfig make_pair_family(int d) {
    FamilyConfig f;
    f.T_family = {make_quartic_shift(d)};
    f.I_family = {make_square_shift(d)};
    f.common_lambda = AsymptoticRate::one();
    f.common_mu = AsymptoticRate::one();
    f.common_F = {Vector(static_cast<std::size_t>(d), 0.0)};
    f.domain_radius = 1.0;
    return f;
}

FamilyConfig make_scaled_family(int d, int n_members) {
    if (n_members < 1) throw ConfigError("scaled_family needs N >= 1");
    FamilyConfig f;
    for (int j = 0; j < n_members; ++j) {
        double a = n_members == 1
                       ? 0.5
                       : 0.5 + 0.3 * static_cast<double>(j) / (n_members - 1);
        f.T_family.push_back(make_linear_contraction(d, a));
        f.I_family.push_back(make_identity(d));
    }
    f.common_lambda = AsymptoticRate::one();
    f.common_mu = AsymptoticRate::one();
    f.common_F = {Vector(static_cast<std::size_t>(d), 0.0)};
    f.domain_radius = 1.0;
    return f;
}

namespace {

// Parses "name(arg)" into name and an optional argument string.
std::pair<std::string, std::optional<std::string>> split_zoo_name(
    const std::string& name) {
    auto open = name.find('(');
    if (open == std::string::npos) return {name, std::nullopt};
    if (name.back() != ')') throw ConfigError("unknown zoo name: " + name);
    return {name.substr(0, open),
            name.substr(open + 1, name.size() - open - 2)};
}

double parse_double_arg(const std::string& name, const std::optional<std::string>& arg) {
    if (!arg) throw ConfigError("zoo entry " + name + " needs an argument");
    try {
        return std::stod(*arg);
    } catch (const std::exception&) {
        throw ConfigError("bad argument for zoo entry " + name + ": " + *arg);
    }
}

}  // namespace

ZooEntry zoo(const std::string& name, int d) {
    auto [base, arg] = split_zoo_name(name);
    if (base == "identity") return make_identity(d);
    if (base == "paper_T") return make_quartic_shift(d);
    if (base == "paper_I") return make_square_shift(d);
    if (base == "paper") return make_pair_family(d);
    if (base == "linear_contraction")
        return make_linear_contraction(d, parse_double_arg(base, arg));
    if (base == "rotation") return make_rotation(parse_double_arg(base, arg));
    if (base == "scaled_family") {
        double n = parse_double_arg(base, arg);
        return make_scaled_family(d, static_cast<int>(n));
    }
    throw ConfigError("unknown zoo name: " + name);
}

std::vector<std::string> zoo_names() {
    return {"identity",        "paper_T",  "paper_I",
            "linear_contraction(a)", "rotation(theta)", "paper",
            "scaled_family(N)"};
}

}  // namespace famiter
