#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "famiter/vecspace.hpp"

namespace famiter {

/// What can be said symbolically about the tail of a nonnegative sequence.
/// Used to classify sequences such as rate_n - 1 or a coefficient sequence
/// without relying on finite partial sums.
struct TailDecay {
    enum class Kind {
        Zero,      // identically zero
        PowerLaw,  // ~ const * n^(-exponent), const > 0
        Unknown    // explicit finite list: tail unknown by construction
    };
    Kind kind = Kind::Unknown;
    double exponent = 0.0;
};

/// A sequence {r_n} in [1, inf) with r_n -> 1, attached to a mapping as its
/// asymptotic nonexpansivity rate.
///
/// Forms: constant_one (r_n = 1), power (r_n = 1 + c * n^-q with c >= 0,
/// q > 0), explicit (a finite list of values >= 1; evaluation past the list
/// repeats the last value, but the tail is treated as unknown by the
/// symbolic classifiers), and pointwise_max (lazy max of member rates, the
/// common-sequence construction for families).
class AsymptoticRate {
public:
    enum class Form { ConstantOne, Power, Explicit, PointwiseMax };

    static AsymptoticRate one() { return AsymptoticRate(); }
    static AsymptoticRate power(double c, double q);
    static AsymptoticRate explicit_values(std::vector<double> values);
    static AsymptoticRate pointwise_max(std::vector<AsymptoticRate> members);

    Form form() const { return form_; }
    double c() const { return c_; }
    double q() const { return q_; }
    const std::vector<double>& values() const { return values_; }

    /// Value at n >= 1.
    double at(long n) const;

    /// sup over all n >= 1 (exact for every form; explicit lists extend with
    /// their last value).
    double sup() const;

    /// Symbolic classification of the tail of (r_n - 1).
    TailDecay decay() const;

private:
    AsymptoticRate() = default;
    Form form_ = Form::ConstantOne;
    double c_ = 0.0;
    double q_ = 1.0;
    std::vector<double> values_;
    std::vector<AsymptoticRate> members_;
};

/// A self-map of the closed ball of radius domain_radius, with metadata.
///
/// `lipschitz`, when set, claims one constant L bounding every power:
/// ||m^n x - m^n y|| <= L ||x - y|| for all n >= 1. Leave it unset for maps
/// where no such uniform constant exists.
///
/// `rate` is the mapping's asymptotic rate sequence: the lambda-sequence for
/// maps used on the T side, the mu-sequence for maps used on the I side.
struct MappingSpec {
    std::function<Vector(const Vector&)> apply;
    double domain_radius = 1.0;
    std::optional<double> lipschitz;
    bool claims_nonexpansive = false;
    AsymptoticRate rate = AsymptoticRate::one();
    std::vector<Vector> fixed_points;
    std::string label;
};

/// N pairs (T_j, I_j) sharing a feasible ball, common rate sequences and a
/// nonempty common fixed-point set F.
struct FamilyConfig {
    std::vector<MappingSpec> T_family;
    std::vector<MappingSpec> I_family;
    AsymptoticRate common_lambda = AsymptoticRate::one();
    AsymptoticRate common_mu = AsymptoticRate::one();
    std::vector<Vector> common_F;
    double domain_radius = 1.0;
    NormKind norm = NormKind::l2();

    int N() const { return static_cast<int>(T_family.size()); }
    int dimension() const {
        return common_F.empty() ? 0 : static_cast<int>(common_F.front().size());
    }
};

/// Residency tolerance for declared fixed points.
inline constexpr double kFixedPointTol = 1e-10;
/// Slack used by every sampled inequality check (power composition
/// accumulates rounding error).
inline constexpr double kCheckSlack = 1e-9;

/// Throws ConfigError unless: families have equal length N >= 1, common_F is
/// nonempty, and every p in common_F is fixed by every T_j and I_j within
/// kFixedPointTol.
void validate_family(const FamilyConfig& family);

/// k-fold composition m.apply(...m.apply(x)...). Throws
/// Error("domain violation") if any iterate leaves the domain ball by more
/// than 1e-9 (a mis-specified zoo entry, not a numerical event).
Vector power_apply(const MappingSpec& m, long k, const Vector& x);

/// Result of a sampled inequality check. A failed check is a proof (the
/// witness violates the inequality); a passed check is evidence over the
/// sampled set only.
struct CheckReport {
    bool holds = true;
    /// max over samples of (lhs - rhs); positive beyond kCheckSlack means a
    /// violation was found.
    double worst_violation = 0.0;
    std::optional<Vector> witness_x;
    std::optional<Vector> witness_y;  // second point, for pairwise checks
    long witness_power = 0;
    long samples_checked = 0;
};

/// Sampled check of ||T^n x - p|| <= mu_n ||I^n x - p|| for n <= n_max and
/// every p in F, over `samples` seeded points of the domain ball plus a
/// deterministic probe set (axis and boundary points, where violations of
/// coordinatewise maps concentrate).
CheckReport check_quasi_I_nonexpansive(const MappingSpec& T, const MappingSpec& I,
                                       std::span<const Vector> F,
                                       const AsymptoticRate& mu, long n_max,
                                       long samples, std::uint64_t seed);

/// Sampled check of ||Tx - Ty|| <= ||Ix - Iy|| over point pairs
/// (probe pairs included).
CheckReport check_I_nonexpansive(const MappingSpec& T, const MappingSpec& I,
                                 long samples, std::uint64_t seed);

/// Sampled check of ||m^n x - m^n y|| <= L ||x - y|| for n <= n_max.
CheckReport check_uniform_lipschitz(const MappingSpec& m, double L, long n_max,
                                    long samples, std::uint64_t seed);

/// Sampled check that the map sends the domain ball into itself (the
/// MappingSpec invariant; d is needed because the map itself is opaque).
CheckReport check_self_map(const MappingSpec& m, int d, long samples,
                           std::uint64_t seed);

/// Pointwise maximum of the members' rate sequences, the common sequence a
/// finite family shares. Evaluated lazily by n.
AsymptoticRate family_common_rates(std::span<const MappingSpec> family);

// ---------------------------------------------------------------------------
// Mapping zoo. Names are a stable public string contract:
//
//   "identity"                the identity map
//   "paper_T"                 right shift of fourth powers on the unit ball,
//                             truncated: (x_1,..,x_d) -> (0, x_1^4,..,x_{d-1}^4)
//   "paper_I"                 right shift of squares:   (x_1,..,x_d) -> (0, x_1^2,..)
//   "linear_contraction(a)"   x -> a*x (declared nonexpansive; a > 1 entries
//                             exist so the checkers can falsify them)
//   "rotation(theta)"         plane rotation, d = 2
//   "paper"                   the FamilyConfig pairing paper_T with paper_I, N=1
//   "scaled_family(N)"        FamilyConfig of N distinct linear contractions
//                             sharing fixed point 0, paired with identities
//
// The truncation convention for the shift maps: the last input coordinate is
// dropped, so the map stays a self-map of the d-ball; for fixed inputs the
// truncation error vanishes as d grows.
// ---------------------------------------------------------------------------

using ZooEntry = std::variant<MappingSpec, FamilyConfig>;

/// Looks up a zoo entry by its public name. Throws
/// ConfigError("unknown zoo name: ...") for anything else.
ZooEntry zoo(const std::string& name, int d);

/// Documented zoo names, in listing order.
std::vector<std::string> zoo_names();

MappingSpec make_identity(int d);
MappingSpec make_quartic_shift(int d);  // zoo name "paper_T"
MappingSpec make_square_shift(int d);   // zoo name "paper_I"
MappingSpec make_linear_contraction(int d, double a);
MappingSpec make_rotation(double theta);
FamilyConfig make_pair_family(int d);         // zoo name "paper"
FamilyConfig make_scaled_family(int d, int n_members);

}  // namespace famiter
