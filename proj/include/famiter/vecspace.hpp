#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace famiter {

/// A point of the (truncated) sequence space: a dense coordinate vector.
/// All vectors taking part in one experiment share a fixed dimension d >= 1.
using Vector = std::vector<double>;

/// Base error for contract violations raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid configuration or failed precondition (maps to CLI exit code 2).
struct ConfigError : Error {
    using Error::Error;
};

/// The inner fixed-point solve exhausted its iteration budget
/// (maps to CLI exit code 3).
struct SolverStallError : Error {
    SolverStallError(long step_, double residual_, const std::string& msg)
        : Error(msg), step(step_), residual(residual_) {}
    long step;
    double residual;
};

/// Which norm the ambient space carries.
///
/// L2 is the default (the Hilbert case). Lp requires p > 1 so the space is
/// uniformly convex; Linf is accepted for diagnostics only and reports
/// uniformly_convex() == false.
class NormKind {
public:
    enum class Tag { L2, Lp, Linf };

    static NormKind l2() { return NormKind(Tag::L2, 2.0); }
    static NormKind lp(double p);
    static NormKind linf() { return NormKind(Tag::Linf, 0.0); }

    Tag tag() const { return tag_; }
    double p() const { return p_; }
    bool uniformly_convex() const { return tag_ != Tag::Linf; }
    std::string name() const;

private:
    NormKind(Tag t, double p) : tag_(t), p_(p) {}
    Tag tag_;
    double p_;
};

/// ||v|| for the chosen norm. Throws Error("non-finite input") if any
/// coordinate is NaN or infinite. Zero exactly iff v is the zero vector.
double norm(const Vector& v, const NormKind& kind = NormKind::l2());

/// ||a - b||. Both arguments must share a dimension.
double distance(const Vector& a, const Vector& b,
                const NormKind& kind = NormKind::l2());

/// Componentwise weighted sum. Weights must be nonnegative and sum to 1
/// within 1e-12 (absolute), otherwise throws
/// ConfigError("not a convex combination"). All points must share a
/// dimension.
Vector convex_combine(std::span<const double> weights,
                      std::span<const Vector> points);

Vector add(const Vector& a, const Vector& b);
Vector subtract(const Vector& a, const Vector& b);
Vector scale(double t, const Vector& v);

/// Tolerance for convex-combination weight sums (weights are produced by
/// subtraction, so exact equality is not required).
inline constexpr double kWeightSumTol = 1e-12;

}  // namespace famiter
