#include "famiter/vecspace.hpp"

#include <cmath>
#include <cstdlib>

namespace famiter {

NormKind NormKind::lp(double p) {
    if (!(p > 1.0))
        throw ConfigError("Lp norm requires p > 1, got p = " + std::to_string(p));
    return NormKind(Tag::Lp, p);
}

std::string NormKind::name() const {
    switch (tag_) {
        case Tag::L2: return "l2";
        case Tag::Lp: return "l" + std::to_string(p_);
        case Tag::Linf: return "linf";
    }
    return "?";
}

namespace {

void require_finite(const Vector& v) {
    for (double x : v)
        if (!std::isfinite(x)) throw Error("non-finite input");
}

void require_same_dim(const Vector& a, const Vector& b) {
    if (a.size() != b.size())
        throw Error("dimension mismatch: " + std::to_string(a.size()) +
                    " vs " + std::to_string(b.size()));
}

}  // namespace

double norm(const Vector& v, const NormKind& kind) {
    require_finite(v);
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    if (m == 0.0 || kind.tag() == NormKind::Tag::Linf) return m;
    // scale by the largest entry so tiny coordinates cannot underflow to a
    // spurious zero
    switch (kind.tag()) {
        case NormKind::Tag::L2: {
            double s = 0.0;
            for (double x : v) {
                double t = x / m;
                s += t * t;
            }
            return m * std::sqrt(s);
        }
        case NormKind::Tag::Lp: {
            double s = 0.0;
            for (double x : v) s += std::pow(std::abs(x) / m, kind.p());
            return m * std::pow(s, 1.0 / kind.p());
        }
        default: return m;
    }
}

double distance(const Vector& a, const Vector& b, const NormKind& kind) {
    require_same_dim(a, b);
    return norm(subtract(a, b), kind);
}

Vector convex_combine(std::span<const double> weights,
                      std::span<const Vector> points) {
    if (weights.size() != points.size() || points.empty())
        throw Error("convex_combine: weights and points must match and be nonempty");
    double sum = 0.0;
    for (double w : weights) {
        if (w < -kWeightSumTol || !std::isfinite(w))
            throw ConfigError("not a convex combination");
        sum += w;
    }
    if (std::abs(sum - 1.0) > kWeightSumTol)
        throw ConfigError("not a convex combination");

    const std::size_t d = points[0].size();
    Vector out(d, 0.0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        require_same_dim(points[0], points[i]);
        for (std::size_t c = 0; c < d; ++c) out[c] += weights[i] * points[i][c];
    }
    return out;
}

Vector add(const Vector& a, const Vector& b) {
    require_same_dim(a, b);
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

Vector subtract(const Vector& a, const Vector& b) {
    require_same_dim(a, b);
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

Vector scale(double t, const Vector& v) {
    Vector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = t * v[i];
    return out;
}

}  // namespace famiter
