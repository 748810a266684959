#include "famiter/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace famiter {

namespace {
constexpr double kWitnessSlack = 1e-12;
constexpr double kIntegritySlack = 1e-12;
}  // namespace

RecurrenceWitness make_recurrence_witness(std::vector<double> a,
                                          std::vector<double> b,
                                          std::vector<double> c) {
    if (a.size() < 2 || b.size() + 1 < a.size() || c.size() + 1 < a.size())
        throw Error("not a valid recurrence instance");
    for (double v : a)
        if (!(v >= 0.0)) throw Error("not a valid recurrence instance");
    for (double v : b)
        if (!(v >= 0.0)) throw Error("not a valid recurrence instance");
    for (double v : c)
        if (!(v >= 0.0)) throw Error("not a valid recurrence instance");
    for (std::size_t i = 0; i + 1 < a.size(); ++i) {
        if (a[i + 1] > (1.0 + b[i]) * a[i] + c[i] + kWitnessSlack)
            throw Error("not a valid recurrence instance");
    }
    RecurrenceWitness w;
    w.a = std::move(a);
    w.b = std::move(b);
    w.c = std::move(c);
    w.partial_sum_b = std::accumulate(w.b.begin(), w.b.end(), 0.0);
    w.partial_sum_c = std::accumulate(w.c.begin(), w.c.end(), 0.0);
    w.W_estimate = std::exp(w.partial_sum_b);
    return w;
}

ConvergenceVerdict tan_xu_oracle(const RecurrenceWitness& witness, long window,
                                 double tol) {
    if (window < 1) throw Error("window must be >= 1");
    // revalidate: callers may have built the struct by hand
    make_recurrence_witness(witness.a, witness.b, witness.c);

    ConvergenceVerdict verdict;
    const std::size_t len = witness.a.size();
    const std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(window), len);
    const std::size_t start = len - w;

    double lo = witness.a[start], hi = witness.a[start], mean = 0.0;
    for (std::size_t i = start; i < len; ++i) {
        lo = std::min(lo, witness.a[i]);
        hi = std::max(hi, witness.a[i]);
        mean += witness.a[i];
    }
    mean /= static_cast<double>(w);
    verdict.cauchy_defect = hi - lo;

    auto tail_sum = [&](const std::vector<double>& s) {
        std::size_t from = s.size() > w ? s.size() - w : 0;
        double acc = 0.0;
        for (std::size_t i = from; i < s.size(); ++i) acc += s[i];
        return acc;
    };
    const bool sums_stable =
        tail_sum(witness.b) < tol && tail_sum(witness.c) < tol;

    if (verdict.cauchy_defect <= tol && sums_stable) {
        verdict.verdict = ConvergenceVerdict::Verdict::Converged;
        verdict.limit_estimate = mean;
    }
    return verdict;
}

std::vector<ResidualRow> residual_profile(const IterationTrace& trace,
                                          const FamilyConfig& family) {
    if (trace.steps.empty()) throw Error("residual_profile: empty trace");
    std::vector<ResidualRow> rows;
    rows.reserve(trace.steps.size());
    for (const auto& rec : trace.steps) {
        ResidualRow row;
        row.n = rec.n;
        if (rec.residuals_T.size() != family.T_family.size() ||
            rec.residuals_I.size() != family.I_family.size())
            throw Error("trace integrity failure");
        for (std::size_t j = 0; j < family.T_family.size(); ++j) {
            double r = distance(rec.x, family.T_family[j].apply(rec.x), family.norm);
            if (std::abs(r - rec.residuals_T[j]) > kIntegritySlack)
                throw Error("trace integrity failure");
            row.res_T_max = std::max(row.res_T_max, r);
        }
        for (std::size_t j = 0; j < family.I_family.size(); ++j) {
            double r = distance(rec.x, family.I_family[j].apply(rec.x), family.norm);
            if (std::abs(r - rec.residuals_I[j]) > kIntegritySlack)
                throw Error("trace integrity failure");
            row.res_I_max = std::max(row.res_I_max, r);
        }
        row.dist_F = distance_to_F(rec.x, family.common_F, family.norm);
        if (std::abs(row.dist_F - rec.dist_F) > kIntegritySlack)
            throw Error("trace integrity failure");
        rows.push_back(row);
    }
    return rows;
}

double distance_to_F(const Vector& x, std::span<const Vector> F,
                     const NormKind& kind) {
    if (F.empty()) throw Error("distance_to_F: empty fixed-point set");
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : F) best = std::min(best, distance(x, p, kind));
    return best;
}

std::vector<GapRow> cross_iterate_gaps(const IterationTrace& trace, int N,
                                       const NormKind& kind) {
    if (N < 1) throw Error("cross_iterate_gaps: N must be >= 1");
    const long len = static_cast<long>(trace.steps.size());
    if (len <= N) throw Error("cross_iterate_gaps: trace length must exceed N");
    std::vector<GapRow> rows;
    for (long i = 0; i + N < len; ++i) {
        GapRow row;
        row.n = trace.steps[static_cast<std::size_t>(i)].n;
        for (int j = 1; j <= N; ++j)
            row.gaps.push_back(distance(trace.steps[static_cast<std::size_t>(i)].x,
                                        trace.steps[static_cast<std::size_t>(i + j)].x,
                                        kind));
        rows.push_back(std::move(row));
    }
    return rows;
}

RecurrenceWitness witness_from_trace(const IterationTrace& trace, const Vector& p,
                                     const NormKind& kind) {
    if (trace.steps.empty()) throw Error("witness_from_trace: empty trace");
    std::vector<double> a, b, c;
    a.push_back(distance(trace.x0, p, kind));
    for (const auto& rec : trace.steps) {
        a.push_back(distance(rec.x, p, kind));
        b.push_back(rec.recurrence_b);
        c.push_back(rec.recurrence_c);
    }
    return make_recurrence_witness(std::move(a), std::move(b), std::move(c));
}

}  // namespace famiter
