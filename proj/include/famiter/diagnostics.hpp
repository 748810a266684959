#pragma once

#include <optional>
#include <span>
#include <vector>

#include "famiter/mappings.hpp"
#include "famiter/solver.hpp"
#include "famiter/vecspace.hpp"

namespace famiter {

/// A concrete instance of the recurrence a_{n+1} <= (1 + b_n) a_n + c_n with
/// nonnegative entries, plus the partial sums driving the convergence
/// argument. W_estimate = exp(partial_sum_b) is a partial-sum estimate of the
/// infinite-product bound, reported together with the horizon it was
/// computed at.
struct RecurrenceWitness {
    std::vector<double> a;
    std::vector<double> b;
    std::vector<double> c;
    double partial_sum_b = 0.0;
    double partial_sum_c = 0.0;
    double W_estimate = 1.0;
};

/// Validates the recurrence inequality (slack 1e-12) and fills the partial
/// sums. Throws Error("not a valid recurrence instance") otherwise.
RecurrenceWitness make_recurrence_witness(std::vector<double> a,
                                          std::vector<double> b,
                                          std::vector<double> c);

struct ConvergenceVerdict {
    enum class Verdict { Converged, Undecided };
    std::optional<double> limit_estimate;
    double cauchy_defect = 0.0;  // max spread of a over the last window
    Verdict verdict = Verdict::Undecided;
};

/// Numeric stand-in for the limit-existence lemma: declares convergence only
/// when the tail window of a is Cauchy within tol AND the partial sums of b
/// and c have stabilized (their last-window increments are below tol).
/// Limits are unobservable, so the verdict is converged/undecided, never
/// "diverged".
ConvergenceVerdict tan_xu_oracle(const RecurrenceWitness& witness, long window,
                                 double tol);

struct ResidualRow {
    long n = 0;
    double res_T_max = 0.0;
    double res_I_max = 0.0;
    double dist_F = 0.0;
};

/// Recomputes the residual table from the stored iterates, independently of
/// the per-step records, and cross-checks the two within 1e-12. A mismatch
/// throws Error("trace integrity failure").
std::vector<ResidualRow> residual_profile(const IterationTrace& trace,
                                          const FamilyConfig& family);

/// min over p in F of ||x - p||. Throws on empty F.
double distance_to_F(const Vector& x, std::span<const Vector> F,
                     const NormKind& kind = NormKind::l2());

struct GapRow {
    long n = 0;
    std::vector<double> gaps;  // ||x_n - x_{n+j}|| for j = 1..N
};

/// Cross-iterate gap table; decays to zero on converging runs.
std::vector<GapRow> cross_iterate_gaps(const IterationTrace& trace, int N,
                                       const NormKind& kind = NormKind::l2());

/// Builds the recurrence witness a_n = ||x_{n-1} - p|| from a trace,
/// carrying over the recorded b_n and c_n.
RecurrenceWitness witness_from_trace(const IterationTrace& trace, const Vector& p,
                                     const NormKind& kind = NormKind::l2());

}  // namespace famiter
