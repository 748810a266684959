#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

#include "famiter/solver.hpp"

namespace famiter {

/// Roundtrip-safe decimal rendering ('.' separator, %.17g).
std::string format_double(double v);

/// Fixed CSV contract. Header:
///   n,k,j,inner_iters,inner_residual,res_T_max,res_I_max,dist_F,b_n,c_n,recurrence_ok
/// one row per step, newline-terminated, recurrence_ok rendered as 1/0.
void write_trace_csv(const IterationTrace& trace, std::ostream& out);
std::string trace_csv(const IterationTrace& trace);

inline constexpr const char* kTraceCsvHeader =
    "n,k,j,inner_iters,inner_residual,res_T_max,res_I_max,dist_F,b_n,c_n,"
    "recurrence_ok";

/// Run summary: termination status, final residuals and dist_F, and the
/// partial-sum estimate of W = exp(sum b_n) with its horizon.
nlohmann::json summary_json(const IterationTrace& trace);

}  // namespace famiter
