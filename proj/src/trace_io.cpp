#include "famiter/trace_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace famiter {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_trace_csv(const IterationTrace& trace, std::ostream& out) {
    out << kTraceCsvHeader << "\n";
    for (const auto& rec : trace.steps) {
        double res_T = 0.0, res_I = 0.0;
        for (double r : rec.residuals_T) res_T = std::max(res_T, r);
        for (double r : rec.residuals_I) res_I = std::max(res_I, r);
        out << rec.n << ',' << rec.k << ',' << rec.j << ',' << rec.inner.iterations
            << ',' << format_double(rec.inner.residual) << ','
            << format_double(res_T) << ',' << format_double(res_I) << ','
            << format_double(rec.dist_F) << ',' << format_double(rec.recurrence_b)
            << ',' << format_double(rec.recurrence_c) << ','
            << (rec.recurrence_ok ? 1 : 0) << "\n";
    }
}

std::string trace_csv(const IterationTrace& trace) {
    std::ostringstream os;
    write_trace_csv(trace, os);
    return os.str();
}

nlohmann::json summary_json(const IterationTrace& trace) {
    nlohmann::json j;
    j["terminated"] = trace.terminated.to_string();
    j["at_step"] = trace.terminated.at_step;
    j["stop_tol"] = trace.terminated.tol;
    if (!trace.terminated.detail.empty()) j["detail"] = trace.terminated.detail;
    j["steps"] = trace.steps.size();
    j["config_digest"] = trace.config_digest;

    double sum_b = 0.0, sum_c = 0.0;
    bool recurrence_all_ok = true;
    for (const auto& rec : trace.steps) {
        sum_b += rec.recurrence_b;
        sum_c += rec.recurrence_c;
        recurrence_all_ok = recurrence_all_ok && rec.recurrence_ok;
    }
    j["W_estimate"] = std::exp(sum_b);
    j["partial_sum_b"] = sum_b;
    j["partial_sum_c"] = sum_c;
    j["partial_sum_horizon"] = trace.steps.size();
    j["recurrence_all_ok"] = recurrence_all_ok;

    if (!trace.steps.empty()) {
        const auto& last = trace.steps.back();
        double res_T = 0.0, res_I = 0.0;
        for (double r : last.residuals_T) res_T = std::max(res_T, r);
        for (double r : last.residuals_I) res_I = std::max(res_I, r);
        j["final"] = {{"n", last.n},
                      {"res_T_max", res_T},
                      {"res_I_max", res_I},
                      {"dist_F", last.dist_F}};
    }
    return j;
}

}  // namespace famiter
