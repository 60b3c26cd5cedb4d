#include "sumcap/trace_csv.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace sumcap {

void write_trace_csv(std::ostream& out, const SolveResult& result,
                     bool include_timing) {
    out << "# sumcap-trace v1\n";
    out << "k,objective_nats,objective_bits,alpha,armijo_trials,mu_star,"
           "pieces_examined,max_elem_delta,cum_wall_ms\n";
    char buf[512];
    for (std::size_t i = 0; i < result.trace.size(); ++i) {
        const IterationRecord& r = result.trace[i];
        const double wall =
            include_timing && i < result.cum_wall_ms.size() ? result.cum_wall_ms[i] : 0.0;
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%d,%.17g,%d,%.17g,%.3f\n",
                      r.k, r.objective_nats, r.objective_nats / M_LN2, r.alpha,
                      r.armijo_trials, r.mu_star, r.pieces_examined, r.max_elem_delta,
                      wall);
        out << buf;
    }
}

}  // namespace sumcap
