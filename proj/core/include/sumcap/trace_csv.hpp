#pragma once

#include <iosfwd>

#include "sumcap/solver.hpp"

namespace sumcap {

// Writes the convergence trace as CSV, one row per trace record (row 0 is the
// initial point). Columns:
//
//   k, objective_nats, objective_bits, alpha, armijo_trials, mu_star,
//   pieces_examined, max_elem_delta, cum_wall_ms
//
// preceded by a "# sumcap-trace v1" version line and the header row.
// cum_wall_ms is written as 0 unless include_timing is set, so identical runs
// produce byte-identical files; pass include_timing for profiling output.
void write_trace_csv(std::ostream& out, const SolveResult& result,
                     bool include_timing = false);

}  // namespace sumcap
