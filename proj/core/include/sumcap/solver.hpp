#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "sumcap/projection.hpp"

namespace sumcap {

enum class Units { Nats, Bits };

// Tuning knobs for the projected conjugate gradient loop. The defaults are
// ordinary projected-gradient practice; nothing here is instance-specific
// except fr_reset_period, which falls back to K·n_r when unset.
struct SolverConfig {
    double beta = 0.5;    // Armijo contraction, in (0,1)
    double sigma = 0.1;   // Armijo slope fraction, in (0,1)
    double epsilon = 1e-3;  // stop when max elementwise |ΔQ| drops below this
    int max_iter = 1000;
    int max_armijo_trials = 40;
    DeflectionMode deflection_mode = DeflectionMode::PerUser;
    std::optional<int> fr_reset_period;  // deflection restart period; default K·n_r
    Units report_units = Units::Nats;    // reporting only; the solver works in nats
};

// Throws InvalidInputError if any field is out of range.
void validate(const SolverConfig& cfg);

// One row of the convergence trace.
struct IterationRecord {
    int k = 0;
    double objective_nats = 0.0;
    int armijo_trials = 0;  // objective evaluations spent in the line search (m+1)
    double alpha = 0.0;     // accepted step
    double max_elem_delta = 0.0;  // max |entry| of Q^(k) − Q^(k−1), the stopping metric
    double mu_star = 0.0;
    int pieces_examined = 0;
};

enum class SolveStatus { Converged, MaxIterReached, NumericFailure };

struct SolveResult {
    CovarianceSet q_star;
    double objective_nats = 0.0;
    int iterations = 0;
    SolveStatus status = SolveStatus::MaxIterReached;
    std::vector<IterationRecord> trace;  // trace[0] is the initial point
    // Cumulative wall-clock per trace row. Measured, hence not reproducible
    // across runs; everything else in the result is deterministic.
    std::vector<double> cum_wall_ms;
};

struct ArmijoResult {
    double alpha = 0.0;
    int m = 0;            // accepted exponent: alpha = beta^m
    double f_new = 0.0;   // objective at the accepted point
    bool stalled = false; // no m within max_armijo_trials satisfied the test
};

// Armijo step selection along the projection arc: the first m in {0, 1, …}
// with  F(Q + β^m (Q̄ − Q)) − F(Q) >= σ β^m ⟨G, Q̄ − Q⟩. Each trial evaluates
// F afresh; the trial count is reported for complexity accounting. Exceeding
// max_armijo_trials returns stalled instead of throwing.
ArmijoResult armijo_search(const CovarianceSet& q, const CovarianceSet& q_bar,
                           const GradientSet& g, double f_q, const SolverConfig& cfg,
                           const ChannelSet& c);

// Uniform-power start: Q_i = (P / (K·n_r)) I, feasible and full rank.
CovarianceSet uniform_power_init(const ChannelSet& c);

// Called after every accepted iteration with the new iterate; used by tests
// and progress displays. Must not mutate the iterate.
using IterationObserver =
    std::function<void(const IterationRecord&, const CovarianceSet&)>;

// The main loop: at iterate Q, form the (deflected) gradient G, project
// Q + G onto Ω₊(P), pick the Armijo step along the chord to the projection,
// and stop once the largest elementwise change falls below epsilon or
// max_iter is hit. Every reported iterate is feasible and the objective is
// non-decreasing along the trace. Numeric failures from inner modules end the
// run with the partial trace preserved.
SolveResult solve(const ChannelSet& c, const SolverConfig& cfg,
                  std::optional<CovarianceSet> q0 = std::nullopt,
                  const IterationObserver& observer = {});

}  // namespace sumcap
