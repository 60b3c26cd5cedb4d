#include "sumcap/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

namespace sumcap {

namespace {

CovarianceSet lerp(const CovarianceSet& q, const CovarianceSet& q_bar, double alpha) {
    CovarianceSet out;
    out.Q.reserve(q.Q.size());
    for (std::size_t i = 0; i < q.Q.size(); ++i)
        out.Q.push_back(q.Q[i] + alpha * (q_bar.Q[i] - q.Q[i]));
    return out;
}

double maxElemDelta(const CovarianceSet& a, const CovarianceSet& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.Q.size(); ++i)
        d = std::max(d, (a.Q[i] - b.Q[i]).maxAbsEntry());
    return d;
}

std::vector<HermMatrix> stepBlocks(const CovarianceSet& q, const GradientSet& g,
                                   double s) {
    std::vector<HermMatrix> out;
    out.reserve(q.Q.size());
    for (std::size_t i = 0; i < q.Q.size(); ++i) out.push_back(q.Q[i] + s * g.G[i]);
    return out;
}

}  // namespace

void validate(const SolverConfig& cfg) {
    if (!(cfg.beta > 0.0 && cfg.beta < 1.0))
        throw InvalidInputError("SolverConfig: beta must lie in (0,1)");
    if (!(cfg.sigma > 0.0 && cfg.sigma < 1.0))
        throw InvalidInputError("SolverConfig: sigma must lie in (0,1)");
    if (!(cfg.epsilon > 0.0) || !std::isfinite(cfg.epsilon))
        throw InvalidInputError("SolverConfig: epsilon must be positive");
    if (cfg.max_iter < 1)
        throw InvalidInputError("SolverConfig: max_iter must be >= 1");
    if (cfg.max_armijo_trials < 1)
        throw InvalidInputError("SolverConfig: max_armijo_trials must be >= 1");
    if (cfg.fr_reset_period && *cfg.fr_reset_period < 1)
        throw InvalidInputError("SolverConfig: fr_reset_period must be >= 1");
}

ArmijoResult armijo_search(const CovarianceSet& q, const CovarianceSet& q_bar,
                           const GradientSet& g, double f_q, const SolverConfig& cfg,
                           const ChannelSet& c) {
    validate(cfg);
    const double inner = direction_inner(g, q_bar, q);
    double alpha = 1.0;
    for (int m = 0; m < cfg.max_armijo_trials; ++m) {
        const double f_new = objective(lerp(q, q_bar, alpha), c);
        if (f_new - f_q >= cfg.sigma * alpha * inner) return {alpha, m, f_new, false};
        alpha *= cfg.beta;
    }
    return {0.0, cfg.max_armijo_trials, f_q, true};
}

CovarianceSet uniform_power_init(const ChannelSet& c) {
    validate(c);
    const double share = c.P / static_cast<double>(c.K * c.nr);
    CovarianceSet q;
    q.Q.reserve(static_cast<std::size_t>(c.K));
    for (int i = 0; i < c.K; ++i) q.Q.push_back(share * HermMatrix::identity(c.nr));
    return q;
}

SolveResult solve(const ChannelSet& c, const SolverConfig& cfg,
                  std::optional<CovarianceSet> q0, const IterationObserver& observer) {
    validate(c);
    validate(cfg);
    const int resetPeriod = cfg.fr_reset_period.value_or(c.K * c.nr);

    CovarianceSet q;
    if (q0) {
        if (!is_feasible(*q0, c))
            throw InvalidInputError("solve: q0 is not feasible");
        q = std::move(*q0);
    } else {
        q = uniform_power_init(c);
    }

    const auto t0 = std::chrono::steady_clock::now();
    const auto elapsedMs = [&t0] {
        return std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - t0)
            .count();
    };

    SolveResult result;
    result.status = SolveStatus::MaxIterReached;
    double f = objective(q, c);
    result.trace.push_back(IterationRecord{.k = 0, .objective_nats = f});
    result.cum_wall_ms.push_back(0.0);

    GradientSet prevPlain, prevDeflected;
    bool forceReset = false;
    for (int k = 1; k <= cfg.max_iter; ++k) {
        try {
            const GradientSet plain = gradients(q, c);
            bool reset = (k == 1) || ((k - 1) % resetPeriod == 0) || forceReset;
            forceReset = false;
            GradientSet g;
            try {
                g = deflect(plain, prevDeflected, prevPlain, reset, cfg.deflection_mode);
            } catch (const DegenerateDeflectionError&) {
                g = plain;
                reset = true;
            }

            ProjectionResult proj = project(stepBlocks(q, g, 1.0), c.P);
            double inner = direction_inner(g, proj.projected, q);
            if (!reset) {
                // Restart from the plain gradient when the deflected chord is
                // no longer a usable ascent direction: either its pairing with
                // the gradient set is non-positive, or the Armijo slope target
                // sigma*<G, D> exceeds the true slope (1/2)<Ḡ, D>, which makes
                // the line search fail at every small step.
                const double slope = 0.5 * direction_inner(plain, proj.projected, q);
                if (inner <= 0.0 || slope <= cfg.sigma * inner) {
                    g = plain;
                    reset = true;
                    proj = project(stepBlocks(q, g, 1.0), c.P);
                    inner = direction_inner(g, proj.projected, q);
                }
            }

            ArmijoResult step = armijo_search(q, proj.projected, g, f, cfg, c);
            if (step.stalled && !reset) {
                // Accumulated deflection can make the Armijo slope target
                // unattainable along the projected chord; restart from the
                // plain gradient before calling the iterate stationary.
                g = plain;
                reset = true;
                proj = project(stepBlocks(q, g, 1.0), c.P);
                step = armijo_search(q, proj.projected, g, f, cfg, c);
            }
            if (step.stalled) {
                // The plain gradient cannot improve the objective either: the
                // iterate is numerically stationary. Record the attempt and
                // stop.
                const IterationRecord rec{.k = k,
                                          .objective_nats = f,
                                          .armijo_trials = step.m,
                                          .alpha = 0.0,
                                          .max_elem_delta = 0.0,
                                          .mu_star = proj.mu_star,
                                          .pieces_examined = proj.pieces_examined};
                result.trace.push_back(rec);
                result.cum_wall_ms.push_back(elapsedMs());
                if (observer) observer(rec, q);
                result.status = SolveStatus::Converged;
                break;
            }

            CovarianceSet qNew = lerp(q, proj.projected, step.alpha);
            const double delta = maxElemDelta(qNew, q);
            const IterationRecord rec{.k = k,
                                      .objective_nats = step.f_new,
                                      .armijo_trials = step.m + 1,
                                      .alpha = step.alpha,
                                      .max_elem_delta = delta,
                                      .mu_star = proj.mu_star,
                                      .pieces_examined = proj.pieces_examined};
            result.trace.push_back(rec);
            result.cum_wall_ms.push_back(elapsedMs());

            q = std::move(qNew);
            f = step.f_new;
            prevPlain = plain;
            prevDeflected = std::move(g);
            if (observer) observer(rec, q);

            if (delta < cfg.epsilon) {
                // A projection-restricted deflected direction can move almost
                // nothing away from stationarity, so the step-size test is
                // only trusted on plain-gradient iterations; otherwise it
                // triggers a Fletcher-Reeves restart.
                if (reset) {
                    result.status = SolveStatus::Converged;
                    break;
                }
                forceReset = true;
            }
        } catch (const NumericFailureError&) {
            result.status = SolveStatus::NumericFailure;
            break;
        }
    }

    result.q_star = std::move(q);
    result.objective_nats = f;
    result.iterations = static_cast<int>(result.trace.size()) - 1;
    return result;
}

}  // namespace sumcap
