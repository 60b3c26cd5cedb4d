#pragma once

#include <vector>

#include "sumcap/channel.hpp"
#include "sumcap/hermitian.hpp"

namespace sumcap {

// K uplink covariance matrices Q_i, each n_r x n_r. Feasible points satisfy
// Q_i ⪰ 0 and Σ Tr(Q_i) <= P; feasibility is checked where the solver needs
// it (see is_feasible), not on construction, so test probes may hold
// slightly infeasible sets.
struct CovarianceSet {
    std::vector<HermMatrix> Q;

    int users() const { return static_cast<int>(Q.size()); }
    double sumTrace() const;
};

// K Hermitian gradient blocks, one per user.
struct GradientSet {
    std::vector<HermMatrix> G;

    int users() const { return static_cast<int>(G.size()); }
};

// How successive search directions are combined.
//   PerUser   - Fletcher-Reeves ratio per user block
//   Aggregate - one ratio from the stacked block norms
//   None      - plain gradient projection (no deflection)
enum class DeflectionMode { PerUser, Aggregate, None };

// F(Q) = ln det(I + Σ_i H_i† Q_i H_i), in nats. The argument matrix is
// factorized (Hermitian Cholesky) and the log-determinant read off the
// factor's diagonal; a raw determinant is never formed.
double objective(const CovarianceSet& q, const ChannelSet& c);

// Euclidean complex gradients Ḡ_i = 2 H_i M⁻¹ H_i† with
// M = I + Σ_j H_j† Q_j H_j factorized once and shared across users. Each Ḡ_i
// is Hermitian PSD. The directional derivative of F along a Hermitian Δ in
// slot i is ½ Re Tr(Ḡ_i† Δ); the factor 2 lives in Ḡ, not here.
GradientSet gradients(const CovarianceSet& q, const ChannelSet& c);

// Fletcher-Reeves deflection: G_i = Ḡ_i + ρ G_i^(k-1) with
// ρ = ‖Ḡ^(k)‖_F² / ‖Ḡ^(k-1)‖_F², taken per user or as one aggregate ratio.
// reset short-circuits to the plain gradients. A zero previous norm without
// reset raises DegenerateDeflectionError.
GradientSet deflect(const GradientSet& current, const GradientSet& previous_deflected,
                    const GradientSet& previous_plain, bool reset,
                    DeflectionMode mode = DeflectionMode::PerUser);

// Σ_i Re Tr(G_i† (A_i − B_i)) — the pairing on stacked blocks.
double direction_inner(const GradientSet& g, const CovarianceSet& a,
                       const CovarianceSet& b);

// Q_i ⪰ 0 within -tol·‖Q_i‖_F on eigenvalues and Σ Tr(Q_i) <= P + tol·P.
bool is_feasible(const CovarianceSet& q, const ChannelSet& c, double tol = 1e-9);

}  // namespace sumcap
