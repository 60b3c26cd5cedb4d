#pragma once

#include "sumcap/objective.hpp"

namespace sumcap::oracles {

// Slow, independently-derived reference implementations. They live in their
// own library target that production code never links; tests use them to
// cross-check the fast paths.

// Central difference [F(q + hΔ) − F(q − hΔ)] / (2h) with the perturbation
// applied in a single user slot. Agrees with ½ Re Tr(Ḡ_i† Δ) on smooth
// instances to O(h²).
double fd_directional_derivative(const CovarianceSet& q, const ChannelSet& c, int user,
                                 const HermMatrix& delta, double h);

// Dykstra's alternating projection between the blockwise PSD cone and the
// half-space {Σ Tr <= P}. Unlike plain alternating projection this converges
// to the exact Euclidean projection onto the intersection, which is what the
// closed-form projection must match. Throws OracleFailureError when the
// increment criterion is still above tol after max_sweeps.
std::vector<HermMatrix> dykstra_project(const std::vector<HermMatrix>& d_blocks, double P,
                                        int max_sweeps, double tol);

struct WaterfillingResult {
    double capacity_nats = 0.0;
    HermMatrix q;
};

// Closed-form K = 1 optimum: the single-user sum-power MAC is a
// point-to-point MIMO channel, so water-filling over the eigenvalues of H H†
// gives the capacity. The water level solves Σ_j max(0, w − 1/σ_j²) = P by
// bisection; q is rebuilt in the eigenbasis of H H†.
WaterfillingResult waterfilling_k1(const CMatrix& H, double P);

}  // namespace sumcap::oracles
