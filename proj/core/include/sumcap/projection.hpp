#pragma once

#include <Eigen/Dense>
#include <vector>

#include "sumcap/objective.hpp"

namespace sumcap {

// Result of the exact projection onto Ω₊(P) = {Q_i ⪰ 0, Σ Tr(Q_i) <= P}.
struct ProjectionResult {
    CovarianceSet projected;
    double mu_star;        // optimal multiplier of the trace constraint
    int pieces_examined;   // Î values visited; always <= K·n_r + 1
};

struct MuSearchResult {
    double mu_star;
    int pieces_examined;
};

// Maximizer over μ >= 0 of the projection dual
//
//   ψ(μ) = -½ Σ_j max(0, λ_j − μ)² − μP  (+ const),
//
// which is continuous, piecewise quadratic and concave. The input spectrum
// must be sorted non-increasing. The scan walks the pieces Î = 0, 1, …: the
// Î = 0 piece is the slack test (Σ max(0, λ_j) <= P ⇒ μ* = 0, the paper's
// λ₀ = ∞ sentinel), and piece Î has the stationary candidate
// μ_Î = (Σ_{j<=Î} λ_j − P)/Î, accepted when it lands in
// [λ_{Î+1}, λ_Î] ∩ ℝ₊. Empty intervals from duplicate eigenvalues are
// skipped; endpoint values carry over between pieces by continuity.
MuSearchResult mu_search(const Eigen::VectorXd& lambda_sorted, double P);

// Exact Euclidean projection of K Hermitian blocks onto Ω₊(P), i.e. the
// minimizer of ½‖D̃ − D‖_F² over the set, D = blockdiag(Q'_1 … Q'_K).
// Each block is eigendecomposed independently (D is block diagonal, so this
// matches decomposing D whole at a fraction of the cost), the merged spectrum
// feeds mu_search, and the solution is reassembled as
// D̃* = U (Λ − μ* I)₊ U† block by block. Eigenvectors are untouched.
ProjectionResult project(const std::vector<HermMatrix>& q_prime, double P);

}  // namespace sumcap
