#include "sumcap/projection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sumcap {

MuSearchResult mu_search(const Eigen::VectorXd& lambda_sorted, double P) {
    const Eigen::Index n = lambda_sorted.size();
    for (Eigen::Index j = 0; j < n; ++j) {
        if (!std::isfinite(lambda_sorted[j]))
            throw InvalidInputError("mu_search: eigenvalues must be finite");
        if (j > 0 && lambda_sorted[j] > lambda_sorted[j - 1])
            throw InvalidInputError("mu_search: eigenvalues must be sorted non-increasing");
    }
    if (!std::isfinite(P) || P < 0.0)
        throw InvalidInputError("mu_search: P must be finite and >= 0");

    // Piece 0: if the clamped spectrum already fits the budget the trace
    // constraint is slack and μ* = 0.
    int pieces = 1;
    double clampedSum = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) clampedSum += std::max(0.0, lambda_sorted[j]);
    if (clampedSum <= P) return {0.0, pieces};

    // Otherwise the constraint is active: ψ'(μ) = Σ_j max(0, λ_j − μ) − P has
    // a unique root μ* > 0. Walk the pieces in decreasing-eigenvalue order.
    double prefix = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        ++pieces;
        prefix += lambda_sorted[i];
        const double candidate = (prefix - P) / static_cast<double>(i + 1);
        const double upper = lambda_sorted[i];
        const double lowerRaw =
            (i + 1 < n) ? lambda_sorted[i + 1] : -std::numeric_limits<double>::infinity();
        const double lower = std::max(lowerRaw, 0.0);
        if (upper < 0.0) break;  // remaining intervals have empty ℝ₊ intersection
        if (candidate > upper) return {upper, pieces};  // root pinned at the boundary
        if (candidate >= lower) return {candidate, pieces};
        // candidate below this piece: the root lies further down the spectrum
    }
    // Unreachable in exact arithmetic once the slack test has failed.
    return {0.0, pieces};
}

ProjectionResult project(const std::vector<HermMatrix>& q_prime, double P) {
    if (!std::isfinite(P) || P < 0.0)
        throw InvalidInputError("project: P must be finite and >= 0");
    if (q_prime.empty())
        throw InvalidInputError("project: need at least one block");

    std::vector<EigDecomp> eigs;
    eigs.reserve(q_prime.size());
    Eigen::Index total = 0;
    for (const HermMatrix& b : q_prime) {
        eigs.push_back(herm_eig(b));
        total += b.dim();
    }

    // Merge the per-block spectra into one non-increasing vector. The sort is
    // stable over (block, position) insertion order, so ties across blocks are
    // broken by block index, deterministically.
    std::vector<double> merged;
    merged.reserve(static_cast<std::size_t>(total));
    for (const EigDecomp& e : eigs)
        for (Eigen::Index j = 0; j < e.eigenvalues.size(); ++j)
            merged.push_back(e.eigenvalues[j]);
    std::stable_sort(merged.begin(), merged.end(), std::greater<double>());

    Eigen::VectorXd lambda(static_cast<Eigen::Index>(merged.size()));
    for (Eigen::Index j = 0; j < lambda.size(); ++j)
        lambda[j] = merged[static_cast<std::size_t>(j)];

    const MuSearchResult mu = mu_search(lambda, P);

    ProjectionResult out;
    out.mu_star = mu.mu_star;
    out.pieces_examined = mu.pieces_examined;
    out.projected.Q.reserve(q_prime.size());
    for (const EigDecomp& e : eigs) {
        const Eigen::VectorXd shifted =
            (e.eigenvalues.array() - mu.mu_star).cwiseMax(0.0).matrix();
        out.projected.Q.emplace_back(
            CMatrix(e.eigenvectors * shifted.asDiagonal() * e.eigenvectors.adjoint()));
    }
    return out;
}

}  // namespace sumcap
