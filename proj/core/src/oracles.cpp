#include "sumcap/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sumcap::oracles {

double fd_directional_derivative(const CovarianceSet& q, const ChannelSet& c, int user,
                                 const HermMatrix& delta, double h) {
    if (user < 0 || user >= q.users())
        throw InvalidInputError("fd_directional_derivative: user index out of range");
    if (!(h > 0.0) || !std::isfinite(h))
        throw InvalidInputError("fd_directional_derivative: h must be positive");
    if (delta.dim() != q.Q[static_cast<std::size_t>(user)].dim())
        throw InvalidInputError("fd_directional_derivative: delta dimension mismatch");

    CovarianceSet plus = q;
    CovarianceSet minus = q;
    plus.Q[static_cast<std::size_t>(user)] =
        q.Q[static_cast<std::size_t>(user)] + h * delta;
    minus.Q[static_cast<std::size_t>(user)] =
        q.Q[static_cast<std::size_t>(user)] - h * delta;
    const double fp = objective(plus, c);
    const double fm = objective(minus, c);
    if (!std::isfinite(fp) || !std::isfinite(fm))
        throw NumericFailureError("fd_directional_derivative: non-finite objective");
    return (fp - fm) / (2.0 * h);
}

namespace {

Eigen::Index totalDim(const std::vector<HermMatrix>& blocks) {
    Eigen::Index n = 0;
    for (const HermMatrix& b : blocks) n += b.dim();
    return n;
}

std::vector<HermMatrix> projectPsdCone(const std::vector<HermMatrix>& x) {
    std::vector<HermMatrix> out;
    out.reserve(x.size());
    for (const HermMatrix& b : x) out.push_back(psd_project(b));
    return out;
}

std::vector<HermMatrix> projectTraceHalfspace(const std::vector<HermMatrix>& x, double P,
                                              Eigen::Index total) {
    double tr = 0.0;
    for (const HermMatrix& b : x) tr += b.trace();
    if (tr <= P) return x;
    const double shift = (tr - P) / static_cast<double>(total);
    std::vector<HermMatrix> out;
    out.reserve(x.size());
    for (const HermMatrix& b : x)
        out.push_back(b - shift * HermMatrix::identity(b.dim()));
    return out;
}

double blocksDist2(const std::vector<HermMatrix>& a, const std::vector<HermMatrix>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = frob_dist(a[i], b[i]);
        s += d * d;
    }
    return s;
}

}  // namespace

std::vector<HermMatrix> dykstra_project(const std::vector<HermMatrix>& d_blocks, double P,
                                        int max_sweeps, double tol) {
    if (!std::isfinite(P) || P < 0.0)
        throw InvalidInputError("dykstra_project: P must be finite and >= 0");
    if (d_blocks.empty())
        throw InvalidInputError("dykstra_project: need at least one block");
    const Eigen::Index total = totalDim(d_blocks);

    std::vector<HermMatrix> x = d_blocks;
    std::vector<HermMatrix> p, qCorr;
    p.reserve(d_blocks.size());
    qCorr.reserve(d_blocks.size());
    for (const HermMatrix& b : d_blocks) {
        p.push_back(HermMatrix::zero(b.dim()));
        qCorr.push_back(HermMatrix::zero(b.dim()));
    }

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        std::vector<HermMatrix> xp;
        xp.reserve(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) xp.push_back(x[i] + p[i]);
        const std::vector<HermMatrix> y = projectPsdCone(xp);
        std::vector<HermMatrix> pNew;
        pNew.reserve(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) pNew.push_back(xp[i] - y[i]);

        std::vector<HermMatrix> yq;
        yq.reserve(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) yq.push_back(y[i] + qCorr[i]);
        const std::vector<HermMatrix> xNew = projectTraceHalfspace(yq, P, total);
        std::vector<HermMatrix> qNew;
        qNew.reserve(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) qNew.push_back(yq[i] - xNew[i]);

        // Robust stopping rule: the correction increments of both projections
        // vanish exactly at the fixed point (Birgin & Raydan criterion).
        const double inc = std::sqrt(blocksDist2(pNew, p) + blocksDist2(qNew, qCorr));
        x = xNew;
        p = std::move(pNew);
        qCorr = std::move(qNew);
        if (inc <= tol) return x;
    }
    throw OracleFailureError("dykstra_project: no fixed point within " +
                             std::to_string(max_sweeps) + " sweeps");
}

WaterfillingResult waterfilling_k1(const CMatrix& H, double P) {
    if (H.size() == 0)
        throw InvalidInputError("waterfilling_k1: empty channel matrix");
    if (!std::isfinite(P) || P < 0.0)
        throw InvalidInputError("waterfilling_k1: P must be finite and >= 0");

    const Eigen::Index nr = H.rows();
    // Eigenmodes of H H†: gains g_j = σ_j², basis U shared with the optimal q.
    const EigDecomp modes = herm_eig(HermMatrix(CMatrix(H * H.adjoint())));

    WaterfillingResult out;
    out.q = HermMatrix::zero(nr);

    double gMax = 0.0;
    for (Eigen::Index j = 0; j < nr; ++j) gMax = std::max(gMax, modes.eigenvalues[j]);
    if (gMax <= 0.0 || P == 0.0) return out;  // dead channel or no power: capacity 0

    // Water level: Σ_j max(0, w − 1/g_j) is continuous and nondecreasing in w,
    // 0 at w = 0 and >= P at w = P + 1/gMin over the active modes, so bisection
    // converges unconditionally.
    double maxInv = 0.0;
    for (Eigen::Index j = 0; j < nr; ++j)
        if (modes.eigenvalues[j] > 0.0)
            maxInv = std::max(maxInv, 1.0 / modes.eigenvalues[j]);
    const auto allocated = [&](double w) {
        double s = 0.0;
        for (Eigen::Index j = 0; j < nr; ++j)
            if (modes.eigenvalues[j] > 0.0)
                s += std::max(0.0, w - 1.0 / modes.eigenvalues[j]);
        return s;
    };
    double lo = 0.0, hi = P + maxInv;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (allocated(mid) < P)
            lo = mid;
        else
            hi = mid;
    }
    const double w = 0.5 * (lo + hi);

    Eigen::VectorXd power(nr);
    double capacity = 0.0;
    for (Eigen::Index j = 0; j < nr; ++j) {
        const double g = modes.eigenvalues[j];
        power[j] = g > 0.0 ? std::max(0.0, w - 1.0 / g) : 0.0;
        if (g > 0.0 && w * g > 1.0) capacity += std::log(w * g);
    }
    out.capacity_nats = capacity;
    out.q = HermMatrix(CMatrix(modes.eigenvectors * power.asDiagonal() *
                               modes.eigenvectors.adjoint()));
    return out;
}

}  // namespace sumcap::oracles
