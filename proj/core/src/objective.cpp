#include "sumcap/objective.hpp"

#include <cmath>
#include <string>

namespace sumcap {

namespace {

void checkShapes(const CovarianceSet& q, const ChannelSet& c) {
    validate(c);
    if (q.users() != c.K)
        throw InvalidInputError("objective: expected " + std::to_string(c.K) +
                                " covariance blocks, got " + std::to_string(q.users()));
    for (const HermMatrix& qi : q.Q)
        if (qi.dim() != c.nr)
            throw InvalidInputError("objective: covariance block is not nr x nr");
}

// M = I + Σ_j H_j† Q_j H_j, accumulated in user order so the sum is
// bit-reproducible.
CMatrix buildM(const CovarianceSet& q, const ChannelSet& c) {
    CMatrix m = CMatrix::Identity(c.nt, c.nt);
    for (int j = 0; j < c.K; ++j) {
        const CMatrix& h = c.H[static_cast<std::size_t>(j)];
        m += h.adjoint() * q.Q[static_cast<std::size_t>(j)].matrix() * h;
    }
    if (!m.allFinite())
        throw NumericFailureError("objective: I + sum_j H_j' Q_j H_j overflowed");
    return 0.5 * (m + m.adjoint());
}

Eigen::LLT<CMatrix> factorizeM(const CMatrix& m) {
    Eigen::LLT<CMatrix> llt(m);
    if (llt.info() != Eigen::Success)
        throw NumericFailureError(
            "objective: I + sum_j H_j' Q_j H_j is not positive definite");
    return llt;
}

}  // namespace

double CovarianceSet::sumTrace() const {
    double s = 0.0;
    for (const HermMatrix& qi : Q) s += qi.trace();
    return s;
}

double objective(const CovarianceSet& q, const ChannelSet& c) {
    checkShapes(q, c);
    const Eigen::LLT<CMatrix> llt = factorizeM(buildM(q, c));
    // ln det M = 2 Σ ln L_ii from the Cholesky factor; immune to det overflow.
    double logdet = 0.0;
    const auto& l = llt.matrixLLT();
    for (Eigen::Index i = 0; i < l.rows(); ++i) logdet += std::log(l(i, i).real());
    return 2.0 * logdet;
}

GradientSet gradients(const CovarianceSet& q, const ChannelSet& c) {
    checkShapes(q, c);
    const Eigen::LLT<CMatrix> llt = factorizeM(buildM(q, c));
    const CMatrix minv = llt.solve(CMatrix::Identity(c.nt, c.nt));

    GradientSet g;
    g.G.reserve(static_cast<std::size_t>(c.K));
    for (int i = 0; i < c.K; ++i) {
        const CMatrix& h = c.H[static_cast<std::size_t>(i)];
        g.G.emplace_back(CMatrix(2.0 * (h * minv * h.adjoint())));
    }
    return g;
}

GradientSet deflect(const GradientSet& current, const GradientSet& previous_deflected,
                    const GradientSet& previous_plain, bool reset, DeflectionMode mode) {
    if (reset || mode == DeflectionMode::None)
        return current;

    const int k = current.users();
    if (previous_deflected.users() != k || previous_plain.users() != k)
        throw InvalidInputError("deflect: user-count mismatch");
    for (int i = 0; i < k; ++i)
        if (current.G[static_cast<std::size_t>(i)].dim() !=
                previous_deflected.G[static_cast<std::size_t>(i)].dim() ||
            current.G[static_cast<std::size_t>(i)].dim() !=
                previous_plain.G[static_cast<std::size_t>(i)].dim())
            throw InvalidInputError("deflect: block-dimension mismatch");

    GradientSet out;
    out.G.reserve(static_cast<std::size_t>(k));

    if (mode == DeflectionMode::Aggregate) {
        double num = 0.0, den = 0.0;
        for (int i = 0; i < k; ++i) {
            const double cn = current.G[static_cast<std::size_t>(i)].frobeniusNorm();
            const double pn = previous_plain.G[static_cast<std::size_t>(i)].frobeniusNorm();
            num += cn * cn;
            den += pn * pn;
        }
        if (den == 0.0)
            throw DegenerateDeflectionError("deflect: previous gradient norm is zero");
        const double rho = num / den;
        for (int i = 0; i < k; ++i)
            out.G.push_back(current.G[static_cast<std::size_t>(i)] +
                            rho * previous_deflected.G[static_cast<std::size_t>(i)]);
        return out;
    }

    for (int i = 0; i < k; ++i) {
        const double cn = current.G[static_cast<std::size_t>(i)].frobeniusNorm();
        const double pn = previous_plain.G[static_cast<std::size_t>(i)].frobeniusNorm();
        if (pn == 0.0)
            throw DegenerateDeflectionError("deflect: previous gradient norm is zero for user " +
                                            std::to_string(i));
        const double rho = (cn * cn) / (pn * pn);
        out.G.push_back(current.G[static_cast<std::size_t>(i)] +
                        rho * previous_deflected.G[static_cast<std::size_t>(i)]);
    }
    return out;
}

double direction_inner(const GradientSet& g, const CovarianceSet& a,
                       const CovarianceSet& b) {
    if (g.users() != a.users() || g.users() != b.users())
        throw InvalidInputError("direction_inner: user-count mismatch");
    double s = 0.0;
    for (int i = 0; i < g.users(); ++i)
        s += real_inner(g.G[static_cast<std::size_t>(i)],
                        a.Q[static_cast<std::size_t>(i)] - b.Q[static_cast<std::size_t>(i)]);
    return s;
}

bool is_feasible(const CovarianceSet& q, const ChannelSet& c, double tol) {
    if (q.users() != c.K) return false;
    for (const HermMatrix& qi : q.Q) {
        if (qi.dim() != c.nr) return false;
        const EigDecomp e = herm_eig(qi);
        if (e.eigenvalues[e.eigenvalues.size() - 1] < -tol * qi.frobeniusNorm())
            return false;
    }
    return q.sumTrace() <= c.P + tol * c.P;
}

}  // namespace sumcap
