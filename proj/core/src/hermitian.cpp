#include "sumcap/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace sumcap {

namespace {

bool allFinite(const CMatrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag()))
                return false;
    return true;
}

}  // namespace

HermMatrix::HermMatrix(const CMatrix& a) {
    if (a.rows() != a.cols())
        throw InvalidInputError("HermMatrix: matrix must be square");
    if (!allFinite(a))
        throw InvalidInputError("HermMatrix: entries must be finite");
    m_ = 0.5 * (a + a.adjoint());
}

HermMatrix HermMatrix::zero(Eigen::Index n) {
    return HermMatrix(CMatrix::Zero(n, n), exact_t{});
}

HermMatrix HermMatrix::identity(Eigen::Index n) {
    return HermMatrix(CMatrix::Identity(n, n), exact_t{});
}

HermMatrix HermMatrix::diagonal(const Eigen::VectorXd& d) {
    CMatrix m = CMatrix::Zero(d.size(), d.size());
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        if (!std::isfinite(d[i]))
            throw InvalidInputError("HermMatrix::diagonal: entries must be finite");
        m(i, i) = d[i];
    }
    return HermMatrix(std::move(m), exact_t{});
}

double HermMatrix::trace() const { return m_.trace().real(); }

double HermMatrix::maxAbsEntry() const {
    return m_.size() == 0 ? 0.0 : m_.cwiseAbs().maxCoeff();
}

HermMatrix operator+(const HermMatrix& a, const HermMatrix& b) {
    if (a.dim() != b.dim())
        throw InvalidInputError("HermMatrix: dimension mismatch in +");
    return HermMatrix(a.m_ + b.m_, HermMatrix::exact_t{});
}

HermMatrix operator-(const HermMatrix& a, const HermMatrix& b) {
    if (a.dim() != b.dim())
        throw InvalidInputError("HermMatrix: dimension mismatch in -");
    return HermMatrix(a.m_ - b.m_, HermMatrix::exact_t{});
}

HermMatrix operator*(double s, const HermMatrix& a) {
    if (!std::isfinite(s))
        throw InvalidInputError("HermMatrix: scalar must be finite");
    return HermMatrix(s * a.m_, HermMatrix::exact_t{});
}

EigDecomp herm_eig(const HermMatrix& a) {
    const Eigen::Index n = a.dim();
    if (n == 0)
        throw InvalidInputError("herm_eig: dimension must be positive");

    Eigen::SelfAdjointEigenSolver<CMatrix> es(a.matrix());
    if (es.info() != Eigen::Success) {
        const double residual =
            (es.eigenvectors() * es.eigenvalues().asDiagonal() *
                 es.eigenvectors().adjoint() -
             a.matrix())
                .norm();
        throw NumericFailureError("herm_eig: eigensolver did not converge", residual);
    }

    // The solver returns eigenvalues in increasing order; reorder to
    // non-increasing with a stable sort so ties keep solver output order.
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index i, Eigen::Index j) {
        return es.eigenvalues()[i] > es.eigenvalues()[j];
    });

    EigDecomp out;
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out.eigenvalues[i] = es.eigenvalues()[idx[static_cast<std::size_t>(i)]];
        out.eigenvectors.col(i) = es.eigenvectors().col(idx[static_cast<std::size_t>(i)]);
    }
    return out;
}

HermMatrix psd_project(const HermMatrix& a) {
    const EigDecomp e = herm_eig(a);
    const Eigen::VectorXd clamped = e.eigenvalues.cwiseMax(0.0);
    return HermMatrix(e.eigenvectors * clamped.asDiagonal() * e.eigenvectors.adjoint());
}

HermMatrix nsd_project(const HermMatrix& a) {
    const EigDecomp e = herm_eig(a);
    const Eigen::VectorXd clamped = e.eigenvalues.cwiseMin(0.0);
    return HermMatrix(e.eigenvectors * clamped.asDiagonal() * e.eigenvectors.adjoint());
}

double frob_dist(const HermMatrix& a, const HermMatrix& b) {
    if (a.dim() != b.dim())
        throw InvalidInputError("frob_dist: dimension mismatch");
    return (a.matrix() - b.matrix()).norm();
}

double real_inner(const HermMatrix& a, const HermMatrix& b) {
    if (a.dim() != b.dim())
        throw InvalidInputError("real_inner: dimension mismatch");
    // Tr(A†B) = Σ_ij conj(a_ij) b_ij, entrywise; no matrix product needed.
    return a.matrix().conjugate().cwiseProduct(b.matrix()).sum().real();
}

}  // namespace sumcap
