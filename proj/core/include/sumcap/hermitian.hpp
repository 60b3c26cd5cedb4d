#pragma once

#include <Eigen/Dense>
#include <complex>

#include "sumcap/errors.hpp"

namespace sumcap {

using Cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

// Square complex Hermitian matrix, the currency of every module here.
//
// Construction stores (A + A†)/2, which makes conjugate symmetry exact in
// IEEE arithmetic and pins diagonal imaginary parts to zero. Sums, differences
// and real scalings of exactly Hermitian matrices stay exactly Hermitian, so
// those operators skip the re-symmetrization. Entries must be finite.
class HermMatrix {
public:
    HermMatrix() = default;
    explicit HermMatrix(const CMatrix& a);

    static HermMatrix zero(Eigen::Index n);
    static HermMatrix identity(Eigen::Index n);
    static HermMatrix diagonal(const Eigen::VectorXd& d);

    Eigen::Index dim() const { return m_.rows(); }
    const CMatrix& matrix() const { return m_; }
    Cplx operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

    double trace() const;
    double frobeniusNorm() const { return m_.norm(); }
    double maxAbsEntry() const;

    friend HermMatrix operator+(const HermMatrix& a, const HermMatrix& b);
    friend HermMatrix operator-(const HermMatrix& a, const HermMatrix& b);
    friend HermMatrix operator*(double s, const HermMatrix& a);

private:
    struct exact_t {};
    HermMatrix(CMatrix m, exact_t) : m_(std::move(m)) {}

    CMatrix m_;
};

// Spectral factorization A = U diag(λ) U†.
struct EigDecomp {
    Eigen::VectorXd eigenvalues;  // sorted non-increasing
    CMatrix eigenvectors;         // unitary; column i pairs with eigenvalues[i]
};

// Eigendecomposition of a Hermitian matrix. Eigenvalues come back sorted
// non-increasing; ties keep the eigensolver's column order (stable sort) so
// repeated runs give identical factors.
EigDecomp herm_eig(const HermMatrix& a);

// A₊ = U diag(max(λ_i, 0)) U†, the nearest PSD matrix in Frobenius distance.
HermMatrix psd_project(const HermMatrix& a);

// A₋ = U diag(min(λ_i, 0)) U†. A₊ and A₋ are orthogonal and sum to A
// (Moreau decomposition of the PSD/NSD cone pair).
HermMatrix nsd_project(const HermMatrix& a);

// ‖A − B‖_F = (Tr[(A−B)†(A−B)])^{1/2}.
double frob_dist(const HermMatrix& a, const HermMatrix& b);

// Re Tr(A†B). Real part of the trace pairing; exact pairing used by the
// Armijo comparison.
double real_inner(const HermMatrix& a, const HermMatrix& b);

}  // namespace sumcap
