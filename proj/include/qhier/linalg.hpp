#ifndef QHIER_LINALG_HPP
#define QHIER_LINALG_HPP

#include <Eigen/Dense>
#include <complex>
#include <string>

#include "errors.hpp"

namespace qhier {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Absolute tolerance for residual checks on a matrix of the given side.
/// 1e-10 up to side 64, scaled linearly above.
inline double default_tolerance(Eigen::Index side) {
    return 1e-10 * std::max<double>(1.0, double(side) / 64.0);
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
    const Eigen::Index ra = a.rows(), rb = b.rows();
    Matrix out(ra * rb, ra * rb);
    for (Eigen::Index i = 0; i < ra; ++i)
        for (Eigen::Index j = 0; j < ra; ++j)
            out.block(i * rb, j * rb, rb, rb) = a(i, j) * b;
    return out;
}

/// Largest singular value.
inline double operator_norm(const Matrix& m) {
    if (m.rows() == 1 && m.cols() == 1) return std::abs(m(0, 0));
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

/// Sum of singular values (Schatten-1).
inline double trace_norm(const Matrix& m) {
    if (m.rows() == 1 && m.cols() == 1) return std::abs(m(0, 0));
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues().sum();
}

/// ||A - A'|| in operator norm; zero for exactly Hermitian input.
inline double hermiticity_defect(const Matrix& m) {
    return operator_norm(m - m.adjoint());
}

inline bool is_hermitian(const Matrix& m, double tol) {
    return hermiticity_defect(m) <= tol * std::max(1.0, operator_norm(m));
}

/// Smallest eigenvalue of a Hermitian matrix.
inline double min_eigenvalue(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(((m + m.adjoint()) / 2.0).eval(),
                                             Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

/// exp(-i * theta * h) for Hermitian h, via eigendecomposition so the result
/// is unitary to round-off. theta == 0 returns the exact identity.
inline Matrix hermitian_propagator(const Matrix& h, double theta) {
    if (h.rows() != h.cols())
        throw ValidationError("hermitian_propagator: matrix not square");
    if (!is_hermitian(h, 1e-10))
        throw ValidationError("hermitian_propagator: input not Hermitian within tolerance");
    if (theta == 0.0)
        return Matrix::Identity(h.rows(), h.cols());
    Eigen::SelfAdjointEigenSolver<Matrix> es(((h + h.adjoint()) / 2.0).eval());
    const Eigen::Index n = h.rows();
    Eigen::VectorXcd phases(n);
    for (Eigen::Index k = 0; k < n; ++k)
        phases(k) = std::exp(Complex(0.0, -theta * es.eigenvalues()(k)));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

} // namespace qhier

#endif
