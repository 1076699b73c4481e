#ifndef QHIER_RANDOM_HPP
#define QHIER_RANDOM_HPP

#include <random>

#include "groups.hpp"

namespace qhier {

using Rng = std::mt19937_64;

inline Matrix random_gaussian_matrix(Rng& rng, long side) {
    std::normal_distribution<double> dist(0.0, 1.0);
    Matrix m(side, side);
    for (long i = 0; i < side; ++i)
        for (long j = 0; j < side; ++j) {
            const double re = dist(rng);
            const double im = dist(rng);
            m(i, j) = Complex(re, im);
        }
    return m;
}

/// B + B' from seeded Gaussian entries.
inline Matrix random_hermitian(Rng& rng, long side) {
    const Matrix b = random_gaussian_matrix(rng, side);
    return b + b.adjoint();
}

/// B'B normalized to unit trace: a random density matrix.
inline Matrix random_density(Rng& rng, long side) {
    const Matrix b = random_gaussian_matrix(rng, side);
    Matrix m = b.adjoint() * b;
    return m / m.trace().real();
}

inline Matrix random_unitary(Rng& rng, long side) {
    const Matrix b = random_gaussian_matrix(rng, side);
    Eigen::HouseholderQR<Matrix> qr(b);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (long k = 0; k < side; ++k) {
        const Complex piv = r(k, k);
        if (std::abs(piv) > 0) q.col(k) *= piv / std::abs(piv);
    }
    return q;
}

/// Exchange-symmetric Hermitian operator on (1..n). Norm stays O(1).
inline NParticleOperator random_symmetric_hermitian(const SystemSpec& spec, int n, Rng& rng) {
    const long side = spec.hilbert_dim(n);
    Matrix m = symmetrize_matrix(random_hermitian(rng, side), spec.d, n);
    m /= std::max(1.0, operator_norm(m));
    return NParticleOperator(range_labels(1, n), spec.d, std::move(m));
}

/// Exchange-symmetric density matrix on (1..n): positive, trace one.
inline NParticleOperator random_symmetric_density(const SystemSpec& spec, int n, Rng& rng) {
    const long side = spec.hilbert_dim(n);
    Matrix m = symmetrize_matrix(random_density(rng, side), spec.d, n);
    m /= m.trace().real(); // symmetrization preserves the trace; renormalize anyway
    return NParticleOperator(range_labels(1, n), spec.d, std::move(m));
}

inline OperatorSequence random_state_sequence(std::shared_ptr<const SystemSpec> spec, Rng& rng,
                                              double alpha = 3.0) {
    std::vector<NParticleOperator> e;
    e.push_back(NParticleOperator::scalar(spec->d, 1.0));
    for (int n = 1; n <= spec->n_max; ++n) e.push_back(random_symmetric_density(*spec, n, rng));
    return OperatorSequence::make(std::move(spec), SequenceKind::State, std::move(e), alpha);
}

inline OperatorSequence random_observable_sequence(std::shared_ptr<const SystemSpec> spec,
                                                   Rng& rng, double gamma = 0.3) {
    std::vector<NParticleOperator> e;
    e.push_back(NParticleOperator::scalar(spec->d, 1.0));
    for (int n = 1; n <= spec->n_max; ++n)
        e.push_back(random_symmetric_hermitian(*spec, n, rng));
    return OperatorSequence::make(std::move(spec), SequenceKind::Observable, std::move(e), gamma);
}

} // namespace qhier

#endif
