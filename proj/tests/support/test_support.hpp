#ifndef QHIER_TEST_SUPPORT_HPP
#define QHIER_TEST_SUPPORT_HPP

// Shared fixtures and independent oracles for the test suites. Everything
// here recomputes expected values through routes the library under test does
// not use: Taylor series for propagators, binomial recurrences for Bell
// numbers, explicit permutation conjugation for embeddings.

#include <memory>

#include <qhier/qhier.hpp>

namespace qtest {

using namespace qhier;

inline Matrix pauli_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

inline Matrix pauli_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

/// d=2 system with one-body term and 2- and 3-body potentials, all chosen so
/// nothing commutes with anything.
inline std::shared_ptr<const SystemSpec> default_system(int n_max = 3) {
    auto spec = std::make_shared<SystemSpec>();
    spec->d = 2;
    spec->hbar = 1.0;
    spec->n_max = n_max;
    Matrix h(2, 2);
    h << 0.0, 0.3, 0.3, 1.0;
    spec->one_body = h;
    spec->potentials[2] = kron(pauli_z(), pauli_z()) + 0.5 * kron(pauli_x(), pauli_x());
    spec->potentials[3] = 0.4 * kron(pauli_z(), kron(pauli_z(), pauli_z()));
    return spec;
}

/// Same model without interactions.
inline std::shared_ptr<const SystemSpec> free_system(int n_max = 3) {
    auto spec = std::make_shared<SystemSpec>();
    spec->d = 2;
    spec->hbar = 1.0;
    spec->n_max = n_max;
    Matrix h(2, 2);
    h << 0.0, 0.3, 0.3, 1.0;
    spec->one_body = h;
    return spec;
}

/// Power-series exponential, independent of the eigendecomposition route.
inline Matrix matrix_exp_taylor(const Matrix& a, int terms = 40) {
    Matrix acc = Matrix::Identity(a.rows(), a.cols());
    Matrix power = Matrix::Identity(a.rows(), a.cols());
    for (int k = 1; k <= terms; ++k) {
        power = (power * a).eval();
        power /= double(k);
        acc += power;
    }
    return acc;
}

/// Bell numbers through the binomial recurrence B_{n+1} = sum C(n,k) B_k;
/// the library uses the Bell triangle, so the routes differ.
inline std::int64_t bell_binomial(int n) {
    std::vector<std::int64_t> b{1};
    for (int m = 0; m < n; ++m) {
        std::int64_t next = 0;
        std::int64_t binom = 1;
        for (int k = 0; k <= m; ++k) {
            next += binom * b[k];
            binom = binom * (m - k) / (k + 1);
        }
        b.push_back(next);
    }
    return b[n];
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

/// Sequence whose only nonzero entry is f_n = op (labels (1..n)).
inline OperatorSequence single_entry_sequence(std::shared_ptr<const SystemSpec> spec,
                                              SequenceKind kind, const NParticleOperator& op,
                                              double weight = 3.0) {
    std::vector<NParticleOperator> e;
    for (int n = 0; n <= spec->n_max; ++n)
        e.push_back(NParticleOperator::zero(range_labels(1, n), spec->d));
    e[op.particle_count()] = op;
    return OperatorSequence::make(std::move(spec), kind, std::move(e), weight);
}

/// Marginal sequence of an N-particle operator in the ladder convention:
/// entry s = (1/(N-s)!) Tr_{s+1..N} rho. This is exp(annihilation) applied
/// to the sequence holding rho at slot N.
inline OperatorSequence marginal_sequence(std::shared_ptr<const SystemSpec> spec,
                                          const NParticleOperator& rho) {
    return exp_ladder(+1, Ladder::Annihilation,
                      single_entry_sequence(std::move(spec), SequenceKind::State, rho));
}

} // namespace qtest

#endif
