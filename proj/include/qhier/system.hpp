#ifndef QHIER_SYSTEM_HPP
#define QHIER_SYSTEM_HPP

#include <map>

#include "operators.hpp"
#include "partitions.hpp"

namespace qhier {

/// Physical model on a finite-dimensional single-particle space: dimension,
/// Planck constant, truncation order, one-body Hamiltonian and k-body
/// interaction potentials (exchange-symmetric, Hermitian; absent k means the
/// zero potential).
struct SystemSpec {
    int d = 2;
    double hbar = 1.0;
    int n_max = 1;
    Matrix one_body;
    std::map<int, Matrix> potentials;
    long dim_cap = 4096;

    long hilbert_dim(int nparticles) const {
        long side = 1;
        for (int i = 0; i < nparticles; ++i) {
            side *= d;
            if (side > dim_cap)
                throw ResourceError("Hilbert dimension d^" + std::to_string(nparticles) +
                                    " exceeds cap " + std::to_string(dim_cap));
        }
        return side;
    }

    void validate() const {
        if (d < 2) throw ValidationError("SystemSpec: d must be >= 2");
        if (hbar <= 0.0) throw ValidationError("SystemSpec: hbar must be positive");
        if (n_max < 1) throw ValidationError("SystemSpec: n_max must be >= 1");
        hilbert_dim(n_max);
        if (one_body.rows() != d || one_body.cols() != d)
            throw ValidationError("SystemSpec: one_body must be d x d");
        if (!is_hermitian(one_body, 1e-10))
            throw ValidationError("SystemSpec: one_body is not Hermitian within tolerance");
        for (const auto& [k, phi] : potentials) {
            if (k < 2)
                throw ValidationError("SystemSpec: potential order k must be >= 2, got " +
                                      std::to_string(k));
            const long side = int_pow(d, k);
            if (phi.rows() != side || phi.cols() != side)
                throw ValidationError("SystemSpec: potential k=" + std::to_string(k) +
                                      " must have side d^k");
            if (!is_hermitian(phi, 1e-10))
                throw ValidationError("SystemSpec: potential k=" + std::to_string(k) +
                                      " is not Hermitian within tolerance");
            const double defect = exchange_symmetry_defect(phi, d, k);
            if (defect > 1e-10 * std::max(1.0, operator_norm(phi)))
                throw ValidationError("SystemSpec: potential k=" + std::to_string(k) +
                                      " is not exchange-symmetric (defect " +
                                      std::to_string(defect) + ")");
        }
    }
};

/// H on the given labels: sum of embedded one-body terms plus, for every
/// declared k-body potential, its embedding on every k-subset. Empty labels
/// give the 1x1 zero (the vacuum Hamiltonian).
inline NParticleOperator build_hamiltonian(const SystemSpec& spec, const Labels& labels) {
    const int n = int(labels.size());
    const long side = spec.hilbert_dim(n);
    Matrix h = Matrix::Zero(side, side);
    for (int i : labels)
        h += embed_matrix(spec.one_body, {i}, labels, spec.d);
    for (const auto& [k, phi] : spec.potentials) {
        if (k > n) continue;
        for (const Labels& sub : subsets_of_size(labels, k))
            h += embed_matrix(phi, sub, labels, spec.d);
    }
    return NParticleOperator(labels, spec.d, std::move(h));
}

inline NParticleOperator build_hamiltonian(const SystemSpec& spec, int nparticles) {
    return build_hamiltonian(spec, range_labels(1, nparticles));
}

} // namespace qhier

#endif
