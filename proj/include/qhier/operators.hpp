#ifndef QHIER_OPERATORS_HPP
#define QHIER_OPERATORS_HPP

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <vector>

#include "linalg.hpp"

namespace qhier {

/// Particle labels: positive integers, kept sorted and distinct.
using Labels = std::vector<int>;

inline bool sorted_distinct(const Labels& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i - 1] >= v[i]) return false;
    return true;
}

inline Labels label_union(const Labels& a, const Labels& b) {
    Labels out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline Labels label_difference(const Labels& a, const Labels& b) {
    Labels out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline bool label_subset(const Labels& sub, const Labels& super) {
    return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

inline Labels range_labels(int first, int last) { // inclusive; empty if last < first
    Labels out;
    for (int i = first; i <= last; ++i) out.push_back(i);
    return out;
}

inline std::string label_string(const Labels& v) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << ')';
    return os.str();
}

inline long int_pow(long base, int exp) {
    long r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

// ---------------------------------------------------------------------------
// Tensor index arithmetic. Factors are ordered by ascending particle label;
// the first factor is the most significant digit of the row/column index.
// ---------------------------------------------------------------------------

inline void decompose_index(long idx, int d, int nfactors, int* digits) {
    for (int q = nfactors - 1; q >= 0; --q) {
        digits[q] = int(idx % d);
        idx /= d;
    }
}

inline long compose_index(const int* digits, int d, int nfactors) {
    long idx = 0;
    for (int q = 0; q < nfactors; ++q) idx = idx * d + digits[q];
    return idx;
}

/// Dense operator on the tensor product of the single-particle spaces at the
/// given labels. |labels| = 0 is the vacuum component: a 1x1 matrix.
struct NParticleOperator {
    Labels labels;
    int d = 2;
    Matrix data;

    NParticleOperator() = default;
    NParticleOperator(Labels labels_, int d_, Matrix data_)
        : labels(std::move(labels_)), d(d_), data(std::move(data_)) {
        if (d < 1) throw ValidationError("NParticleOperator: d must be >= 1");
        if (!sorted_distinct(labels))
            throw ValidationError("NParticleOperator: labels must be strictly increasing");
        for (int l : labels)
            if (l <= 0) throw ValidationError("NParticleOperator: labels must be positive");
        const long side = int_pow(d, int(labels.size()));
        if (data.rows() != side || data.cols() != side)
            throw ValidationError("NParticleOperator: matrix side " +
                                  std::to_string(data.rows()) + " does not equal d^" +
                                  std::to_string(labels.size()));
    }

    static NParticleOperator zero(Labels labels, int d) {
        const long side = int_pow(d, int(labels.size()));
        return NParticleOperator(std::move(labels), d, Matrix::Zero(side, side));
    }

    static NParticleOperator identity(Labels labels, int d) {
        const long side = int_pow(d, int(labels.size()));
        return NParticleOperator(std::move(labels), d, Matrix::Identity(side, side));
    }

    static NParticleOperator scalar(int d, Complex value) {
        Matrix m(1, 1);
        m(0, 0) = value;
        return NParticleOperator({}, d, std::move(m));
    }

    int particle_count() const { return int(labels.size()); }
    long side() const { return data.rows(); }
    Complex trace() const { return data.trace(); }

    NParticleOperator adjoint() const {
        return NParticleOperator(labels, d, data.adjoint());
    }
};

inline void require_same_support(const NParticleOperator& a, const NParticleOperator& b,
                                 const char* what) {
    if (a.d != b.d || a.labels != b.labels)
        throw LabelError(std::string(what) + ": operands live on different label sets " +
                         label_string(a.labels) + " vs " + label_string(b.labels));
}

inline NParticleOperator operator+(const NParticleOperator& a, const NParticleOperator& b) {
    require_same_support(a, b, "operator+");
    return NParticleOperator(a.labels, a.d, a.data + b.data);
}

inline NParticleOperator operator-(const NParticleOperator& a, const NParticleOperator& b) {
    require_same_support(a, b, "operator-");
    return NParticleOperator(a.labels, a.d, a.data - b.data);
}

inline NParticleOperator operator*(Complex c, const NParticleOperator& a) {
    return NParticleOperator(a.labels, a.d, c * a.data);
}

inline NParticleOperator operator*(double c, const NParticleOperator& a) {
    return NParticleOperator(a.labels, a.d, c * a.data);
}

inline NParticleOperator operator*(const NParticleOperator& a, const NParticleOperator& b) {
    require_same_support(a, b, "operator*");
    return NParticleOperator(a.labels, a.d, a.data * b.data);
}

/// Positions (0-based) of the labels of `sub` within `super`.
inline std::vector<int> label_positions(const Labels& sub, const Labels& super) {
    std::vector<int> pos;
    pos.reserve(sub.size());
    std::size_t j = 0;
    for (int x : sub) {
        while (j < super.size() && super[j] < x) ++j;
        if (j == super.size() || super[j] != x)
            throw LabelError("label set " + label_string(sub) + " is not contained in " +
                             label_string(super));
        pos.push_back(int(j));
    }
    return pos;
}

/// Place `sub` (a matrix on the factors named by `at`) inside the tensor
/// space over `ambient`, acting as the identity elsewhere.
inline Matrix embed_matrix(const Matrix& sub, const Labels& at, const Labels& ambient, int d) {
    const int m = int(ambient.size());
    const int k = int(at.size());
    const std::vector<int> pos = label_positions(at, ambient);
    std::vector<int> rest_pos;
    {
        std::vector<bool> used(m, false);
        for (int p : pos) used[p] = true;
        for (int q = 0; q < m; ++q)
            if (!used[q]) rest_pos.push_back(q);
    }
    const long sub_side = int_pow(d, k);
    const long rest_side = int_pow(d, m - k);
    if (sub.rows() != sub_side)
        throw ValidationError("embed_matrix: matrix side does not match label count");
    Matrix out = Matrix::Zero(int_pow(d, m), int_pow(d, m));
    std::vector<int> digits(std::max(m, 1), 0), arow(std::max(k, 1)), acol(std::max(k, 1)),
        rdig(std::max(m - k, 1));
    for (long r = 0; r < rest_side; ++r) {
        decompose_index(r, d, m - k, rdig.data());
        for (long a = 0; a < sub_side; ++a) {
            decompose_index(a, d, k, arow.data());
            for (long b = 0; b < sub_side; ++b) {
                decompose_index(b, d, k, acol.data());
                for (int q = 0; q < k; ++q) digits[pos[q]] = arow[q];
                for (int q = 0; q < m - k; ++q) digits[rest_pos[q]] = rdig[q];
                const long row = compose_index(digits.data(), d, m);
                for (int q = 0; q < k; ++q) digits[pos[q]] = acol[q];
                const long col = compose_index(digits.data(), d, m);
                out(row, col) = sub(a, b);
            }
        }
    }
    return out;
}

inline NParticleOperator embed(const NParticleOperator& op, const Labels& target_labels) {
    if (!sorted_distinct(target_labels))
        throw ValidationError("embed: target labels must be strictly increasing");
    if (!label_subset(op.labels, target_labels))
        throw LabelError("embed: operator labels " + label_string(op.labels) +
                         " not contained in target " + label_string(target_labels));
    if (op.labels == target_labels) return op;
    return NParticleOperator(target_labels, op.d,
                             embed_matrix(op.data, op.labels, target_labels, op.d));
}

/// Trace out the factors named by `traced`; the result lives on the rest.
inline NParticleOperator partial_trace(const NParticleOperator& op, const Labels& traced) {
    if (!label_subset(traced, op.labels))
        throw LabelError("partial_trace: traced labels " + label_string(traced) +
                         " not contained in " + label_string(op.labels));
    if (traced.empty()) return op;
    const Labels kept = label_difference(op.labels, traced);
    const int m = int(op.labels.size());
    const int nk = int(kept.size());
    const int nt = int(traced.size());
    const std::vector<int> kpos = label_positions(kept, op.labels);
    const std::vector<int> tpos = label_positions(traced, op.labels);
    const int d = op.d;
    const long kept_side = int_pow(d, nk);
    const long traced_side = int_pow(d, nt);
    Matrix out = Matrix::Zero(kept_side, kept_side);
    std::vector<int> digits(std::max(m, 1), 0), ka(std::max(nk, 1)), kb(std::max(nk, 1)),
        td(std::max(nt, 1));
    for (long a = 0; a < kept_side; ++a) {
        decompose_index(a, d, nk, ka.data());
        for (long b = 0; b < kept_side; ++b) {
            decompose_index(b, d, nk, kb.data());
            Complex acc = 0.0;
            for (long t = 0; t < traced_side; ++t) {
                decompose_index(t, d, nt, td.data());
                for (int q = 0; q < nt; ++q) digits[tpos[q]] = td[q];
                for (int q = 0; q < nk; ++q) digits[kpos[q]] = ka[q];
                const long row = compose_index(digits.data(), d, m);
                for (int q = 0; q < nk; ++q) digits[kpos[q]] = kb[q];
                const long col = compose_index(digits.data(), d, m);
                acc += op.data(row, col);
            }
            out(a, b) = acc;
        }
    }
    return NParticleOperator(kept, d, std::move(out));
}

// ---------------------------------------------------------------------------
// Tensor-factor permutations and Maxwell-Boltzmann exchange symmetry.
// ---------------------------------------------------------------------------

/// Apply a factor permutation to the index pair: entry (I,J) of the result is
/// entry (sigma^{-1} I, sigma^{-1} J) of m, where perm[q] is the new position
/// of factor q.
inline Matrix permute_factors(const Matrix& m, int d, const std::vector<int>& perm) {
    const int n = int(perm.size());
    const long side = int_pow(d, n);
    if (m.rows() != side) throw ValidationError("permute_factors: side mismatch");
    Matrix out(side, side);
    std::vector<int> di(std::max(n, 1)), dj(std::max(n, 1)), pi(std::max(n, 1)),
        pj(std::max(n, 1));
    for (long i = 0; i < side; ++i) {
        decompose_index(i, d, n, di.data());
        for (int q = 0; q < n; ++q) pi[perm[q]] = di[q];
        const long r = compose_index(pi.data(), d, n);
        for (long j = 0; j < side; ++j) {
            decompose_index(j, d, n, dj.data());
            for (int q = 0; q < n; ++q) pj[perm[q]] = dj[q];
            out(r, compose_index(pj.data(), d, n)) = m(i, j);
        }
    }
    return out;
}

/// Unitary matrix realizing a factor permutation (mostly used by tests).
inline Matrix permutation_operator(int d, const std::vector<int>& perm) {
    const int n = int(perm.size());
    const long side = int_pow(d, n);
    Matrix p = Matrix::Zero(side, side);
    std::vector<int> di(std::max(n, 1)), pi(std::max(n, 1));
    for (long i = 0; i < side; ++i) {
        decompose_index(i, d, n, di.data());
        for (int q = 0; q < n; ++q) pi[perm[q]] = di[q];
        p(compose_index(pi.data(), d, n), i) = 1.0;
    }
    return p;
}

/// Largest operator-norm deviation under adjacent factor transpositions.
/// Invariance under these generates invariance under all permutations.
inline double exchange_symmetry_defect(const Matrix& m, int d, int nfactors) {
    if (nfactors < 2) return 0.0;
    double worst = 0.0;
    for (int p = 0; p + 1 < nfactors; ++p) {
        std::vector<int> perm(nfactors);
        std::iota(perm.begin(), perm.end(), 0);
        std::swap(perm[p], perm[p + 1]);
        worst = std::max(worst, operator_norm(permute_factors(m, d, perm) - m));
    }
    return worst;
}

inline double exchange_symmetry_defect(const NParticleOperator& op) {
    return exchange_symmetry_defect(op.data, op.d, op.particle_count());
}

/// Average over all factor permutations.
inline Matrix symmetrize_matrix(const Matrix& m, int d, int nfactors) {
    if (nfactors < 2) return m;
    std::vector<int> perm(nfactors);
    std::iota(perm.begin(), perm.end(), 0);
    Matrix acc = Matrix::Zero(m.rows(), m.cols());
    long count = 0;
    do {
        acc += permute_factors(m, d, perm);
        ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return acc / double(count);
}

inline NParticleOperator symmetrize(const NParticleOperator& op) {
    return NParticleOperator(op.labels, op.d,
                             symmetrize_matrix(op.data, op.d, op.particle_count()));
}

} // namespace qhier

#endif
