#ifndef QHIER_CUMULANTS_HPP
#define QHIER_CUMULANTS_HPP

#include <map>

#include "groups.hpp"

namespace qhier {

/// Which evolution group the cumulant is built from: Forward conjugates by
/// exp(-i t H / hbar) (the state group), Dual by its inverse (the
/// observable group).
enum class Direction { Forward, Dual };

/// A cumulant evaluation: the connected part of the product of group actions
/// over the given cluster set, applied to `target`.
struct CumulantRequest {
    double t = 0.0;
    ClusterSet clusters;
    Direction direction = Direction::Forward;
    NParticleOperator target;
};

namespace detail {

/// Unitary for the group action on `labels`, embedded into `ambient`.
/// Memoized per evaluation through the supplied cache.
inline const Matrix& embedded_propagator(const SystemSpec& spec, const Labels& labels,
                                         const Labels& ambient, double t, Direction dir,
                                         std::map<Labels, Matrix>& cache) {
    const auto it = cache.find(labels);
    if (it != cache.end()) return it->second;
    const NParticleOperator h = build_hamiltonian(spec, labels);
    const double theta = (dir == Direction::Forward ? t : -t) / spec.hbar;
    Matrix u = hermitian_propagator(h.data, theta);
    if (labels != ambient) u = embed_matrix(u, labels, ambient, spec.d);
    return cache.emplace(labels, std::move(u)).first->second;
}

} // namespace detail

/// Cumulant (semi-invariant) of the evolution group over a cluster set:
///
///   sum over partitions P of the clusters of
///     (-1)^{|P|-1} (|P|-1)!  x  product over blocks of the group action on
///     the union of the block's labels,
///
/// applied to the target operator. Clusters are atomic: partitions never
/// split a pre-grouped element. Labels not covered by the clusters are left
/// alone. Partition terms are accumulated in restricted-growth order, so the
/// result is reproducible bit for bit.
inline NParticleOperator cumulant_apply(const SystemSpec& spec, const CumulantRequest& req) {
    req.clusters.validate();
    const int m = req.clusters.size();
    if (m > kMaxPartitionElements)
        throw ResourceError("cumulant_apply: cluster set too large");
    if (!label_subset(req.clusters.all_labels(), req.target.labels))
        throw LabelError("cumulant_apply: cluster labels not contained in target labels");
    if (m == 0) return req.target;

    const Labels& ambient = req.target.labels;
    std::map<Labels, Matrix> cache;

    // Accumulate sum_P c_P (T_P - T_ref) + (sum_P c_P) T_ref with the integer
    // coefficient total kept exact. T_ref is the single-block term (first in
    // restricted-growth order). The centering keeps the collapse at t = 0 and
    // the vanishing of vacuum-padded cumulants exact instead of limited by
    // cancellation noise in the signed sum.
    NParticleOperator acc = NParticleOperator::zero(ambient, req.target.d);
    Matrix ref;
    bool have_ref = false;
    std::int64_t coeff_total = 0;
    for (const SetPartition& p : partitions_of(req.clusters)) {
        Matrix u = Matrix::Identity(req.target.side(), req.target.side());
        for (const Labels& block : p.blocks) {
            Labels block_labels;
            for (int e : block) block_labels = label_union(block_labels, req.clusters.elements[e]);
            if (block_labels.empty()) continue; // vacuum element: identity factor
            u = u * detail::embedded_propagator(spec, block_labels, ambient, req.t,
                                                req.direction, cache);
        }
        const std::int64_t coeff =
            (p.block_count() % 2 == 1 ? 1 : -1) * factorial(p.block_count() - 1);
        coeff_total += coeff;
        const Matrix term = u * req.target.data * u.adjoint();
        if (!have_ref) {
            ref = term;
            have_ref = true;
        } else {
            acc.data += double(coeff) * (term - ref);
        }
    }
    acc.data += double(coeff_total) * ref;
    return acc;
}

/// Convenience: nth-order cumulant over the atoms of Y applied to `target`.
inline NParticleOperator cumulant_over_atoms(const SystemSpec& spec, double t, const Labels& y,
                                             Direction dir, const NParticleOperator& target) {
    return cumulant_apply(spec, CumulantRequest{t, ClusterSet::atoms(y), dir, target});
}

/// Right side of the cluster expansion: sum over partitions of Y of the
/// composition of the blocks' cumulants, applied to `target`. Inversion
/// oracle for the full group action.
inline NParticleOperator cluster_reconstruct(const SystemSpec& spec, double t, const Labels& y,
                                             const NParticleOperator& target) {
    if (y.size() > 8)
        throw ResourceError("cluster_reconstruct: |Y| > 8 would nest too many partition sums");
    if (!label_subset(y, target.labels))
        throw LabelError("cluster_reconstruct: Y not contained in target labels");
    NParticleOperator acc = NParticleOperator::zero(target.labels, target.d);
    for (const SetPartition& p : set_partitions(y)) {
        NParticleOperator term = target;
        for (const Labels& block : p.blocks)
            term = cumulant_over_atoms(spec, t, block, Direction::Forward, term);
        acc = acc + term;
    }
    return acc;
}

/// (1+n)th-order forward cumulant with the first s labels pre-grouped:
/// cluster set { (1..s) , {s+1}, ..., {s+n} } acting on an operator over
/// (1..s+n). The partial trace over the tail labels is left to the caller.
inline NParticleOperator bbgky_cumulant(const SystemSpec& spec, double t, int s, int n,
                                        const NParticleOperator& f) {
    if (s < 0 || n < 0 || s + n < 1)
        throw ValidationError("bbgky_cumulant: need s >= 1 or n >= 1");
    if (s + n > spec.n_max)
        throw ResourceError("bbgky_cumulant: s + n exceeds n_max");
    if (f.labels != range_labels(1, s + n))
        throw LabelError("bbgky_cumulant: operator must live on (1,...,s+n)");
    ClusterSet cs;
    cs.elements.push_back(range_labels(1, s)); // empty when s = 0
    for (int i = 1; i <= n; ++i) cs.elements.push_back({s + i});
    return cumulant_apply(spec, CumulantRequest{t, cs, Direction::Forward, f});
}

/// Finite-difference probe of the cumulant generator limit: compares the
/// difference quotient of the nth-order cumulant against its generator
/// (the commutator form at n = 1, the interaction form at n >= 2) over a
/// ladder of step sizes, and fits the convergence order.
struct GeneratorCheckReport {
    std::vector<double> h_values;
    std::vector<double> residuals;
    double slope = 0.0;
    double final_relative_residual = 0.0;
};

inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const int n = int(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        const double lx = std::log(x[i]);
        const double ly = std::log(std::max(y[i], 1e-300));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline GeneratorCheckReport cumulant_generator_check(const SystemSpec& spec, int n,
                                                     const NParticleOperator& f,
                                                     const std::vector<double>& h_steps) {
    if (n < 1 || n > 5) throw ResourceError("cumulant_generator_check: n out of range [1,5]");
    if (f.labels != range_labels(1, n))
        throw LabelError("cumulant_generator_check: operator must live on (1,...,n)");
    const Labels y = range_labels(1, n);
    const NParticleOperator ref = (n == 1)
                                      ? generator_state(spec, f)
                                      : Complex(-1.0, 0.0) * interaction_generator(spec, y, f);
    GeneratorCheckReport rep;
    rep.h_values = h_steps;
    for (double h : h_steps) {
        NParticleOperator quotient = cumulant_over_atoms(spec, h, y, Direction::Forward, f);
        if (n == 1) quotient = quotient - f;
        quotient = (1.0 / h) * quotient;
        rep.residuals.push_back(trace_norm(quotient.data - ref.data));
    }
    rep.slope = loglog_slope(rep.h_values, rep.residuals);
    const double scale = std::max(trace_norm(ref.data), 1e-300);
    rep.final_relative_residual = rep.residuals.back() / scale;
    return rep;
}

} // namespace qhier

#endif
