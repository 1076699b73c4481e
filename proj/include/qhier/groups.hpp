#ifndef QHIER_GROUPS_HPP
#define QHIER_GROUPS_HPP

#include <memory>

#include "system.hpp"

namespace qhier {

// ---------------------------------------------------------------------------
// Unitary conjugation groups on n-particle operators.
//
// The state group conjugates by exp(-i t H / hbar); the observable group is
// its inverse direction. Generators follow the fixed sign convention
//   N x = (i/hbar)(H x - x H),
// so the state group has generator -N and the observable group +N.
// ---------------------------------------------------------------------------

inline NParticleOperator conjugate(const Matrix& u, const NParticleOperator& op) {
    return NParticleOperator(op.labels, op.d, u * op.data * u.adjoint());
}

inline NParticleOperator evolve_state(const SystemSpec& spec, double t,
                                      const NParticleOperator& op) {
    const NParticleOperator h = build_hamiltonian(spec, op.labels);
    return conjugate(hermitian_propagator(h.data, t / spec.hbar), op);
}

inline NParticleOperator evolve_observable(const SystemSpec& spec, double t,
                                           const NParticleOperator& op) {
    const NParticleOperator h = build_hamiltonian(spec, op.labels);
    return conjugate(hermitian_propagator(h.data, -t / spec.hbar), op);
}

/// N x = (i/hbar)(H x - x H) on the labels of x.
inline NParticleOperator commutator_generator(const SystemSpec& spec,
                                              const NParticleOperator& op) {
    const NParticleOperator h = build_hamiltonian(spec, op.labels);
    const Complex scale(0.0, 1.0 / spec.hbar);
    return NParticleOperator(op.labels, op.d, scale * (h.data * op.data - op.data * h.data));
}

/// -N f: the infinitesimal generator of the state group.
inline NParticleOperator generator_state(const SystemSpec& spec, const NParticleOperator& op) {
    return Complex(-1.0, 0.0) * commutator_generator(spec, op);
}

/// +N g: the infinitesimal generator of the observable group.
inline NParticleOperator generator_observable(const SystemSpec& spec,
                                              const NParticleOperator& op) {
    return commutator_generator(spec, op);
}

/// N_int x = -(i/hbar)(x Phi - Phi x), with the |k_labels|-body potential
/// embedded on k_labels inside the labels of x. Absent potentials are zero.
inline NParticleOperator interaction_generator(const SystemSpec& spec, const Labels& k_labels,
                                               const NParticleOperator& op) {
    if (!label_subset(k_labels, op.labels))
        throw LabelError("interaction_generator: potential labels " + label_string(k_labels) +
                         " not contained in " + label_string(op.labels));
    const auto it = spec.potentials.find(int(k_labels.size()));
    if (it == spec.potentials.end()) return NParticleOperator::zero(op.labels, op.d);
    const Matrix phi = embed_matrix(it->second, k_labels, op.labels, spec.d);
    const Complex scale(0.0, -1.0 / spec.hbar);
    return NParticleOperator(op.labels, op.d, scale * (op.data * phi - phi * op.data));
}

// ---------------------------------------------------------------------------
// Finite-support operator sequences: the desk-scale stand-in for sequences
// of trace-class (state role) or bounded (observable role) operators.
// Entry n lives on labels (1,...,n); entry 0 is a scalar.
// ---------------------------------------------------------------------------

enum class SequenceKind { State, Observable };

class OperatorSequence {
public:
    OperatorSequence() = default;

    /// Validating factory. Entries must be exchange-symmetric within 1e-10
    /// (relative); asymmetric input is rejected rather than silently used.
    static OperatorSequence make(std::shared_ptr<const SystemSpec> spec, SequenceKind kind,
                                 std::vector<NParticleOperator> entries, double weight) {
        OperatorSequence s = make_unchecked(std::move(spec), kind, std::move(entries), weight);
        for (int n = 0; n <= s.n_max(); ++n) {
            const double defect = exchange_symmetry_defect(s.entry(n));
            const double scale = std::max(1.0, operator_norm(s.entry(n).data));
            if (defect > 1e-10 * scale)
                throw ValidationError("OperatorSequence: entry " + std::to_string(n) +
                                      " is not exchange-symmetric (defect " +
                                      std::to_string(defect) + ")");
        }
        return s;
    }

    /// Constructor for values produced by the library's own linear maps,
    /// which preserve symmetry; skips the symmetry sweep.
    static OperatorSequence make_unchecked(std::shared_ptr<const SystemSpec> spec,
                                           SequenceKind kind,
                                           std::vector<NParticleOperator> entries,
                                           double weight) {
        if (!spec) throw ValidationError("OperatorSequence: null system spec");
        if (weight <= 0.0) throw ValidationError("OperatorSequence: weight must be positive");
        if (int(entries.size()) != spec->n_max + 1)
            throw ValidationError("OperatorSequence: expected " +
                                  std::to_string(spec->n_max + 1) + " entries, got " +
                                  std::to_string(entries.size()));
        for (int n = 0; n < int(entries.size()); ++n) {
            if (entries[n].d != spec->d)
                throw ValidationError("OperatorSequence: entry " + std::to_string(n) +
                                      " has wrong single-particle dimension");
            if (entries[n].labels != range_labels(1, n))
                throw ValidationError("OperatorSequence: entry " + std::to_string(n) +
                                      " must live on labels (1,...," + std::to_string(n) + ")");
        }
        OperatorSequence s;
        s.spec_ = std::move(spec);
        s.kind_ = kind;
        s.weight_ = weight;
        s.entries_ = std::move(entries);
        return s;
    }

    static OperatorSequence zero(std::shared_ptr<const SystemSpec> spec, SequenceKind kind,
                                 double weight) {
        std::vector<NParticleOperator> e;
        for (int n = 0; n <= spec->n_max; ++n)
            e.push_back(NParticleOperator::zero(range_labels(1, n), spec->d));
        return make_unchecked(std::move(spec), kind, std::move(e), weight);
    }

    const SystemSpec& spec() const { return *spec_; }
    std::shared_ptr<const SystemSpec> spec_ptr() const { return spec_; }
    SequenceKind kind() const { return kind_; }
    double weight() const { return weight_; }
    int n_max() const { return spec_->n_max; }
    const NParticleOperator& entry(int n) const { return entries_.at(n); }
    NParticleOperator& entry(int n) { return entries_.at(n); }
    const std::vector<NParticleOperator>& entries() const { return entries_; }

    OperatorSequence with_entries(std::vector<NParticleOperator> entries) const {
        return make_unchecked(spec_, kind_, std::move(entries), weight_);
    }

private:
    std::shared_ptr<const SystemSpec> spec_;
    SequenceKind kind_ = SequenceKind::State;
    double weight_ = 1.0;
    std::vector<NParticleOperator> entries_;
};

inline void require_compatible(const OperatorSequence& a, const OperatorSequence& b,
                               const char* what) {
    const SystemSpec &sa = a.spec(), &sb = b.spec();
    if (sa.d != sb.d || sa.n_max != sb.n_max || sa.hbar != sb.hbar)
        throw ValidationError(std::string(what) + ": sequences built on different systems");
}

inline OperatorSequence operator+(const OperatorSequence& a, const OperatorSequence& b) {
    require_compatible(a, b, "sequence operator+");
    std::vector<NParticleOperator> e;
    for (int n = 0; n <= a.n_max(); ++n) e.push_back(a.entry(n) + b.entry(n));
    return a.with_entries(std::move(e));
}

inline OperatorSequence operator-(const OperatorSequence& a, const OperatorSequence& b) {
    require_compatible(a, b, "sequence operator-");
    std::vector<NParticleOperator> e;
    for (int n = 0; n <= a.n_max(); ++n) e.push_back(a.entry(n) - b.entry(n));
    return a.with_entries(std::move(e));
}

inline OperatorSequence operator*(double c, const OperatorSequence& a) {
    std::vector<NParticleOperator> e;
    for (int n = 0; n <= a.n_max(); ++n) e.push_back(c * a.entry(n));
    return a.with_entries(std::move(e));
}

/// Sum of per-entry trace norms (weight 1); the distance behind most
/// state-side residual checks.
inline double sequence_trace_distance(const OperatorSequence& a, const OperatorSequence& b) {
    require_compatible(a, b, "sequence_trace_distance");
    double acc = 0.0;
    for (int n = 0; n <= a.n_max(); ++n) acc += trace_norm(a.entry(n).data - b.entry(n).data);
    return acc;
}

/// Largest per-entry operator-norm difference; the observable-side distance.
inline double sequence_opnorm_distance(const OperatorSequence& a, const OperatorSequence& b) {
    require_compatible(a, b, "sequence_opnorm_distance");
    double acc = 0.0;
    for (int n = 0; n <= a.n_max(); ++n)
        acc = std::max(acc, operator_norm(a.entry(n).data - b.entry(n).data));
    return acc;
}

/// Sum_n alpha^n ||f_n||_1.
inline double state_sequence_norm(const OperatorSequence& f, double alpha) {
    double acc = 0.0;
    double w = 1.0;
    for (int n = 0; n <= f.n_max(); ++n) {
        acc += w * trace_norm(f.entry(n).data);
        w *= alpha;
    }
    return acc;
}

/// max_n (gamma^n / n!) ||g_n||_op.
inline double observable_sequence_norm(const OperatorSequence& g, double gamma) {
    double acc = 0.0;
    double w = 1.0;
    for (int n = 0; n <= g.n_max(); ++n) {
        acc = std::max(acc, w * operator_norm(g.entry(n).data));
        w *= gamma / double(n + 1);
    }
    return acc;
}

/// <g|f> = Sum_n (1/n!) Tr g_n f_n.
inline Complex bilinear_form(const OperatorSequence& g, const OperatorSequence& f) {
    if (g.kind() != SequenceKind::Observable || f.kind() != SequenceKind::State)
        throw ValidationError("bilinear_form: expects (observable, state)");
    require_compatible(g, f, "bilinear_form");
    Complex acc = 0.0;
    double inv_fact = 1.0;
    for (int n = 0; n <= g.n_max(); ++n) {
        if (n > 0) inv_fact /= double(n);
        acc += inv_fact * (g.entry(n).data * f.entry(n).data).trace();
    }
    return acc;
}

/// Entrywise action of the state group on a sequence.
inline OperatorSequence evolve_state(double t, const OperatorSequence& f) {
    std::vector<NParticleOperator> e;
    for (int n = 0; n <= f.n_max(); ++n) e.push_back(evolve_state(f.spec(), t, f.entry(n)));
    return f.with_entries(std::move(e));
}

/// Entrywise action of the observable group on a sequence.
inline OperatorSequence evolve_observable(double t, const OperatorSequence& g) {
    std::vector<NParticleOperator> e;
    for (int n = 0; n <= g.n_max(); ++n) e.push_back(evolve_observable(g.spec(), t, g.entry(n)));
    return g.with_entries(std::move(e));
}

} // namespace qhier

#endif
