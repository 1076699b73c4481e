#ifndef QHIER_HIERARCHIES_HPP
#define QHIER_HIERARCHIES_HPP

#include "cumulants.hpp"

namespace qhier {

/// Output of a hierarchy evolution together with which formula produced it.
struct HierarchyResult {
    OperatorSequence sequence;
    std::string provenance;
    int truncation = 0;
};

inline void require_kind(const OperatorSequence& x, SequenceKind kind, const char* what) {
    if (x.kind() != kind)
        throw ValidationError(std::string(what) + ": sequence has the wrong kind (state vs observable)");
}

// ---------------------------------------------------------------------------
// Correlation dynamics: the nonlinear group built from cumulants of the
// state evolution over partitions of (1,...,n), and its generator.
// ---------------------------------------------------------------------------

namespace detail {

/// Product of sequence entries placed on the blocks of a partition,
/// embedded in the ambient label set. Blocks act on disjoint factors.
inline NParticleOperator embedded_block_product(const OperatorSequence& f,
                                                const std::vector<Labels>& blocks,
                                                const Labels& ambient) {
    const int d = f.spec().d;
    const long side = int_pow(d, int(ambient.size()));
    Matrix prod = Matrix::Identity(side, side);
    for (const Labels& block : blocks)
        prod = prod * embed_matrix(f.entry(int(block.size())).data, block, ambient, d);
    return NParticleOperator(ambient, d, std::move(prod));
}

} // namespace detail

/// Entry n: sum over partitions P of (1..n) of the |P|th-order cumulant over
/// the blocks, applied to the embedded product of the f-entries on the
/// blocks. Nonlinear in f. Entry 0 is carried through unchanged.
inline HierarchyResult von_neumann_evolve(double t, const OperatorSequence& f) {
    require_kind(f, SequenceKind::State, "von_neumann_evolve");
    const SystemSpec& spec = f.spec();
    std::vector<NParticleOperator> out;
    out.push_back(f.entry(0));
    for (int n = 1; n <= f.n_max(); ++n) {
        const Labels y = range_labels(1, n);
        NParticleOperator acc = NParticleOperator::zero(y, spec.d);
        for (const SetPartition& p : set_partitions(y)) {
            NParticleOperator target = detail::embedded_block_product(f, p.blocks, y);
            ClusterSet clusters;
            clusters.elements = p.blocks;
            acc = acc + cumulant_apply(spec, CumulantRequest{t, std::move(clusters),
                                                             Direction::Forward,
                                                             std::move(target)});
        }
        out.push_back(std::move(acc));
    }
    return HierarchyResult{f.with_entries(std::move(out)), "correlation-expansion", f.n_max()};
}

/// Generator of the correlation group: the commutator term plus, for every
/// partition with more than one block and every choice of nonempty subsets
/// Z_r of the blocks, the interaction generator of order sum |Z_r| applied
/// to the embedded product of f-entries.
inline OperatorSequence von_neumann_generator(const OperatorSequence& f) {
    require_kind(f, SequenceKind::State, "von_neumann_generator");
    const SystemSpec& spec = f.spec();
    std::vector<NParticleOperator> out;
    out.push_back(NParticleOperator::zero({}, spec.d));
    for (int n = 1; n <= f.n_max(); ++n) {
        const Labels y = range_labels(1, n);
        NParticleOperator acc = generator_state(spec, f.entry(n));
        for (const SetPartition& p : set_partitions(y)) {
            if (p.block_count() < 2) continue;
            const NParticleOperator target = detail::embedded_block_product(f, p.blocks, y);
            // Odometer over one nonempty subset per block.
            std::vector<std::vector<Labels>> choices;
            for (const Labels& block : p.blocks) choices.push_back(nonempty_subsets(block));
            std::vector<std::size_t> idx(choices.size(), 0);
            while (true) {
                Labels z;
                for (std::size_t r = 0; r < choices.size(); ++r)
                    z = label_union(z, choices[r][idx[r]]);
                if (spec.potentials.count(int(z.size())))
                    acc = acc + Complex(-1.0, 0.0) * interaction_generator(spec, z, target);
                std::size_t r = 0;
                while (r < idx.size() && ++idx[r] == choices[r].size()) idx[r++] = 0;
                if (r == idx.size()) break;
            }
        }
        out.push_back(std::move(acc));
    }
    return f.with_entries(std::move(out));
}

// ---------------------------------------------------------------------------
// Marginal dynamics: cumulant expansion over one pre-grouped cluster plus
// traced-out tail particles, its generator, and two alternative
// representations through ladder-map conjugation and the second-order
// re-expansion.
// ---------------------------------------------------------------------------

/// Entry s: sum_{n} (1/n!) Tr over (s+1..s+n) of the (1+n)th-order cumulant
/// with (1..s) pre-grouped, applied to f_{s+n}. The sum truncates at
/// n = n_max - s because the input has finite support.
inline HierarchyResult bbgky_evolve(double t, const OperatorSequence& f) {
    require_kind(f, SequenceKind::State, "bbgky_evolve");
    const SystemSpec& spec = f.spec();
    std::vector<NParticleOperator> out;
    for (int s = 0; s <= f.n_max(); ++s) {
        NParticleOperator acc = NParticleOperator::zero(range_labels(1, s), spec.d);
        double inv_fact = 1.0;
        for (int n = 0; n + s <= f.n_max(); ++n) {
            if (n > 0) inv_fact /= double(n);
            if (s == 0 && n == 0) {
                acc = acc + f.entry(0);
                continue;
            }
            const NParticleOperator cum = bbgky_cumulant(spec, t, s, n, f.entry(s + n));
            acc = acc + inv_fact * partial_trace(cum, range_labels(s + 1, s + n));
        }
        out.push_back(std::move(acc));
    }
    return HierarchyResult{f.with_entries(std::move(out)), "marginal-expansion", f.n_max()};
}

/// Generator of the marginal dynamics: -N f_s plus interaction generators of
/// order k+n coupling every k-subset of (1..s) to n traced-out particles.
inline OperatorSequence bbgky_generator(const OperatorSequence& f) {
    require_kind(f, SequenceKind::State, "bbgky_generator");
    const SystemSpec& spec = f.spec();
    std::vector<NParticleOperator> out;
    for (int s = 0; s <= f.n_max(); ++s) {
        const Labels y = range_labels(1, s);
        NParticleOperator acc = s == 0 ? NParticleOperator::zero({}, spec.d)
                                       : generator_state(spec, f.entry(s));
        for (int k = 1; k <= s; ++k) {
            for (const Labels& sub : subsets_of_size(y, k)) {
                double inv_fact = 1.0;
                for (int n = 1; n + s <= f.n_max(); ++n) {
                    inv_fact /= double(n);
                    if (!spec.potentials.count(k + n)) continue;
                    const Labels tail = range_labels(s + 1, s + n);
                    const NParticleOperator term = Complex(-1.0, 0.0) *
                        interaction_generator(spec, label_union(sub, tail), f.entry(s + n));
                    acc = acc + inv_fact * partial_trace(term, tail);
                }
            }
        }
        out.push_back(std::move(acc));
    }
    return f.with_entries(std::move(out));
}

// ---------------------------------------------------------------------------
// Ladder maps on sequences and their exponentials (finite sums on finite
// support).
// ---------------------------------------------------------------------------

/// (a f)_s = Tr_{s+1} f_{s+1}; the top entry maps to zero by truncation.
inline OperatorSequence annihilation(const OperatorSequence& f) {
    const SystemSpec& spec = f.spec();
    std::vector<NParticleOperator> out;
    for (int s = 0; s <= f.n_max(); ++s) {
        if (s + 1 <= f.n_max())
            out.push_back(partial_trace(f.entry(s + 1), {s + 1}));
        else
            out.push_back(NParticleOperator::zero(range_labels(1, s), spec.d));
    }
    return f.with_entries(std::move(out));
}

/// (a+ g)_s = sum_j g_{s-1} placed on (1..s) minus {j}; entry 0 maps to zero.
inline OperatorSequence creation(const OperatorSequence& g) {
    const SystemSpec& spec = g.spec();
    std::vector<NParticleOperator> out;
    out.push_back(NParticleOperator::zero({}, spec.d));
    for (int s = 1; s <= g.n_max(); ++s) {
        const Labels y = range_labels(1, s);
        NParticleOperator acc = NParticleOperator::zero(y, spec.d);
        for (int j : y) {
            const Labels rest = label_difference(y, {j});
            acc.data += embed_matrix(g.entry(s - 1).data, rest, y, spec.d);
        }
        out.push_back(std::move(acc));
    }
    return g.with_entries(std::move(out));
}

enum class Ladder { Annihilation, Creation };

/// exp(sign * ladder) as an exact finite sum.
///   annihilation: entry s = sum_n (sign)^n / n! Tr_{s+1..s+n} x_{s+n}
///   creation:     entry s = sum_n (sign)^n     sum_{|T|=n} x_{s-n} on Y\T
inline OperatorSequence exp_ladder(int sign, Ladder which, const OperatorSequence& x) {
    if (sign != 1 && sign != -1) throw ValidationError("exp_ladder: sign must be +1 or -1");
    const SystemSpec& spec = x.spec();
    std::vector<NParticleOperator> out;
    for (int s = 0; s <= x.n_max(); ++s) {
        const Labels y = range_labels(1, s);
        NParticleOperator acc = x.entry(s);
        if (which == Ladder::Annihilation) {
            double coeff = 1.0;
            for (int n = 1; n + s <= x.n_max(); ++n) {
                coeff *= double(sign) / double(n);
                acc = acc + coeff * partial_trace(x.entry(s + n), range_labels(s + 1, s + n));
            }
        } else {
            double coeff = 1.0;
            for (int n = 1; n <= s; ++n) {
                coeff *= double(sign);
                for (const Labels& t : subsets_of_size(y, n)) {
                    const Labels rest = label_difference(y, t);
                    acc.data += coeff * embed_matrix(x.entry(s - n).data, rest, y, spec.d);
                }
            }
        }
        out.push_back(std::move(acc));
    }
    return x.with_entries(std::move(out));
}

/// Conjugation representation of the marginal dynamics:
/// exp(a) then entrywise state evolution then exp(-a).
inline HierarchyResult bbgky_evolve_conjugated(double t, const OperatorSequence& f) {
    require_kind(f, SequenceKind::State, "bbgky_evolve_conjugated");
    OperatorSequence seq =
        exp_ladder(+1, Ladder::Annihilation,
                   evolve_state(t, exp_ladder(-1, Ladder::Annihilation, f)));
    return HierarchyResult{std::move(seq), "marginal-conjugation", f.n_max()};
}

// ---------------------------------------------------------------------------
// Dual (observable-side) marginal dynamics.
// ---------------------------------------------------------------------------

/// Entry s: sum over n <= s and over (s-n)-subsets J of (1..s) of the dual
/// (1+n)th-order cumulant with J pre-grouped and the rest atomic, applied to
/// g_{s-n} placed on J. Intrinsically a finite sum.
inline HierarchyResult dual_bbgky_evolve(double t, const OperatorSequence& g) {
    require_kind(g, SequenceKind::Observable, "dual_bbgky_evolve");
    const SystemSpec& spec = g.spec();
    std::vector<NParticleOperator> out;
    for (int s = 0; s <= g.n_max(); ++s) {
        const Labels y = range_labels(1, s);
        NParticleOperator acc = NParticleOperator::zero(y, spec.d);
        for (int n = 0; n <= s; ++n) {
            for (const Labels& grouped : subsets_of_size(y, s - n)) {
                const Labels atoms = label_difference(y, grouped);
                ClusterSet clusters;
                clusters.elements.push_back(grouped);
                for (int a : atoms) clusters.elements.push_back({a});
                NParticleOperator target(
                    y, spec.d, embed_matrix(g.entry(s - n).data, grouped, y, spec.d));
                acc = acc + cumulant_apply(spec, CumulantRequest{t, std::move(clusters),
                                                                 Direction::Dual,
                                                                 std::move(target)});
            }
        }
        out.push_back(std::move(acc));
    }
    return HierarchyResult{g.with_entries(std::move(out)), "dual-expansion", g.n_max()};
}

/// Generator of the dual dynamics: +N g_s plus interaction generators of
/// every order k acting on g_{s-n} with n of the k particles removed.
inline OperatorSequence dual_bbgky_generator(const OperatorSequence& g) {
    require_kind(g, SequenceKind::Observable, "dual_bbgky_generator");
    const SystemSpec& spec = g.spec();
    std::vector<NParticleOperator> out;
    for (int s = 0; s <= g.n_max(); ++s) {
        const Labels y = range_labels(1, s);
        NParticleOperator acc = s == 0 ? NParticleOperator::zero({}, spec.d)
                                       : generator_observable(spec, g.entry(s));
        for (int n = 1; n <= s; ++n) {
            for (int k = n + 1; k <= s; ++k) {
                if (!spec.potentials.count(k)) continue;
                for (const Labels& sub : subsets_of_size(y, k)) {
                    for (const Labels& removed : subsets_of_size(sub, n)) {
                        const Labels rest = label_difference(y, removed);
                        NParticleOperator emb(
                            y, spec.d, embed_matrix(g.entry(s - n).data, rest, y, spec.d));
                        acc = acc + interaction_generator(spec, sub, emb);
                    }
                }
            }
        }
        out.push_back(std::move(acc));
    }
    return g.with_entries(std::move(out));
}

/// Conjugation representation of the dual dynamics:
/// exp(-a+) then entrywise observable evolution then exp(a+).
inline HierarchyResult dual_evolve_conjugated(double t, const OperatorSequence& g) {
    require_kind(g, SequenceKind::Observable, "dual_evolve_conjugated");
    OperatorSequence seq = exp_ladder(-1, Ladder::Creation,
                                      evolve_observable(t, exp_ladder(+1, Ladder::Creation, g)));
    return HierarchyResult{std::move(seq), "dual-conjugation", g.n_max()};
}

// ---------------------------------------------------------------------------
// Second-order re-expansions: both marginal dynamics rewritten through
// first- and second-order cumulants only.
// ---------------------------------------------------------------------------

inline HierarchyResult second_order_reexpansion(double t, const OperatorSequence& x) {
    const SystemSpec& spec = x.spec();
    std::vector<NParticleOperator> out;
    if (x.kind() == SequenceKind::State) {
        for (int s = 0; s <= x.n_max(); ++s) {
            const Labels y = range_labels(1, s);
            NParticleOperator acc = evolve_state(spec, t, x.entry(s));
            double inv_fact = 1.0;
            for (int n = 1; n + s <= x.n_max(); ++n) {
                inv_fact /= double(n);
                const Labels tail = range_labels(s + 1, s + n);
                for (const Labels& z : nonempty_subsets(tail)) {
                    const double sign = ((n - int(z.size())) % 2 == 0) ? 1.0 : -1.0;
                    ClusterSet clusters;
                    clusters.elements.push_back(y);
                    clusters.elements.push_back(z);
                    const NParticleOperator cum = cumulant_apply(
                        spec, CumulantRequest{t, std::move(clusters), Direction::Forward,
                                              x.entry(s + n)});
                    acc = acc + (sign * inv_fact) * partial_trace(cum, tail);
                }
            }
            out.push_back(std::move(acc));
        }
    } else {
        for (int s = 0; s <= x.n_max(); ++s) {
            const Labels y = range_labels(1, s);
            NParticleOperator acc = evolve_observable(spec, t, x.entry(s));
            for (int n = 1; n <= s; ++n) {
                for (const Labels& grouped : subsets_of_size(y, s - n)) {
                    const Labels atoms = label_difference(y, grouped);
                    NParticleOperator target(
                        y, spec.d, embed_matrix(x.entry(s - n).data, grouped, y, spec.d));
                    for (const Labels& z : nonempty_subsets(atoms)) {
                        const double sign = ((n - int(z.size())) % 2 == 0) ? 1.0 : -1.0;
                        ClusterSet clusters;
                        clusters.elements.push_back(grouped);
                        clusters.elements.push_back(z);
                        acc = acc + sign * cumulant_apply(
                                         spec, CumulantRequest{t, std::move(clusters),
                                                               Direction::Dual, target});
                    }
                }
            }
            out.push_back(std::move(acc));
        }
    }
    const char* tag = x.kind() == SequenceKind::State ? "marginal-second-order"
                                                      : "dual-second-order";
    return HierarchyResult{x.with_entries(std::move(out)), tag, x.n_max()};
}

} // namespace qhier

#endif
