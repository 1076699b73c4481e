#ifndef QHIER_PARTITIONS_HPP
#define QHIER_PARTITIONS_HPP

#include <cstdint>
#include <vector>

#include "errors.hpp"
#include "operators.hpp"

namespace qhier {

/// Enumeration guard: B_14 is around 1.9e8, the practical ceiling here.
inline constexpr int kMaxPartitionElements = 14;

/// Partition of a finite label set into nonempty disjoint blocks. Blocks are
/// ordered by their minimum element and each block is sorted, so the
/// representation is canonical.
struct SetPartition {
    Labels ground;
    std::vector<Labels> blocks;

    int block_count() const { return int(blocks.size()); }

    SetPartition canonicalized() const {
        SetPartition out;
        out.ground = ground;
        out.blocks = blocks;
        for (auto& b : out.blocks) std::sort(b.begin(), b.end());
        std::sort(out.blocks.begin(), out.blocks.end(),
                  [](const Labels& a, const Labels& b) { return a.front() < b.front(); });
        return out;
    }
};

/// Finite family of disjoint label groups. An element is either a single
/// label or a pre-grouped "connected" block that every partition must keep
/// intact. Elements may be empty internally (the vacuum slot of hierarchy
/// expansions); such elements carry no labels.
struct ClusterSet {
    std::vector<Labels> elements;

    static ClusterSet atoms(const Labels& labels) {
        ClusterSet cs;
        for (int l : labels) cs.elements.push_back({l});
        return cs;
    }

    int size() const { return int(elements.size()); }

    Labels all_labels() const {
        Labels out;
        for (const auto& e : elements) out = label_union(out, e);
        return out;
    }

    void validate() const {
        std::size_t total = 0;
        for (const auto& e : elements) {
            if (!sorted_distinct(e))
                throw ValidationError("ClusterSet: element labels must be sorted and distinct");
            total += e.size();
        }
        if (all_labels().size() != total)
            throw ValidationError("ClusterSet: elements must be pairwise label-disjoint");
    }
};

/// All partitions of `ground`, enumerated through restricted-growth strings
/// in lexicographic order. Canonical by construction: blocks are indexed by
/// first appearance, so block minima ascend.
inline std::vector<SetPartition> set_partitions(const Labels& ground) {
    const int n = int(ground.size());
    if (n > kMaxPartitionElements)
        throw ResourceError("set_partitions: refusing " + std::to_string(n) +
                            " elements (guard at " + std::to_string(kMaxPartitionElements) + ")");
    std::vector<SetPartition> out;
    if (n == 0) {
        out.push_back(SetPartition{ground, {}});
        return out;
    }
    std::vector<int> rgs(n, 0), maxval(n, 0);
    while (true) {
        SetPartition p;
        p.ground = ground;
        const int nblocks = *std::max_element(rgs.begin(), rgs.end()) + 1;
        p.blocks.assign(nblocks, {});
        for (int i = 0; i < n; ++i) p.blocks[rgs[i]].push_back(ground[i]);
        out.push_back(std::move(p));

        int i = n - 1;
        while (i > 0 && rgs[i] == maxval[i - 1] + 1) --i;
        if (i == 0) break;
        ++rgs[i];
        maxval[i] = std::max(maxval[i - 1], rgs[i]);
        for (int j = i + 1; j < n; ++j) {
            rgs[j] = 0;
            maxval[j] = maxval[i];
        }
    }
    return out;
}

/// Partitions of a cluster set, treating each element as an atom. Ground of
/// the returned partitions is the element index set {0,...,m-1}.
inline std::vector<SetPartition> partitions_of(const ClusterSet& items) {
    items.validate();
    if (items.size() > kMaxPartitionElements)
        throw ResourceError("partitions_of: refusing " + std::to_string(items.size()) +
                            " elements (guard at " + std::to_string(kMaxPartitionElements) + ")");
    Labels idx(items.size());
    std::iota(idx.begin(), idx.end(), 0);
    return set_partitions(idx);
}

/// All nonempty subsets, by increasing bitmask over the sorted items:
/// {a} , {b}, {a,b}, {c}, ...
inline std::vector<Labels> nonempty_subsets(const Labels& items) {
    const int n = int(items.size());
    if (n > kMaxPartitionElements)
        throw ResourceError("nonempty_subsets: refusing " + std::to_string(n) + " elements");
    std::vector<Labels> out;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        Labels s;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) s.push_back(items[i]);
        out.push_back(std::move(s));
    }
    return out;
}

inline std::vector<Labels> subsets_of_size(const Labels& items, int k) {
    const int n = int(items.size());
    std::vector<Labels> out;
    if (k < 0 || k > n) return out;
    if (k == 0) {
        out.push_back({});
        return out;
    }
    std::vector<int> pick(k);
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
        Labels s(k);
        for (int i = 0; i < k; ++i) s[i] = items[pick[i]];
        out.push_back(std::move(s));
        int i = k - 1;
        while (i >= 0 && pick[i] == n - k + i) --i;
        if (i < 0) break;
        ++pick[i];
        for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
    return out;
}

inline std::int64_t factorial(int n) {
    if (n < 0 || n > 20) throw ResourceError("factorial: n out of range [0,20]");
    std::int64_t r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

/// Stirling numbers of the second kind, exact, S(n,k) = k S(n-1,k) + S(n-1,k-1).
inline std::int64_t stirling2(int n, int k) {
    if (n < 0 || k < 0 || n > 20 || k > 20)
        throw ResourceError("stirling2: arguments out of range [0,20]");
    if (k > n) return 0;
    if (n == 0) return 1; // S(0,0)
    if (k == 0) return 0;
    std::vector<std::int64_t> row(k + 1, 0);
    row[0] = 1; // S(0,0)
    for (int i = 1; i <= n; ++i) {
        for (int j = std::min(i, k); j >= 1; --j)
            row[j] = j * row[j] + row[j - 1];
        row[0] = 0;
    }
    return row[k];
}

/// Bell numbers through the Bell triangle.
inline std::int64_t bell_number(int n) {
    if (n < 0 || n > 20) throw ResourceError("bell_number: n out of range [0,20]");
    if (n == 0) return 1;
    std::vector<std::int64_t> row{1};
    for (int i = 1; i < n; ++i) {
        std::vector<std::int64_t> next{row.back()};
        for (std::int64_t v : row) next.push_back(next.back() + v);
        row = std::move(next);
    }
    return row.back();
}

/// Walk every partition of an n-set without materializing it, reporting only
/// the block count. Same restricted-growth order as set_partitions.
template <typename Fn>
inline void for_each_partition_size(int n, Fn&& fn) {
    if (n == 0) {
        fn(0);
        return;
    }
    std::vector<int> rgs(n, 0), maxval(n, 0);
    while (true) {
        fn(*std::max_element(rgs.begin(), rgs.end()) + 1);
        int i = n - 1;
        while (i > 0 && rgs[i] == maxval[i - 1] + 1) --i;
        if (i == 0) break;
        ++rgs[i];
        maxval[i] = std::max(maxval[i - 1], rgs[i]);
        for (int j = i + 1; j < n; ++j) {
            rgs[j] = 0;
            maxval[j] = maxval[i];
        }
    }
}

/// Sum over all partitions of an n-set of (-1)^{|P|-1} (|P|-1)!, by exhaustive
/// enumeration in exact integers. Equals 1 at n = 1 and 0 for every larger n.
inline std::int64_t cumulant_coefficient_sum(int n) {
    if (n < 1 || n > 12)
        throw ResourceError("cumulant_coefficient_sum: n out of range [1,12]");
    std::int64_t acc = 0;
    for_each_partition_size(n, [&](int k) {
        const std::int64_t term = factorial(k - 1);
        acc += (k % 2 == 1) ? term : -term;
    });
    return acc;
}

/// Sum over all partitions of an n-set of (-1)^{|P|} |P|!, by exhaustive
/// enumeration; the empty set contributes 1. Equals (-1)^n.
inline std::int64_t moebius_coefficient_sum(int n) {
    if (n < 0 || n > 12)
        throw ResourceError("moebius_coefficient_sum: n out of range [0,12]");
    if (n == 0) return 1;
    std::int64_t acc = 0;
    for_each_partition_size(n, [&](int k) {
        const std::int64_t term = factorial(k);
        acc += (k % 2 == 0) ? term : -term;
    });
    return acc;
}

} // namespace qhier

#endif
