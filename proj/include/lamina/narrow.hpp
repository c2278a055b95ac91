#pragma once

// Narrow preimage machinery: a preimage pair is narrow when its length is
// exactly 1/d of its image's, so widths are exact rationals ell0 / d^k and
// the generation counts obey s_{k+1} >= d*s_k - 2(d-1).

#include <ostream>
#include <set>
#include <vector>

#include "lamina/lamination.hpp"

namespace lamina {

inline bool is_narrow_child(const Leaf& parent, const Leaf& child, int d) {
    const auto img = forward_leaf(child, d);
    if (!img || *img != parent)
        throw usage_error("child leaf does not map onto the given parent");
    return child.length() == parent.length() / d;
}

struct NarrowFamily {
    UnnestedTriple base;
    int degree = 2;
    std::vector<std::vector<Leaf>> generations; // generation 0 = the triple
    std::vector<size_t> counts;                 // s_k

    size_t depth() const { return generations.size() - 1; }
};

// Generation k+1 collects every lamination leaf that is a narrow child of a
// generation-k member, deduplicated by leaf identity. Requires the
// lamination to extend n generations past the deepest triple member.
inline NarrowFamily narrow_generations(const UnnestedTriple& triple, const Lamination& lam,
                                       int n) {
    for (const Leaf* l : {&triple.a, &triple.b, &triple.c})
        if (!lam.contains(*l)) throw usage_error("triple leaf not in lamination");
    if (!arcs_disjoint(triple.a, triple.b) || !arcs_disjoint(triple.a, triple.c) ||
        !arcs_disjoint(triple.b, triple.c))
        throw usage_error("leaves do not form an un-nested triple");
    const size_t base_gen =
        std::max({lam.generation_of.at(triple.a), lam.generation_of.at(triple.b),
                  lam.generation_of.at(triple.c)});
    if (base_gen + static_cast<size_t>(n) > lam.depth())
        throw insufficient_depth("lamination too shallow for requested narrow generations");

    NarrowFamily fam{triple, lam.degree, {}, {}};
    fam.generations.push_back({triple.a, triple.b, triple.c});
    fam.counts.push_back(3);

    for (int k = 0; k < n; ++k) {
        std::set<Leaf> next;
        for (const Leaf& m : fam.generations.back()) {
            auto it = lam.children.find(m);
            if (it == lam.children.end()) continue;
            for (const Leaf& c : it->second)
                if (is_narrow_child(m, c, lam.degree)) next.insert(c);
        }
        fam.generations.emplace_back(next.begin(), next.end());
        fam.counts.push_back(next.size());
        const long long bound = static_cast<long long>(lam.degree) * fam.counts[k] -
                                2 * (lam.degree - 1);
        if (static_cast<long long>(fam.counts[k + 1]) < bound)
            throw invariant_violation("narrow recurrence violated at generation " +
                                      std::to_string(k + 1));
    }
    return fam;
}

// Number of generations k with some generation-k member whose open shorter
// arc strictly contains t. Finite-depth evidence of membership in the set
// of angles trapped by infinitely many shrinking narrow pairs.
inline size_t e_membership_depth(const Angle& t, const NarrowFamily& fam) {
    size_t hits = 0;
    for (const auto& gen : fam.generations) {
        for (const Leaf& l : gen) {
            if (in_open_arc(t, l.a(), l.b())) {
                ++hits;
                break;
            }
        }
    }
    return hits;
}

// CSV rows "k, s_k, d*s_{k-1}-2(d-1), slack".
inline void write_narrow_csv(const NarrowFamily& fam, std::ostream& os) {
    os << "# lamina-narrow-v1 k,s_k,recurrence_rhs,slack\n";
    for (size_t k = 0; k < fam.counts.size(); ++k) {
        if (k == 0) {
            os << "0," << fam.counts[0] << ",,\n";
            continue;
        }
        const long long rhs = static_cast<long long>(fam.degree) * fam.counts[k - 1] -
                              2 * (fam.degree - 1);
        os << k << "," << fam.counts[k] << "," << rhs << ","
           << (static_cast<long long>(fam.counts[k]) - rhs) << "\n";
    }
}

} // namespace lamina
