#pragma once

// Generation-stratified leaf systems and their builders.
//
// Two constructions are provided.
//
// build_quadratic_lamination: iterated pullback of the critical chord
// {theta/2, (theta+1)/2}. Each leaf contributes the two preimage leaves
// subtending the halves of whichever of its two arcs avoids theta; that is
// the unique pairing that never crosses the critical chord. When theta is
// itself a leaf endpoint both pairings avoid the chord, and the builder
// takes the wide one (children subtend halves of the longer arc).
//
// chebyshev_lamination / real_pair_lamination: mirror-symmetric systems
// {t, 1-t} generated from the fixed pair {1/3, 2/3} by symmetric pullback.
// For a critical value angle theta in [1/3, 1/2] the children whose
// endpoints fall strictly inside (theta, 1-theta) are discarded; theta=1/2
// discards nothing and is the Chebyshev system. Leaf counts in this family
// grow like the core-entropy rate of the underlying interval dynamics,
// which is what the leaf census estimator measures.

#include <algorithm>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "lamina/leaf.hpp"

namespace lamina {

struct Lamination {
    int degree = 2;
    std::vector<std::vector<Leaf>> generations; // first appearance only
    std::map<Leaf, Leaf> parent;                // child -> image leaf
    std::map<Leaf, std::vector<Leaf>> children; // image leaf -> pullback leaves
    std::optional<Leaf> critical_chord;         // marked critical leaf, if any

    size_t depth() const { return generations.empty() ? 0 : generations.size() - 1; }

    size_t leaf_count() const {
        size_t n = 0;
        for (const auto& g : generations) n += g.size();
        return n;
    }

    bool contains(const Leaf& l) const { return generation_of.count(l) > 0; }

    std::map<Leaf, size_t> generation_of;

    void add(const Leaf& l, size_t gen, const Leaf* par) {
        if (generations.size() <= gen) generations.resize(gen + 1);
        generations[gen].push_back(l);
        generation_of.emplace(l, gen);
        if (par) {
            parent.emplace(l, *par);
            children[*par].push_back(l);
        }
    }

    std::vector<Leaf> all_leaves() const {
        std::vector<Leaf> out;
        out.reserve(leaf_count());
        for (const auto& g : generations) out.insert(out.end(), g.begin(), g.end());
        return out;
    }
};

namespace detail {

// The two candidate non-crossing pairings between the preimage fans of the
// leaf endpoints. The 2d preimages alternate around the circle, so a
// non-crossing pairing must match each a-preimage with a cyclically
// adjacent b-preimage; there are exactly two such matchings.
inline std::pair<std::vector<Leaf>, std::vector<Leaf>>
candidate_pairings(const Leaf& l, int d) {
    const auto pa = preimages(l.a(), d);
    const auto pb = preimages(l.b(), d);
    for (const auto& x : pa)
        for (const auto& y : pb)
            if (x == y)
                throw critical_collapse("preimage endpoints collide at " + format_angle(x));

    const BigRat step(1, d);
    const BigRat gap = ccw_length(l.a(), l.b()) / d;
    std::vector<Leaf> forward_match, backward_match;
    for (const auto& x : pa) {
        // b-preimage at ccw distance gap, and the one preceding x by step-gap
        forward_match.emplace_back(x, Angle(x.value() + gap));
        backward_match.emplace_back(x, Angle(x.value() + gap - step));
    }
    return {forward_match, backward_match};
}

inline bool pairing_valid(const std::vector<Leaf>& cand, const std::set<Leaf>& context) {
    for (size_t i = 0; i < cand.size(); ++i) {
        if (context.count(cand[i])) return false; // duplicates a context leaf
        for (size_t j = i + 1; j < cand.size(); ++j) {
            if (cand[i] == cand[j] || leaves_cross(cand[i], cand[j])) return false;
        }
        for (const auto& c : context) {
            if (leaves_cross(cand[i], c)) return false;
        }
    }
    return true;
}

} // namespace detail

// The d preimage leaves of l compatible with a non-crossing context.
// Exactly one of the two adjacent matchings must survive; zero or two
// surviving matchings are reported as errors.
inline std::vector<Leaf> pullback_leaf(const Leaf& l, int d, const std::set<Leaf>& context) {
    auto [m1, m2] = detail::candidate_pairings(l, d);
    const bool ok1 = detail::pairing_valid(m1, context);
    const bool ok2 = detail::pairing_valid(m2, context);
    if (ok1 && ok2)
        throw ambiguous_pullback("both pairings are consistent with context for leaf " +
                                 format_angle(l.a()) + " " + format_angle(l.b()));
    if (!ok1 && !ok2)
        throw invariant_violation("no non-crossing pairing exists for leaf " +
                                  format_angle(l.a()) + " " + format_angle(l.b()));
    return ok1 ? m1 : m2;
}

// Critical-chord pullback lamination of the angle theta (degree 2).
inline Lamination build_quadratic_lamination(const Angle& theta, int depth) {
    if (theta == Angle()) throw usage_error("theta must be nonzero");
    if (depth < 0) throw usage_error("depth must be >= 0");

    Lamination lam;
    lam.degree = 2;
    const Leaf seed(Angle(theta.value() / 2), Angle(theta.value() / 2 + BigRat(1, 2)));
    lam.critical_chord = seed;
    lam.add(seed, 0, nullptr);

    for (int k = 0; k < depth; ++k) {
        for (const Leaf& l : std::vector<Leaf>(lam.generations[k])) {
            // theta on an endpoint or inside the canonical (shorter) arc:
            // children subtend halves of the longer arc.
            const bool wide = l.has_endpoint(theta) || in_open_arc(theta, l.a(), l.b());
            const Angle u = wide ? l.b() : l.a();
            const Angle v = wide ? l.a() : l.b();
            const BigRat half = ccw_length(u, v) / 2;
            const BigRat u0 = u.value() / 2;
            const Leaf c1(Angle(u0), Angle(u0 + half));
            const Leaf c2(Angle(u0 + BigRat(1, 2)), Angle(u0 + half + BigRat(1, 2)));
            for (const Leaf& c : {c1, c2}) {
                if (!lam.contains(c)) lam.add(c, static_cast<size_t>(k) + 1, &l);
            }
        }
        if (lam.generations.size() <= static_cast<size_t>(k) + 1) lam.generations.resize(k + 2);
    }
    return lam;
}

// Mirror-symmetric pullback from {1/(d+1), d/(d+1)} keeping pairs {t, 1-t}
// whose endpoints avoid the open arc (theta, 1-theta).
inline Lamination build_symmetric_lamination(const Angle& theta, int d, int depth) {
    if (depth < 0) throw usage_error("depth must be >= 0");
    if (d < 2) throw usage_error("degree must be >= 2");
    const BigRat th = theta.value();
    if (d == 2 && (th < BigRat(1, 3) || th > BigRat(1, 2)))
        throw usage_error("symmetric lamination needs theta in [1/3, 1/2]");

    const BigRat lo = th;
    const BigRat hi = 1 - th;
    auto admissible = [&](const Angle& t) { return !(lo < t.value() && t.value() < hi); };

    Lamination lam;
    lam.degree = d;
    const Leaf seed(Angle(BigRat(1, d + 1)), Angle(BigRat(d, d + 1)));
    lam.add(seed, 0, nullptr);

    for (int k = 0; k < depth; ++k) {
        for (const Leaf& l : std::vector<Leaf>(lam.generations[k])) {
            for (const Angle& t : preimages(l.a(), d)) {
                const Angle m(1 - t.value());
                if (t == m) continue; // mirror-fixed point, no chord
                const Leaf c(t, m);
                if (!admissible(c.a()) || !admissible(c.b())) continue;
                if (!lam.contains(c)) lam.add(c, static_cast<size_t>(k) + 1, &l);
            }
        }
        if (lam.generations.size() <= static_cast<size_t>(k) + 1) lam.generations.resize(k + 2);
    }
    return lam;
}

inline Lamination chebyshev_lamination(int d, int depth) {
    return build_symmetric_lamination(Angle(1, 2), d, depth);
}

inline Lamination real_pair_lamination(const Angle& theta, int depth) {
    return build_symmetric_lamination(theta, 2, depth);
}

// --- un-nested triples -----------------------------------------------------

// Three leaves are un-nested iff their open shorter arcs are pairwise
// disjoint; each leaf's longer arc then contains the other two. Diameters
// have no longer arc and are excluded.
inline bool arcs_disjoint(const Leaf& x, const Leaf& y) {
    if (x == y) return false;
    return !arcs_overlap(x.shorter_arc(), y.shorter_arc());
}

struct UnnestedTriple {
    Leaf a, b, c;
};

// Exhaustive search by increasing generation horizon; returns the first
// triple in scan order, or nullopt when none exists in the whole structure.
inline std::optional<UnnestedTriple> find_unnested_triple(const Lamination& lam) {
    std::vector<Leaf> pool;
    for (size_t g = 0; g < lam.generations.size(); ++g) {
        for (const Leaf& l : lam.generations[g])
            if (!l.is_diameter()) pool.push_back(l);
        const size_t n = pool.size();
        if (n < 3) continue;
        for (size_t i = 0; i + 2 < n; ++i)
            for (size_t j = i + 1; j + 1 < n; ++j) {
                if (!arcs_disjoint(pool[i], pool[j])) continue;
                for (size_t k = j + 1; k < n; ++k)
                    if (arcs_disjoint(pool[i], pool[k]) && arcs_disjoint(pool[j], pool[k]))
                        return UnnestedTriple{pool[i], pool[j], pool[k]};
            }
    }
    return std::nullopt;
}

// --- trichotomy classification --------------------------------------------

enum class Trichotomy { NoBiaccess, Interval, ThreeEndpoints, Inconclusive };

inline const char* to_string(Trichotomy t) {
    switch (t) {
        case Trichotomy::NoBiaccess: return "NoBiaccess";
        case Trichotomy::Interval: return "Interval";
        case Trichotomy::ThreeEndpoints: return "ThreeEndpoints";
        default: return "Inconclusive";
    }
}

// Interval certificate: one mirror symmetry t -> c - t fixes every leaf and
// its two fixed points never occur as endpoints. ThreeEndpoints certificate:
// an un-nested triple. The two certificates cannot coexist (a mirror-fixed
// leaf family has only two nests of shorter arcs).
inline Trichotomy classify_trichotomy(const Lamination& lam,
                                      std::optional<UnnestedTriple>* witness = nullptr) {
    if (lam.leaf_count() == 0) return Trichotomy::NoBiaccess;
    if (lam.depth() < 3) return Trichotomy::Inconclusive; // too shallow to certify

    const auto leaves = lam.all_leaves();
    const BigRat c = leaves.front().a().value() + leaves.front().b().value();
    bool symmetric = true;
    for (const Leaf& l : leaves) {
        if (Angle(l.a().value() + l.b().value()) != Angle(c)) {
            symmetric = false;
            break;
        }
    }
    if (symmetric) {
        const Angle f1(BigRat(c) / 2), f2(BigRat(c) / 2 + BigRat(1, 2));
        bool fixed_point_endpoint = false;
        for (const Leaf& l : leaves)
            if (l.has_endpoint(f1) || l.has_endpoint(f2)) {
                fixed_point_endpoint = true;
                break;
            }
        if (!fixed_point_endpoint) return Trichotomy::Interval;
    }

    auto triple = find_unnested_triple(lam);
    if (triple) {
        if (witness) *witness = triple;
        return Trichotomy::ThreeEndpoints;
    }
    return Trichotomy::Inconclusive;
}

// --- J-endpoint witness -----------------------------------------------------

// Finite-depth witness chain: per generation the shortest leaf whose open
// shorter arc strictly contains t, kept only while lengths strictly
// decrease. Empty result means no leaf's shorter arc contains t.
inline std::vector<Leaf> j_endpoint_witness(const Angle& t, const Lamination& lam) {
    std::vector<Leaf> chain;
    for (const auto& gen : lam.generations) {
        const Leaf* best = nullptr;
        for (const Leaf& l : gen) {
            if (!in_open_arc(t, l.a(), l.b())) continue;
            if (!best || l.length() < best->length()) best = &l;
        }
        if (best && (chain.empty() || best->length() < chain.back().length()))
            chain.push_back(*best);
    }
    return chain;
}

// --- polygon detection ------------------------------------------------------

// Endpoint-sharing cycles (poly-accessible points are modelled by leaves
// sharing endpoints). Returns the vertex sets of cyclic components with at
// least three chords.
inline std::vector<std::vector<Angle>> polygon_components(const Lamination& lam) {
    const auto leaves = lam.all_leaves();
    std::map<Angle, size_t> id;
    for (const Leaf& l : leaves) {
        id.emplace(l.a(), id.size());
        id.emplace(l.b(), id.size());
    }
    std::vector<size_t> up(id.size());
    for (size_t i = 0; i < up.size(); ++i) up[i] = i;
    auto find = [&](size_t x) {
        while (up[x] != x) x = up[x] = up[up[x]];
        return x;
    };
    for (const Leaf& l : leaves) {
        const size_t ra = find(id[l.a()]), rb = find(id[l.b()]);
        if (ra != rb) up[ra] = rb;
    }
    std::map<size_t, std::pair<std::vector<Angle>, size_t>> comps;
    for (const auto& [angle, idx] : id) comps[find(idx)].first.push_back(angle);
    for (const Leaf& l : leaves) ++comps[find(id[l.a()])].second;
    std::vector<std::vector<Angle>> out;
    for (auto& [root, data] : comps) {
        auto& [verts, edge_count] = data;
        if (verts.size() >= 3 && edge_count >= verts.size()) { // contains a cycle
            std::sort(verts.begin(), verts.end());
            out.push_back(verts);
        }
    }
    return out;
}

// --- serialization ----------------------------------------------------------

// One leaf per line: "p1/q1 p2/q2 gen=k", sorted by generation then first
// endpoint.
inline void serialize(const Lamination& lam, std::ostream& os) {
    for (size_t g = 0; g < lam.generations.size(); ++g) {
        std::vector<Leaf> sorted(lam.generations[g]);
        std::sort(sorted.begin(), sorted.end());
        for (const Leaf& l : sorted)
            os << format_angle(l.a()) << " " << format_angle(l.b()) << " gen=" << g << "\n";
    }
}

} // namespace lamina
