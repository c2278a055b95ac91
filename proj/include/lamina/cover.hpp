#pragma once

// Interval families on the d-adic grid, covering counts, the closed-form
// Minkowski bound, and the log-log dimension estimators. Family cells are
// stored as integer indices at scale d^-(N+n); an index k means the cell
// [k, k+1] / d^(N+n).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <ostream>
#include <vector>

#include "lamina/narrow.hpp"

namespace lamina {

// Largest grid cell properly contained in the closed arc: minimal N, then
// smallest k, with [k/d^N, (k+1)/d^N] inside the arc closure but not equal
// to it. The result keeps at least 1/(2d) of the arc length.
struct SnappedCell {
    ArcInterval cell;
    int base_exponent; // N
};

inline SnappedCell snap_to_grid(const ArcInterval& arc, int d) {
    if (d < 2) throw usage_error("degree must be >= 2");
    const BigRat len = arc.length();
    BigInt scale = 1;
    for (int N = 1;; ++N) {
        scale *= d;
        const BigRat cell_len(BigInt(1), scale);
        if (cell_len > len) continue;
        // smallest k with k/scale >= start (lift start into [0,1))
        const BigRat s = arc.start.value();
        BigInt k = -floor_div(-boost::multiprecision::numerator(s) * scale,
                              boost::multiprecision::denominator(s)); // ceil(s*scale)
        const BigRat lo(k, scale);
        const BigRat hi(k + 1, scale);
        if (hi - s <= len && !(lo == s && hi - s == len)) {
            if (cell_len * 2 * d < len)
                throw invariant_violation("snapped cell shorter than len/(2d)");
            return {ArcInterval(Angle(lo), Angle(hi)), N};
        }
    }
}

enum class DeletionMode { None, Lex, Narrow };

struct IntervalFamily {
    int degree = 2;
    int base_exponent = 2; // N: generation-0 cells have length d^-N
    std::vector<std::vector<std::uint64_t>> generations; // sorted cell indices
    std::vector<size_t> deletions; // per pullback step

    std::uint64_t scale(size_t n) const {
        std::uint64_t s = 1;
        for (int i = 0; i < base_exponent + static_cast<int>(n); ++i) s *= degree;
        return s;
    }
};

namespace detail {

inline std::uint64_t checked_pow(int d, int e) {
    std::uint64_t v = 1;
    for (int i = 0; i < e; ++i) {
        if (v > std::numeric_limits<std::uint64_t>::max() / static_cast<unsigned>(d))
            throw usage_error("grid too fine for 64-bit cell indices");
        v *= static_cast<unsigned>(d);
    }
    return v;
}

} // namespace detail

// Generation n+1 = all d-fold preimages of generation n minus at most
// 2(d-1) cells chosen by the deletion oracle. The oracle receives the
// sorted candidate list and returns indices to drop.
inline IntervalFamily build_families(
    const std::vector<std::uint64_t>& seeds, int d, int N, int depth,
    const std::function<std::vector<size_t>(size_t, const std::vector<std::uint64_t>&)>&
        deletion_oracle) {
    if (seeds.size() != 3) throw usage_error("exactly three generation-0 cells required");
    detail::checked_pow(d, N + depth + 1);

    IntervalFamily fam;
    fam.degree = d;
    fam.base_exponent = N;
    std::vector<std::uint64_t> gen(seeds);
    std::sort(gen.begin(), gen.end());
    if (gen[0] == gen[1] || gen[1] == gen[2] || gen[2] >= detail::checked_pow(d, N))
        throw usage_error("generation-0 cells must be distinct grid cells");
    fam.generations.push_back(gen);

    for (int n = 0; n < depth; ++n) {
        const std::uint64_t scale = fam.scale(n);
        std::vector<std::uint64_t> next;
        next.reserve(gen.size() * d);
        for (int j = 0; j < d; ++j)
            for (const std::uint64_t k : gen) next.push_back(j * scale + k);
        std::sort(next.begin(), next.end());

        auto drop = deletion_oracle(static_cast<size_t>(n) + 1, next);
        if (drop.size() > static_cast<size_t>(2 * (d - 1)))
            throw usage_error("deletion oracle removed more than 2(d-1) cells");
        std::sort(drop.rbegin(), drop.rend());
        for (size_t idx : drop) next.erase(next.begin() + idx);
        fam.deletions.push_back(drop.size());
        fam.generations.push_back(next);
        gen = std::move(next);
    }
    return fam;
}

inline IntervalFamily build_families(const std::vector<std::uint64_t>& seeds, int d, int N,
                                     int depth, DeletionMode mode) {
    auto oracle = [d, mode](size_t, const std::vector<std::uint64_t>& cand) {
        std::vector<size_t> drop;
        if (mode == DeletionMode::Lex)
            for (size_t i = 0; i < static_cast<size_t>(2 * (d - 1)) && i < cand.size(); ++i)
                drop.push_back(i);
        return drop;
    };
    return build_families(seeds, d, N, depth, oracle);
}

// Arc-based entry point; the three arcs must be exact d^-N grid cells.
inline IntervalFamily build_families(const ArcInterval& i1, const ArcInterval& i2,
                                     const ArcInterval& i3, int d, int N, int depth,
                                     DeletionMode mode) {
    const std::uint64_t base = detail::checked_pow(d, N);
    auto to_cell = [&](const ArcInterval& arc) {
        if (arc.length() != BigRat(BigInt(1), BigInt(base)))
            throw usage_error("generation-0 interval is not a d^-N cell");
        const BigRat s = arc.start.value();
        const BigInt num = boost::multiprecision::numerator(s) * base;
        const BigInt den = boost::multiprecision::denominator(s);
        if (num % den != 0) throw usage_error("generation-0 interval not grid aligned");
        return (num / den).convert_to<std::uint64_t>();
    };
    return build_families({to_cell(i1), to_cell(i2), to_cell(i3)}, d, N, depth, mode);
}

// Standalone seeds: three spread cells on the d^-N grid.
inline std::vector<std::uint64_t> default_seeds(int d, int N) {
    const std::uint64_t base = detail::checked_pow(d, N);
    if (base <= 3) throw usage_error("d^N must exceed 3");
    return {0, base / 3, 2 * base / 3};
}

// Narrow-driven family: seeds snapped from the triple's shorter arcs, one
// cell per family branch; a preimage cell survives iff it sits inside a
// narrow child of its branch leaf. Deleted cells are exactly the blocked
// (non-narrow) branches, at most 2(d-1) per generation.
inline IntervalFamily build_families_from_narrow(const NarrowFamily& fam, int depth) {
    const int d = fam.degree;
    std::vector<SnappedCell> snaps;
    for (const Leaf* l : {&fam.base.a, &fam.base.b, &fam.base.c})
        snaps.push_back(snap_to_grid(l->shorter_arc(), d));
    int N = 0;
    for (const auto& s : snaps) N = std::max(N, s.base_exponent);
    detail::checked_pow(d, N + depth + 1);

    IntervalFamily out;
    out.degree = d;
    out.base_exponent = N;

    // refine each snapped cell to the common scale (first subcell)
    const std::uint64_t base = detail::checked_pow(d, N);
    std::vector<std::pair<std::uint64_t, Leaf>> cur;
    std::vector<std::uint64_t> gen0;
    const std::array<const Leaf*, 3> members{&fam.base.a, &fam.base.b, &fam.base.c};
    for (size_t i = 0; i < 3; ++i) {
        const BigRat s = snaps[i].cell.start.value();
        const std::uint64_t k =
            (boost::multiprecision::numerator(s) * base /
             boost::multiprecision::denominator(s)).convert_to<std::uint64_t>();
        cur.emplace_back(k, *members[i]);
        gen0.push_back(k);
    }
    std::sort(gen0.begin(), gen0.end());
    out.generations.push_back(gen0);

    for (int n = 0; n < depth; ++n) {
        if (static_cast<size_t>(n) + 1 >= fam.generations.size())
            throw insufficient_depth("narrow family too shallow for requested depth");
        const std::uint64_t scale = out.scale(n);

        std::map<Leaf, std::vector<const Leaf*>> by_parent;
        for (const Leaf& c : fam.generations[n + 1]) {
            const auto img = forward_leaf(c, d);
            if (img) by_parent[*img].push_back(&c);
        }

        std::vector<std::pair<std::uint64_t, Leaf>> next;
        size_t deleted = 0;
        for (const auto& [cell, leaf] : cur) {
            const auto it = by_parent.find(leaf);
            for (int j = 0; j < d; ++j) {
                const std::uint64_t pre = static_cast<std::uint64_t>(j) * scale + cell;
                const ArcInterval pre_arc(Angle(BigRat(BigInt(pre), BigInt(scale * d))),
                                          Angle(BigRat(BigInt(pre) + 1, BigInt(scale * d))));
                const Leaf* host = nullptr;
                if (it != by_parent.end())
                    for (const Leaf* c : it->second)
                        if (c->shorter_arc().contains_closed(pre_arc)) {
                            host = c;
                            break;
                        }
                if (host)
                    next.emplace_back(pre, *host);
                else
                    ++deleted;
            }
        }
        if (deleted > static_cast<size_t>(2 * (d - 1)))
            throw invariant_violation("narrow deletions exceed 2(d-1) in one generation");
        out.deletions.push_back(deleted);
        std::vector<std::uint64_t> cells;
        cells.reserve(next.size());
        for (const auto& [c, l] : next) cells.push_back(c);
        std::sort(cells.begin(), cells.end());
        out.generations.push_back(cells);
        cur = std::move(next);
    }
    return out;
}

struct CoverSequence {
    int degree = 2;
    std::vector<std::uint64_t> counts; // c_n
};

// c_n = number of d^-n grid cells meeting the complement of the union of
// all generations up to n. The recurrence c_{n+1} <= d*c_n + 2(d-2) is
// checked as the sequence is produced.
inline CoverSequence cover_counts(const IntervalFamily& fam, int upto) {
    if (static_cast<size_t>(upto) >= fam.generations.size())
        throw insufficient_depth("family not built to requested cover depth");
    const int d = fam.degree;
    const std::uint64_t base = detail::checked_pow(d, fam.base_exponent);

    CoverSequence seq;
    seq.degree = d;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> covered; // disjoint [s,e)
    for (int n = 0; n <= upto; ++n) {
        if (n > 0)
            for (auto& [s, e] : covered) {
                s *= static_cast<unsigned>(d);
                e *= static_cast<unsigned>(d);
            }
        const size_t mid = covered.size();
        covered.reserve(mid + fam.generations[n].size());
        for (const std::uint64_t k : fam.generations[n]) covered.emplace_back(k, k + 1);
        std::inplace_merge(covered.begin(), covered.begin() + static_cast<long>(mid),
                           covered.end());
        size_t w = 0;
        for (const auto& r : covered) {
            if (w > 0 && r.first <= covered[w - 1].second)
                covered[w - 1].second = std::max(covered[w - 1].second, r.second);
            else
                covered[w++] = r;
        }
        covered.resize(w);
        // cells of size `base` fully inside the covered union
        std::uint64_t full = 0;
        for (const auto& [s, e] : covered) {
            const std::uint64_t lo = (s + base - 1) / base;
            const std::uint64_t hi = e / base;
            if (hi > lo) full += hi - lo;
        }
        const std::uint64_t total = detail::checked_pow(d, n);
        seq.counts.push_back(total - full);
        if (n > 0) {
            const auto bound = static_cast<std::uint64_t>(d) * seq.counts[n - 1] +
                               static_cast<std::uint64_t>(2 * (d - 2));
            if (seq.counts[n] > bound)
                throw invariant_violation("cover recurrence violated at n=" + std::to_string(n));
        }
    }
    return seq;
}

// 1 - 3 d^-N / (N ln d), valid once d^N > 3.
inline double minkowski_bound(int d, int N) {
    if (d < 2 || N < 1) throw usage_error("need d >= 2 and N >= 1");
    double p = 1;
    for (int i = 0; i < N; ++i) p *= d;
    if (p <= 3) throw usage_error("bound needs d^N > 3");
    return 1.0 - 3.0 / p / (N * std::log(static_cast<double>(d)));
}

namespace detail {

inline double ls_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const size_t n = xs.size();
    double xm = 0, ym = 0;
    for (size_t i = 0; i < n; ++i) {
        xm += xs[i];
        ym += ys[i];
    }
    xm /= static_cast<double>(n);
    ym /= static_cast<double>(n);
    double num = 0, den = 0;
    for (size_t i = 0; i < n; ++i) {
        num += (xs[i] - xm) * (ys[i] - ym);
        den += (xs[i] - xm) * (xs[i] - xm);
    }
    return num / den;
}

} // namespace detail

// Least-squares slope of ln c_n against n ln d over the tail after the
// burn-in prefix; the empirical box dimension of the uncovered set.
inline double dimension_from_counts(const CoverSequence& seq, double burn_in = 0.25) {
    if (seq.counts.size() < 4) throw usage_error("need at least 4 cover counts");
    const size_t start = static_cast<size_t>(std::ceil(seq.counts.size() * burn_in));
    std::vector<double> xs, ys;
    for (size_t n = start; n < seq.counts.size(); ++n) {
        if (seq.counts[n] == 0) throw usage_error("zero cover count in regression tail");
        xs.push_back(static_cast<double>(n) * std::log(seq.degree));
        ys.push_back(std::log(static_cast<double>(seq.counts[n])));
    }
    return detail::ls_slope(xs, ys);
}

// Leaf census: L_n counts leaves of generation <= n with length >= d^-n,
// the scale-matched box census of the leaf system. Slope of ln L_n against
// n ln d over the tail estimates the dimension of the endpoint set.
inline double leaf_census_dimension(const Lamination& lam, int depth, double burn_in = 0.25) {
    if (static_cast<size_t>(depth) > lam.depth())
        throw insufficient_depth("lamination not built to census depth");
    const int d = lam.degree;
    std::vector<std::uint64_t> L(static_cast<size_t>(depth) + 1, 0);
    BigRat threshold(1);
    for (int n = 1; n <= depth; ++n) {
        threshold /= d;
        std::uint64_t count = 0;
        for (int g = 0; g <= n; ++g)
            for (const Leaf& l : lam.generations[g])
                if (l.length() >= threshold) ++count;
        L[n] = count;
    }
    size_t start = static_cast<size_t>(std::ceil(depth * burn_in));
    if (start < 1) start = 1;
    while (start <= static_cast<size_t>(depth) && L[start] == 0) ++start;
    std::vector<double> xs, ys;
    std::set<std::uint64_t> distinct;
    for (size_t n = start; n <= static_cast<size_t>(depth); ++n) {
        xs.push_back(static_cast<double>(n) * std::log(d));
        ys.push_back(std::log(static_cast<double>(L[n])));
        distinct.insert(L[n]);
    }
    if (distinct.size() < 2)
        throw usage_error("census needs at least 2 distinct nonzero counts");
    return detail::ls_slope(xs, ys);
}

// CSV rows "n, |I_n|, c_n, bound_rhs".
inline void write_cover_csv(const IntervalFamily& fam, const CoverSequence& seq,
                            std::ostream& os) {
    os << "# lamina-cover-v1 n,I_n,c_n,bound_rhs\n";
    for (size_t n = 0; n < seq.counts.size(); ++n) {
        os << n << "," << fam.generations[n].size() << "," << seq.counts[n] << ",";
        if (n > 0)
            os << seq.degree * seq.counts[n - 1] + 2 * (seq.degree - 2);
        os << "\n";
    }
}

} // namespace lamina
