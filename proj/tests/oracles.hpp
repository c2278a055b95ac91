#pragma once

// Test-only oracles, independent of the library's computation paths:
// brute-force pairing search, fine-grid arc membership, high-precision
// closed forms.

#include <algorithm>
#include <optional>
#include <set>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "lamina/lamination.hpp"

namespace oracle {

using lamina::Angle;
using lamina::BigRat;
using lamina::Leaf;

// Every perfect matching between the preimage fans of the two endpoints,
// filtered to non-crossing sets that avoid crossing or duplicating the
// context. Exhaustive; exponential in d.
inline std::vector<std::vector<Leaf>> all_valid_pairings(const Leaf& l, int d,
                                                         const std::set<Leaf>& context) {
    const auto pa = lamina::preimages(l.a(), d);
    const auto pb = lamina::preimages(l.b(), d);
    std::vector<size_t> perm(pb.size());
    for (size_t i = 0; i < perm.size(); ++i) perm[i] = i;

    std::vector<std::vector<Leaf>> found;
    do {
        std::vector<Leaf> cand;
        bool ok = true;
        for (size_t i = 0; i < pa.size() && ok; ++i) {
            if (pa[i] == pb[perm[i]]) {
                ok = false;
                break;
            }
            cand.emplace_back(pa[i], pb[perm[i]]);
        }
        if (!ok) continue;
        std::set<Leaf> dedup(cand.begin(), cand.end());
        if (dedup.size() != cand.size()) continue;
        for (size_t i = 0; i < cand.size() && ok; ++i) {
            if (context.count(cand[i])) ok = false;
            for (size_t j = i + 1; j < cand.size() && ok; ++j)
                if (lamina::leaves_cross(cand[i], cand[j])) ok = false;
            for (const auto& c : context)
                if (lamina::leaves_cross(cand[i], c)) {
                    ok = false;
                    break;
                }
        }
        if (!ok) continue;
        std::sort(cand.begin(), cand.end());
        if (std::find(found.begin(), found.end(), cand) == found.end()) found.push_back(cand);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return found;
}

// Membership of t in the shorter arc between a and b, decided by walking a
// fine rational grid in both orientations rather than by arc arithmetic.
inline bool grid_shorter_arc_contains(const Angle& t, const Angle& a, const Angle& b,
                                      long grid = 5040 * 16) {
    auto pos = [&](const Angle& x) {
        return (x.value() * grid).convert_to<double>();
    };
    const double pa = pos(a), pb = pos(b), pt = pos(t);
    auto ccw_steps = [&](double from, double to) {
        double s = to - from;
        while (s < 0) s += grid;
        return s;
    };
    const double fwd = ccw_steps(pa, pb);
    const bool use_fwd = fwd < grid / 2.0;
    const double lo = use_fwd ? pa : pb;
    const double arc = use_fwd ? fwd : grid - fwd;
    const double off = ccw_steps(lo, pt);
    return off > 1e-9 && off < arc - 1e-9;
}

// 1 - 3 d^-N / (N ln d) at 50 decimal digits.
inline double minkowski_bound_hp(int d, int N) {
    using HP = boost::multiprecision::cpp_bin_float_50;
    HP p = 1;
    for (int i = 0; i < N; ++i) p *= d;
    const HP v = 1 - HP(3) / p / (HP(N) * log(HP(d)));
    return v.convert_to<double>();
}

// Golden ratio from its defining polynomial, bisection only.
inline double golden_ratio_bisect() {
    double lo = 1, hi = 2;
    for (int i = 0; i < 200; ++i) {
        const double mid = (lo + hi) / 2;
        (mid * mid - mid - 1 < 0 ? lo : hi) = mid;
    }
    return (lo + hi) / 2;
}

} // namespace oracle
