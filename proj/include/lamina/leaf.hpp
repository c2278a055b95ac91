#pragma once

// Leaves: unordered pairs of distinct angles, modelling biaccessible angle
// pairs as chords of the unit disk.

#include <compare>
#include <optional>
#include <ostream>
#include <utility>

#include "lamina/circle.hpp"

namespace lamina {

// Canonical storage: a is the endpoint from which the ccw arc to b has
// length <= 1/2; for a diameter the smaller endpoint comes first.
class Leaf {
  public:
    Leaf(Angle x, Angle y) {
        if (x == y) throw usage_error("leaf endpoints must differ");
        const BigRat fwd = ccw_length(x, y);
        if (fwd < BigRat(1, 2)) {
            a_ = std::move(x);
            b_ = std::move(y);
        } else if (fwd > BigRat(1, 2)) {
            a_ = std::move(y);
            b_ = std::move(x);
        } else {
            a_ = std::min(x, y);
            b_ = std::max(x, y);
        }
    }

    const Angle& a() const { return a_; }
    const Angle& b() const { return b_; }

    BigRat length() const { return tau(a_, b_); }

    bool is_diameter() const { return length() == BigRat(1, 2); }

    bool has_endpoint(const Angle& t) const { return t == a_ || t == b_; }

    // Open shorter arc (for a diameter: the canonical side).
    ArcInterval shorter_arc() const { return ArcInterval(a_, b_); }
    ArcInterval longer_arc() const { return ArcInterval(b_, a_); }

    friend bool operator==(const Leaf&, const Leaf&) = default;
    friend std::strong_ordering operator<=>(const Leaf& l, const Leaf& r) {
        if (auto c = l.a_ <=> r.a_; c != 0) return c;
        return l.b_ <=> r.b_;
    }

  private:
    Angle a_, b_;
};

inline std::ostream& operator<<(std::ostream& os, const Leaf& l) {
    return os << "{" << l.a() << "," << l.b() << "}";
}

// Strict transversal crossing; sharing an endpoint is not crossing.
inline bool leaves_cross(const Leaf& l1, const Leaf& l2) {
    if (l1.has_endpoint(l2.a()) || l1.has_endpoint(l2.b())) return false;
    return in_open_arc(l2.a(), l1.a(), l1.b()) != in_open_arc(l2.b(), l1.a(), l1.b());
}

// Image under t -> d*t; nullopt marks the degenerate (critical) case where
// both endpoints map to the same angle.
inline std::optional<Leaf> forward_leaf(const Leaf& l, int d) {
    const Angle ia = mul_by_d(l.a(), d);
    const Angle ib = mul_by_d(l.b(), d);
    if (ia == ib) return std::nullopt;
    return Leaf(ia, ib);
}

} // namespace lamina
