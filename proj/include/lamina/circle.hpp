#pragma once

// Exact arithmetic on the circle R/Z: angles, the degree-d multiplication
// map, the shorter-arc metric, and oriented open arcs. Everything here is
// rational with arbitrary-precision integers; no floating point.

#include <compare>
#include <ostream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "lamina/errors.hpp"

namespace lamina {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline BigInt floor_div(const BigInt& n, const BigInt& d) {
    BigInt q = n / d;
    if ((n < 0) != (d < 0) && q * d != n) --q;
    return q;
}

// A point of R/Z, stored as a reduced rational in [0,1).
class Angle {
  public:
    Angle() : v_(0) {}

    explicit Angle(BigRat v) : v_(wrap(std::move(v))) {}

    Angle(long long num, long long den)
        : Angle(den != 0 ? BigRat(num, den)
                         : throw usage_error("angle denominator must be nonzero")) {}

    const BigRat& value() const { return v_; }

    BigInt numerator() const { return boost::multiprecision::numerator(v_); }
    BigInt denominator() const { return boost::multiprecision::denominator(v_); }

    friend bool operator==(const Angle&, const Angle&) = default;
    friend std::strong_ordering operator<=>(const Angle& a, const Angle& b) {
        if (a.v_ < b.v_) return std::strong_ordering::less;
        if (a.v_ > b.v_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    static BigRat wrap(BigRat v) {
        const BigInt q = floor_div(boost::multiprecision::numerator(v),
                                   boost::multiprecision::denominator(v));
        if (q != 0) v -= BigRat(q);
        return v;
    }

  private:
    BigRat v_;
};

inline Angle operator+(const Angle& a, const Angle& b) { return Angle(a.value() + b.value()); }
inline Angle operator-(const Angle& a, const Angle& b) { return Angle(a.value() - b.value()); }

// "p/q" reduced, or "0".
inline std::string format_angle(const Angle& a) {
    if (a.numerator() == 0) return "0";
    return a.numerator().str() + "/" + a.denominator().str();
}

inline Angle parse_angle(const std::string& text) {
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return Angle(BigRat(BigInt(text)));
        const BigInt num(text.substr(0, slash));
        const BigInt den(text.substr(slash + 1));
        if (den <= 0) throw usage_error("angle denominator must be positive: " + text);
        return Angle(BigRat(num, den));
    } catch (const std::exception&) {
        throw usage_error("cannot parse angle '" + text + "' (expected p/q or 0)");
    }
}

inline std::ostream& operator<<(std::ostream& os, const Angle& a) { return os << format_angle(a); }

// t -> d*t mod 1, exact.
inline Angle mul_by_d(const Angle& t, int d) {
    if (d < 2) throw usage_error("degree must be >= 2");
    return Angle(t.value() * d);
}

// The d preimages (t+k)/d, k = 0..d-1, sorted counterclockwise from 0.
inline std::vector<Angle> preimages(const Angle& t, int d) {
    if (d < 2) throw usage_error("degree must be >= 2");
    std::vector<Angle> out;
    out.reserve(static_cast<size_t>(d));
    for (int k = 0; k < d; ++k) out.emplace_back((t.value() + k) / d);
    return out;
}

// Length of the counterclockwise arc from a to b; 0 iff a == b.
inline BigRat ccw_length(const Angle& a, const Angle& b) {
    return Angle::wrap(b.value() - a.value());
}

// Shorter-arc distance; a metric with values in [0, 1/2].
inline BigRat tau(const Angle& a, const Angle& b) {
    BigRat d = ccw_length(a, b);
    if (d > BigRat(1, 2)) d = 1 - d;
    return d;
}

// t strictly inside the open ccw arc (a, b).
inline bool in_open_arc(const Angle& t, const Angle& a, const Angle& b) {
    if (a == b) return false;
    const BigRat pos = ccw_length(a, t);
    return pos > 0 && pos < ccw_length(a, b);
}

// t strictly inside the shorter arc between a and b. Antipodal endpoints
// leave no well-defined shorter arc and are rejected.
inline bool shorter_arc_contains(const Angle& t, const Angle& a, const Angle& b) {
    if (a == b) throw usage_error("shorter arc needs two distinct endpoints");
    if (tau(a, b) == BigRat(1, 2))
        throw ambiguous_arc("antipodal endpoints: no shorter arc");
    if (ccw_length(a, b) < BigRat(1, 2)) return in_open_arc(t, a, b);
    return in_open_arc(t, b, a);
}

// Open oriented arc swept counterclockwise from start to end.
struct ArcInterval {
    Angle start;
    Angle end;

    ArcInterval(Angle s, Angle e) : start(std::move(s)), end(std::move(e)) {
        if (start == end) throw usage_error("arc endpoints must differ");
    }

    BigRat length() const { return ccw_length(start, end); }

    bool contains(const Angle& t) const { return in_open_arc(t, start, end); }

    // Closed containment of another arc, both lifted from this->start.
    bool contains_closed(const ArcInterval& other) const {
        const BigRat off = ccw_length(start, other.start);
        return off + other.length() <= length();
    }

    friend bool operator==(const ArcInterval&, const ArcInterval&) = default;
};

inline bool arcs_overlap(const ArcInterval& x, const ArcInterval& y) {
    return x.contains(y.start) || x.contains(y.end) || y.contains(x.start) ||
           y.contains(x.end) || x == y;
}

} // namespace lamina
