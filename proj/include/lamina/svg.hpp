#pragma once

// SVG rendering of laminations: unit circle plus one straight chord per
// leaf, polygon gaps shaded. Floating point enters only here, at the
// output boundary.

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>

#include "lamina/lamination.hpp"

namespace lamina {

namespace detail {

inline std::pair<double, double> circle_point(const Angle& t) {
    const double x = t.value().convert_to<double>();
    return {std::cos(2 * std::numbers::pi * x), std::sin(2 * std::numbers::pi * x)};
}

inline std::string coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

} // namespace detail

inline void render_svg(const Lamination& lam, std::ostream& os) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-1.1 -1.1 2.2 2.2\">\n";
    os << "  <circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"black\" "
          "stroke-width=\"0.004\"/>\n";

    for (const auto& poly : polygon_components(lam)) {
        os << "  <path d=\"";
        for (size_t i = 0; i < poly.size(); ++i) {
            const auto [x, y] = detail::circle_point(poly[i]);
            os << (i == 0 ? "M" : "L") << detail::coord(x) << " " << detail::coord(y) << " ";
        }
        os << "Z\" fill=\"#9ecfff\" fill-opacity=\"0.5\" stroke=\"none\"/>\n";
    }

    for (size_t g = 0; g < lam.generations.size(); ++g) {
        std::vector<Leaf> sorted(lam.generations[g]);
        std::sort(sorted.begin(), sorted.end());
        for (const Leaf& l : sorted) {
            const auto [x1, y1] = detail::circle_point(l.a());
            const auto [x2, y2] = detail::circle_point(l.b());
            os << "  <path d=\"M" << detail::coord(x1) << " " << detail::coord(y1) << " L"
               << detail::coord(x2) << " " << detail::coord(y2)
               << "\" stroke=\"#202060\" stroke-width=\"0.003\" fill=\"none\"/>\n";
        }
    }
    os << "</svg>\n";
    if (!os) throw error("svg stream write failed");
}

} // namespace lamina
