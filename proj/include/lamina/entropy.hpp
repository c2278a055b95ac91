#pragma once

// Core entropy from Hubbard-tree transition matrices: dominant eigenvalue
// by power iteration, entropy H = max(0, ln rho), and the predicted
// dimension H / ln d.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "lamina/errors.hpp"

namespace lamina {

struct TransitionMatrix {
    std::vector<std::vector<std::uint64_t>> entries; // square, nonnegative

    size_t size() const { return entries.size(); }

    void validate() const {
        if (entries.empty()) throw usage_error("transition matrix must be nonempty");
        bool any = false;
        for (const auto& row : entries) {
            if (row.size() != entries.size())
                throw usage_error("transition matrix must be square");
            for (const auto v : row) any = any || v > 0;
        }
        if (!any) throw usage_error("transition matrix must have a positive entry");
    }
};

namespace detail {

// Strongly connected components, iterative Tarjan.
inline std::vector<std::vector<size_t>> sccs(const TransitionMatrix& m) {
    const size_t n = m.size();
    std::vector<int> index(n, -1), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<size_t> stack;
    std::vector<std::vector<size_t>> out;
    int counter = 0;

    struct Frame {
        size_t v;
        size_t next = 0;
    };
    for (size_t root = 0; root < n; ++root) {
        if (index[root] >= 0) continue;
        std::vector<Frame> frames{{root}};
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!frames.empty()) {
            auto& f = frames.back();
            bool descended = false;
            while (f.next < n) {
                const size_t w = f.next++;
                if (m.entries[f.v][w] == 0) continue;
                if (index[w] < 0) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.push_back({w});
                    descended = true;
                    break;
                }
                if (on_stack[w]) low[f.v] = std::min(low[f.v], index[w]);
            }
            if (descended) continue;
            if (low[f.v] == index[f.v]) {
                std::vector<size_t> comp;
                while (true) {
                    const size_t w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp.push_back(w);
                    if (w == f.v) break;
                }
                out.push_back(std::move(comp));
            }
            const size_t v = f.v;
            frames.pop_back();
            if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
        }
    }
    return out;
}

// Power iteration on (M + I); shifting makes every component aperiodic so
// the max-norm ratio converges. Returns rho(M).
inline double power_radius(const std::vector<std::vector<std::uint64_t>>& a, double rel_tol,
                           int max_iter) {
    const size_t n = a.size();
    if (n == 1) return static_cast<double>(a[0][0]);
    std::vector<double> v(n, 1.0), w(n, 0.0);
    double prev = 0, cur = 0;
    for (int it = 0; it < max_iter; ++it) {
        double norm = 0;
        for (size_t i = 0; i < n; ++i) {
            double s = v[i]; // the +I shift
            for (size_t j = 0; j < n; ++j)
                if (a[i][j]) s += static_cast<double>(a[i][j]) * v[j];
            w[i] = s;
            norm = std::max(norm, s);
        }
        prev = cur;
        cur = norm - 1.0;
        if (norm == 0) return 0.0;
        for (size_t i = 0; i < n; ++i) v[i] = w[i] / norm;
        if (it > 2 && std::abs(cur - prev) <= rel_tol * std::max(1.0, std::abs(cur)))
            return cur;
    }
    throw non_convergence("power iteration did not converge", cur, prev);
}

} // namespace detail

// Dominant eigenvalue modulus; for reducible matrices the max over the
// diagonal blocks of the condensation.
inline double spectral_radius(const TransitionMatrix& m, double rel_tol = 1e-12,
                              int max_iter = 200000) {
    m.validate();
    double radius = 0;
    for (const auto& comp : detail::sccs(m)) {
        std::vector<std::vector<std::uint64_t>> block(comp.size(),
                                                      std::vector<std::uint64_t>(comp.size()));
        for (size_t i = 0; i < comp.size(); ++i)
            for (size_t j = 0; j < comp.size(); ++j)
                block[i][j] = m.entries[comp[i]][comp[j]];
        radius = std::max(radius, detail::power_radius(block, rel_tol, max_iter));
    }

    // classical bounds when every row is nonzero
    double rmin = std::numeric_limits<double>::infinity(), rmax = 0;
    bool all_rows = true;
    for (const auto& row : m.entries) {
        double s = 0;
        for (const auto v : row) s += static_cast<double>(v);
        if (s == 0) all_rows = false;
        rmin = std::min(rmin, s);
        rmax = std::max(rmax, s);
    }
    if (all_rows && (radius < rmin - 1e-6 || radius > rmax + 1e-6))
        throw invariant_violation("spectral radius escaped the row-sum bounds");
    return radius;
}

struct EntropyReport {
    double spectral_radius = 0;
    double core_entropy = 0;       // max(0, ln rho)
    double predicted_dimension = 0; // core_entropy / ln d
    bool dimension_in_range = true; // soft [0,1] check
};

inline EntropyReport entropy_report(const TransitionMatrix& m, int d) {
    if (d < 2) throw usage_error("degree must be >= 2");
    EntropyReport r;
    r.spectral_radius = spectral_radius(m);
    r.core_entropy = r.spectral_radius <= 1.0 ? 0.0 : std::log(r.spectral_radius);
    r.predicted_dimension = r.core_entropy / std::log(static_cast<double>(d));
    r.dimension_in_range = r.predicted_dimension >= 0.0 && r.predicted_dimension <= 1.0 + 1e-12;
    return r;
}

// Built-in Hubbard-tree presets.
inline TransitionMatrix preset_matrix(const std::string& name) {
    if (name == "chebyshev") return {{{2}}};
    if (name == "basilica") return {{{1}}};
    if (name == "airplane") return {{{0, 1}, {1, 1}}};
    throw usage_error("unknown preset '" + name + "' (chebyshev|basilica|airplane)");
}

// Plain text: one row per line, space-separated nonnegative integers.
inline TransitionMatrix parse_matrix(std::istream& is) {
    TransitionMatrix m;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        std::vector<std::uint64_t> vals;
        long long v;
        while (row >> v) {
            if (v < 0) throw usage_error("transition matrix entries must be >= 0");
            vals.push_back(static_cast<std::uint64_t>(v));
        }
        if (!vals.empty()) m.entries.push_back(std::move(vals));
    }
    m.validate();
    return m;
}

} // namespace lamina
