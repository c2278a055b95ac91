#pragma once

// Command implementations behind the lamina CLI: configuration record,
// key=value config files, and the build / narrow / cover / entropy /
// render / verify pipelines. Flag parsing itself lives in the tool.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lamina/cover.hpp"
#include "lamina/entropy.hpp"
#include "lamina/svg.hpp"

namespace lamina::cli {

struct ExperimentConfig {
    std::string preset;                 // chebyshev | basilica | airplane
    std::optional<Angle> theta;
    int degree = 2;
    int depth = 8;
    int depth_cap = 22;                 // memory guard, configurable
    std::optional<int> base_exponent;
    double burn_in = 0.25;
    std::string deletion_mode = "lex";  // narrow | lex | none
    std::string model = "pullback";     // pullback | symmetric
    std::string out_path;
    std::string svg_path;
    std::string matrix_path;
    unsigned long long rng_seed = 20220831ULL;
};

inline Angle preset_theta(const std::string& preset) {
    if (preset == "chebyshev") return Angle(1, 2);
    if (preset == "basilica") return Angle(1, 3);
    if (preset == "airplane") return Angle(3, 7);
    throw usage_error("unknown preset '" + preset + "'");
}

inline std::optional<std::string> theta_preset_name(const Angle& theta) {
    if (theta == Angle(1, 2)) return "chebyshev";
    if (theta == Angle(1, 3)) return "basilica";
    if (theta == Angle(3, 7)) return "airplane";
    return std::nullopt;
}

// key=value lines; '#' comments. Flags win over file values, so the caller
// applies the file first.
inline void apply_config_file(ExperimentConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw usage_error("cannot open config file " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw usage_error(path + ":" + std::to_string(lineno) + ": expected key=value");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        try {
            if (key == "preset") cfg.preset = val;
            else if (key == "theta") cfg.theta = parse_angle(val);
            else if (key == "degree") cfg.degree = std::stoi(val);
            else if (key == "depth") cfg.depth = std::stoi(val);
            else if (key == "depth_cap") cfg.depth_cap = std::stoi(val);
            else if (key == "base_exponent") cfg.base_exponent = std::stoi(val);
            else if (key == "burn_in") cfg.burn_in = std::stod(val);
            else if (key == "deletion_mode") cfg.deletion_mode = val;
            else if (key == "model") cfg.model = val;
            else if (key == "out") cfg.out_path = val;
            else if (key == "svg") cfg.svg_path = val;
            else if (key == "matrix") cfg.matrix_path = val;
            else if (key == "rng_seed") cfg.rng_seed = std::stoull(val);
            else throw usage_error("unknown key '" + key + "'");
        } catch (const usage_error&) {
            throw;
        } catch (const std::exception&) {
            throw usage_error(path + ":" + std::to_string(lineno) + ": bad value for " + key);
        }
    }
}

inline Angle resolve_theta(const ExperimentConfig& cfg) {
    if (cfg.theta) return *cfg.theta;
    if (!cfg.preset.empty()) return preset_theta(cfg.preset);
    throw usage_error("need --theta or --preset");
}

inline void check_depth(const ExperimentConfig& cfg) {
    if (cfg.depth < 0) throw usage_error("depth must be >= 0");
    if (cfg.depth > cfg.depth_cap)
        throw usage_error("depth " + std::to_string(cfg.depth) + " exceeds cap " +
                          std::to_string(cfg.depth_cap) + " (raise --depth-cap to override)");
}

inline Lamination build_for(const ExperimentConfig& cfg) {
    check_depth(cfg);
    if (cfg.preset == "chebyshev" || cfg.model == "symmetric") {
        const Angle th = cfg.preset == "chebyshev" ? Angle(1, 2) : resolve_theta(cfg);
        return build_symmetric_lamination(th, cfg.degree, cfg.depth);
    }
    return build_quadratic_lamination(resolve_theta(cfg), cfg.depth);
}

namespace detail {

inline std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw usage_error("cannot open output file " + path);
    return f;
}

} // namespace detail

inline int run_build(const ExperimentConfig& cfg, std::ostream& out) {
    const Lamination lam = build_for(cfg);
    if (!cfg.out_path.empty()) {
        auto f = detail::open_out(cfg.out_path);
        serialize(lam, f);
    } else {
        serialize(lam, out);
    }
    if (!cfg.svg_path.empty()) {
        auto f = detail::open_out(cfg.svg_path);
        render_svg(lam, f);
    }
    return 0;
}

inline int run_render(const ExperimentConfig& cfg) {
    if (cfg.svg_path.empty()) throw usage_error("render needs --svg <file>");
    const Lamination lam = build_for(cfg);
    auto f = detail::open_out(cfg.svg_path);
    render_svg(lam, f);
    return 0;
}

inline int run_narrow(const ExperimentConfig& cfg, std::ostream& out) {
    const Lamination lam = build_quadratic_lamination(resolve_theta(cfg), cfg.depth);
    const auto triple = find_unnested_triple(lam);
    if (!triple) throw error("no un-nested triple found up to depth " + std::to_string(cfg.depth));
    const size_t base_gen = std::max({lam.generation_of.at(triple->a),
                                      lam.generation_of.at(triple->b),
                                      lam.generation_of.at(triple->c)});
    const int avail = static_cast<int>(lam.depth() - base_gen);
    const NarrowFamily fam = narrow_generations(*triple, lam, avail);
    if (!cfg.out_path.empty()) {
        auto f = detail::open_out(cfg.out_path);
        write_narrow_csv(fam, f);
    } else {
        write_narrow_csv(fam, out);
    }
    return 0;
}

struct CoverRun {
    IntervalFamily family;
    CoverSequence cover;
    double dimension = 0;
    double bound = 0;
};

inline CoverRun run_cover_pipeline(const ExperimentConfig& cfg) {
    check_depth(cfg);
    CoverRun r;
    if (cfg.deletion_mode == "narrow") {
        const Lamination lam = build_quadratic_lamination(resolve_theta(cfg), cfg.depth);
        const auto triple = find_unnested_triple(lam);
        if (!triple) throw error("no un-nested triple found; cannot drive deletions");
        const size_t base_gen = std::max({lam.generation_of.at(triple->a),
                                          lam.generation_of.at(triple->b),
                                          lam.generation_of.at(triple->c)});
        const int avail = static_cast<int>(lam.depth() - base_gen);
        const NarrowFamily nf = narrow_generations(*triple, lam, avail);
        r.family = build_families_from_narrow(nf, avail);
        r.cover = cover_counts(r.family, avail);
    } else {
        const DeletionMode mode =
            cfg.deletion_mode == "lex" ? DeletionMode::Lex : DeletionMode::None;
        if (cfg.deletion_mode != "lex" && cfg.deletion_mode != "none")
            throw usage_error("deletion mode must be narrow, lex or none");
        const int N = cfg.base_exponent.value_or(2);
        r.family = build_families(default_seeds(cfg.degree, N), cfg.degree, N, cfg.depth, mode);
        r.cover = cover_counts(r.family, cfg.depth);
    }
    r.dimension = dimension_from_counts(r.cover, cfg.burn_in);
    r.bound = minkowski_bound(r.family.degree, r.family.base_exponent);
    return r;
}

inline int run_cover(const ExperimentConfig& cfg, std::ostream& out) {
    const CoverRun r = run_cover_pipeline(cfg);
    auto emit = [&](std::ostream& os) {
        write_cover_csv(r.family, r.cover, os);
        os << "# dimension=" << std::setprecision(12) << r.dimension << " bound=" << r.bound
           << "\n";
    };
    if (!cfg.out_path.empty()) {
        auto f = detail::open_out(cfg.out_path);
        emit(f);
    } else {
        emit(out);
    }
    return 0;
}

inline int run_entropy(const ExperimentConfig& cfg, std::ostream& out) {
    TransitionMatrix m;
    if (!cfg.matrix_path.empty()) {
        std::ifstream f(cfg.matrix_path);
        if (!f) throw usage_error("cannot open matrix file " + cfg.matrix_path);
        m = parse_matrix(f);
    } else if (!cfg.preset.empty()) {
        m = preset_matrix(cfg.preset);
    } else {
        throw usage_error("entropy needs --preset or --matrix");
    }
    const EntropyReport r = entropy_report(m, cfg.degree);
    out << "# lamina-entropy-v1 spectral_radius,core_entropy,predicted_dimension,in_range\n";
    out << std::setprecision(12) << r.spectral_radius << "," << r.core_entropy << ","
        << r.predicted_dimension << "," << (r.dimension_in_range ? 1 : 0) << "\n";
    return 0;
}

// --- verify -----------------------------------------------------------------

struct VerifyCheck {
    std::string name;
    double value = 0;
    std::string requirement;
    bool pass = false;
};

inline void tau_spot_check(unsigned long long seed, int samples, std::vector<VerifyCheck>& out) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long long> den(1, 4096), num(0, 1 << 20);
    bool ok = true;
    for (int i = 0; i < samples; ++i) {
        const Angle a(num(rng), den(rng)), b(num(rng), den(rng)), c(num(rng), den(rng));
        if (tau(a, b) != tau(b, a)) ok = false;
        if ((tau(a, b) == 0) != (a == b)) ok = false;
        if (tau(a, c) > tau(a, b) + tau(b, c)) ok = false;
    }
    out.push_back({"tau_metric_axioms", ok ? 1.0 : 0.0, "no violation", ok});
}

inline int run_verify(const ExperimentConfig& cfg, std::ostream& out) {
    check_depth(cfg);
    const Angle theta = resolve_theta(cfg);
    const std::string name =
        !cfg.preset.empty() ? cfg.preset : theta_preset_name(theta).value_or("custom");
    std::vector<VerifyCheck> checks;

    const bool chebyshev_case = name == "chebyshev";
    const Lamination lam = chebyshev_case ? chebyshev_lamination(cfg.degree, cfg.depth)
                                          : build_quadratic_lamination(theta, cfg.depth);

    std::optional<UnnestedTriple> triple;
    const Trichotomy cls = classify_trichotomy(lam, &triple);
    if (chebyshev_case)
        checks.push_back({"classification", static_cast<double>(cls == Trichotomy::Interval),
                          "Interval", cls == Trichotomy::Interval});
    else if (name == "airplane")
        checks.push_back(
            {"classification", static_cast<double>(cls == Trichotomy::ThreeEndpoints),
             "ThreeEndpoints", cls == Trichotomy::ThreeEndpoints});
    else
        checks.push_back(
            {"classification", static_cast<double>(cls == Trichotomy::ThreeEndpoints),
             std::string("reported: ") + to_string(cls), true});

    if (triple) {
        const size_t base_gen = std::max({lam.generation_of.at(triple->a),
                                          lam.generation_of.at(triple->b),
                                          lam.generation_of.at(triple->c)});
        const int avail = static_cast<int>(lam.depth() - base_gen);
        try {
            const NarrowFamily nf = narrow_generations(*triple, lam, avail);
            checks.push_back({"narrow_recurrence", 1.0, "s_{k+1} >= d s_k - 2(d-1)", true});
            const IntervalFamily fam = build_families_from_narrow(nf, avail);
            const CoverSequence cc = cover_counts(fam, avail);
            checks.push_back({"cover_recurrence", 1.0, "c_{n+1} <= d c_n + 2(d-2)", true});
            const double dim = dimension_from_counts(cc, cfg.burn_in);
            const double bound = minkowski_bound(fam.degree, fam.base_exponent);
            checks.push_back({"cover_dimension_lt_1", dim, "< 1", dim < 1.0});
            checks.push_back({"cover_dimension_lt_bound", dim,
                              "< " + std::to_string(bound), dim < bound});
        } catch (const invariant_violation& e) {
            checks.push_back({"narrow_or_cover_recurrence", 0.0, e.what(), false});
        }
    }

    // census on the mirror-symmetric model; pullback censuses are not
    // entropy-comparable (their counts double regardless of theta). The
    // census depth has an 18 floor so the slow basilica transient clears.
    std::optional<double> census;
    if (chebyshev_case) {
        census = leaf_census_dimension(lam, cfg.depth, cfg.burn_in);
    } else if (theta.value() >= BigRat(1, 3) && theta.value() <= BigRat(1, 2)) {
        const int census_depth = std::max(cfg.depth, 18);
        census = leaf_census_dimension(real_pair_lamination(theta, census_depth), census_depth,
                                       cfg.burn_in);
    }
    if (chebyshev_case && census)
        checks.push_back({"census_dimension", *census, ">= 0.9", *census >= 0.9});

    if (auto preset = theta_preset_name(theta); preset && census) {
        const EntropyReport er = entropy_report(preset_matrix(*preset), 2);
        const double diff = std::abs(*census - er.predicted_dimension);
        checks.push_back({"census_vs_entropy", diff, "<= 0.15", diff <= 0.15});
    }

    tau_spot_check(cfg.rng_seed, 200, checks);

    bool all = true;
    out << "# lamina-verify-v1 case,check,value,requirement,pass\n";
    for (const auto& c : checks) {
        all = all && c.pass;
        out << name << "," << c.name << "," << std::setprecision(10) << c.value << ","
            << c.requirement << "," << (c.pass ? "PASS" : "FAIL") << "\n";
    }
    out << "# verify " << (all ? "PASS" : "FAIL") << "\n";
    return all ? 0 : 1;
}

} // namespace lamina::cli
