// lamina: invariant laminations on the circle, narrow preimage counts,
// interval-cover dimension bounds, and core-entropy cross-checks.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lamina/cli.hpp"

namespace {

void add_common(CLI::App* cmd, lamina::cli::ExperimentConfig& cfg, std::string& theta_text,
                std::string& config_path) {
    cmd->add_option("--config", config_path, "key=value config file (flags win)");
    cmd->add_option("--theta", theta_text, "seed angle p/q");
    cmd->add_option("--preset", cfg.preset, "chebyshev|basilica|airplane");
    cmd->add_option("--degree,-d", cfg.degree, "map degree");
    cmd->add_option("--depth,-n", cfg.depth, "pullback depth");
    cmd->add_option("--depth-cap", cfg.depth_cap, "hard depth cap");
    cmd->add_option("--base-exponent,-N", cfg.base_exponent, "interval grid exponent N");
    cmd->add_option("--burn-in", cfg.burn_in, "regression burn-in fraction");
    cmd->add_option("--deletion-mode", cfg.deletion_mode, "narrow|lex|none");
    cmd->add_option("--model", cfg.model, "pullback|symmetric lamination model");
    cmd->add_option("--out,-o", cfg.out_path, "output file (default stdout)");
    cmd->add_option("--svg", cfg.svg_path, "SVG output file");
    cmd->add_option("--matrix", cfg.matrix_path, "transition matrix file");
    cmd->add_option("--rng-seed", cfg.rng_seed, "seed for sampled checks");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"circle laminations, narrow preimages, cover dimension, core entropy"};
    app.require_subcommand(1);

    struct Sub {
        CLI::App* cmd;
        lamina::cli::ExperimentConfig cfg;
        std::string theta_text;
        std::string config_path;
    };
    std::vector<std::string> names = {"build", "narrow", "cover", "entropy", "verify", "render"};
    std::vector<std::string> descs = {
        "build a lamination and write its leaf file (optionally SVG)",
        "narrow preimage generation counts for a found un-nested triple",
        "interval families, cover counts and the dimension estimate",
        "spectral radius, core entropy and predicted dimension",
        "full pipeline with hard assertions; exit 0 iff all pass",
        "render a lamination to SVG"};
    std::vector<Sub> subs;
    subs.reserve(names.size());
    for (size_t i = 0; i < names.size(); ++i) {
        subs.push_back({app.add_subcommand(names[i], descs[i]), {}, "", ""});
        add_common(subs.back().cmd, subs.back().cfg, subs.back().theta_text,
                   subs.back().config_path);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        for (auto& sub : subs) {
            if (!sub.cmd->parsed()) continue;
            lamina::cli::ExperimentConfig cfg;
            if (!sub.config_path.empty()) lamina::cli::apply_config_file(cfg, sub.config_path);
            // any flag the user set wins over the file
            if (!sub.theta_text.empty()) cfg.theta = lamina::parse_angle(sub.theta_text);
            if (sub.cmd->count("--preset")) cfg.preset = sub.cfg.preset;
            if (sub.cmd->count("--degree")) cfg.degree = sub.cfg.degree;
            if (sub.cmd->count("--depth")) cfg.depth = sub.cfg.depth;
            if (sub.cmd->count("--depth-cap")) cfg.depth_cap = sub.cfg.depth_cap;
            if (sub.cmd->count("--base-exponent")) cfg.base_exponent = sub.cfg.base_exponent;
            if (sub.cmd->count("--burn-in")) cfg.burn_in = sub.cfg.burn_in;
            if (sub.cmd->count("--deletion-mode")) cfg.deletion_mode = sub.cfg.deletion_mode;
            if (sub.cmd->count("--model")) cfg.model = sub.cfg.model;
            if (sub.cmd->count("--out")) cfg.out_path = sub.cfg.out_path;
            if (sub.cmd->count("--svg")) cfg.svg_path = sub.cfg.svg_path;
            if (sub.cmd->count("--matrix")) cfg.matrix_path = sub.cfg.matrix_path;
            if (sub.cmd->count("--rng-seed")) cfg.rng_seed = sub.cfg.rng_seed;

            const std::string name = sub.cmd->get_name();
            if (name == "build") return lamina::cli::run_build(cfg, std::cout);
            if (name == "narrow") return lamina::cli::run_narrow(cfg, std::cout);
            if (name == "cover") return lamina::cli::run_cover(cfg, std::cout);
            if (name == "entropy") return lamina::cli::run_entropy(cfg, std::cout);
            if (name == "verify") return lamina::cli::run_verify(cfg, std::cout);
            if (name == "render") return lamina::cli::run_render(cfg);
        }
        throw lamina::usage_error("no subcommand given");
    } catch (const lamina::usage_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const lamina::invariant_violation& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 3;
    } catch (const lamina::non_convergence& e) {
        std::cerr << "no convergence: " << e.what() << " (last " << e.last_estimate << ", prev "
                  << e.previous_estimate << ")\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
