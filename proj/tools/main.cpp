#include <iostream>

#include <CLI11.hpp>

#include "cayheat/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Cayley-graph heat semigroup toolkit: spectra, synthesized solutions, and gradient estimates "
                 "for virtually Abelian groups"};
    app.require_subcommand(1);

    cayheat::RunConfig cfg;
    auto add_common = [&cfg](CLI::App* sub) {
        sub->add_option("--spec", cfg.spec, "spec file path or bundled name (hexagonal, klein_bottle, z1, z2)")
            ->required();
        sub->add_option("--out", cfg.out_dir, "output directory");
        sub->add_option("--eps", cfg.eps, "truncation budget for kernel sums");
        sub->add_option("--seed", cfg.seed, "master seed; fixes all randomness");
        sub->add_option("--threads", cfg.threads, "worker threads (results identical for any count)");
    };

    CLI::App* validate = app.add_subcommand("validate", "check every structural invariant of a group spec");
    add_common(validate);

    CLI::App* spectrum = app.add_subcommand("spectrum", "per-character spectral data and beta bounds");
    add_common(spectrum);
    spectrum->add_option("--n", cfg.ns, "quotient moduli (default 2..8)");
    spectrum->add_option("--K", cfg.k_override, "override the word-decomposition constant K");

    CLI::App* verify = app.add_subcommand(
        "verify", "full pipeline: periodize, plan, synthesis cross-check, base case, gradient estimates");
    add_common(verify);
    verify->add_option("--n", cfg.ns, "quotient moduli (default 6)");
    verify->add_option("--t-min", cfg.t_min, "grid start");
    verify->add_option("--t-max", cfg.t_max, "grid end");
    verify->add_option("--t-points", cfg.t_points, "log-spaced grid size");
    verify->add_option("--trials", cfg.trials, "random initial conditions per n");
    verify->add_option("--c-target", cfg.c_target, "pass threshold (default |S~|)");
    verify->add_option("--K", cfg.k_override, "override the word-decomposition constant K");

    CLI::App* kernel = app.add_subcommand("kernel", "dump the certified heat kernel on the abelian view");
    add_common(kernel);
    kernel->add_option("--t", cfg.t_kernel, "kernel time");

    CLI::App* words = app.add_subcommand("words", "dump shortest S-words of the S~ generators and K");
    add_common(words);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : cayheat::kExitUsage;
    }

    try {
        if (validate->parsed()) return cayheat::cmd_validate(cfg);
        if (spectrum->parsed()) return cayheat::cmd_spectrum(cfg);
        if (verify->parsed()) return cayheat::cmd_verify(cfg);
        if (kernel->parsed()) return cayheat::cmd_kernel(cfg);
        if (words->parsed()) return cayheat::cmd_words(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cayheat::kExitFailed;
    }
    return cayheat::kExitUsage;
}
