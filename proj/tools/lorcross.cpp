// Command line surface: norm evaluation, rearrangements, block analysis,
// hyperbolic crosses, smoothness classes, approximation and the ratio checks,
// all driven by a flat key = value config plus a few flags.
//
// Exit codes: 0 ok, 1 precondition flags raised, 2 usage or config error,
// 3 internal error.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lorcross/besov.hpp"
#include "lorcross/config.hpp"
#include "lorcross/grid.hpp"
#include "lorcross/io.hpp"
#include "lorcross/norms.hpp"
#include "lorcross/rearrange.hpp"
#include "lorcross/report.hpp"
#include "lorcross/verify.hpp"

namespace {

using namespace lorcross;

void print_summary(const VerificationReport& rep) {
    std::cout << rep.check_id() << ": rows=" << rep.rows().size()
              << " max=" << format_sig(rep.max_ratio()) << " min=" << format_sig(rep.min_ratio())
              << " growth=" << format_sig(rep.growth_factor())
              << " flags=" << rep.precondition_flags().size() << "\n";
    for (const std::string& f : rep.precondition_flags())
        std::cout << "  flag: " << f << "\n";
}

int cmd_norm(const ExperimentConfig& cfg, const std::string& input, const std::string& kind) {
    GridFunction f = load_input(input, cfg.m, cfg.dims);
    double value = 0.0;
    if (kind == "aniso")
        value = lorentz_norm_aniso(f, cfg.target_params());
    else if (kind == "iso")
        value = lorentz_norm_iso(f, cfg.target_params().psi[0], cfg.tau[0]);
    else if (kind == "lebesgue")
        value = lebesgue_norm(f, cfg.q);
    else
        value = classical_lorentz_norm(f, cfg.q, cfg.tau[0]);
    std::cout << format_sig(value) << "\n";
    return 0;
}

int cmd_rearrange(const ExperimentConfig& cfg, const std::string& input) {
    GridFunction f = load_input(input, cfg.m, cfg.dims);
    IteratedRearrangement r = iterated_rearrangement(f);
    std::cout << "# dims=";
    for (int j = 0; j < r.m; ++j) std::cout << (j ? "," : "") << r.dims[j];
    std::cout << "\n";
    for (double v : r.values) std::cout << format_sig(v) << "\n";
    return 0;
}

int cmd_blocks(const ExperimentConfig& cfg, const std::string& input) {
    GridFunction f = load_input(input, cfg.m, cfg.dims);
    SpectralFunction F = analyze(f);
    const LorentzParams target = cfg.target_params();
    std::array<int, 3> S{0, 0, 0};
    for (int j = 0; j < cfg.m; ++j) S[j] = max_block_index(f.dims[j]);
    std::cout << "s1,s2,s3,norm\n";
    std::array<int, 3> s{0, 0, 0};
    for (s[2] = 0; s[2] <= S[2]; ++s[2])
        for (s[1] = 0; s[1] <= S[1]; ++s[1])
            for (s[0] = 0; s[0] <= S[0]; ++s[0]) {
                double v = lorentz_norm_aniso(
                    dyadic_block(F, std::span<const int>(s.data(), 3)), target);
                std::cout << s[0] << "," << s[1] << "," << s[2] << "," << format_sig(v) << "\n";
            }
    return 0;
}

int cmd_cross(const ExperimentConfig& cfg, double n) {
    HyperbolicCross cross =
        hyperbolic_cross(std::span<const double>(cfg.gamma).first(cfg.m), n, cfg.m);
    std::cout << "blocks=" << cross.blocks.size() << "\n"
              << "indices=" << cross.indices.size() << "\n";
    for (const auto& s : cross.blocks)
        std::cout << s[0] << "," << s[1] << "," << s[2] << "\n";
    return 0;
}

int cmd_besov(const ExperimentConfig& cfg, const std::string& input) {
    GridFunction f = load_input(input, cfg.m, cfg.dims);
    const BesovParams bp = cfg.besov_params();
    const double carrier = lorentz_norm_aniso(f, bp.space);
    const double semi = besov_seminorm(f, bp);
    std::cout << "carrier=" << format_sig(carrier) << "\n"
              << "seminorm=" << format_sig(semi) << "\n"
              << "class=" << format_sig(carrier + semi) << "\n";
    return 0;
}

int cmd_approx(const ExperimentConfig& cfg, const std::string& input, double n, int sweeps) {
    GridFunction f = load_input(input, cfg.m, cfg.dims);
    HyperbolicCross cross =
        hyperbolic_cross(std::span<const double>(cfg.gamma).first(cfg.m), n, cfg.m);
    RefineResult res = best_approx_refine(f, cross, cfg.target_params(), sweeps);
    std::cout << "initial=" << format_sig(res.initial_error) << "\n"
              << "refined=" << format_sig(res.refined_error) << "\n";
    return 0;
}

int cmd_verify(ExperimentConfig cfg, const std::string& id) {
    if (id.empty()) {
        int rc = run(cfg);
        for (const std::string& check : cfg.checks)
            std::cout << check << ".csv written to " << cfg.out_dir << "\n";
        return rc;
    }
    VerificationReport rep = run_check(cfg, id);
    std::filesystem::create_directories(cfg.out_dir);
    rep.write_csv(std::filesystem::path(cfg.out_dir) / (id + ".csv"));
    print_summary(rep);
    return rep.clean() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"anisotropic Lorentz norms, dyadic block analysis and bound verification"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out_override, input, kind = "aniso", check_id;
    std::uint64_t seed_override = 0;
    int threads_override = 0, sweeps = 40;
    double n_level = -1.0;
    bool seed_given = false;

    app.add_option("--config", config_path, "experiment config file");
    app.add_option("--out", out_override, "output directory for reports");
    app.add_option_function<std::uint64_t>(
           "--seed", [&](std::uint64_t v) { seed_override = v; seed_given = true; },
           "override the config seed");
    app.add_option("--threads", threads_override, "max concurrent checks");

    CLI::App* norm = app.add_subcommand("norm", "norm of one function");
    norm->add_option("--input", input, "sample file or gen: spec")->required();
    norm->add_option("--kind", kind, "aniso|iso|lebesgue|classical")
        ->check(CLI::IsMember({"aniso", "iso", "lebesgue", "classical"}));

    CLI::App* rearr = app.add_subcommand("rearrange", "iterated rearrangement values");
    rearr->add_option("--input", input, "sample file or gen: spec")->required();

    CLI::App* blocks = app.add_subcommand("blocks", "per-block norms of the spectrum");
    blocks->add_option("--input", input, "sample file or gen: spec")->required();

    CLI::App* cross = app.add_subcommand("cross", "list the blocks of a step hyperbolic cross");
    cross->add_option("--n", n_level, "cross level (default n_max)");

    CLI::App* besov = app.add_subcommand("besov", "carrier norm, seminorm and class norm");
    besov->add_option("--input", input, "sample file or gen: spec")->required();

    CLI::App* approx = app.add_subcommand("approx", "partial sum and refined best approximation");
    approx->add_option("--input", input, "sample file or gen: spec")->required();
    approx->add_option("--n", n_level, "cross level (default n_max)");
    approx->add_option("--sweeps", sweeps, "refinement sweep budget");

    CLI::App* verify = app.add_subcommand("verify", "run ratio checks and write CSV reports");
    verify->add_option("id", check_id, "check id (default: the config's checks list)")
        ->check(CLI::IsMember(lorcross::known_checks()));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        lorcross::ExperimentConfig cfg;
        if (!config_path.empty()) cfg = lorcross::load_config(config_path);
        if (!out_override.empty()) cfg.out_dir = out_override;
        if (seed_given) {
            cfg.seed = seed_override;
            cfg.seed_set = true;
        }
        if (threads_override > 0) cfg.threads = threads_override;
        if (n_level < 0.0) n_level = cfg.n_max;

        if (norm->parsed()) return cmd_norm(cfg, input, kind);
        if (rearr->parsed()) return cmd_rearrange(cfg, input);
        if (blocks->parsed()) return cmd_blocks(cfg, input);
        if (cross->parsed()) return cmd_cross(cfg, n_level);
        if (besov->parsed()) return cmd_besov(cfg, input);
        if (approx->parsed()) return cmd_approx(cfg, input, n_level, sweeps);
        if (verify->parsed()) return cmd_verify(cfg, check_id);
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
