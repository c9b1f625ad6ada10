#include <cstdlib>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "sovlab/gl12.hpp"
#include "sovlab/harness/commands.hpp"

using namespace sovlab;
using namespace sovlab::harness;

namespace {

std::optional<std::uint64_t> env_seed() {
    const char* s = std::getenv("SOVLAB_SEED");
    if (!s || !*s) return std::nullopt;
    try {
        std::size_t used = 0;
        const auto v = std::stoull(s, &used);
        if (used != std::string(s).size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw configuration_error(std::string("SOVLAB_SEED is not an unsigned integer: ") + s);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sovlab: separation-of-variables lab for graded spin chains and the Hubbard model"};
    app.fallthrough();
    app.require_subcommand(1);

    std::string config_path, out_dir, method, target;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    bool no_write = false;
    app.add_option("--config", config_path, "JSON run config")->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "seed for every random draw (fallback: SOVLAB_SEED)");
    app.add_option("--tol", tol, "residual tolerance");
    app.add_option("--out", out_dir, "output directory for run reports");
    app.add_option("--method", method, "spectrum method: diag, newton, cubic, homotopy");
    app.add_flag("--no-write", no_write, "print the summary without writing a report");

    auto* verify = app.add_subcommand("verify", "residual checks: ybe, fusion, inner-boundary, shastry");
    verify->add_option("target", target, "ybe | fusion | inner-boundary | shastry")
        ->required()
        ->check(CLI::IsMember({"ybe", "fusion", "inner-boundary", "shastry"}));
    app.add_subcommand("spectrum", "gl(1|2) spectrum from the closure system");
    app.add_subcommand("sov-rank", "rank certificate of the SoV covectors");
    app.add_subcommand("qsc", "spectral curve and Bethe data");
    app.add_subcommand("hubbard", "Hubbard transfer matrices and SoV certificate");
    app.add_subcommand("reproduce-appendix-b", "two-site closed-form reproduction");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : exit_config;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        bool config_seed = false;
        RunConfig cfg;
        if (!config_path.empty()) {
            cfg = load_config(config_path, &config_seed);
        } else {
            cfg = default_config(command == "verify" && target == "shastry" ? "shastry" : command);
        }
        if (seed) cfg.seed = *seed;
        else if (!config_seed) {
            if (auto s = env_seed()) cfg.seed = *s;
        }
        if (tol) {
            if (!(*tol > 0.0)) throw configuration_error("--tol must be positive");
            cfg.tol.residual = *tol;
        }
        if (!method.empty()) {
            spectrum_method_from_string(method);
            cfg.method = method;
        }
        if (!out_dir.empty()) cfg.output = out_dir;

        Report r;
        if (command == "verify") r = cmd_verify(cfg, verify_target_from_string(target));
        else if (command == "spectrum") r = cmd_spectrum(cfg);
        else if (command == "sov-rank") r = cmd_sov_rank(cfg);
        else if (command == "qsc") r = cmd_qsc(cfg);
        else if (command == "hubbard") r = cmd_hubbard(cfg);
        else r = cmd_reproduce_appendix_b(cfg);

        std::cout << r.command << "\n" << text_summary(r);
        if (!no_write) std::cout << "report " << write_report(r, cfg.output).string() << "\n";
        return r.exit_code();
    } catch (const capacity_error& e) {
        std::cerr << "capacity: " << e.what() << "\n";
        return exit_incomplete;
    } catch (const configuration_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const argument_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const parameter_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const structure_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const evaluation_error& e) {
        std::cerr << "evaluation error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_residual;
    }
}
