// qbm: command-line driver for the Brownian-oscillator redundancy pipeline.
//
//   qbm <stage> [--config FILE] [--key value ...]
//
// Stages: evolve, bands, piplot, peplot, redundancy, analytic, compare, all.
// Exit codes: 0 ok, 2 invalid input, 3 numerical failure, 4 I/O failure.

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qbm/config.hpp"
#include "qbm/errors.hpp"
#include "qbm/runner.hpp"

namespace {

const std::vector<std::pair<std::string, std::string>> kFlags = {
    {"profile", "full (N=600) or desk (N=150)"},
    {"exponent", "bath exponent n (1/2 sub-Ohmic, 1 Ohmic, 3 super-Ohmic)"},
    {"cutoff", "spectral cutoff Lambda"},
    {"gamma0", "coupling strength gamma_0"},
    {"n_oscillators", "number of bath oscillators N"},
    {"system_mass", "system mass m"},
    {"bath_mass", "bath oscillator mass"},
    {"omega_s", "renormalized system frequency Omega_S"},
    {"r", "squeezing parameter (r < 0 squeezes position)"},
    {"squeeze_convention", "amplitude (dx = dx0 e^r) or ratio (dx^2 = dx0^2 e^r)"},
    {"t_min", "first time point"},
    {"t_max", "last time point"},
    {"n_times", "number of time points"},
    {"seed", "sampler seed (QBM_SEED overrides the config file)"},
    {"samples", "random subsets per f point"},
    {"f_grid", "comma-separated environment fractions in (0, 1]"},
    {"band_groups", "sample fractions over this many frequency bands instead of oscillators"},
    {"n_bands", "bands for band-resolved correlations"},
    {"delta_e", "entanglement deficit"},
    {"delta_i", "information deficit"},
    {"output_dir", "directory for outputs"},
    {"run_id", "prefix for output files"},
    {"workers", "worker threads"},
};

const std::map<std::string, std::vector<qbm::Stage>> kStages = {
    {"evolve", {qbm::Stage::evolve}},
    {"bands", {qbm::Stage::bands}},
    {"piplot", {qbm::Stage::piplot}},
    {"peplot", {qbm::Stage::peplot}},
    {"redundancy", {qbm::Stage::redundancy}},
    {"analytic", {qbm::Stage::analytic}},
    {"compare", {qbm::Stage::compare}},
    {"all",
     {qbm::Stage::evolve, qbm::Stage::bands, qbm::Stage::piplot, qbm::Stage::peplot, qbm::Stage::redundancy,
      qbm::Stage::analytic, qbm::Stage::compare}},
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Decoherence redundancy of a Brownian oscillator in a harmonic bath"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(qbm::kVersionTag));

    struct Command {
        CLI::App* sub = nullptr;
        std::string config_path;
        std::map<std::string, std::string> flags;
        std::string pi_input, pe_input;
        bool quiet = false;
    };
    std::map<std::string, Command> commands;
    for (const auto& [name, stages] : kStages) {
        auto& cmd = commands[name];
        cmd.sub = app.add_subcommand(name, "run the " + name + " stage");
        cmd.sub->add_option("--config", cmd.config_path, "key = value configuration file");
        for (const auto& [key, help] : kFlags) cmd.sub->add_option("--" + key, cmd.flags[key], help);
        cmd.sub->add_flag("--quiet", cmd.quiet, "suppress progress messages");
        if (name == "redundancy") {
            cmd.sub->add_option("--pi-input", cmd.pi_input, "persisted MI curve CSV (skips simulation)");
            cmd.sub->add_option("--pe-input", cmd.pe_input, "persisted E curve CSV (skips simulation)");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : qbm::exit_code_for(qbm::ErrorKind::validation);
    }

    for (auto& [name, cmd] : commands) {
        if (!cmd.sub->parsed()) continue;
        try {
            qbm::ConfigValues flags;
            for (const auto& [key, help] : kFlags) {
                if (cmd.sub->count("--" + key) > 0) flags[key] = cmd.flags[key];
            }
            const auto config = cmd.config_path.empty() ? qbm::parse_config({}, flags)
                                                        : qbm::parse_config_file(cmd.config_path, flags);
            if (!cmd.pi_input.empty() != !cmd.pe_input.empty()) {
                throw qbm::ValidationError({"--pi-input and --pe-input must be given together"});
            }
            qbm::RunOptions options;
            if (!cmd.pi_input.empty()) options.pi_input = {cmd.pi_input};
            options.pe_input = cmd.pe_input;
            options.log = cmd.quiet ? nullptr : &std::cerr;
            const auto manifest = qbm::run_experiment(config, kStages.at(name), options);
            for (const auto& w : manifest.warnings) std::cerr << "warning: " << w << '\n';
            for (const auto& o : manifest.outputs) std::cout << o.sha256 << "  " << o.path << '\n';
        } catch (const qbm::ValidationError& e) {
            std::cerr << "invalid configuration:\n";
            for (const auto& p : e.problems()) std::cerr << "  " << p << '\n';
            return qbm::exit_code_for(e.kind());
        } catch (const qbm::Error& e) {
            std::cerr << name << ": " << e.what() << '\n';
            return qbm::exit_code_for(e.kind());
        } catch (const std::exception& e) {
            std::cerr << name << ": " << e.what() << '\n';
            return qbm::exit_code_for(qbm::ErrorKind::numerical);
        }
    }
    return 0;
}
