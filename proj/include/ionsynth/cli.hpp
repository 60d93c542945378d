#pragma once

// Command-line front end.  Four subcommands tie the library into batch
// workflows:
//   synthesize  compile a target into de-evolve + prepare sequence files
//   simulate    Monte Carlo fidelity sweep of a prepare sequence under noise
//   check       physical-parameter feasibility report
//   targets     write benchmark coefficient files
// Exit codes: 0 success, 1 input error, 2 computation failure,
// 3 feasibility failure.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ionsynth/io.hpp"
#include "ionsynth/targets.hpp"

namespace ionsynth {

namespace cli_detail {

inline cplx parse_complex(const std::string& s) {
    const auto comma = s.find(',');
    try {
        if (comma == std::string::npos) return cplx{std::stod(s), 0.0};
        return cplx{std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
    } catch (const std::exception&) {
        throw parse_error("cannot parse complex number '" + s + "' (expected re or re,im)");
    }
}

inline std::vector<double> parse_delta_list(const std::string& s) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto comma = s.find(',', start);
        const std::string tok =
            s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (tok.empty()) throw parse_error("empty entry in delta list '" + s + "'");
        try {
            out.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw parse_error("cannot parse delta '" + tok + "'");
        }
        if (out.back() < 0.0) throw parse_error("negative delta '" + tok + "'");
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (out.empty()) throw parse_error("empty delta list");
    return out;
}

// Relative output paths land in $IONSYNTH_OUT_DIR when it is set.
inline std::string resolve_out(const std::string& path) {
    if (path.empty()) return path;
    const char* dir = std::getenv("IONSYNTH_OUT_DIR");
    if (!dir || !*dir) return path;
    std::filesystem::path p(path);
    if (p.is_absolute()) return path;
    return (std::filesystem::path(dir) / p).string();
}

inline RabiRegime make_regime(const std::string& name, double eps_x, double eps_y) {
    if (name == "lamb_dicke") return RabiRegime::lamb_dicke();
    if (name == "nonlinear") {
        try {
            return RabiRegime::nonlinear(eps_x, eps_y);
        } catch (const std::invalid_argument& e) {
            throw parse_error(e.what());
        }
    }
    throw parse_error("unknown regime '" + name + "'");
}

inline NoiseWindow make_window(const std::string& name) {
    if (name == "centered") return NoiseWindow::centered;
    if (name == "centered_wide") return NoiseWindow::centered_wide;
    if (name == "one_sided") return NoiseWindow::one_sided;
    throw parse_error("unknown noise window '" + name + "'");
}

}  // namespace cli_detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
    CLI::App app{"two-mode trapped-ion state synthesis: pulse compiler, simulator, noise sweeps"};
    app.set_version_flag("--version", std::string(kToolName) + " " + kVersion);
    app.require_subcommand(1);

    // --- synthesize -------------------------------------------------------
    auto* syn = app.add_subcommand("synthesize",
                                   "compile a target state into pulse sequence files");
    std::string syn_kind;
    std::string syn_alpha = "1";
    int syn_mmax = 0, syn_nmax = -1;
    std::string syn_file;
    std::string syn_regime = "lamb_dicke";
    double syn_eps_x = 0.0, syn_eps_y = 0.0;
    std::string syn_prefix = "sequence";
    syn->add_option("--target", syn_kind, "target kind")
        ->required()
        ->check(CLI::IsMember({"cat", "correlated", "custom"}));
    syn->add_option("--alpha", syn_alpha, "coherent amplitude, 're' or 're,im'");
    syn->add_option("--mmax", syn_mmax, "x-mode cutoff");
    syn->add_option("--nmax", syn_nmax, "y-mode cutoff (default: mmax)");
    syn->add_option("--file", syn_file, "coefficient file for --target custom");
    syn->add_option("--regime", syn_regime, "coupling regime")
        ->check(CLI::IsMember({"lamb_dicke", "nonlinear"}));
    syn->add_option("--eps-x", syn_eps_x, "Lamb-Dicke parameter, x");
    syn->add_option("--eps-y", syn_eps_y, "Lamb-Dicke parameter, y");
    syn->add_option("--out-prefix", syn_prefix,
                    "prefix for <prefix>.deevolve.json, .prepare.json, .report.json");

    // --- simulate ---------------------------------------------------------
    auto* sim = app.add_subcommand("simulate", "Monte Carlo fidelity under pulse-area noise");
    std::string sim_seq, sim_target, sim_out = "sweep.csv", sim_format = "csv";
    std::string sim_deltas = "0";
    std::string sim_window = "centered";
    int sim_runs = 100, sim_threads = 0;
    std::uint64_t sim_seed = 0;
    sim->add_option("--sequence", sim_seq, "prepare-direction sequence file")->required();
    sim->add_option("--target", sim_target, "target coefficient file")->required();
    sim->add_option("--deltas", sim_deltas, "comma-separated noise ranges");
    sim->add_option("--runs", sim_runs, "Monte Carlo runs per delta")->check(CLI::PositiveNumber);
    sim->add_option("--seed", sim_seed, "RNG seed (recorded in outputs)");
    sim->add_option("--threads", sim_threads, "worker threads (0 = auto)");
    sim->add_option("--noise-window", sim_window, "fluctuation interval convention")
        ->check(CLI::IsMember({"centered", "centered_wide", "one_sided"}));
    sim->add_option("--format", sim_format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    sim->add_option("--out", sim_out, "output file");

    // --- check ------------------------------------------------------------
    auto* chk = app.add_subcommand("check", "feasibility of physical parameters");
    FeasibilityParams fp;
    chk->add_option("--g", fp.g_mag, "effective Raman coupling (angular frequency)")->required();
    chk->add_option("--eps-x", fp.eps_x, "Lamb-Dicke parameter, x")->required();
    chk->add_option("--eps-y", fp.eps_y, "Lamb-Dicke parameter, y")->required();
    chk->add_option("--nu-x", fp.nu_x, "trap frequency, x")->required();
    chk->add_option("--nu-y", fp.nu_y, "trap frequency, y")->required();
    chk->add_option("--mmax", fp.m_max, "x-mode cutoff")->required();
    chk->add_option("--nmax", fp.n_max, "y-mode cutoff")->required();
    chk->add_option("--margin", fp.margin, "threshold for the exchange-rate ratio");

    // --- targets ----------------------------------------------------------
    auto* tgt = app.add_subcommand("targets", "write a benchmark coefficient file");
    std::string tgt_kind, tgt_alpha = "1", tgt_out = "target.json";
    int tgt_mmax = 0, tgt_nmax = -1;
    tgt->add_option("--kind", tgt_kind, "target family")
        ->required()
        ->check(CLI::IsMember({"cat", "correlated"}));
    tgt->add_option("--alpha", tgt_alpha, "coherent amplitude, 're' or 're,im'");
    tgt->add_option("--mmax", tgt_mmax, "x-mode cutoff")->required();
    tgt->add_option("--nmax", tgt_nmax, "y-mode cutoff (default: mmax)");
    tgt->add_option("--out", tgt_out, "output file");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help() << std::flush;
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << app.version() << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (app.got_subcommand(syn)) {
            const auto t0 = std::chrono::steady_clock::now();
            if (syn_nmax < 0) syn_nmax = syn_mmax;
            const RabiRegime regime = cli_detail::make_regime(syn_regime, syn_eps_x, syn_eps_y);
            json inputs = json::object();
            TargetState target;
            if (syn_kind == "cat") {
                target = cat_state(cli_detail::parse_complex(syn_alpha), syn_mmax, syn_nmax);
            } else if (syn_kind == "correlated") {
                target = correlated_state(cli_detail::parse_complex(syn_alpha), syn_mmax);
            } else {
                if (syn_file.empty()) throw parse_error("--target custom requires --file");
                inputs["target_file"] = fnv1a64_hex(read_file(syn_file));
                target = load_target(syn_file).target;
            }

            SynthesisResult result = de_evolve(target, regime);
            PulseSequence prep = preparation_sequence(result);

            const std::string prefix = cli_detail::resolve_out(syn_prefix);
            save_sequence(result.sequence, prefix + ".deevolve.json");
            save_sequence(prep, prefix + ".prepare.json");

            const double wall =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            json config{{"command", "synthesize"}, {"target", syn_kind},
                        {"alpha", syn_alpha},      {"mmax", syn_mmax},
                        {"nmax", syn_nmax},        {"file", syn_file},
                        {"regime", syn_regime},    {"out_prefix", syn_prefix}};
            const json report =
                synthesis_report_json(result, provenance_json(config, inputs, wall));
            write_file(prefix + ".report.json", report.dump(2) + "\n");

            out << "synthesized " << result.sequence.emitted() << " pulses ("
                << result.sequence.skipped << " skipped, "
                << op_count_expected(result.sequence.j_max) << " slots), residual "
                << format_g17(result.residual_vacuum_infidelity) << "\n";
            out << report["provenance"].dump() << "\n";
            return 0;
        }

        if (app.got_subcommand(sim)) {
            const std::string seq_bytes = read_file(sim_seq);
            const std::string tgt_bytes = read_file(sim_target);
            json seq_json, tgt_json;
            try {
                seq_json = json::parse(seq_bytes);
                tgt_json = json::parse(tgt_bytes);
            } catch (const nlohmann::json::exception& e) {
                throw parse_error(std::string("malformed JSON input: ") + e.what());
            }
            const PulseSequence seq = sequence_from_json(seq_json, sim_seq);
            if (seq.direction != Direction::prepare) {
                err << "error: " << sim_seq
                    << " is a de-evolve sequence; simulate needs direction \"prepare\"\n";
                return 2;
            }
            const TargetState target = target_from_json(tgt_json, sim_target).target;
            const std::vector<double> deltas = cli_detail::parse_delta_list(sim_deltas);
            const NoiseWindow window = cli_detail::make_window(sim_window);
            const std::vector<FidelityReport> reports =
                sweep(seq, target, deltas, sim_runs, sim_seed, window, sim_threads);

            json config{{"command", "simulate"},   {"sequence", sim_seq},
                        {"target", sim_target},    {"deltas", sim_deltas},
                        {"runs", sim_runs},        {"seed", sim_seed},
                        {"noise_window", sim_window}, {"format", sim_format},
                        {"out", sim_out}};
            json inputs{{"sequence_file", fnv1a64_hex(seq_bytes)},
                        {"target_file", fnv1a64_hex(tgt_bytes)}};
            const json prov = provenance_json(config, inputs);

            const std::string out_path = cli_detail::resolve_out(sim_out);
            if (sim_format == "csv")
                write_file(out_path, sweep_csv(reports));
            else
                write_file(out_path, sweep_json(reports, prov).dump(2) + "\n");

            for (const FidelityReport& r : reports)
                out << "delta " << format_g17(r.delta) << ": mean fidelity "
                    << format_g17(r.mean_fidelity) << " +- " << format_g17(r.std_error) << "\n";
            out << prov.dump() << "\n";
            return 0;
        }

        if (app.got_subcommand(chk)) {
            if (fp.n_max < 0 || fp.m_max < 0) throw parse_error("cutoffs must be nonnegative");
            FeasibilityReport rep;
            try {
                rep = check_feasibility(fp);
            } catch (const std::invalid_argument& e) {
                throw parse_error(e.what());
            }
            out << "exchange-rate ratio: " << format_g17(rep.rwa_ratio) << " (margin "
                << format_g17(rep.margin) << ") -> " << (rep.rwa_pass ? "pass" : "FAIL") << "\n";
            out << "trap anisotropy:     " << format_g17(rep.anisotropy_ratio)
                << " (needs >= 5) -> " << (rep.anisotropy_pass ? "pass" : "FAIL") << "\n";
            out << feasibility_json(rep).dump() << "\n";
            return rep.pass ? 0 : 3;
        }

        if (app.got_subcommand(tgt)) {
            if (tgt_nmax < 0) tgt_nmax = tgt_mmax;
            double tail = 0.0;
            TargetState target;
            if (tgt_kind == "cat")
                target = cat_state(cli_detail::parse_complex(tgt_alpha), tgt_mmax, tgt_nmax, &tail);
            else
                target = correlated_state(cli_detail::parse_complex(tgt_alpha), tgt_mmax, &tail);
            const std::string out_path = cli_detail::resolve_out(tgt_out);
            save_target(target, out_path);
            json config{{"command", "targets"}, {"kind", tgt_kind}, {"alpha", tgt_alpha},
                        {"mmax", tgt_mmax},     {"nmax", tgt_nmax}, {"out", tgt_out}};
            json prov = provenance_json(config, json::object());
            prov["truncated_tail_mass"] = tail;
            out << "wrote " << out_path << " (truncated tail mass " << format_g17(tail) << ")\n";
            out << prov.dump() << "\n";
            return 0;
        }
    } catch (const parse_error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const pulse_infeasible& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const synthesis_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

}  // namespace ionsynth
