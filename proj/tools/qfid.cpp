// qfid — CLI for the reduced-state-set gate characterization toolkit.
//
// Subcommands:
//   run      draw an ensemble, write records CSV + summary JSON
//   bounds   recompute ratio bounds from a records CSV (json/markdown)
//   hist     deviation histogram from a records CSV
//   certify  unitarity certificate for a channel JSON file
//   fav      exact and Monte-Carlo average fidelity of a channel vs a gate
//
// Exit codes: 0 success, 1 invalid arguments, 2 runtime failure. Errors go
// to stderr as single-line JSON.

#include "qfid/commutant.hpp"
#include "qfid/experiment.hpp"
#include "qfid/serialize.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace qfid;

struct RunArgs {
    ExperimentConfig cfg;
    std::string ensemble = "random-dynamical-map";
    std::string order = "target-after-noise";
    std::string estimator = "both";
    std::string out = "ensemble";
};

int cmd_run(RunArgs& args) {
    args.cfg.ensemble = parse_ensemble(args.ensemble);
    if (args.order == "target-after-noise") {
        args.cfg.order = MapOrder::TargetAfterNoise;
    } else if (args.order == "target-before-noise") {
        args.cfg.order = MapOrder::TargetBeforeNoise;
    } else {
        throw CLI::ValidationError("--order-flag",
                                   "expected target-after-noise|target-before-noise");
    }
    validate(args.cfg);

    const auto records = run_ensemble(args.cfg);
    const auto summary = summarize(records, args.cfg.histogram, args.cfg.epsilon_floor);

    const std::string csv_path = args.out + ".csv";
    const std::string json_path = args.out + ".summary.json";
    write_records_csv(csv_path, records);
    Json j = summary_to_json(summary);
    if (args.estimator == "arith") {
        j.erase("lambda");
        j["histogram"].erase("lambda");
    } else if (args.estimator == "lambda") {
        j.erase("arith");
        j["histogram"].erase("arith");
    } else if (args.estimator != "both") {
        throw std::invalid_argument("--estimator must be arith|lambda|both");
    }
    j["config"] = config_to_json(args.cfg);
    save_json_file(json_path, j);

    std::cout << Json{{"records", csv_path},
                      {"summary", json_path},
                      {"total", summary.total},
                      {"skipped", summary.skipped_count}}
                     .dump()
              << '\n';
    return 0;
}

void emit(const Json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << '\n';
    } else {
        save_json_file(out_path, j);
    }
}

int cmd_bounds(const std::string& records_path, const std::string& format,
               const std::string& out_path, double epsilon_floor) {
    const auto records = read_records_csv(records_path);
    const auto arith = bounds_for(records, Estimator::Arith, epsilon_floor);
    const auto lambda = bounds_for(records, Estimator::Lambda, epsilon_floor);
    if (format == "markdown") {
        std::string md;
        md += "| estimator | alpha | beta | mean_under | mean_over | worst |\n";
        md += "|-----------|-------|------|------------|-----------|-------|\n";
        const auto row = [&](const char* name, const EstimatorBounds& b) {
            char buf[160];
            std::snprintf(buf, sizeof(buf), "| %s | %.2f | %.2f | %.2f | %.2f | %.2f |\n", name,
                          b.alpha, b.beta, b.mean_under_factor, b.mean_over_factor,
                          b.worst_factor);
            md += buf;
        };
        row("arith", arith);
        row("lambda", lambda);
        if (out_path.empty()) {
            std::cout << md;
        } else {
            std::ofstream out(out_path, std::ios::binary);
            if (!out) throw std::runtime_error("cannot open '" + out_path + "'");
            out << md;
        }
        return 0;
    }
    emit(Json{{"arith", estimator_bounds_to_json(arith)},
              {"lambda", estimator_bounds_to_json(lambda)}},
         out_path);
    return 0;
}

int cmd_hist(const std::string& records_path, const std::string& estimator,
             const HistogramSpec& spec, const std::string& out_path) {
    if (estimator != "arith" && estimator != "lambda") {
        throw std::invalid_argument("--estimator must be arith|lambda");
    }
    const auto records = read_records_csv(records_path);
    const auto which = estimator == "arith" ? Estimator::Arith : Estimator::Lambda;
    const auto h = histogram(records, spec, which);
    std::string csv = "bin_low,bin_high,probability\n";
    for (std::size_t k = 0; k < h.probabilities.size(); ++k) {
        char buf[120];
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", h.edges[k], h.edges[k + 1],
                      h.probabilities[k]);
        csv += buf;
    }
    if (out_path.empty()) {
        std::cout << csv;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open '" + out_path + "'");
        out << csv;
    }
    return 0;
}

int cmd_certify(const std::string& channel_path, double tol, const std::string& out_path) {
    const auto ch = channel_from_json(load_json_file(channel_path));
    const auto set = pure_set_computational(ch.d);
    emit(verdict_to_json(certify_unitarity(ch, set, tol)), out_path);
    return 0;
}

int cmd_fav(const std::string& channel_path, const std::string& gate, int qubits,
            std::size_t mc_samples, std::uint64_t seed, const std::string& out_path) {
    const auto ch = channel_from_json(load_json_file(channel_path));
    const auto target = target_gate(gate, qubits);
    if (target.d != ch.d) throw std::runtime_error("gate/channel dimension mismatch");
    const double exact = average_fidelity_exact(ch, target);
    Rng rng(seed);
    const auto mc = average_fidelity_haar_mc(ch, target, mc_samples, rng);
    emit(Json{{"exact", exact},
              {"mc_estimate", mc.estimate},
              {"mc_std_error", mc.std_error},
              {"mc_samples", mc_samples},
              {"seed", seed}},
         out_path);
    return 0;
}

}  // namespace

int cli_main(int argc, char** argv) {
    CLI::App app{"reduced-state-set gate characterization toolkit"};
    app.require_subcommand(1);

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "run an ensemble, write records CSV + summary JSON");
    run->add_option("--qubits", run_args.cfg.n_qubits, "system qubits (1..5)");
    run->add_option("--gate", run_args.cfg.target, "target gate: identity|cnot|toffoli");
    run->add_option("--ensemble", run_args.ensemble,
                    "random-dynamical-map|random-unitary-haar|randomized-unitary|"
                    "randomized-unitary-near-basis");
    run->add_option("--realizations", run_args.cfg.realizations, "number of realizations");
    run->add_option("--seed", run_args.cfg.seed, "master seed");
    run->add_option("--scale-max", run_args.cfg.scale_max, "noise scale upper bound");
    run->add_option("--tilt", run_args.cfg.basis_tilt, "near-basis off-diagonal strength");
    run->add_option("--phase-spread", run_args.cfg.phase_spread, "near-basis scale upper bound");
    run->add_option("--epsilon-floor", run_args.cfg.epsilon_floor,
                    "gate errors below this are recorded as skipped");
    run->add_option("--order-flag", run_args.order,
                    "random-map order: target-after-noise|target-before-noise");
    run->add_option("--estimator", run_args.estimator,
                    "summary estimators: arith|lambda|both");
    run->add_option("--threads", run_args.cfg.threads, "worker threads (0 = hardware)");
    run->add_option("--out", run_args.out, "output path prefix");

    std::string records_path, format = "json", out_path, estimator = "lambda";
    double epsilon_floor = 1e-9;
    auto* bounds = app.add_subcommand("bounds", "ratio bounds from a records CSV");
    bounds->add_option("--records", records_path, "records CSV from `run`")->required();
    bounds->add_option("--format", format, "json|markdown");
    bounds->add_option("--epsilon-floor", epsilon_floor, "ratio floor");
    bounds->add_option("--out", out_path, "output file (default stdout)");

    HistogramSpec spec;
    auto* hist = app.add_subcommand("hist", "deviation histogram from a records CSV");
    hist->add_option("--records", records_path, "records CSV from `run`")->required();
    hist->add_option("--estimator", estimator, "arith|lambda");
    hist->add_option("--neg-bins", spec.negative_bins, "linear bins on [-1,0)");
    hist->add_option("--pos-bins", spec.positive_linear_bins, "linear bins on [0,knee)");
    hist->add_option("--log-bins", spec.positive_log_bins, "log bins above the knee");
    hist->add_option("--knee", spec.knee, "linear/log crossover");
    hist->add_option("--out", out_path, "output file (default stdout)");

    std::string channel_path;
    double tol = 1e-8;
    auto* certify = app.add_subcommand("certify", "unitarity certificate for a channel file");
    certify->add_option("--channel", channel_path, "channel JSON file")->required();
    certify->add_option("--tol", tol, "certification tolerance");
    certify->add_option("--out", out_path, "output file (default stdout)");

    std::string gate = "identity";
    int qubits = 2;
    std::size_t mc_samples = 100000;
    std::uint64_t seed = 0;
    auto* fav = app.add_subcommand("fav", "exact + Monte-Carlo average fidelity");
    fav->add_option("--channel", channel_path, "channel JSON file")->required();
    fav->add_option("--gate", gate, "target gate: identity|cnot|toffoli");
    fav->add_option("--qubits", qubits, "qubit count of the gate");
    fav->add_option("--mc-samples", mc_samples, "Haar Monte-Carlo samples");
    fav->add_option("--seed", seed, "Monte-Carlo seed");
    fav->add_option("--out", out_path, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << nlohmann::json{{"error", e.what()}}.dump() << '\n';
        return 1;
    }

    try {
        if (run->parsed()) return cmd_run(run_args);
        if (bounds->parsed()) return cmd_bounds(records_path, format, out_path, epsilon_floor);
        if (hist->parsed()) return cmd_hist(records_path, estimator, spec, out_path);
        if (certify->parsed()) return cmd_certify(channel_path, tol, out_path);
        if (fav->parsed()) return cmd_fav(channel_path, gate, qubits, mc_samples, seed, out_path);
    } catch (const std::invalid_argument& e) {
        std::cerr << nlohmann::json{{"error", e.what()}}.dump() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << nlohmann::json{{"error", e.what()}}.dump() << '\n';
        return 2;
    }
    return 1;
}

int main(int argc, char** argv) { return cli_main(argc, argv); }
